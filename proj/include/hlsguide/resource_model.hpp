#pragma once

#include "hlsguide/model.hpp"

namespace hlsguide {

struct ResourceUsage {
    std::uint64_t bram_blocks = 0;
    std::uint64_t compute_units = 0;
    bool fits = true;

    bool operator==(const ResourceUsage&) const = default;
};

// Fewest BRAM blocks that realize a width × depth buffer using a single block
// aspect ratio from the platform's configuration list.
std::uint64_t bram_blocks(std::uint32_t width_bits, std::uint64_t depth_entries,
                          const PlatformDescriptor& p);

// Number of buffer groups a design instantiates: one normal group with
// caching alone, three rotating groups with double buffering, and one extra
// normal-width group next to the wide ones once the scratchpad is widened.
std::uint32_t buffer_group_count(const KernelDescriptor& k, const DesignConfig& cfg);

ResourceUsage design_usage(const KernelDescriptor& k, const PlatformDescriptor& p,
                           const DesignConfig& cfg);

// Largest power-of-two PE count (≤ 128) the compute budget admits.
std::uint32_t max_pe_factor(const KernelDescriptor& k, const PlatformDescriptor& p);

inline constexpr std::uint32_t kMaxPeFactor = 128;

nlohmann::json to_json(const ResourceUsage& u);

}  // namespace hlsguide
