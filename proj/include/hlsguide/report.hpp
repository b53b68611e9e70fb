#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hlsguide/refine_driver.hpp"

// JSON and text reports for the command-line front end.
namespace hlsguide::report {

struct Options {
    // Replaces the wall-clock timestamp so repeated runs are byte-identical.
    bool fixed_timestamp = false;
};

inline constexpr const char* kFixedTimestamp = "1970-01-01T00:00:00Z";

// Run the guideline and describe the full trace.
nlohmann::json run_report(const KernelDescriptor& k, const PlatformDescriptor& p,
                          const RefinementTrace& trace, const GuidelineOptions& gopts,
                          const Options& opts);

nlohmann::json whatif_report(const KernelDescriptor& k, const PlatformDescriptor& p,
                             const GateResult& gate, const Evaluation& eval, const Options& opts);

nlohmann::json sweep_report(const KernelDescriptor& k, const PlatformDescriptor& p,
                            const GateResult& gate, const DesignConfig& base,
                            const std::vector<Evaluation>& grid, const Evaluation& best,
                            const Options& opts);

// Starting point for what-if evaluation: explicit caching at the size the
// guideline would pick, every other optimization off.
DesignConfig whatif_base(const KernelDescriptor& k, const PlatformDescriptor& p);

// Applies `key=value` overrides to `cfg`. Throws ContractError naming the
// valid keys on an unknown key or malformed value. partition_factor follows
// pe_factor unless set explicitly.
DesignConfig apply_overrides(const KernelDescriptor& k, DesignConfig cfg,
                             const std::vector<std::string>& assignments);

inline constexpr const char* kValidKeys =
    "caching, pipelined, pe_factor, double_buffered, buffer_width_bits, partition_factor";

// Plain-text rendering for terminals.
std::string render_text(const nlohmann::json& report);

}  // namespace hlsguide::report
