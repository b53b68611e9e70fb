#include "hlsguide/resource_model.hpp"

#include <limits>

#include "hlsguide/cost_model.hpp"

namespace hlsguide {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Blocks for one buffer group of `capacity_bits`, cyclically partitioned
// `partitions` ways. Every partition occupies at least one block.
std::uint64_t group_blocks(std::uint64_t capacity_bits, std::uint32_t width_bits,
                           std::uint32_t partitions, const PlatformDescriptor& p) {
    const std::uint64_t depth = ceil_div(capacity_bits, width_bits);
    const std::uint64_t partition_depth = std::max<std::uint64_t>(1, ceil_div(depth, partitions));
    return std::uint64_t{partitions} * bram_blocks(width_bits, partition_depth, p);
}

}  // namespace

std::uint64_t bram_blocks(std::uint32_t width_bits, std::uint64_t depth_entries,
                          const PlatformDescriptor& p) {
    if (width_bits < 1 || depth_entries < 1)
        throw ContractError("bram_blocks: width and depth must be ≥ 1");
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const auto& c : p.bram_block_configs) {
        best = std::min(best, ceil_div(width_bits, c.width_bits) * ceil_div(depth_entries, c.depth_entries));
    }
    return best;
}

std::uint32_t buffer_group_count(const KernelDescriptor& k, const DesignConfig& cfg) {
    if (!cfg.caching.enabled()) return 0;
    std::uint32_t groups = cfg.double_buffered ? 3 : 1;
    if (cfg.reorganized(k)) groups += 1;
    return groups;
}

ResourceUsage design_usage(const KernelDescriptor& k, const PlatformDescriptor& p,
                           const DesignConfig& cfg) {
    ResourceUsage u;
    const std::uint32_t pe = cfg.pe_factor;

    if (cfg.caching.enabled()) {
        const std::uint64_t jobs = jobs_per_batch(k, cfg);
        const std::uint64_t capacity_bits =
            std::max(jobs * k.job_input_bytes, jobs * k.job_output_bytes) * 8;
        const std::uint32_t parts = cfg.partition_factor;
        const std::uint32_t rotating = cfg.double_buffered ? 3 : 1;

        u.bram_blocks = rotating * group_blocks(capacity_bits, cfg.buffer_width_bits, parts, p);
        if (cfg.reorganized(k))
            u.bram_blocks += group_blocks(capacity_bits, k.element_width_bits, parts, p);
    }

    // Per-PE bookkeeping tables (dynamic-programming kernels).
    if (k.per_pe_extra_bram_bits > 0)
        u.bram_blocks += std::uint64_t{pe} * ceil_div(k.per_pe_extra_bram_bits, p.bram_block_bits);

    u.compute_units = std::uint64_t{pe} * k.per_pe_compute_units;
    u.fits = u.bram_blocks <= p.bram_blocks_total && u.compute_units <= p.compute_units_total;
    return u;
}

std::uint32_t max_pe_factor(const KernelDescriptor& k, const PlatformDescriptor& p) {
    if (k.parallelism.kind == ParallelismKind::ChainDependent) return 1;
    std::uint32_t factor = 1;
    while (factor * 2 <= kMaxPeFactor &&
           std::uint64_t{factor} * 2 * k.per_pe_compute_units <= p.compute_units_total)
        factor *= 2;
    return factor;
}

nlohmann::json to_json(const ResourceUsage& u) {
    return {{"bram_blocks", u.bram_blocks}, {"compute_units", u.compute_units}, {"fits", u.fits}};
}

}  // namespace hlsguide
