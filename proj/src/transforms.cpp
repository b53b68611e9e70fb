#include "hlsguide/transforms.hpp"

#include "hlsguide/cost_model.hpp"

namespace hlsguide {

namespace {

void require_caching(const DesignConfig& cfg, const char* what) {
    if (!cfg.caching.enabled())
        throw ContractError(std::string(what) + " requires explicit data caching");
}

CachingKind caching_kind_for(const KernelDescriptor& k) {
    return k.working_set_class == WorkingSetClass::SmallJob ? CachingKind::Batch
                                                            : CachingKind::Tile;
}

void check_caching(const KernelDescriptor& k, const PlatformDescriptor& p, const Caching& c) {
    if (!c.enabled()) return;
    if (c.kind != caching_kind_for(k))
        throw ContractError(std::string("caching: ") + k.name + " uses " +
                            std::string(to_string(caching_kind_for(k))) + " caching, not " +
                            std::string(to_string(c.kind)));
    const Bytes minimum = min_caching_bytes(k);
    if (c.bytes < minimum)
        throw ContractError("caching: " + std::to_string(c.bytes) + " bytes is below the minimum of " +
                            std::to_string(minimum) + " bytes for " + k.name);
    if (c.bytes * 8 > p.bram_usable_bits)
        throw ResourceError("bram_usable_bits", "caching size of " + std::to_string(c.bytes) +
                                                    " bytes exceeds usable BRAM");
}

void check_pe(const KernelDescriptor& k, const PlatformDescriptor& p, const DesignConfig& cfg,
              std::uint32_t factor) {
    if (factor == 1) return;
    if (k.parallelism.kind == ParallelismKind::ChainDependent)
        throw InapplicableError(kChainDependentReason);
    if (!is_power_of_two(factor))
        throw ContractError("pe_factor must be a power of two, got " + std::to_string(factor));
    require_caching(cfg, "PE duplication");
    const std::uint32_t limit = max_pe_factor(k, p);
    if (factor > limit)
        throw ResourceError("compute_units_total", "pe_factor " + std::to_string(factor) +
                                                       " exceeds the maximum of " +
                                                       std::to_string(limit));
    const std::uint64_t elements = jobs_per_batch(k, cfg) * k.elements_per_job();
    if (elements % factor != 0)
        throw ContractError("pe_factor " + std::to_string(factor) +
                            " does not divide the batch element count " + std::to_string(elements));
}

void check_double_buffering(const KernelDescriptor& k, const DesignConfig& cfg) {
    require_caching(cfg, "double buffering");
    if (k.output_feeds_next_load) throw InapplicableError(kFeedbackReason);
}

void check_width(const KernelDescriptor& k, const DesignConfig& cfg, std::uint32_t width) {
    if (!is_power_of_two(width) || width < k.element_width_bits || width > 512)
        throw ContractError("buffer_width_bits must be a power of two in [" +
                            std::to_string(k.element_width_bits) + ", 512], got " +
                            std::to_string(width));
    if (width > k.element_width_bits) require_caching(cfg, "scratchpad reorganization");
}

void require_fit(const KernelDescriptor& k, const PlatformDescriptor& p, const DesignConfig& cfg) {
    const ResourceUsage u = design_usage(k, p, cfg);
    if (u.bram_blocks > p.bram_blocks_total)
        throw ResourceError("bram_blocks_total", std::to_string(u.bram_blocks) + " blocks needed, " +
                                                     std::to_string(p.bram_blocks_total) +
                                                     " available");
    if (u.compute_units > p.compute_units_total)
        throw ResourceError("compute_units_total",
                            std::to_string(u.compute_units) + " units needed, " +
                                std::to_string(p.compute_units_total) + " available");
}

}  // namespace

Bytes min_caching_bytes(const KernelDescriptor& k) {
    if (k.parallelism.kind == ParallelismKind::TreeReduce)
        return k.job_input_bytes << (k.parallelism.layers - 1);
    return k.job_input_bytes;
}

TransformResult apply_data_caching(const KernelDescriptor& k, const PlatformDescriptor& p,
                                   const DesignConfig& cfg, Bytes size_bytes, SizePolicy policy) {
    if (cfg.caching.enabled()) throw ContractError("explicit data caching is already applied");
    TransformResult r{cfg, templates::kExplicitCaching, false, {}};
    const Bytes minimum = min_caching_bytes(k);
    if (size_bytes < minimum && policy == SizePolicy::ClampToMinimum) {
        r.notes.push_back("caching size clamped from " + std::to_string(size_bytes) + " to " +
                          std::to_string(minimum) + " bytes");
        size_bytes = minimum;
    }
    r.config.caching = {caching_kind_for(k), size_bytes};
    check_caching(k, p, r.config.caching);
    return r;
}

TransformResult apply_pipelining(const KernelDescriptor& k, const DesignConfig& cfg) {
    if (cfg.pipelined) throw ContractError("loops are already pipelined");
    TransformResult r{cfg, templates::kLoopPipeline, false, {}};
    bool any = false;
    for (std::size_t i = 0; i < k.loops.size(); ++i) {
        switch (k.loops[i].pipelineable) {
            case Pipelineable::Immediate:
                any = true;
                break;
            case Pipelineable::AfterPerfectization:
                any = true;
                r.notes.push_back("loop " + std::to_string(i) +
                                  " pipelined after conversion to a perfect loop nest");
                break;
            case Pipelineable::No:
                r.notes.push_back("loop " + std::to_string(i) + " stays sequential");
                break;
        }
    }
    if (!any) {
        r.noop = true;
        r.notes.push_back("no pipelineable loop; config unchanged");
        return r;
    }
    r.config.pipelined = true;
    return r;
}

TransformResult apply_pe_duplication(const KernelDescriptor& k, const PlatformDescriptor& p,
                                     const DesignConfig& cfg, std::uint32_t factor) {
    if (factor == 0) throw ContractError("pe_factor must be ≥ 1");
    if (k.parallelism.kind == ParallelismKind::ChainDependent)
        throw InapplicableError(kChainDependentReason);
    check_pe(k, p, cfg, factor);
    require_caching(cfg, "PE duplication");
    TransformResult r{cfg, templates::kPeUnrollPartition, false, {}};
    r.config.pe_factor = factor;
    r.config.partition_factor = factor;
    return r;
}

TransformResult apply_double_buffering(const KernelDescriptor& k, const DesignConfig& cfg) {
    if (cfg.double_buffered) throw ContractError("double buffering is already applied");
    check_double_buffering(k, cfg);
    TransformResult r{cfg, templates::kBufferRotation, false, {}};
    r.config.double_buffered = true;
    return r;
}

TransformResult apply_scratchpad_reorg(const KernelDescriptor& k, const PlatformDescriptor& p,
                                       const DesignConfig& cfg, std::uint32_t width_bits) {
    require_caching(cfg, "scratchpad reorganization");
    check_width(k, cfg, width_bits);
    TransformResult r{cfg, templates::kWideScratchpad, false, {}};
    r.config.buffer_width_bits = width_bits;
    if (width_bits == k.element_width_bits) r.notes.push_back("width equals element width");
    require_fit(k, p, r.config);
    return r;
}

void check_applicability(const KernelDescriptor& k, const PlatformDescriptor& p,
                         const DesignConfig& cfg) {
    check_caching(k, p, cfg.caching);
    if (cfg.pe_factor == 0) throw ContractError("pe_factor must be ≥ 1");
    check_pe(k, p, cfg, cfg.pe_factor);
    if (cfg.partition_factor != cfg.pe_factor)
        throw ContractError("partition_factor must equal pe_factor (" +
                            std::to_string(cfg.pe_factor) + "), got " +
                            std::to_string(cfg.partition_factor));
    if (cfg.double_buffered) check_double_buffering(k, cfg);
    check_width(k, cfg, cfg.buffer_width_bits);
}

std::vector<std::string> implied_templates(const KernelDescriptor& k, const DesignConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.caching.enabled()) out.emplace_back(templates::kExplicitCaching);
    if (cfg.pipelined) out.emplace_back(templates::kLoopPipeline);
    if (cfg.pe_factor > 1) out.emplace_back(templates::kPeUnrollPartition);
    if (cfg.double_buffered) out.emplace_back(templates::kBufferRotation);
    if (cfg.reorganized(k)) out.emplace_back(templates::kWideScratchpad);
    return out;
}

}  // namespace hlsguide
