#include "hlsguide/refine_driver.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

namespace hlsguide {

namespace {

class TraceBuilder {
public:
    TraceBuilder(const KernelDescriptor& k, const PlatformDescriptor& p, RefinementTrace& trace)
        : k_(k), p_(p), trace_(trace) {}

    const Evaluation& current() const { return trace_.final; }

    // Accepts `candidate` if it fits and strictly lowers total time.
    bool attempt(Strategy s, const TransformResult& t, std::vector<std::string> notes = {}) {
        notes.insert(notes.end(), t.notes.begin(), t.notes.end());
        const Evaluation cand = evaluate(k_, p_, t.config);
        if (!cand.resources.fits) {
            reject(s, t.template_id, "does not fit: " + budget_note(cand.resources), std::move(notes));
            return false;
        }
        if (!(cand.breakdown.total_s < current().breakdown.total_s)) {
            reject(s, t.template_id, "no improvement", std::move(notes));
            return false;
        }
        trace_.steps.push_back({s, t.template_id, cand, true, "", std::move(notes)});
        trace_.final = cand;
        return true;
    }

    void reject(Strategy s, std::string template_id, std::string reason,
                std::vector<std::string> notes = {}) {
        trace_.steps.push_back(
            {s, std::move(template_id), current(), false, std::move(reason), std::move(notes)});
    }

    std::string budget_note(const ResourceUsage& u) const {
        if (u.bram_blocks > p_.bram_blocks_total)
            return std::to_string(u.bram_blocks) + " BRAM blocks > " +
                   std::to_string(p_.bram_blocks_total);
        return std::to_string(u.compute_units) + " compute units > " +
               std::to_string(p_.compute_units_total);
    }

    std::string bottleneck_note() const {
        return "bottleneck before step: " + std::string(to_string(pinpoint(current().breakdown)));
    }

private:
    const KernelDescriptor& k_;
    const PlatformDescriptor& p_;
    RefinementTrace& trace_;
};

void caching_step(const KernelDescriptor& k, const PlatformDescriptor& p, TraceBuilder& tb) {
    const DesignConfig& cfg = tb.current().config;
    if (cfg.caching.enabled()) {
        tb.reject(Strategy::Caching, templates::kExplicitCaching, "already applied");
        return;
    }
    try {
        tb.attempt(Strategy::Caching, apply_data_caching(k, p, cfg, choose_caching_size(k, p)),
                   {tb.bottleneck_note()});
    } catch (const Error& e) {
        tb.reject(Strategy::Caching, templates::kExplicitCaching, e.what());
    }
}

void pipelining_step(const KernelDescriptor& k, TraceBuilder& tb) {
    const DesignConfig& cfg = tb.current().config;
    if (cfg.pipelined) {
        tb.reject(Strategy::Pipelining, templates::kLoopPipeline, "already applied");
        return;
    }
    TransformResult t = apply_pipelining(k, cfg);
    if (t.noop) {
        tb.reject(Strategy::Pipelining, t.template_id, "no pipelineable loop", t.notes);
        return;
    }
    tb.attempt(Strategy::Pipelining, t, {tb.bottleneck_note()});
}

void pe_step(const KernelDescriptor& k, const PlatformDescriptor& p, TraceBuilder& tb) {
    if (k.parallelism.kind == ParallelismKind::ChainDependent) {
        tb.reject(Strategy::PeDuplication, templates::kPeUnrollPartition,
                  InapplicableError(kChainDependentReason).what());
        return;
    }
    const DesignConfig& cfg = tb.current().config;
    std::optional<TransformResult> chosen;
    std::string last_error = "no PE factor above 1 fits the platform";
    for (std::uint32_t f = max_pe_factor(k, p); f >= 2 && !chosen; f /= 2) {
        try {
            TransformResult t = apply_pe_duplication(k, p, cfg, f);
            if (design_usage(k, p, t.config).fits) chosen = std::move(t);
        } catch (const InapplicableError& e) {
            tb.reject(Strategy::PeDuplication, templates::kPeUnrollPartition, e.what());
            return;
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    if (!chosen) {
        tb.reject(Strategy::PeDuplication, templates::kPeUnrollPartition, last_error);
        return;
    }
    if (chosen->config.pe_factor == cfg.pe_factor) {
        tb.reject(Strategy::PeDuplication, chosen->template_id,
                  "already at the largest feasible factor");
        return;
    }
    tb.attempt(Strategy::PeDuplication, *chosen,
               {tb.bottleneck_note(), "pe_factor " + std::to_string(chosen->config.pe_factor)});
}

void double_buffering_step(const KernelDescriptor& k, const PlatformDescriptor& p,
                           TraceBuilder& tb) {
    const DesignConfig cfg = tb.current().config;
    if (cfg.double_buffered) {
        tb.reject(Strategy::DoubleBuffering, templates::kBufferRotation, "already applied");
        return;
    }
    TransformResult t;
    try {
        t = apply_double_buffering(k, cfg);
    } catch (const Error& e) {
        tb.reject(Strategy::DoubleBuffering, templates::kBufferRotation, e.what());
        return;
    }
    const Evaluation cand = evaluate(k, p, t.config);
    const bool improves = cand.breakdown.total_s < tb.current().breakdown.total_s;
    if (cand.resources.fits || !improves || t.config.pe_factor < 2) {
        tb.attempt(Strategy::DoubleBuffering, t, {tb.bottleneck_note()});
        return;
    }
    // Improves but overflows: feed back once to a smaller PE count.
    const std::uint32_t lower = t.config.pe_factor / 2;
    tb.reject(Strategy::DoubleBuffering, t.template_id,
              "does not fit: " + tb.budget_note(cand.resources) + "; retrying at pe_factor " +
                  std::to_string(lower));
    t.config.pe_factor = lower;
    t.config.partition_factor = lower;
    tb.attempt(Strategy::DoubleBuffering, t,
               {tb.bottleneck_note(), "retry with pe_factor lowered to " + std::to_string(lower)});
}

void reorg_step(const KernelDescriptor& k, const PlatformDescriptor& p, TraceBuilder& tb) {
    const DesignConfig& cfg = tb.current().config;
    if (!cfg.caching.enabled()) {
        tb.reject(Strategy::ScratchpadReorg, templates::kWideScratchpad,
                  "scratchpad reorganization requires explicit data caching");
        return;
    }
    const Evaluation best = sweep_tradeoff(k, p, cfg);
    if (best.config == cfg) {
        const auto grid = sweep_grid(k, p, cfg);
        const bool any_fits =
            std::any_of(grid.begin(), grid.end(), [](const Evaluation& e) { return e.resources.fits; });
        tb.reject(Strategy::ScratchpadReorg, templates::kWideScratchpad,
                  any_fits ? "no wider design improves" : "no feasible wide design");
        return;
    }
    TransformResult t{best.config, templates::kWideScratchpad, false, {}};
    tb.attempt(Strategy::ScratchpadReorg, t,
               {tb.bottleneck_note(),
                "buffer_width_bits " + std::to_string(best.config.buffer_width_bits) +
                    ", pe_factor " + std::to_string(best.config.pe_factor)});
}

}  // namespace

std::size_t RefinementTrace::accepted_count() const {
    return static_cast<std::size_t>(
        std::count_if(steps.begin(), steps.end(), [](const TraceStep& s) { return s.accepted; }));
}

GateResult pcie_gate(const KernelDescriptor& k, const PlatformDescriptor& p, double warn,
                     double reject) {
    if (!(warn > 0) || !(reject > 0) || warn > reject)
        throw ContractError("pcie_gate: thresholds must be positive with warn ≤ reject");
    GateResult g;
    g.ratio = pcie_time(k, p) / k.cpu_baseline_s;
    if (g.ratio >= reject) g.decision = GateDecision::Reject;
    else if (g.ratio >= warn) g.decision = GateDecision::Warn;
    return g;
}

Component pinpoint(const CostBreakdown& b) {
    return dominant_component(b.pcie_s, b.dram_s, b.compute_s);
}

Bytes choose_caching_size(const KernelDescriptor& k, const PlatformDescriptor& p) {
    const Bytes minimum = min_caching_bytes(k);
    for (Bytes size : kCachingCandidates) {
        if (size >= minimum && size * 8 <= p.bram_usable_bits && burst_init_share(size, p) < 0.10)
            return size;
    }
    // No candidate amortizes the burst well enough: take the largest that fits.
    for (auto it = std::rbegin(kCachingCandidates); it != std::rend(kCachingCandidates); ++it) {
        if (*it >= minimum && *it * 8 <= p.bram_usable_bits) return *it;
    }
    return minimum;
}

Evaluation evaluate(const KernelDescriptor& k, const PlatformDescriptor& p,
                    const DesignConfig& cfg) {
    return {cfg, total_time(k, p, cfg), design_usage(k, p, cfg)};
}

RefinementTrace run_guideline(const KernelDescriptor& k, const PlatformDescriptor& p,
                              const GuidelineOptions& opts) {
    return run_guideline(k, p, naive_config(k), opts);
}

RefinementTrace run_guideline(const KernelDescriptor& k, const PlatformDescriptor& p,
                              const DesignConfig& start, const GuidelineOptions& opts) {
    RefinementTrace trace;
    trace.gate = pcie_gate(k, p, opts.gate_warn, opts.gate_reject);
    trace.baseline = evaluate(k, p, start);
    trace.final = trace.baseline;
    if (trace.gate.decision == GateDecision::Reject) return trace;

    TraceBuilder tb(k, p, trace);
    caching_step(k, p, tb);
    pipelining_step(k, tb);
    pe_step(k, p, tb);
    double_buffering_step(k, p, tb);
    if (!opts.stop_before_reorg) reorg_step(k, p, tb);
    return trace;
}

std::vector<Evaluation> sweep_grid(const KernelDescriptor& k, const PlatformDescriptor& p,
                                   const DesignConfig& cfg) {
    if (!cfg.caching.enabled()) throw ContractError("sweep_tradeoff requires explicit data caching");
    std::vector<Evaluation> grid;
    const std::uint32_t max_pe = max_pe_factor(k, p);
    for (std::uint32_t width : kSweepWidths) {
        if (width < k.element_width_bits) continue;
        for (std::uint32_t pe = 1; pe <= max_pe; pe *= 2) {
            DesignConfig c = cfg;
            c.buffer_width_bits = width;
            c.pe_factor = pe;
            c.partition_factor = pe;
            try {
                check_applicability(k, p, c);
            } catch (const Error&) {
                continue;
            }
            grid.push_back(evaluate(k, p, c));
        }
    }
    return grid;
}

Evaluation sweep_tradeoff(const KernelDescriptor& k, const PlatformDescriptor& p,
                          const DesignConfig& cfg) {
    const Evaluation base = evaluate(k, p, cfg);
    const auto grid = sweep_grid(k, p, cfg);
    const Evaluation* best = nullptr;
    auto key = [](const Evaluation& e) {
        return std::make_tuple(e.breakdown.total_s, e.resources.bram_blocks, e.config.pe_factor,
                               e.config.buffer_width_bits);
    };
    for (const auto& e : grid) {
        if (!e.resources.fits) continue;
        if (!best || key(e) < key(*best)) best = &e;
    }
    if (!best || !(best->breakdown.total_s < base.breakdown.total_s)) return base;
    return *best;
}

Evaluation whatif(const KernelDescriptor& k, const PlatformDescriptor& p, const DesignConfig& cfg) {
    check_applicability(k, p, cfg);
    return evaluate(k, p, cfg);
}

std::string_view to_string(GateDecision d) {
    switch (d) {
        case GateDecision::Proceed: return "Proceed";
        case GateDecision::Warn: return "Warn";
        case GateDecision::Reject: return "Reject";
    }
    return "?";
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Caching: return "caching";
        case Strategy::Pipelining: return "pipelining";
        case Strategy::PeDuplication: return "pe_duplication";
        case Strategy::DoubleBuffering: return "double_buffering";
        case Strategy::ScratchpadReorg: return "scratchpad_reorg";
    }
    return "?";
}

nlohmann::json to_json(const Evaluation& e) {
    return {{"config", to_json(e.config)},
            {"breakdown", to_json(e.breakdown)},
            {"resources", to_json(e.resources)}};
}

nlohmann::json to_json(const TraceStep& s) {
    return {{"strategy", to_string(s.strategy)},
            {"template", s.template_id},
            {"config", to_json(s.after.config)},
            {"breakdown", to_json(s.after.breakdown)},
            {"resources", to_json(s.after.resources)},
            {"accepted", s.accepted},
            {"reason", s.reason},
            {"notes", s.notes}};
}

}  // namespace hlsguide
