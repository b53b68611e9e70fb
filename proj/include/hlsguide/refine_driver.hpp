#pragma once

#include <string>
#include <vector>

#include "hlsguide/cost_model.hpp"
#include "hlsguide/resource_model.hpp"
#include "hlsguide/transforms.hpp"

// The iterative refinement loop: gate on PCIe cost, pinpoint the dominant
// component, apply the matching transform, repeat.
namespace hlsguide {

enum class GateDecision { Proceed, Warn, Reject };

struct GateResult {
    double ratio = 0;  // pcie_time / cpu_baseline_s
    GateDecision decision = GateDecision::Proceed;
};

GateResult pcie_gate(const KernelDescriptor& k, const PlatformDescriptor& p, double warn = 0.8,
                     double reject = 1.0);

Component pinpoint(const CostBreakdown& b);

enum class Strategy { Caching, Pipelining, PeDuplication, DoubleBuffering, ScratchpadReorg };

struct Evaluation {
    DesignConfig config;
    CostBreakdown breakdown;
    ResourceUsage resources;
};

struct TraceStep {
    Strategy strategy;
    std::string template_id;
    // Config in force after the step; unchanged from the previous step when
    // the step was rejected.
    Evaluation after;
    bool accepted = false;
    std::string reason;
    std::vector<std::string> notes;
};

struct RefinementTrace {
    GateResult gate;
    Evaluation baseline;
    std::vector<TraceStep> steps;
    Evaluation final;

    std::size_t accepted_count() const;
};

struct GuidelineOptions {
    double gate_warn = 0.8;
    double gate_reject = 1.0;
    // Leave out the scratchpad-reorganization step.
    bool stop_before_reorg = false;
};

// Caching candidates, smallest first.
inline constexpr Bytes kCachingCandidates[] = {2 * 1024, 64 * 1024, 1024 * 1024};

// Smallest candidate that holds the kernel's minimum working set and keeps
// the burst initialization share at full bus width below 10%.
Bytes choose_caching_size(const KernelDescriptor& k, const PlatformDescriptor& p);

Evaluation evaluate(const KernelDescriptor& k, const PlatformDescriptor& p,
                    const DesignConfig& cfg);

RefinementTrace run_guideline(const KernelDescriptor& k, const PlatformDescriptor& p,
                              const GuidelineOptions& opts = {});

// Continues the guideline from an existing design.
RefinementTrace run_guideline(const KernelDescriptor& k, const PlatformDescriptor& p,
                              const DesignConfig& start, const GuidelineOptions& opts = {});

// Buffer widths tried by the width/PE trade-off search.
inline constexpr std::uint32_t kSweepWidths[] = {64, 128, 256, 512};

// Every (width, pe_factor) point of the trade-off grid for `cfg`, sorted by
// (width, pe_factor).
std::vector<Evaluation> sweep_grid(const KernelDescriptor& k, const PlatformDescriptor& p,
                                   const DesignConfig& cfg);

// Best fitting grid point, or `cfg` itself when nothing fits or improves.
// Ties resolve to fewer BRAM blocks, then fewer PEs, then narrower width.
Evaluation sweep_tradeoff(const KernelDescriptor& k, const PlatformDescriptor& p,
                          const DesignConfig& cfg);

// Evaluates one config after checking every transform precondition.
Evaluation whatif(const KernelDescriptor& k, const PlatformDescriptor& p, const DesignConfig& cfg);

std::string_view to_string(GateDecision d);
std::string_view to_string(Strategy s);

nlohmann::json to_json(const Evaluation& e);
nlohmann::json to_json(const TraceStep& s);

}  // namespace hlsguide
