#pragma once

#include <span>

#include "hlsguide/model.hpp"

// Analytical timing of a (kernel, platform, design) triple. All functions are
// pure; evaluating many designs concurrently is safe.
namespace hlsguide {

// Cycles of one load, compute and store step of a load-compute-store iteration.
struct StageCycles {
    Cycles load = 0;
    Cycles compute = 0;
    Cycles store = 0;

    bool operator==(const StageCycles&) const = default;
};

struct StageTimes {
    Cycles load_cycles = 0;
    Cycles compute_cycles = 0;
    Cycles store_cycles = 0;
    std::uint64_t iteration_count = 1;

    // Batch geometry the stage times were derived from.
    std::uint64_t jobs_per_batch = 1;
    Bytes load_bytes = 0;
    Bytes store_bytes = 0;
};

Seconds pcie_time(const KernelDescriptor& k, const PlatformDescriptor& p);

// One burst: init latency plus one beat per bus word. Zero bytes cost nothing.
Cycles burst_cycles(Bytes bytes, const PlatformDescriptor& p);
Cycles burst_cycles(Bytes bytes, const PlatformDescriptor& p, std::uint32_t width_bits);

// Share of a burst spent on initialization at the full bus width.
double burst_init_share(Bytes bytes, const PlatformDescriptor& p);

// Every element access goes off chip and pays init + 1 cycles.
Seconds naive_dram_time(const KernelDescriptor& k, const PlatformDescriptor& p);

// Raw pipeline latency n×ii + L.
Cycles pipelined_cycles(std::uint64_t n, Cycles ii, Cycles latency);

// Loop latency for a resolved trip count. A pipelined loop never takes longer
// than its sequential schedule.
Cycles loop_time(const LoopBlock& l, bool pipelined, std::uint64_t n);

// Latency of one job at tree layer `layer` (0 for flat kernels) on one PE,
// excluding per-batch Fixed loops.
Cycles job_cycles(const KernelDescriptor& k, bool pipelined, std::uint32_t layer = 0);

// Per-batch Fixed loops, run once on every PE.
Cycles fixed_cycles(const KernelDescriptor& k, bool pipelined);

// Compute latency of one batch of `jobs_in_batch` jobs spread over the PEs.
Cycles compute_cycles(const KernelDescriptor& k, const DesignConfig& cfg,
                      std::uint64_t jobs_in_batch);

// Jobs resident in one cached batch.
std::uint64_t jobs_per_batch(const KernelDescriptor& k, const DesignConfig& cfg);

StageTimes stage_times(const KernelDescriptor& k, const PlatformDescriptor& p,
                       const DesignConfig& cfg);

// Three-buffer rotation makespan: phase i loads iteration i, computes i-1 and
// stores i-2; phases run back to back and each lasts as long as its slowest
// active stage. n iterations take n+2 phases.
Cycles overlapped_cycles(std::span<const StageCycles> iterations);
Cycles overlapped_cycles(const StageCycles& uniform, std::uint64_t n);

Cycles sequential_cycles(std::span<const StageCycles> iterations);

CostBreakdown total_time(const KernelDescriptor& k, const PlatformDescriptor& p,
                         const DesignConfig& cfg);

// argmax over (pcie, dram, compute); ties resolve Dram, then Compute, then Pcie.
Component dominant_component(Seconds pcie_s, Seconds dram_s, Seconds compute_s);

}  // namespace hlsguide
