#include "hlsguide/cost_model.hpp"

#include <algorithm>

namespace hlsguide {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

Seconds to_seconds(Cycles c, const PlatformDescriptor& p) {
    return static_cast<double>(c) / p.clock_hz;
}

std::uint64_t resolve_trip(const KernelDescriptor& k, const LoopBlock& l, std::uint32_t layer) {
    switch (l.trip_scaling) {
        case TripScaling::PerBatchElement:
            return l.trip_count * k.elements_per_job() * (std::uint64_t{1} << layer);
        case TripScaling::PerJob:
        case TripScaling::Fixed:
            return l.trip_count;
    }
    return l.trip_count;
}

}  // namespace

Seconds pcie_time(const KernelDescriptor& k, const PlatformDescriptor& p) {
    return p.pcie_setup_s +
           static_cast<double>(k.input_bytes + k.output_bytes) / p.pcie_bandwidth_bytes_per_s;
}

Cycles burst_cycles(Bytes bytes, const PlatformDescriptor& p) {
    return burst_cycles(bytes, p, p.dram_bus_width_bits);
}

Cycles burst_cycles(Bytes bytes, const PlatformDescriptor& p, std::uint32_t width_bits) {
    if (bytes == 0) return 0;
    const std::uint32_t width = std::min(width_bits, p.dram_bus_width_bits);
    return p.dram_init_latency_cycles + ceil_div(bytes * 8, width);
}

double burst_init_share(Bytes bytes, const PlatformDescriptor& p) {
    const Cycles total = burst_cycles(bytes, p);
    if (total == 0) return 0.0;
    return static_cast<double>(p.dram_init_latency_cycles) / static_cast<double>(total);
}

Seconds naive_dram_time(const KernelDescriptor& k, const PlatformDescriptor& p) {
    const std::uint64_t accesses =
        ceil_div((k.input_bytes + k.output_bytes) * 8, k.element_width_bits);
    return to_seconds(accesses * (p.dram_init_latency_cycles + 1), p);
}

Cycles pipelined_cycles(std::uint64_t n, Cycles ii, Cycles latency) { return n * ii + latency; }

Cycles loop_time(const LoopBlock& l, bool pipelined, std::uint64_t n) {
    if (n < 1) throw ContractError("loop_time: trip count must be ≥ 1");
    const Cycles sequential = n * l.body_latency_cycles;
    if (!pipelined || l.pipelineable == Pipelineable::No) return sequential;
    return std::min(pipelined_cycles(n, l.min_ii, l.body_latency_cycles), sequential);
}

Cycles job_cycles(const KernelDescriptor& k, bool pipelined, std::uint32_t layer) {
    Cycles total = 0;
    for (const auto& l : k.loops) {
        if (l.trip_scaling == TripScaling::Fixed) continue;
        total += loop_time(l, pipelined, resolve_trip(k, l, layer));
    }
    return total;
}

Cycles fixed_cycles(const KernelDescriptor& k, bool pipelined) {
    Cycles total = 0;
    for (const auto& l : k.loops) {
        if (l.trip_scaling == TripScaling::Fixed) total += loop_time(l, pipelined, l.trip_count);
    }
    return total;
}

Cycles compute_cycles(const KernelDescriptor& k, const DesignConfig& cfg,
                      std::uint64_t jobs_in_batch) {
    if (jobs_in_batch < 1) throw ContractError("compute_cycles: a batch holds at least one job");
    if (cfg.pe_factor < 1 || !is_power_of_two(cfg.pe_factor))
        throw ContractError("compute_cycles: pe_factor must be a power of two ≥ 1");
    if (k.parallelism.kind == ParallelismKind::ChainDependent && cfg.pe_factor > 1)
        throw ContractError("compute_cycles: chain-dependent jobs run on a single PE");

    const std::uint64_t pe = cfg.pe_factor;
    Cycles cycles = fixed_cycles(k, cfg.pipelined);
    if (k.parallelism.kind == ParallelismKind::TreeReduce) {
        for (std::uint32_t layer = 0; layer < k.parallelism.layers; ++layer) {
            const std::uint64_t width = ceil_div(jobs_in_batch, std::uint64_t{1} << layer);
            cycles += ceil_div(width, pe) * job_cycles(k, cfg.pipelined, layer);
        }
    } else {
        cycles += ceil_div(jobs_in_batch, pe) * job_cycles(k, cfg.pipelined, 0);
    }

    // Wide-to-normal copy before the PEs run and normal-to-wide copy after.
    if (cfg.reorganized(k)) {
        const std::uint64_t elements = jobs_in_batch * k.elements_per_job();
        cycles += 2 * ceil_div(elements, pe);
    }
    return cycles;
}

std::uint64_t jobs_per_batch(const KernelDescriptor& k, const DesignConfig& cfg) {
    if (!cfg.caching.enabled()) return k.job_count;
    const std::uint64_t fit = cfg.caching.bytes / k.job_input_bytes;
    if (fit == 0) throw ContractError("caching size is smaller than one job's input");
    return std::min(fit, k.job_count);
}

StageTimes stage_times(const KernelDescriptor& k, const PlatformDescriptor& p,
                       const DesignConfig& cfg) {
    if (!cfg.caching.enabled())
        throw ContractError("stage_times: requires explicit data caching");
    StageTimes st;
    st.jobs_per_batch = jobs_per_batch(k, cfg);
    st.load_bytes = st.jobs_per_batch * k.job_input_bytes;
    st.store_bytes = st.jobs_per_batch * k.job_output_bytes;
    st.load_cycles = burst_cycles(st.load_bytes, p, cfg.buffer_width_bits);
    st.store_cycles = burst_cycles(st.store_bytes, p, cfg.buffer_width_bits);
    st.compute_cycles = compute_cycles(k, cfg, st.jobs_per_batch);
    st.iteration_count = ceil_div(k.job_count, st.jobs_per_batch);
    return st;
}

Cycles overlapped_cycles(std::span<const StageCycles> it) {
    const std::size_t n = it.size();
    Cycles total = 0;
    for (std::size_t phase = 0; phase < n + 2; ++phase) {
        Cycles longest = 0;
        if (phase < n) longest = std::max(longest, it[phase].load);
        if (phase >= 1 && phase - 1 < n) longest = std::max(longest, it[phase - 1].compute);
        if (phase >= 2 && phase - 2 < n) longest = std::max(longest, it[phase - 2].store);
        total += longest;
    }
    return total;
}

Cycles overlapped_cycles(const StageCycles& s, std::uint64_t n) {
    if (n == 0) return 0;
    if (n == 1) return s.load + s.compute + s.store;
    const Cycles all = std::max({s.load, s.compute, s.store});
    return s.load + std::max(s.load, s.compute) + (n - 2) * all + std::max(s.compute, s.store) +
           s.store;
}

Cycles sequential_cycles(std::span<const StageCycles> it) {
    Cycles total = 0;
    for (const auto& s : it) total += s.load + s.compute + s.store;
    return total;
}

Component dominant_component(Seconds pcie_s, Seconds dram_s, Seconds compute_s) {
    if (dram_s >= compute_s && dram_s >= pcie_s) return Component::Dram;
    if (compute_s >= pcie_s) return Component::Compute;
    return Component::Pcie;
}

CostBreakdown total_time(const KernelDescriptor& k, const PlatformDescriptor& p,
                         const DesignConfig& cfg) {
    CostBreakdown b;
    b.pcie_s = pcie_time(k, p);

    if (!cfg.caching.enabled()) {
        b.dram_s = naive_dram_time(k, p);
        b.compute_s = to_seconds(compute_cycles(k, cfg, k.job_count), p);
    } else {
        const StageTimes st = stage_times(k, p, cfg);
        const Cycles compute = st.iteration_count * st.compute_cycles;
        Cycles device = 0;
        if (cfg.double_buffered) {
            device = overlapped_cycles({st.load_cycles, st.compute_cycles, st.store_cycles},
                                       st.iteration_count);
        } else {
            device = st.iteration_count * (st.load_cycles + st.compute_cycles + st.store_cycles);
        }
        // Transfers hidden under compute count as compute; only the exposed
        // remainder is charged to DRAM.
        b.compute_s = to_seconds(compute, p);
        b.dram_s = to_seconds(device - compute, p);
    }

    b.total_s = b.pcie_s + b.dram_s + b.compute_s;
    b.speedup_vs_cpu = k.cpu_baseline_s / b.total_s;
    b.dominant = dominant_component(b.pcie_s, b.dram_s, b.compute_s);
    return b;
}

}  // namespace hlsguide
