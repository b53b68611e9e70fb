#pragma once

// Independent reference implementations and fixtures shared by the unit tests
// and the acceptance binary. Oracles here deliberately avoid the library's own
// helpers: they count, loop and simulate instead of using closed forms.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hlsguide/refine_driver.hpp"
#include "hlsguide/sched_sim.hpp"

namespace oracle {

using namespace hlsguide;

inline std::filesystem::path data_dir() { return HLSGUIDE_DATA_DIR; }

inline const std::vector<std::string>& kernel_names() {
    static const std::vector<std::string> names = {"aes", "bfs",  "gemm", "kmp",
                                                   "nw",  "sort", "spmv", "viterbi"};
    return names;
}

inline KernelDescriptor bundled(const std::string& name) {
    return parse_kernel(data_dir() / "kernels" / (name + ".json"));
}

inline PlatformDescriptor bundled_platform() { return parse_platform(data_dir() / "platform.json"); }

// Blocks needed when tiling a width x depth buffer with one block shape,
// found by laying blocks down one at a time.
inline std::uint64_t tile_count(std::uint64_t width, std::uint64_t depth, std::uint64_t bw,
                                std::uint64_t bd) {
    std::uint64_t columns = 0;
    for (std::uint64_t covered = 0; covered < width; covered += bw) ++columns;
    std::uint64_t rows = 0;
    for (std::uint64_t covered = 0; covered < depth; covered += bd) ++rows;
    return columns * rows;
}

inline std::uint64_t bram_blocks(std::uint64_t width, std::uint64_t depth,
                                 const PlatformDescriptor& p) {
    std::uint64_t best = UINT64_MAX;
    for (const auto& c : p.bram_block_configs)
        best = std::min(best, tile_count(width, depth, c.width_bits, c.depth_entries));
    return best;
}

// Loop execution, one iteration at a time. A pipelined iteration occupies its
// issue slot for ii cycles and then finishes the body L cycles later; an
// unpipelined one starts when the previous one ends.
inline std::uint64_t loop_makespan(std::uint64_t n, std::uint64_t latency, std::uint64_t ii,
                                   bool pipelined) {
    std::uint64_t issue_free = 0;
    std::uint64_t finish = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (pipelined) {
            const std::uint64_t issued = issue_free + ii;
            issue_free = issued;
            finish = std::max(finish, issued + latency);
        } else {
            finish += latency;
        }
    }
    return finish;
}

// Three-stage rotation with one barrier per phase, written as explicit
// timestamps per stage instance.
inline std::uint64_t rotation_makespan(const std::vector<StageCycles>& it) {
    const std::size_t n = it.size();
    std::vector<std::uint64_t> load_end(n), compute_end(n), store_end(n);
    std::uint64_t barrier = 0;
    for (std::size_t phase = 0; phase < n + 2; ++phase) {
        std::uint64_t next = barrier;
        if (phase < n) {
            load_end[phase] = barrier + it[phase].load;
            next = std::max(next, load_end[phase]);
        }
        if (phase >= 1 && phase - 1 < n) {
            compute_end[phase - 1] = barrier + it[phase - 1].compute;
            next = std::max(next, compute_end[phase - 1]);
        }
        if (phase >= 2 && phase - 2 < n) {
            store_end[phase - 2] = barrier + it[phase - 2].store;
            next = std::max(next, store_end[phase - 2]);
        }
        barrier = next;
    }
    return barrier;
}

// Greedy list scheduling of independent equal-length jobs on `pe` PEs,
// layer by layer with a barrier between layers.
inline std::uint64_t layered_schedule(const std::vector<std::uint64_t>& jobs_per_layer,
                                      const std::vector<std::uint64_t>& job_time, std::uint64_t pe) {
    std::uint64_t t = 0;
    for (std::size_t l = 0; l < jobs_per_layer.size(); ++l) {
        std::vector<std::uint64_t> busy(pe, 0);
        for (std::uint64_t j = 0; j < jobs_per_layer[l]; ++j) {
            auto it = std::min_element(busy.begin(), busy.end());
            *it += job_time[l];
        }
        t += *std::max_element(busy.begin(), busy.end());
    }
    return t;
}

// Every (width, pe) point of the trade-off grid, evaluated from scratch.
inline std::vector<Evaluation> brute_grid(const KernelDescriptor& k, const PlatformDescriptor& p,
                                          const DesignConfig& cfg) {
    std::vector<Evaluation> out;
    for (std::uint32_t w : {64u, 128u, 256u, 512u}) {
        if (w < k.element_width_bits) continue;
        for (std::uint32_t pe = 1; pe <= 128; pe *= 2) {
            DesignConfig c = cfg;
            c.buffer_width_bits = w;
            c.pe_factor = pe;
            c.partition_factor = pe;
            try {
                check_applicability(k, p, c);
            } catch (const Error&) {
                continue;
            }
            out.push_back(evaluate(k, p, c));
        }
    }
    return out;
}

inline Evaluation brute_best(const KernelDescriptor& k, const PlatformDescriptor& p,
                             const DesignConfig& cfg) {
    Evaluation best = evaluate(k, p, cfg);
    bool improved = false;
    for (const auto& e : brute_grid(k, p, cfg)) {
        if (!e.resources.fits) continue;
        const double t = e.breakdown.total_s;
        const double bt = best.breakdown.total_s;
        bool better = false;
        if (!improved) {
            better = t < bt;
        } else if (t != bt) {
            better = t < bt;
        } else if (e.resources.bram_blocks != best.resources.bram_blocks) {
            better = e.resources.bram_blocks < best.resources.bram_blocks;
        } else if (e.config.pe_factor != best.config.pe_factor) {
            better = e.config.pe_factor < best.config.pe_factor;
        } else {
            better = e.config.buffer_width_bits < best.config.buffer_width_bits;
        }
        if (better) {
            best = e;
            improved = true;
        }
    }
    return best;
}

// Random but valid kernel descriptors for property suites.
inline KernelDescriptor random_kernel(std::mt19937_64& rng) {
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
    };
    KernelDescriptor k;
    k.name = "random";
    const std::uint32_t widths[] = {8, 16, 32, 64};
    k.element_width_bits = widths[pick(0, 3)];
    const std::uint64_t elem_bytes = k.element_width_bits / 8;
    k.job_input_bytes = elem_bytes << pick(0, 9);
    k.job_output_bytes = pick(0, 2) == 0 ? 0 : elem_bytes << pick(0, 9);
    k.job_count = std::uint64_t{1} << pick(4, 16);
    k.input_bytes = k.job_count * k.job_input_bytes;
    k.output_bytes = k.job_count * k.job_output_bytes;
    k.cpu_baseline_s = 0.01 * static_cast<double>(pick(1, 1000));
    const std::size_t loops = pick(1, 3);
    for (std::size_t i = 0; i < loops; ++i) {
        LoopBlock l;
        l.trip_count = pick(1, 64);
        l.body_latency_cycles = pick(1, 20);
        l.min_ii = pick(1, l.body_latency_cycles);
        l.pipelineable = static_cast<Pipelineable>(pick(0, 2));
        l.trip_scaling = static_cast<TripScaling>(pick(0, 2));
        k.loops.push_back(l);
    }
    switch (pick(0, 3)) {
        case 0: k.parallelism = {ParallelismKind::ChainDependent, 0}; break;
        case 1: k.parallelism = {ParallelismKind::TreeReduce, static_cast<std::uint32_t>(pick(1, 6))}; break;
        default: k.parallelism = {ParallelismKind::Flat, 0}; break;
    }
    k.output_feeds_next_load = pick(0, 4) == 0;
    k.per_pe_compute_units = pick(100, 20000);
    k.per_pe_extra_bram_bits = pick(0, 2) == 0 ? pick(1, 100000) : 0;
    k.working_set_class = pick(0, 3) == 0 ? WorkingSetClass::LargeTileable : WorkingSetClass::SmallJob;
    return k;
}

inline PlatformDescriptor random_budget(std::mt19937_64& rng) {
    PlatformDescriptor p;
    p.bram_blocks_total = static_cast<std::uint32_t>(
        std::uniform_int_distribution<std::uint32_t>(10, 4000)(rng));
    p.compute_units_total = std::uniform_int_distribution<std::uint64_t>(5000, 200000)(rng);
    return p;
}

}  // namespace oracle
