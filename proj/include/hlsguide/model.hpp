#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hlsguide/errors.hpp"

namespace hlsguide {

using Cycles = std::uint64_t;
using Bytes = std::uint64_t;
using Seconds = double;

// ---------------------------------------------------------------------------
// Platform calibration constants of the CPU-FPGA system.
//
// Defaults describe a Virtex-7 card at 200 MHz behind PCIe Gen3 x8: a 100-cycle
// DRAM access/burst initialization, a 512-bit AXI data path and ~3000 18Kb
// BRAM blocks.
// ---------------------------------------------------------------------------
struct BramBlockConfig {
    std::uint32_t width_bits;
    std::uint32_t depth_entries;

    bool operator==(const BramBlockConfig&) const = default;
};

struct PlatformDescriptor {
    double clock_hz = 2.0e8;
    Cycles dram_init_latency_cycles = 100;
    std::uint32_t dram_bus_width_bits = 512;
    double pcie_bandwidth_bytes_per_s = 8.0e9;
    Seconds pcie_setup_s = 1.0e-5;
    std::uint32_t bram_blocks_total = 3000;
    std::uint32_t bram_block_bits = 18432;
    std::vector<BramBlockConfig> bram_block_configs = {
        {36, 512}, {18, 1024}, {9, 2048}, {4, 4096}, {2, 8192}, {1, 16384}};
    std::uint64_t compute_units_total = 100000;
    std::uint64_t bram_usable_bits = 4ull * 1024 * 1024 * 8;

    bool operator==(const PlatformDescriptor&) const = default;
};

// ---------------------------------------------------------------------------
// Kernel timing abstraction.
// ---------------------------------------------------------------------------
enum class Pipelineable { Immediate, AfterPerfectization, No };

// How a loop's trip count resolves at evaluation time:
//   PerJob          trip_count iterations for every job
//   PerBatchElement trip_count iterations per data element a job covers
//                   (doubles per merge layer of a tree reduction)
//   Fixed           trip_count iterations once per batch on every PE
enum class TripScaling { PerBatchElement, PerJob, Fixed };

struct LoopBlock {
    std::uint64_t trip_count = 1;
    Cycles body_latency_cycles = 1;
    Cycles min_ii = 1;
    Pipelineable pipelineable = Pipelineable::Immediate;
    TripScaling trip_scaling = TripScaling::PerJob;

    bool operator==(const LoopBlock&) const = default;
};

enum class ParallelismKind { Flat, TreeReduce, ChainDependent };

struct Parallelism {
    ParallelismKind kind = ParallelismKind::Flat;
    std::uint32_t layers = 0;  // TreeReduce only

    bool operator==(const Parallelism&) const = default;
};

enum class WorkingSetClass { SmallJob, LargeTileable };

struct KernelDescriptor {
    std::string name;
    Seconds cpu_baseline_s = 1.0;
    Bytes input_bytes = 0;
    Bytes output_bytes = 0;
    std::uint32_t element_width_bits = 32;
    std::uint64_t job_count = 1;
    Bytes job_input_bytes = 1;
    Bytes job_output_bytes = 0;
    std::vector<LoopBlock> loops;
    Parallelism parallelism;
    bool output_feeds_next_load = false;
    std::uint64_t per_pe_compute_units = 1;
    std::uint64_t per_pe_extra_bram_bits = 0;
    WorkingSetClass working_set_class = WorkingSetClass::SmallJob;

    bool operator==(const KernelDescriptor&) const = default;

    // Data elements one job reads.
    std::uint64_t elements_per_job() const {
        return job_input_bytes * 8 / element_width_bits;
    }
};

// ---------------------------------------------------------------------------
// Design point: which optimizations are applied and with what parameters.
// ---------------------------------------------------------------------------
enum class CachingKind { None, Batch, Tile };

struct Caching {
    CachingKind kind = CachingKind::None;
    Bytes bytes = 0;

    bool enabled() const { return kind != CachingKind::None; }
    bool operator==(const Caching&) const = default;
};

struct DesignConfig {
    Caching caching;
    bool pipelined = false;
    std::uint32_t pe_factor = 1;
    bool double_buffered = false;
    std::uint32_t buffer_width_bits = 8;
    std::uint32_t partition_factor = 1;

    bool operator==(const DesignConfig&) const = default;

    bool reorganized(const KernelDescriptor& k) const {
        return buffer_width_bits > k.element_width_bits;
    }
};

// The unoptimized design a straight port of the kernel produces.
DesignConfig naive_config(const KernelDescriptor& k);

enum class Component { Pcie, Dram, Compute };

struct CostBreakdown {
    Seconds pcie_s = 0;
    Seconds dram_s = 0;
    Seconds compute_s = 0;
    Seconds total_s = 0;
    double speedup_vs_cpu = 0;
    Component dominant = Component::Dram;

    bool operator==(const CostBreakdown&) const = default;
};

// ---------------------------------------------------------------------------
// Validation. Each returns every failed invariant; empty means valid.
// ---------------------------------------------------------------------------
std::vector<std::string> check_invariants(const PlatformDescriptor& p);
std::vector<std::string> check_invariants(const KernelDescriptor& k);

// Throws ValidationError listing all failures.
const PlatformDescriptor& validated(const PlatformDescriptor& p);
const KernelDescriptor& validated(const KernelDescriptor& k);

bool is_power_of_two(std::uint64_t v);

// ---------------------------------------------------------------------------
// JSON descriptor files. Comments (// and /* */) are allowed; unknown fields
// are rejected.
// ---------------------------------------------------------------------------
KernelDescriptor kernel_from_json(const nlohmann::json& j);
PlatformDescriptor platform_from_json(const nlohmann::json& j);
DesignConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KernelDescriptor& k);
nlohmann::json to_json(const PlatformDescriptor& p);
nlohmann::json to_json(const DesignConfig& c);
nlohmann::json to_json(const CostBreakdown& b);

KernelDescriptor parse_kernel(const std::filesystem::path& path);
PlatformDescriptor parse_platform(const std::filesystem::path& path);

// Reads a file and parses it as JSON with comments.
nlohmann::json read_json_file(const std::filesystem::path& path);

std::string_view to_string(Pipelineable v);
std::string_view to_string(TripScaling v);
std::string_view to_string(ParallelismKind v);
std::string_view to_string(WorkingSetClass v);
std::string_view to_string(CachingKind v);
std::string_view to_string(Component v);

}  // namespace hlsguide
