#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hlsguide/cost_model.hpp"

// Discrete-event model of the load/compute/store buffer rotation. Used as the
// reference for the cost model's overlap arithmetic.
namespace hlsguide::sim {

enum class Stage { Load, Compute, Store };

struct Access {
    Stage stage;
    std::uint64_t iteration;
    std::uint32_t buffer;

    bool operator==(const Access&) const = default;
};

// Phases stored back to back: phase i owns accesses[offsets[i] .. offsets[i+1]).
class PhasePlan {
public:
    PhasePlan(std::uint64_t iterations, std::uint32_t buffers)
        : iterations_(iterations), buffers_(buffers), offsets_{0} {}

    // Three-stage rotation over `buffers` groups: in phase i, load writes
    // iteration i into buffer i mod b, compute reads iteration i-1 and store
    // drains iteration i-2. buffers == 1 serializes the stages instead.
    static PhasePlan canonical(std::uint64_t iterations, std::uint32_t buffers);

    void reserve(std::size_t phases, std::size_t accesses) {
        offsets_.reserve(phases + 1);
        accesses_.reserve(accesses);
    }
    void begin_phase() { offsets_.push_back(accesses_.size()); }
    void add(Access a) {
        accesses_.push_back(a);
        offsets_.back() = accesses_.size();
    }

    std::uint64_t iterations() const { return iterations_; }
    std::uint32_t buffers() const { return buffers_; }
    std::size_t phase_count() const { return offsets_.size() - 1; }
    std::span<const Access> phase(std::size_t i) const {
        return {accesses_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::span<Access> mutable_phase(std::size_t i) {
        return {accesses_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

private:
    std::uint64_t iterations_;
    std::uint32_t buffers_;
    std::vector<Access> accesses_;
    std::vector<std::size_t> offsets_;
};

struct HazardViolation {
    std::size_t phase;
    std::uint32_t buffer;
    std::vector<Access> accessors;
    std::string message;
};

// First violation of: one accessor per buffer per phase, and every iteration
// loaded, computed and stored from the same buffer in consecutive phases.
std::optional<HazardViolation> check_hazards(const PhasePlan& plan);

// Executes the plan phase-synchronously with an event queue; returns the
// makespan in cycles.
Cycles run(const PhasePlan& plan, std::span<const StageCycles> iterations);

// Makespan of the canonical plan. buffers must be 1 or 3.
Cycles simulate(std::span<const StageCycles> iterations, std::uint32_t buffers);

std::string_view to_string(Stage s);

}  // namespace hlsguide::sim
