#include "hlsguide/sched_sim.hpp"

#include <queue>

namespace hlsguide::sim {

namespace {

Cycles duration(const Access& a, std::span<const StageCycles> it) {
    const StageCycles& s = it[a.iteration];
    switch (a.stage) {
        case Stage::Load: return s.load;
        case Stage::Compute: return s.compute;
        case Stage::Store: return s.store;
    }
    return 0;
}

std::string describe(const Access& a) {
    return std::string(to_string(a.stage)) + "(" + std::to_string(a.iteration) + ")";
}

struct Completion {
    Cycles time;
    std::uint64_t seq;

    bool operator>(const Completion& o) const {
        return time != o.time ? time > o.time : seq > o.seq;
    }
};

}  // namespace

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::Load: return "load";
        case Stage::Compute: return "compute";
        case Stage::Store: return "store";
    }
    return "?";
}

PhasePlan PhasePlan::canonical(std::uint64_t n, std::uint32_t buffers) {
    if (buffers < 1) throw ContractError("a plan needs at least one buffer");
    PhasePlan plan(n, buffers);
    plan.reserve(buffers == 1 ? 3 * n : n + 2, 3 * n);
    if (buffers == 1) {
        for (std::uint64_t i = 0; i < n; ++i) {
            for (Stage s : {Stage::Load, Stage::Compute, Stage::Store}) {
                plan.begin_phase();
                plan.add({s, i, 0});
            }
        }
        return plan;
    }
    for (std::uint64_t phase = 0; phase < n + 2; ++phase) {
        plan.begin_phase();
        if (phase < n) plan.add({Stage::Load, phase, static_cast<std::uint32_t>(phase % buffers)});
        if (phase >= 1 && phase - 1 < n)
            plan.add({Stage::Compute, phase - 1, static_cast<std::uint32_t>((phase - 1) % buffers)});
        if (phase >= 2 && phase - 2 < n)
            plan.add({Stage::Store, phase - 2, static_cast<std::uint32_t>((phase - 2) % buffers)});
    }
    return plan;
}

std::optional<HazardViolation> check_hazards(const PhasePlan& plan) {
    constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
    const std::uint64_t n = plan.iterations();
    // Phase and buffer of each iteration's load, for the lifecycle check.
    std::vector<std::size_t> load_phase(n, kUnseen);
    std::vector<std::uint32_t> load_buffer(n, 0);
    std::vector<std::uint8_t> done(n, 0);
    std::vector<std::size_t> last_touch(plan.buffers(), kUnseen);

    for (std::size_t ph = 0; ph < plan.phase_count(); ++ph) {
        const auto accesses = plan.phase(ph);
        for (const Access& a : accesses) {
            if (a.buffer >= plan.buffers() || a.iteration >= n)
                return HazardViolation{ph, a.buffer, {a}, "access outside the plan: " + describe(a)};
            if (last_touch[a.buffer] == ph) {
                std::vector<Access> who;
                for (const Access& b : accesses)
                    if (b.buffer == a.buffer) who.push_back(b);
                std::string msg = "phase " + std::to_string(ph) + ": buffer " +
                                  std::to_string(a.buffer) + " accessed by";
                for (const Access& b : who) msg += " " + describe(b);
                return HazardViolation{ph, a.buffer, std::move(who), msg};
            }
            last_touch[a.buffer] = ph;
        }
        for (const Access& a : accesses) {
            const std::uint64_t i = a.iteration;
            const std::size_t expected_step = a.stage == Stage::Load ? 0 : a.stage == Stage::Compute ? 1 : 2;
            bool ok = false;
            if (a.stage == Stage::Load) {
                ok = load_phase[i] == kUnseen;
                load_phase[i] = ph;
                load_buffer[i] = a.buffer;
            } else {
                ok = load_phase[i] != kUnseen && load_phase[i] + expected_step == ph &&
                     load_buffer[i] == a.buffer && done[i] == expected_step - 1;
            }
            if (!ok)
                return HazardViolation{ph, a.buffer, {a},
                                       "phase " + std::to_string(ph) + ": " + describe(a) +
                                           " on buffer " + std::to_string(a.buffer) +
                                           " breaks the load→compute→store lifecycle"};
            done[i] = static_cast<std::uint8_t>(expected_step);
        }
    }
    for (std::uint64_t i = 0; i < n; ++i) {
        if (done[i] != 2 || load_phase[i] == kUnseen)
            return HazardViolation{plan.phase_count(), load_buffer[i], {},
                                   "iteration " + std::to_string(i) + " is never stored"};
    }
    return std::nullopt;
}

Cycles run(const PhasePlan& plan, std::span<const StageCycles> iterations) {
    if (iterations.size() != plan.iterations())
        throw ContractError("plan and stage-time vector disagree on iteration count");

    std::priority_queue<Completion, std::vector<Completion>, std::greater<>> events;
    std::uint64_t seq = 0;
    Cycles now = 0;

    for (std::size_t ph = 0; ph < plan.phase_count(); ++ph) {
        // Every stage of the phase starts at the barrier.
        const Cycles start = now;
        for (const Access& a : plan.phase(ph)) events.push({start + duration(a, iterations), seq++});
        while (!events.empty()) {
            now = events.top().time;
            events.pop();
        }
    }
    return now;
}

Cycles simulate(std::span<const StageCycles> iterations, std::uint32_t buffers) {
    if (buffers != 1 && buffers != 3) throw ContractError("simulate: buffers must be 1 or 3");
    if (iterations.empty()) throw ContractError("simulate: at least one iteration");
    return run(PhasePlan::canonical(iterations.size(), buffers), iterations);
}

}  // namespace hlsguide::sim
