#pragma once

#include <map>

#include "delaysched/grouping.hpp"
#include "delaysched/instance.hpp"
#include "delaysched/schedule.hpp"

namespace ds {

/// Delay-class key of a job: exponents of its rounded in/out delays
/// (-1 encodes a zero delay). Keys order by total delta, then lexicographically.
struct PhaseKey {
    int in_exp{-1};
    int out_exp{-1};

    long long in_pad() const { return in_exp < 0 ? 0 : (1LL << in_exp); }
    long long out_pad() const { return out_exp < 0 ? 0 : (1LL << out_exp); }
    long long delta() const { return in_pad() + out_pad(); }
    /// Window granularity; at least 1 so zero-delay jobs still bucket.
    long long window() const { return std::max(1LL, delta()); }

    friend bool operator==(const PhaseKey&, const PhaseKey&) = default;
    friend bool operator<(const PhaseKey& a, const PhaseKey& b) {
        if (a.delta() != b.delta()) return a.delta() < b.delta();
        if (a.in_exp != b.in_exp) return a.in_exp < b.in_exp;
        return a.out_exp < b.out_exp;
    }
};

/// Moves every out-delay into the corresponding in-delay (machine in-delay
/// becomes in+out, likewise for jobs) and zeroes the out-delays. Exact for
/// machine-only delays; the basis for the in-delay-only algorithms.
Instance merge_out_into_in(const Instance& instance);

enum class ShiftDirection {
    Forward,   // schedule valid on `original`        -> valid on merged
    Backward,  // schedule valid on merged(original)  -> valid on `original`
};

/// The exact machine-delay-only conversion: Forward adds each machine's
/// out-delay to its placements, Backward subtracts it. Requires all job
/// delays to be zero. Backward throws if a start would become negative
/// (the schedule was not produced by the forward map or an equivalent).
Schedule shift_schedule_machine_delays(const Instance& original, const Schedule& schedule,
                                       ShiftDirection direction);

/// Result of a phase expansion; pad_level records how often the layout had to
/// escalate its communication pads before the validator accepted the output
/// (0 = the standard exponent-sized pads were enough).
struct ExpandResult {
    Schedule schedule;
    int pad_level{0};
};

/// Converts a schedule that is valid on merge_out_into_in(original) into one
/// valid on `original` itself: pre-shift each placement by
/// delta_max - out_delay(machine), bucket placements into phases by the
/// executing job's delay class and time window, then lay the phases out
/// sequentially (earlier windows first, ties by larger delta) with an
/// in-communication pad before and an out-communication pad after each body.
ExpandResult expand_in_to_inout(const Instance& original, const Schedule& merged_schedule);

/// Mirror image: converts a schedule valid on `original` (in/out delays) into
/// one valid on the merged in-delay-only instance, with the communication pad
/// in front of each phase body.
ExpandResult expand_inout_to_in(const Instance& original, const Schedule& original_schedule);

/// Job-machine-delay instance encoding a UMPS instance: per machine i a new
/// source job and sink job bracket the jobs pinned to i, and every involved
/// job pays delay n on any machine other than i.
struct UmpsReduction {
    Instance jm;
    std::map<int, std::pair<int, int>> gadget;  // machine id -> (source, sink)
};

UmpsReduction umps_to_job_machine(const Instance& umps);

/// Converts a valid no-duplication schedule of umps_to_job_machine(umps) with
/// makespan C back into a valid UMPS schedule: if C >= n, list-schedule each
/// job on its pinned machine (length <= n); otherwise read the per-machine
/// split off the gadget placements and emit the two-block schedule of
/// makespan <= 2C + 1.
Schedule jm_schedule_to_umps(const Instance& umps, const Schedule& jm_schedule);

/// Forward construction: a valid UMPS schedule of makespan D becomes a valid
/// job-machine schedule of makespan D + 2 (sources at slot 0, the schedule
/// shifted by 1, sinks at D + 1).
Schedule umps_schedule_to_jm(const Instance& umps, const UmpsReduction& red,
                             const Schedule& umps_schedule);

}  // namespace ds
