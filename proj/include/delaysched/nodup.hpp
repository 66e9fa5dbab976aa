#pragma once

#include <optional>

#include "delaysched/pipeline.hpp"
#include "delaysched/udps.hpp"

namespace ds {

struct PruneResult {
    Schedule schedule;
    int residual_duplicates{0};  // jobs still duplicated on the fallback path
};

/// Keeps the earliest copy of every job (machine ids break ties) and drops
/// the rest. Valid by construction when the schedule came out of the
/// duplication-free fragment mode; otherwise falls back to greedy pruning
/// (latest copies first, a copy goes only if the validator still accepts)
/// and reports how many jobs stayed duplicated.
PruneResult prune_duplicates(const Instance& instance, const Schedule& schedule);

/// Duplication-free replacement for the fragment solver: every weakly
/// connected component of the fragment's induced precedence goes to one
/// machine (least loaded first), list-scheduled after the delay pad.
UdpsResult phase_nodup_fragment(const UdpsInput& input);

/// Integral assignment of items to machines obtained from a vertex of the
/// fractional assignment polytope: integral entries stay, the forest of
/// fractional entries is rounded so each machine gains at most one item.
/// processing[item][machine] < 0 marks a forbidden pair.
std::map<int, int> lenstra_round(
    const std::map<std::pair<int, int>, double>& fractional_assignment,
    const std::map<std::pair<int, int>, Rat>& processing, int items, int machines);

struct ThresholdCertificate {
    std::string kind;  // "lp-objective" | "lp-infeasible" | "component-capacity"
    std::string detail;
};

struct ThresholdOutcome {
    std::optional<Schedule> schedule;  // set when a schedule was produced
    std::optional<ThresholdCertificate> assertion;  // set when OPT > T is asserted
    Rat length;  // makespan of the returned schedule, when present

    bool asserted() const { return assertion.has_value(); }
};

/// Threshold test for symmetric delays (in == out on every machine and job):
/// splits machines by delay vs T, extends the LP with whole-component
/// placement variables for the long-delay machines, rounds the component
/// assignment Lenstra-style, bins oversized closure sets onto the short-delay
/// machines, and composes downward-closed block + duplication pipeline +
/// upward-closed block. A returned assertion is always sound: it is backed by
/// an LP bound or an exact packing infeasibility, never by heuristic failure.
ThresholdOutcome symmetric_threshold(const Instance& instance, long long threshold);

}  // namespace ds
