#pragma once

#include <map>
#include <set>
#include <tuple>

#include "delaysched/grouping.hpp"
#include "delaysched/simplex.hpp"

namespace ds {

enum class LpVariant {
    MachineDelays,     // unit machines, machine delays only
    JobMachineDelays,  // unit machines, machine + job delays
    GeneralRelated,    // related multiprocessor machines, machine + job delays
};

const char* to_string(LpVariant v);

/// LP over a grouped instance plus the variable maps needed to read a
/// solution back. Variables: makespan bound C*, per-job completion C_v,
/// execution indicator x_{v,k}, copy indicator y_{v,k}, duplication indicator
/// z_{u,v,k} for closure pairs u -> v, and (GeneralRelated only) the
/// chain-completion variables over v's predecessors.
struct RelaxationLp {
    LpProblem problem;
    LpVariant variant{LpVariant::JobMachineDelays};
    double alpha{1.0};
    int makespan_var{-1};
    std::map<int, int> completion_var;                    // job -> var
    std::map<std::pair<int, int>, int> exec_var;          // (job, k) -> var
    std::map<std::pair<int, int>, int> copy_var;          // (job, k) -> var
    std::map<std::tuple<int, int, int>, int> dup_var;     // (u, v, k) -> var
    std::map<std::tuple<int, int, int>, int> chain_var;   // (v, k, u) -> var
};

RelaxationLp build_lp(const GroupedInstance& grouped, double alpha, LpVariant variant);

/// 0/1 x, y, z plus completion values scaled by 2K. `alpha` records the
/// duplication budget the point satisfies (2K after rounding, 1 for the
/// combinatorial construction).
struct RoundedSolution {
    LpVariant variant{LpVariant::JobMachineDelays};
    Rat alpha{1};
    Rat makespan_bound;                           // C*
    std::map<int, Rat> completion;                // C_v
    std::map<int, int> exec_group;                // x: job -> chosen group
    std::set<std::pair<int, int>> copies;         // y = 1 pairs (job, k)
    std::set<std::tuple<int, int, int>> dups;     // z = 1 triples (u, v, k)
    std::map<std::tuple<int, int, int>, Rat> chain;  // (v, k, u) -> completion

    bool has_dup(int u, int v, int k) const { return dups.count({u, v, k}) != 0; }
};

/// The fractional-to-integral rounding: x one-hot at the largest x-hat (ties
/// to the lowest group), z thresholded at 1/(2K) minus the solver tolerance,
/// y the max of x and the outgoing z's, every completion scaled by 2K.
RoundedSolution round_solution(const LpSolution& fractional, const RelaxationLp& lp,
                               const GroupedInstance& grouped);

struct ConstraintViolation {
    std::string name;
    Rat slack;  // negative amount by which the constraint fails
};

struct FeasibilityReport {
    bool feasible{false};
    std::vector<ConstraintViolation> violations;
};

/// Re-evaluates every constraint of LP_alpha' at the integral point in exact
/// rational arithmetic. A constraint counts as violated when it fails by more
/// than the solver's feasibility tolerance (the completions inherit roundoff
/// of that order from the fractional solve).
FeasibilityReport check_rounded_feasible(const RoundedSolution& rounded,
                                         const GroupedInstance& grouped, Rat alpha_prime);

/// Combinatorial rounded solution for uniform machine delays (one machine
/// group, unit size and speed): completion times from the sorted-predecessor
/// recurrence, z set wherever the gap is below the job's total delay, and
/// C* = max(n/m, max_v C_v). Feasible for LP_1 by construction.
RoundedSolution combinatorial_rounded_solution(const GroupedInstance& grouped);

/// The feasible point induced by a valid schedule (completion times and
/// first-execution groups read off the schedule). Used as an independent
/// check that the constraint system accepts exactly what it should.
RoundedSolution solution_from_schedule(const Schedule& schedule, const GroupedInstance& grouped,
                                       LpVariant variant);

}  // namespace ds
