#pragma once

#include <map>
#include <vector>

#include "delaysched/instance.hpp"
#include "delaysched/schedule.hpp"

namespace ds {

/// A set of identical (size, speed) machines acting as one group.
struct UdpsGroup {
    std::vector<int> machines;  // ids, ascending
    long long size{1};
    long long speed{1};
};

/// Input fragment for the uniform-delay subproblem: a job subset with the
/// precedence induced by the instance dag, a machine group, the uniform
/// delay, and the duplication budget parameter alpha. The solver checks
/// (never assumes) that each job has at most alpha*delay*size*speed
/// predecessors inside the fragment and that the longest chain has at most
/// alpha*delay*speed jobs (delay read as max(delay, 1)).
struct UdpsInput {
    const Dag* dag{nullptr};
    std::vector<int> jobs;
    UdpsGroup group;
    long long delay{0};
    Rat alpha{1};
};

struct UdpsRound {
    Rat start;
    std::size_t placed_sum{0};    // sum over machines of |V_i|
    std::size_t placed_union{0};  // |union of the V_i|
    std::size_t max_load{0};
    std::size_t min_load{0};
};

struct UdpsResult {
    Schedule schedule;  // fragment-local times; first round starts at `delay`
    Rat makespan;
    std::vector<UdpsRound> rounds;
};

/// Graham list scheduling of `jobs` on a single machine of the given size and
/// speed, starting at `start`. Predecessors inside the set gate their
/// successors; everything else is assumed available. Ready jobs fill slots of
/// length 1/speed, up to `size` per slot, in topological order (ids break
/// ties).
Schedule list_schedule(const Dag& dag, const std::vector<int>& jobs, int machine_id,
                       long long size, long long speed, Rat start);

/// Round-based uniform-delay scheduler with duplication: each round places
/// every job whose unscheduled predecessor set would at most double the
/// round's duplicated work, together with that predecessor set, on the least
/// loaded machine; rounds are separated by the uniform delay. Emits an
/// initial delay pad so callers can append fragments directly after a
/// communication boundary.
UdpsResult udps_solve(const UdpsInput& input);

/// The instance a fragment schedule must satisfy: the group's machines with
/// in-delay = delay, delay-free unit jobs, induced closure edges. Fragment
/// outputs are validated against exactly this.
Instance udps_instance(const UdpsInput& input);

}  // namespace ds
