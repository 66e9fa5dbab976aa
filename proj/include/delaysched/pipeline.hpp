#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delaysched/relaxation.hpp"
#include "delaysched/schedule.hpp"
#include "delaysched/validate.hpp"

namespace ds {

/// One phase of the schedule builder: the jobs of job group l first placed on
/// machine group k in window d, plus the predecessors duplicated alongside.
struct Phase {
    int machine_group{0};
    int job_group{0};
    long long window_index{0};
    long long delay{0};              // group delay + job-group delay
    std::vector<int> first_jobs;     // placed here by the rounded solution
    std::vector<int> dup_jobs;       // duplicated predecessors (disjoint)
};

/// Scans T = 0..C* and emits the nonempty phases in execution order:
/// machine groups ascending, job groups descending, windows as the scan
/// reaches them.
std::vector<Phase> extract_phases(const RoundedSolution& rounded,
                                  const GroupedInstance& grouped);

/// Runs the uniform-delay solver on every phase and lays the fragments out
/// serially: each phase is appended after a full communication pad and
/// advances the clock by twice the phase delay plus the fragment length.
/// With `nodup_fragments` the duplication-free per-component fragment solver
/// is used instead. The output is valid on grouped.rounded.
Schedule build_schedule(const RoundedSolution& rounded, const GroupedInstance& grouped,
                        bool nodup_fragments = false, std::vector<Phase>* phases_out = nullptr);

struct PipelineOptions {
    std::optional<LpVariant> variant;  // default: narrowest variant that fits
    double alpha{1.0};                 // duplication budget of the fractional LP
    bool nodup{false};                 // duplication-free fragments + pruning
    bool force_combinatorial{false};
    bool auto_combinatorial{false};    // take the combinatorial path when legal
};

struct PipelineReport {
    LpVariant variant{LpVariant::JobMachineDelays};
    bool used_combinatorial{false};
    double lp_objective{0.0};
    long long lp_pivots{0};
    int machine_groups{0};
    int job_groups{0};
    Rat alpha;
    Rat completion_bound;  // C* of the rounded solution
    std::size_t phase_count{0};
    Rat core_makespan;   // schedule on the rounded in-delay instance
    Rat core_bound;      // 12 a log2(dmax) (K L C* + dmax (K + L))
    bool core_within_bound{false};
    Rat final_makespan;  // on the original instance
    int expand_pad_level{-1};  // -1: exact shift path, >=0: phase expansion
    int residual_duplicates{0};
    bool fell_back_to_baseline{false};
    bool validated{false};
    long long delta_max{0};
};

/// Serialized checkpoints for the CLI's --emit-stages flag.
struct PipelineArtifacts {
    std::optional<GroupedInstance> grouped;
    std::optional<RoundedSolution> rounded;
    std::optional<Schedule> core_schedule;
};

/// The full driver: merge out-delays, round and group, obtain a rounded
/// solution (LP + rounding, or the combinatorial construction), build the
/// phase schedule, convert back to the original delay model, validate.
/// Falls back to the single-machine baseline when the delay cap made the
/// rounded instance incomparable (and says so in the report).
std::pair<Schedule, PipelineReport> run_pipeline(const Instance& instance,
                                                 const PipelineOptions& options = {},
                                                 PipelineArtifacts* artifacts = nullptr);

std::string report_to_json(const PipelineReport& report);

}  // namespace ds
