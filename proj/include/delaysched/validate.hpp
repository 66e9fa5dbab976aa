#pragma once

#include <string>
#include <vector>

#include "delaysched/instance.hpp"
#include "delaysched/schedule.hpp"

namespace ds {

enum class ViolationKind { Precedence, Capacity, Availability, Duplication };

const char* to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    int job{-1};      // offending job, if any
    int machine{-1};  // offending machine, if any
    Rat time;         // instant of the violation
    std::string detail;
};

struct ValidationReport {
    bool ok{false};
    std::vector<Violation> violations;
    Rat makespan;
};

/// Checks a schedule against the availability semantics of the instance's
/// delay model and reports every violation.
///
/// Time convention: a placement stores the START time; a job on machine i
/// occupies the half-open interval [start, start + 1/s_i), and its result is
/// complete at start + 1/s_i. A predecessor u is available to job v starting
/// on machine i at time t when
///   - Additive:   u completes on i by t, or on any machine j by
///                 t - (out_j + out_u + in_i + in_v);
///   - JobMachine: u completes on i by t, or anywhere by t - delay(v, i);
///   - Umps:       u completes by t, and every placement of v must be on
///                 v's assigned machine.
/// A duplicated predecessor counts as available if ANY of its copies
/// satisfies the inequality.
ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule);

/// Max completion time over all placements. Throws on an empty schedule.
Rat makespan(const Schedule& schedule, const Instance& instance);

/// Jobs on the longest chain within the induced sub-DAG.
std::size_t critical_path(const Instance& instance, const std::vector<int>& job_subset);

/// Reusable index-based context; avoids rebuilding lookups when validating
/// many schedules against one instance (brute-force enumeration).
class Validator {
public:
    explicit Validator(const Instance& instance);
    ValidationReport run(const Schedule& schedule) const;
    /// Cheap accept/reject without building a report.
    bool accepts(const Schedule& schedule) const;

private:
    const Instance& inst_;
    std::vector<int> job_ids_;  // index -> id
    std::vector<std::vector<int>> preds_;  // closure predecessors, by index
    bool check(const Schedule& schedule, ValidationReport* report) const;
};

}  // namespace ds
