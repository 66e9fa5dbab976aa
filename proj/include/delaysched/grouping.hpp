#pragma once

#include <optional>
#include <vector>

#include "delaysched/instance.hpp"
#include "delaysched/schedule.hpp"

namespace ds {

/// Smallest power of two >= x; 0 stays 0.
long long round_up_pow2(long long x);
/// Largest power of two <= x; requires x >= 1.
long long round_down_pow2(long long x);
/// Exponent of round_up_pow2(x); -1 encodes the zero-delay bucket.
int pow2_exponent_up(long long x);

/// Machines with identical rounded (delay, size, speed).
struct MachineGroup {
    long long delay{0};
    long long size{1};
    long long speed{1};
    std::vector<int> machines;  // ids, ascending
};

/// Jobs with identical rounded in-delay.
struct JobGroup {
    long long delay{0};
    std::vector<int> jobs;  // ids, ascending
};

struct GroupedInstance {
    Instance rounded;  // same ids, rounded parameters
    std::vector<MachineGroup> machine_groups;  // sorted by (delay, size, speed)
    std::vector<JobGroup> job_groups;          // sorted by delay
    long long delay_cap{0};                    // smallest power of two >= n
    std::vector<int> capped_machines;          // ids whose delay hit the cap
    std::vector<int> capped_jobs;

    int machine_group_count() const { return static_cast<int>(machine_groups.size()); }
    int job_group_count() const { return static_cast<int>(job_groups.size()); }
    int group_of_machine(int machine_id) const;
    int group_of_job(int job_id) const;
};

/// Rounds delays up and sizes/speeds down to powers of two and buckets
/// machines/jobs into identical groups. Delays above n are capped at the
/// smallest power of two >= n (a larger delay is never worth paying; the
/// affected ids are recorded so callers can fall back to a single machine).
/// Requires an additive-model instance whose out-delays are already merged
/// away (all zero).
GroupedInstance round_and_group(const Instance& instance);

/// Constructive witness that rounding costs at most a factor 12: transforms a
/// schedule valid on `instance` into one valid on the rounded instance by
/// composing time-doubling (delays), processor-halving (sizes), and
/// time-doubling (speeds). Each transformation is skipped when the rounding
/// left that parameter unchanged on every machine. Not applicable when the
/// delay cap fired (capped delays shrink, which a dilation cannot absorb).
Schedule dilate_schedule_for_grouping(const Instance& instance, const GroupedInstance& grouped,
                                      const Schedule& schedule);

}  // namespace ds
