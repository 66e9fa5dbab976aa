#include "delaysched/grouping.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace ds {

long long round_up_pow2(long long x) {
    if (x < 0) throw std::invalid_argument("round_up_pow2 of negative value");
    if (x == 0) return 0;
    long long p = 1;
    while (p < x) p <<= 1;
    return p;
}

long long round_down_pow2(long long x) {
    if (x < 1) throw std::invalid_argument("round_down_pow2 needs x >= 1");
    long long p = 1;
    while (p * 2 <= x) p <<= 1;
    return p;
}

int pow2_exponent_up(long long x) {
    if (x == 0) return -1;
    long long p = round_up_pow2(x);
    int e = 0;
    while ((1LL << e) < p) ++e;
    return e;
}

int GroupedInstance::group_of_machine(int machine_id) const {
    for (std::size_t k = 0; k < machine_groups.size(); ++k)
        if (std::binary_search(machine_groups[k].machines.begin(),
                               machine_groups[k].machines.end(), machine_id))
            return static_cast<int>(k);
    throw structural_error("machine not in any group");
}

int GroupedInstance::group_of_job(int job_id) const {
    for (std::size_t l = 0; l < job_groups.size(); ++l)
        if (std::binary_search(job_groups[l].jobs.begin(), job_groups[l].jobs.end(), job_id))
            return static_cast<int>(l);
    throw structural_error("job not in any group");
}

GroupedInstance round_and_group(const Instance& instance) {
    if (instance.model != DelayModel::Additive)
        throw structural_error("grouping requires the additive delay model");
    for (const auto& mach : instance.machines)
        if (mach.out_delay != 0)
            throw structural_error("grouping requires out-delays merged to zero");
    for (const auto& job : instance.jobs)
        if (job.out_delay != 0)
            throw structural_error("grouping requires out-delays merged to zero");

    GroupedInstance g;
    g.delay_cap = round_up_pow2(static_cast<long long>(instance.n()));
    g.rounded = instance;
    for (auto& mach : g.rounded.machines) {
        mach.in_delay = round_up_pow2(mach.in_delay);
        if (mach.in_delay > g.delay_cap) {
            mach.in_delay = g.delay_cap;
            g.capped_machines.push_back(mach.id);
        }
        mach.size = round_down_pow2(mach.size);
        mach.speed = round_down_pow2(mach.speed);
    }
    for (auto& job : g.rounded.jobs) {
        job.in_delay = round_up_pow2(job.in_delay);
        if (job.in_delay > g.delay_cap) {
            job.in_delay = g.delay_cap;
            g.capped_jobs.push_back(job.id);
        }
    }

    std::map<std::tuple<long long, long long, long long>, std::vector<int>> mg;
    for (const auto& mach : g.rounded.machines)
        mg[{mach.in_delay, mach.size, mach.speed}].push_back(mach.id);
    for (auto& [key, ids] : mg) {
        std::sort(ids.begin(), ids.end());
        g.machine_groups.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), ids});
    }
    std::map<long long, std::vector<int>> jg;
    for (const auto& job : g.rounded.jobs) jg[job.in_delay].push_back(job.id);
    for (auto& [delay, ids] : jg) {
        std::sort(ids.begin(), ids.end());
        g.job_groups.push_back({delay, ids});
    }
    return g;
}

Schedule dilate_schedule_for_grouping(const Instance& instance, const GroupedInstance& grouped,
                                      const Schedule& schedule) {
    if (!grouped.capped_machines.empty() || !grouped.capped_jobs.empty())
        throw structural_error("dilation witness undefined once the delay cap fires");
    bool delays_changed = false, sizes_changed = false, speeds_changed = false;
    for (std::size_t i = 0; i < instance.machines.size(); ++i) {
        if (grouped.rounded.machines[i].in_delay != instance.machines[i].in_delay)
            delays_changed = true;
        if (grouped.rounded.machines[i].size != instance.machines[i].size) sizes_changed = true;
        if (grouped.rounded.machines[i].speed != instance.machines[i].speed) speeds_changed = true;
    }
    for (std::size_t j = 0; j < instance.jobs.size(); ++j)
        if (grouped.rounded.jobs[j].in_delay != instance.jobs[j].in_delay) delays_changed = true;

    // All three transformations double COMPLETION times, so a unit job at
    // start t with processing time e moves to start 2t + e (completion 2(t+e)).
    Schedule cur = schedule;
    auto double_completions = [&](const Schedule& in, bool rounded_exec) {
        Schedule next;
        next.no_duplication = in.no_duplication;
        for (const auto& [job, ps] : in.placements)
            for (const auto& p : ps) {
                Rat exec_old(1, instance.machine(p.machine).speed);
                Rat exec_new = rounded_exec ? Rat(1, grouped.rounded.machine(p.machine).speed)
                                            : exec_old;
                next.add(job, p.machine, (p.start + exec_old) * Rat(2) - exec_new);
            }
        return next;
    };
    if (delays_changed) cur = double_completions(cur, false);
    if (sizes_changed) {
        // Assign processor lanes greedily per machine; jobs on the upper half
        // of the lanes land on odd completions of the doubled timeline, the
        // rest on even ones. The parity argument needs integer completions.
        Schedule next;
        next.no_duplication = cur.no_duplication;
        std::map<int, std::vector<std::pair<Rat, int>>> order;  // machine -> (start, job)
        for (const auto& [job, ps] : cur.placements)
            for (const auto& p : ps) order[p.machine].push_back({p.start, job});
        for (auto& [mach_id, items] : order) {
            std::sort(items.begin(), items.end());
            const auto& mach = instance.machine(mach_id);
            Rat exec(1, mach.speed);
            for (const auto& [start, job] : items)
                if (!(start + exec).is_integer())
                    throw structural_error(
                        "size-halving dilation needs slot-aligned completions");
            std::vector<Rat> lane_free(static_cast<std::size_t>(mach.size), Rat(0));
            long long half = mach.size / 2;
            for (const auto& [start, job] : items) {
                long long lane = -1;
                for (long long q = 0; q < mach.size; ++q)
                    if (lane_free[q] <= start) {
                        lane = q;
                        break;
                    }
                if (lane < 0) throw structural_error("dilation input exceeds machine size");
                lane_free[lane] = start + exec;
                Rat completion = (start + exec) * Rat(2);
                if (lane >= mach.size - half) completion += Rat(1);  // eliminated lane
                next.add(job, mach_id, completion - exec);
            }
        }
        cur = next;
    }
    if (speeds_changed) cur = double_completions(cur, true);
    cur.canonicalize();
    return cur;
}

}  // namespace ds
