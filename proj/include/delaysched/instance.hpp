#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "delaysched/dag.hpp"
#include "delaysched/rational.hpp"

namespace ds {

/// Malformed input (unknown ids, inconsistent tables). Distinct from schedule
/// violations, which are reported, not thrown.
struct structural_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Job {
    int id{0};
    long long in_delay{0};
    long long out_delay{0};
};

struct Machine {
    int id{0};
    long long size{1};   // jobs executable concurrently
    long long speed{1};  // a unit job takes 1/speed time
    long long in_delay{0};
    long long out_delay{0};
};

enum class DelayModel {
    Additive,    // delay(u on j -> v on i) = out_j + out_u + in_i + in_v
    JobMachine,  // delay depends only on (v, i): table entry
    Umps,        // jobs pinned to machines, unit everything, no delays
};

struct Instance {
    std::vector<Job> jobs;  // ascending by id
    std::vector<Machine> machines;
    Dag dag;
    DelayModel model{DelayModel::Additive};
    // JobMachine: delay[job][machine]. Umps: assigned machine per job.
    std::map<int, std::map<int, long long>> table;
    std::map<int, int> assigned_machine;

    std::size_t n() const { return jobs.size(); }
    std::size_t m() const { return machines.size(); }

    const Job& job(int id) const {
        auto it = std::lower_bound(jobs.begin(), jobs.end(), id,
                                   [](const Job& j, int x) { return j.id < x; });
        if (it == jobs.end() || it->id != id)
            throw structural_error("unknown job id " + std::to_string(id));
        return *it;
    }
    const Machine& machine(int id) const {
        auto it = std::lower_bound(machines.begin(), machines.end(), id,
                                   [](const Machine& m, int x) { return m.id < x; });
        if (it == machines.end() || it->id != id)
            throw structural_error("unknown machine id " + std::to_string(id));
        return *it;
    }
    bool has_machine(int id) const {
        auto it = std::lower_bound(machines.begin(), machines.end(), id,
                                   [](const Machine& m, int x) { return m.id < x; });
        return it != machines.end() && it->id == id;
    }

    long long table_delay(int job_id, int machine_id) const {
        auto jt = table.find(job_id);
        if (jt == table.end()) throw structural_error("no delay row for job " + std::to_string(job_id));
        auto mt = jt->second.find(machine_id);
        if (mt == jt->second.end())
            throw structural_error("no delay entry for job " + std::to_string(job_id) +
                                   " on machine " + std::to_string(machine_id));
        return mt->second;
    }

    /// delta_max: max over jobs and machines of in_delay + out_delay.
    long long max_total_delay() const {
        long long d = 0;
        for (const auto& j : jobs) d = std::max(d, j.in_delay + j.out_delay);
        for (const auto& i : machines) d = std::max(d, i.in_delay + i.out_delay);
        return d;
    }

    void check_consistent() const;
};

/// Sorts jobs/machines by id and verifies the model-specific invariants.
Instance make_instance(std::vector<Job> jobs, std::vector<Machine> machines,
                       std::vector<std::pair<int, int>> edges,
                       DelayModel model = DelayModel::Additive);

}  // namespace ds
