#include "delaysched/instance.hpp"

namespace ds {

void Instance::check_consistent() const {
    for (const auto& j : jobs)
        if (j.in_delay < 0 || j.out_delay < 0)
            throw structural_error("negative delay on job " + std::to_string(j.id));
    for (const auto& i : machines) {
        if (i.size < 1 || i.speed < 1)
            throw structural_error("machine " + std::to_string(i.id) + " needs size >= 1, speed >= 1");
        if (i.in_delay < 0 || i.out_delay < 0)
            throw structural_error("negative delay on machine " + std::to_string(i.id));
    }
    for (const auto& [u, v] : dag.edges()) {
        job(u);
        job(v);
    }
    if (model == DelayModel::JobMachine) {
        for (const auto& j : jobs)
            for (const auto& i : machines)
                if (table_delay(j.id, i.id) < 0)
                    throw structural_error("negative table delay");
    }
    if (model == DelayModel::Umps) {
        if (assigned_machine.size() != jobs.size())
            throw structural_error("UMPS partition must cover every job exactly once");
        for (const auto& [jid, mid] : assigned_machine) {
            job(jid);
            machine(mid);
        }
        for (const auto& i : machines)
            if (i.size != 1 || i.speed != 1 || i.in_delay != 0 || i.out_delay != 0)
                throw structural_error("UMPS machines are unit and delay-free");
        for (const auto& j : jobs)
            if (j.in_delay != 0 || j.out_delay != 0)
                throw structural_error("UMPS jobs are delay-free");
    }
}

Instance make_instance(std::vector<Job> jobs, std::vector<Machine> machines,
                       std::vector<std::pair<int, int>> edges, DelayModel model) {
    Instance inst;
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.id < b.id; });
    std::sort(machines.begin(), machines.end(),
              [](const Machine& a, const Machine& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < jobs.size(); ++i)
        if (jobs[i].id == jobs[i - 1].id) throw structural_error("duplicate job id");
    for (std::size_t i = 1; i < machines.size(); ++i)
        if (machines[i].id == machines[i - 1].id) throw structural_error("duplicate machine id");
    inst.jobs = std::move(jobs);
    inst.machines = std::move(machines);
    std::vector<int> ids;
    ids.reserve(inst.jobs.size());
    for (const auto& j : inst.jobs) ids.push_back(j.id);
    inst.dag = Dag(std::move(ids), std::move(edges));
    inst.model = model;
    return inst;
}

}  // namespace ds
