#include "delaysched/validate.hpp"

#include <algorithm>

namespace ds {

const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::Precedence: return "precedence";
        case ViolationKind::Capacity: return "capacity";
        case ViolationKind::Availability: return "availability";
        case ViolationKind::Duplication: return "duplication";
    }
    return "?";
}

Rat makespan(const Schedule& schedule, const Instance& instance) {
    if (schedule.empty()) throw structural_error("makespan of empty schedule");
    Rat best(0);
    bool any = false;
    for (const auto& [job, ps] : schedule.placements) {
        instance.job(job);
        for (const auto& p : ps) {
            Rat completion = p.start + Rat(1, instance.machine(p.machine).speed);
            if (!any || completion > best) best = completion;
            any = true;
        }
    }
    if (!any) throw structural_error("makespan of empty schedule");
    return best;
}

std::size_t critical_path(const Instance& instance, const std::vector<int>& job_subset) {
    return instance.dag.critical_path(job_subset);
}

Validator::Validator(const Instance& instance) : inst_(instance) {
    inst_.check_consistent();
    for (const auto& j : inst_.jobs) job_ids_.push_back(j.id);
    preds_.reserve(job_ids_.size());
    for (int id : job_ids_) preds_.push_back(inst_.dag.predecessors_of(id));
}

ValidationReport Validator::run(const Schedule& schedule) const {
    ValidationReport report;
    report.makespan = Rat(0);
    check(schedule, &report);
    report.ok = report.violations.empty();
    return report;
}

bool Validator::accepts(const Schedule& schedule) const { return check(schedule, nullptr); }

namespace {

struct CapEvent {
    Rat time;
    int delta;  // departures (-1) sort before arrivals (+1): half-open intervals
};

}  // namespace

bool Validator::check(const Schedule& schedule, ValidationReport* report) const {
    bool ok = true;
    auto flag = [&](Violation v) {
        ok = false;
        if (report) report->violations.push_back(std::move(v));
        return report != nullptr;  // keep scanning only when reporting
    };

    // Structural pass: ids must resolve; negative starts are malformed input.
    for (const auto& [job, ps] : schedule.placements) {
        inst_.job(job);
        if (ps.empty()) throw structural_error("empty placement set for job " + std::to_string(job));
        for (const auto& p : ps) {
            inst_.machine(p.machine);
            if (p.start < Rat(0))
                throw structural_error("negative start time for job " + std::to_string(job));
        }
    }

    for (int id : job_ids_) {
        auto it = schedule.placements.find(id);
        if (it == schedule.placements.end()) {
            if (!flag({ViolationKind::Precedence, id, -1, Rat(0), "job never executed"}))
                return false;
        } else if (schedule.no_duplication && it->second.size() != 1) {
            if (!flag({ViolationKind::Duplication, id, -1, Rat(0),
                       "no-duplication schedule executes job " + std::to_string(id) + " " +
                           std::to_string(it->second.size()) + " times"}))
                return false;
        }
    }

    // Capacity: at most m_i overlapping executions on machine i.
    std::map<int, std::vector<CapEvent>> events;
    for (const auto& [job, ps] : schedule.placements)
        for (const auto& p : ps) {
            const auto& mach = inst_.machine(p.machine);
            events[p.machine].push_back({p.start, +1});
            events[p.machine].push_back({p.start + Rat(1, mach.speed), -1});
        }
    for (auto& [mid, evs] : events) {
        std::sort(evs.begin(), evs.end(), [](const CapEvent& a, const CapEvent& b) {
            return a.time != b.time ? a.time < b.time : a.delta < b.delta;
        });
        long long live = 0, cap = inst_.machine(mid).size;
        for (const auto& e : evs) {
            live += e.delta;
            if (live > cap) {
                if (!flag({ViolationKind::Capacity, -1, mid, e.time,
                           "machine " + std::to_string(mid) + " runs " + std::to_string(live) +
                               " jobs, size " + std::to_string(cap)}))
                    return false;
                break;  // one report per machine is enough
            }
        }
    }

    // Availability of each transitive predecessor, per placement.
    auto completion = [&](const Placement& p) {
        return p.start + Rat(1, inst_.machine(p.machine).speed);
    };
    for (std::size_t vi = 0; vi < job_ids_.size(); ++vi) {
        int v = job_ids_[vi];
        auto vit = schedule.placements.find(v);
        if (vit == schedule.placements.end()) continue;
        const Job& vjob = inst_.job(v);
        for (const auto& pv : vit->second) {
            const Machine& mach = inst_.machine(pv.machine);
            if (inst_.model == DelayModel::Umps) {
                int want = inst_.assigned_machine.at(v);
                if (pv.machine != want) {
                    if (!flag({ViolationKind::Availability, v, pv.machine, pv.start,
                               "job " + std::to_string(v) + " pinned to machine " +
                                   std::to_string(want)}))
                        return false;
                }
            }
            for (int u : preds_[vi]) {
                auto uit = schedule.placements.find(u);
                if (uit == schedule.placements.end()) continue;  // flagged above
                bool available = false;
                for (const auto& pu : uit->second) {
                    Rat done = completion(pu);
                    switch (inst_.model) {
                        case DelayModel::Additive: {
                            if (pu.machine == pv.machine && done <= pv.start) {
                                available = true;
                            } else {
                                long long lag = inst_.machine(pu.machine).out_delay +
                                                inst_.job(u).out_delay + mach.in_delay +
                                                vjob.in_delay;
                                available = done + Rat(lag) <= pv.start;
                            }
                            break;
                        }
                        case DelayModel::JobMachine: {
                            if (pu.machine == pv.machine && done <= pv.start)
                                available = true;
                            else
                                available =
                                    done + Rat(inst_.table_delay(v, pv.machine)) <= pv.start;
                            break;
                        }
                        case DelayModel::Umps:
                            available = done <= pv.start;
                            break;
                    }
                    if (available) break;
                }
                if (!available) {
                    if (!flag({ViolationKind::Availability, v, pv.machine, pv.start,
                               "predecessor " + std::to_string(u) + " not available to job " +
                                   std::to_string(v) + " on machine " +
                                   std::to_string(pv.machine)}))
                        return false;
                }
            }
        }
    }

    if (report && !schedule.empty()) report->makespan = makespan(schedule, inst_);
    return ok;
}

ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule) {
    return Validator(instance).run(schedule);
}

}  // namespace ds
