#include "delaysched/udps.hpp"

#include <algorithm>
#include <set>

namespace ds {

Schedule list_schedule(const Dag& dag, const std::vector<int>& jobs, int machine_id,
                       long long size, long long speed, Rat start) {
    std::set<int> inside(jobs.begin(), jobs.end());
    Schedule out;
    std::map<long long, long long> load;  // slot -> jobs started there
    std::map<int, long long> done_slot;
    for (int v : dag.topological_order()) {
        if (!inside.count(v)) continue;
        long long ready = 0;
        for (int u : dag.predecessors_of(v)) {
            auto it = done_slot.find(u);
            if (it != done_slot.end()) ready = std::max(ready, it->second);
        }
        long long k = ready;
        while (load[k] >= size) ++k;
        ++load[k];
        done_slot[v] = k + 1;
        out.add(v, machine_id, start + Rat(k, speed));
    }
    return out;
}

Instance udps_instance(const UdpsInput& input) {
    std::vector<Job> jobs;
    for (int id : input.jobs) jobs.push_back({id, 0, 0});
    std::vector<Machine> machines;
    for (int id : input.group.machines)
        machines.push_back({id, input.group.size, input.group.speed, input.delay, 0});
    std::set<int> inside(input.jobs.begin(), input.jobs.end());
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : input.dag->closure_pairs())
        if (inside.count(u) && inside.count(v)) edges.emplace_back(u, v);
    return make_instance(std::move(jobs), std::move(machines), std::move(edges));
}

namespace {

void check_preconditions(const UdpsInput& input) {
    if (!input.dag) throw std::invalid_argument("udps input needs a dag");
    if (input.group.machines.empty()) throw std::invalid_argument("udps input needs machines");
    Rat delay_eff(std::max(1LL, input.delay));
    Rat pred_budget = input.alpha * delay_eff * Rat(input.group.size * input.group.speed);
    std::set<int> inside(input.jobs.begin(), input.jobs.end());
    for (int v : input.jobs) {
        long long preds = 0;
        for (int u : input.dag->predecessors_of(v)) preds += inside.count(u);
        if (Rat(preds) > pred_budget)
            throw std::invalid_argument("udps precondition: job " + std::to_string(v) + " has " +
                                        std::to_string(preds) +
                                        " in-fragment predecessors, over the budget");
    }
    Rat chain_budget = input.alpha * delay_eff * Rat(input.group.speed);
    std::size_t chain = input.dag->critical_path(input.jobs);
    if (Rat(static_cast<long long>(chain)) > chain_budget)
        throw std::invalid_argument("udps precondition: chain of " + std::to_string(chain) +
                                    " jobs exceeds the budget");
}

}  // namespace

UdpsResult udps_solve(const UdpsInput& input) {
    check_preconditions(input);
    UdpsResult result;
    result.makespan = Rat(input.delay);

    std::vector<int> topo;
    std::set<int> inside(input.jobs.begin(), input.jobs.end());
    for (int v : input.dag->topological_order())
        if (inside.count(v)) topo.push_back(v);
    std::map<int, std::vector<int>> preds;  // within the fragment
    for (int v : topo) {
        std::vector<int> ps;
        for (int u : input.dag->predecessors_of(v))
            if (inside.count(u)) ps.push_back(u);
        preds[v] = std::move(ps);
    }

    std::set<int> remaining(inside);
    Rat t(input.delay);  // initial communication pad
    while (!remaining.empty()) {
        std::map<int, std::set<int>> placed;  // machine -> jobs this round
        std::set<int> placed_any;
        std::map<int, long long> preds_before;
        for (int v : topo) {
            if (!remaining.count(v)) continue;
            long long cnt = 0;
            for (int u : preds[v]) cnt += remaining.count(u);
            preds_before[v] = cnt;
        }
        for (int v : topo) {
            if (!remaining.count(v)) continue;
            std::vector<int> open;  // unscheduled predecessors, within remaining
            for (int u : preds[v])
                if (remaining.count(u)) open.push_back(u);
            long long dup = 0;
            for (int u : open) dup += placed_any.count(u);
            if (static_cast<long long>(open.size()) >= 2 * dup) {
                int target = input.group.machines.front();
                for (int mach : input.group.machines)
                    if (placed[mach].size() < placed[target].size()) target = mach;
                for (int u : open) {
                    placed[target].insert(u);
                    placed_any.insert(u);
                }
                placed[target].insert(v);
                placed_any.insert(v);
            }
        }
        if (placed_any.empty()) throw std::logic_error("udps round placed nothing");

        UdpsRound round;
        round.start = t;
        round.placed_union = placed_any.size();
        round.min_load = SIZE_MAX;
        Rat round_end = t;
        for (int mach : input.group.machines) {
            const auto& chosen = placed[mach];
            round.placed_sum += chosen.size();
            round.max_load = std::max(round.max_load, chosen.size());
            round.min_load = std::min(round.min_load, chosen.size());
            if (chosen.empty()) continue;
            std::vector<int> jobs(chosen.begin(), chosen.end());
            Schedule frag =
                list_schedule(*input.dag, jobs, mach, input.group.size, input.group.speed, t);
            for (const auto& [job, ps] : frag.placements)
                for (const auto& p : ps) {
                    result.schedule.add(job, p.machine, p.start);
                    Rat end = p.start + Rat(1, input.group.speed);
                    if (end > round_end) round_end = end;
                }
        }
        result.rounds.push_back(round);
        if (round.placed_sum > 2 * round.placed_union)
            throw std::logic_error("udps round broke the duplication factor");

        for (int v : placed_any) remaining.erase(v);
        for (int v : topo) {  // halving invariant for the survivors
            if (!remaining.count(v)) continue;
            long long after = 0;
            for (int u : preds[v]) after += remaining.count(u);
            if (preds_before[v] > 0 && 2 * after >= preds_before[v] && after > 0)
                throw std::logic_error("udps round failed to halve a predecessor set");
        }
        result.makespan = round_end;
        t = Rat(input.delay) + (t > round_end ? t : round_end);
    }
    result.schedule.canonicalize();
    return result;
}

}  // namespace ds
