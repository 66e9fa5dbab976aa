#include "delaysched/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "delaysched/validate.hpp"

namespace ds {

Instance generate(const GenParams& p) {
    if (p.n < 1 || p.m < 1) throw std::invalid_argument("generate: need n >= 1, m >= 1");
    if (p.delay_min < 0 || p.delay_max < p.delay_min)
        throw std::invalid_argument("generate: bad delay range");
    if (p.speed_max < 1 || p.size_max < 1)
        throw std::invalid_argument("generate: bad speed/size range");
    if (p.edge_prob < 0.0 || p.edge_prob > 1.0)
        throw std::invalid_argument("generate: edge probability outside [0,1]");
    Rng rng(p.seed);

    bool plain = p.model != DelayModel::Additive;  // delays live elsewhere
    std::vector<Job> jobs;
    for (int i = 0; i < p.n; ++i) {
        Job j{i, 0, 0};
        if (!plain) {
            j.in_delay = rng.range(p.delay_min, p.delay_max);
            j.out_delay = rng.range(p.delay_min, p.delay_max);
        }
        jobs.push_back(j);
    }
    std::vector<Machine> machines;
    for (int i = 0; i < p.m; ++i) {
        Machine mach{i, 1, 1, 0, 0};
        if (!plain) {
            mach.size = rng.range(1, p.size_max);
            mach.speed = rng.range(1, p.speed_max);
            mach.in_delay = rng.range(p.delay_min, p.delay_max);
            mach.out_delay = rng.range(p.delay_min, p.delay_max);
        }
        machines.push_back(mach);
    }

    // Layered dag: edges only go from lower to strictly higher layers.
    int layers = 1 + static_cast<int>(rng.range(0, std::max(1, p.n / 2)));
    std::vector<int> layer(p.n);
    for (int i = 0; i < p.n; ++i) layer[i] = static_cast<int>(rng.range(0, layers - 1));
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < p.n; ++u)
        for (int v = 0; v < p.n; ++v)
            if (layer[u] < layer[v] && rng.coin(p.edge_prob)) edges.emplace_back(u, v);

    Instance inst = make_instance(std::move(jobs), std::move(machines), std::move(edges), p.model);
    if (p.model == DelayModel::JobMachine) {
        for (const auto& j : inst.jobs)
            for (const auto& mach : inst.machines)
                inst.table[j.id][mach.id] = rng.range(p.delay_min, p.delay_max);
    } else if (p.model == DelayModel::Umps) {
        for (const auto& j : inst.jobs)
            inst.assigned_machine[j.id] = static_cast<int>(rng.range(0, p.m - 1));
    }
    inst.check_consistent();
    return inst;
}

Schedule baseline_single_machine(const Instance& inst) {
    if (inst.machines.empty()) throw structural_error("no machines");
    const Machine* best = &inst.machines.front();
    for (const auto& mach : inst.machines)
        if (mach.size * mach.speed > best->size * best->speed) best = &mach;

    // Greedy slot fill in topological order; slot k covers [k/s, (k+1)/s).
    Schedule out;
    std::map<long long, long long> used;  // slot index -> jobs running there
    std::map<int, long long> done_slot;   // job -> completion slot
    for (int id : inst.dag.topological_order()) {
        long long ready = 0;
        for (const auto& [u, v] : inst.dag.edges())
            if (v == id) ready = std::max(ready, done_slot.at(u));
        long long k = ready;
        while (used[k] >= best->size) ++k;
        ++used[k];
        out.add(id, best->id, Rat(k, best->speed));
        done_slot[id] = k + 1;
    }
    out.no_duplication = true;
    return out;
}

namespace {

struct Search {
    const Instance& inst;
    const OracleCaps& caps;
    bool allow_dup;
    long long grid;    // starts are multiples of 1/grid
    long long hslots;  // horizon in grid slots
    int n, m;
    std::vector<int> job_ids, mach_ids;
    std::vector<long long> exec_len;      // slots a job occupies on machine i
    std::vector<std::vector<int>> preds;  // closure predecessor indices
    std::vector<int> topo;                // job indices in topological order
    std::vector<char> has_succ;
    std::vector<long long> completion;  // completion[j*m+i] in slots, -1 if absent
    std::vector<std::vector<int>> busy;
    std::vector<int> copies;  // placements per job
    int placed_jobs = 0;
    std::uint64_t nodes = 0;
    long long best = -1;  // best makespan in slots
    std::vector<long long> best_completion;

    Search(const Instance& i, const OracleCaps& c, bool dup) : inst(i), caps(c), allow_dup(dup) {
        n = static_cast<int>(inst.n());
        m = static_cast<int>(inst.m());
        for (const auto& j : inst.jobs) job_ids.push_back(j.id);
        for (const auto& mach : inst.machines) mach_ids.push_back(mach.id);
        long long l = 1;
        for (const auto& mach : inst.machines) l = std::lcm(l, mach.speed);
        grid = l * caps.grid_mult;
        if (grid > caps.max_grid) throw std::invalid_argument("oracle: speed lcm over cap");
        exec_len.resize(m);
        for (int i2 = 0; i2 < m; ++i2) exec_len[i2] = grid / inst.machines[i2].speed;
        for (int j = 0; j < n; ++j) {
            std::vector<int> ps;
            for (int u : inst.dag.predecessors_of(job_ids[j])) ps.push_back(inst.dag.index_of(u));
            preds.push_back(std::move(ps));
            has_succ.push_back(!inst.dag.successors_of(job_ids[j]).empty());
        }
        for (int id : inst.dag.topological_order()) topo.push_back(inst.dag.index_of(id));
    }

    long long cross_lag_slots(int u, int v, int iv, int iu) const {
        switch (inst.model) {
            case DelayModel::Additive:
                return (inst.machines[iu].out_delay + inst.jobs[u].out_delay +
                        inst.machines[iv].in_delay + inst.jobs[v].in_delay) *
                       grid;
            case DelayModel::JobMachine:
                return inst.table_delay(job_ids[v], mach_ids[iv]) * grid;
            case DelayModel::Umps:
                return 0;
        }
        return 0;
    }

    bool preds_available(int j, int i, long long k) const {
        for (int u : preds[j]) {
            bool ok = false;
            for (int iu = 0; iu < m && !ok; ++iu) {
                long long c = completion[u * m + iu];
                if (c < 0) continue;
                if (iu == i && c <= k)
                    ok = true;
                else if (c + cross_lag_slots(u, j, i, iu) <= k)
                    ok = true;
            }
            if (!ok) return false;
        }
        return true;
    }

    bool can_start(int j, int i, long long k) const {
        if (completion[j * m + i] >= 0) return false;  // one copy per machine
        if (!allow_dup && copies[j] > 0) return false;
        if (allow_dup && copies[j] > 0 && !has_succ[j]) return false;  // pointless copy
        if (inst.model == DelayModel::Umps && inst.assigned_machine.at(job_ids[j]) != mach_ids[i])
            return false;
        if (k + exec_len[i] > hslots) return false;
        for (long long s = k; s < k + exec_len[i]; ++s)
            if (busy[i][s] >= inst.machines[i].size) return false;
        return preds_available(j, i, k);
    }

    void place(int j, int i, long long k, int delta) {
        if (delta > 0) {
            completion[j * m + i] = k + exec_len[i];
            if (copies[j]++ == 0) ++placed_jobs;
            for (long long s = k; s < k + exec_len[i]; ++s) ++busy[i][s];
        } else {
            completion[j * m + i] = -1;
            if (--copies[j] == 0) --placed_jobs;
            for (long long s = k; s < k + exec_len[i]; ++s) --busy[i][s];
        }
    }

    long long current_makespan() const {
        long long mk = 0;
        for (long long c : completion) mk = std::max(mk, c);
        return mk;
    }

    // Longest chain of still-unplaced jobs: an admissible completion bound.
    long long unplaced_chain_lb() const {
        long long minexec = *std::min_element(exec_len.begin(), exec_len.end());
        std::vector<long long> len(n, 0);
        long long chain = 0;
        for (int j : topo) {
            if (copies[j] > 0) continue;
            long long l = 1;
            for (int u : preds[j])
                if (copies[u] == 0) l = std::max(l, len[u] + 1);
            len[j] = l;
            chain = std::max(chain, l);
        }
        return chain * minexec;
    }

    void dfs(long long k) {
        if (++nodes > caps.node_budget) throw std::runtime_error("oracle: node budget exceeded");
        if (placed_jobs == n) {
            long long mk = current_makespan();
            if (best < 0 || mk < best) {
                best = mk;
                best_completion = completion;
            }
            return;  // extra copies never reduce an already complete schedule
        }
        if (k >= hslots) return;
        long long lb = std::max(k + unplaced_chain_lb(), current_makespan());
        if (best >= 0 && lb >= best) return;

        std::vector<std::pair<int, int>> cands;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i)
                if (can_start(j, i, k)) cands.emplace_back(j, i);
        choose(k, cands, 0);
    }

    // Include/exclude each candidate start at slot k, then advance the clock.
    void choose(long long k, const std::vector<std::pair<int, int>>& cands, std::size_t idx) {
        if (idx == cands.size()) {
            dfs(k + 1);
            return;
        }
        auto [j, i] = cands[idx];
        if (can_start(j, i, k)) {  // capacity may be gone after earlier picks
            place(j, i, k, +1);
            choose(k, cands, idx + 1);
            place(j, i, k, -1);
        }
        choose(k, cands, idx + 1);
    }

    std::optional<OracleResult> run(long long horizon) {
        if (n > caps.max_jobs || m > caps.max_machines)
            throw std::invalid_argument("oracle: instance over caps");
        if (horizon < 1 || horizon > caps.max_horizon)
            throw std::invalid_argument("oracle: horizon over caps");
        hslots = horizon * grid;
        completion.assign(static_cast<std::size_t>(n) * m, -1);
        busy.assign(m, std::vector<int>(hslots, 0));
        copies.assign(n, 0);
        dfs(0);
        if (best < 0) return std::nullopt;
        OracleResult res;
        res.makespan = Rat(best, grid);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i)
                if (best_completion[j * m + i] >= 0)
                    res.witness.add(job_ids[j], mach_ids[i],
                                    Rat(best_completion[j * m + i] - exec_len[i], grid));
        res.witness.canonicalize();
        res.witness.no_duplication = !allow_dup;
        if (!Validator(inst).accepts(res.witness))
            throw std::logic_error("oracle witness failed validation");
        return res;
    }
};

}  // namespace

std::optional<OracleResult> brute_force_opt(const Instance& instance, long long horizon,
                                            bool allow_dup, const OracleCaps& caps) {
    Search s(instance, caps, allow_dup);
    return s.run(horizon);
}

void enumerate_schedules(const Instance& inst, long long horizon,
                         const std::function<void(const Schedule&, bool)>& visit) {
    for (const auto& mach : inst.machines)
        if (mach.speed != 1)
            throw std::invalid_argument("enumerate_schedules supports unit speeds only");
    int n = static_cast<int>(inst.n());
    int m = static_cast<int>(inst.m());
    int h = static_cast<int>(horizon);
    auto pairs = inst.dag.closure_pairs();

    std::vector<int> choice(n, 0);  // per job: machine_index * horizon + slot
    int options = m * h;

    // First-principles feasibility on (machine, slot) assignments; written
    // independently of the Validator so the two can cross-check each other.
    auto feasible = [&](const std::vector<int>& ch) {
        std::vector<std::vector<int>> load(m, std::vector<int>(h, 0));
        for (int j = 0; j < n; ++j) {
            int mi = ch[j] / h;
            int slot = ch[j] % h;
            if (inst.model == DelayModel::Umps &&
                inst.assigned_machine.at(inst.jobs[j].id) != inst.machines[mi].id)
                return false;
            if (++load[mi][slot] > inst.machines[mi].size) return false;
        }
        for (const auto& [u, v] : pairs) {
            int ju = inst.dag.index_of(u), jv = inst.dag.index_of(v);
            int mu = ch[ju] / h, su = ch[ju] % h;
            int mv = ch[jv] / h, sv = ch[jv] % h;
            long long done = su + 1;
            bool ok = false;
            if (mu == mv) {
                ok = done <= sv;
            } else {
                switch (inst.model) {
                    case DelayModel::Additive:
                        ok = done + inst.machines[mu].out_delay + inst.job(u).out_delay +
                                 inst.machines[mv].in_delay + inst.job(v).in_delay <=
                             sv;
                        break;
                    case DelayModel::JobMachine:
                        ok = done + inst.table_delay(v, inst.machines[mv].id) <= sv;
                        break;
                    case DelayModel::Umps:
                        ok = done <= sv;
                        break;
                }
            }
            if (!ok) return false;
        }
        return true;
    };

    std::function<void(int)> rec = [&](int j) {
        if (j == n) {
            Schedule s;
            for (int q = 0; q < n; ++q)
                s.add(inst.jobs[q].id, inst.machines[choice[q] / h].id, Rat(choice[q] % h));
            visit(s, feasible(choice));
            return;
        }
        for (int c = 0; c < options; ++c) {
            choice[j] = c;
            rec(j + 1);
        }
    };
    rec(0);
}

}  // namespace ds
