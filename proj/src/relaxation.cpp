#include "delaysched/relaxation.hpp"

#include <algorithm>
#include <functional>

#include "delaysched/validate.hpp"

namespace ds {

const char* to_string(LpVariant v) {
    switch (v) {
        case LpVariant::MachineDelays: return "machine_delays";
        case LpVariant::JobMachineDelays: return "job_machine_delays";
        case LpVariant::GeneralRelated: return "general_related";
    }
    return "?";
}

namespace {

struct VarRef {
    enum Kind { Makespan, Completion, Exec, Copy, Dup, Chain } kind;
    int a{-1}, b{-1}, c{-1};  // Completion: job | Exec/Copy: (job, k)
                              // Dup: (u, v, k) | Chain: (v, k, u)
    static VarRef makespan() { return {Makespan}; }
    static VarRef completion(int v) { return {Completion, v}; }
    static VarRef exec(int v, int k) { return {Exec, v, k}; }
    static VarRef copy(int v, int k) { return {Copy, v, k}; }
    static VarRef dup(int u, int v, int k) { return {Dup, u, v, k}; }
    static VarRef chain(int v, int k, int u) { return {Chain, v, k, u}; }
};

struct RowSpec {
    std::string name;
    std::vector<std::pair<VarRef, Rat>> terms;
    Sense sense;
    Rat rhs;
};

void check_variant(const GroupedInstance& g, LpVariant variant) {
    if (variant != LpVariant::GeneralRelated)
        for (const auto& mg : g.machine_groups)
            if (mg.size != 1 || mg.speed != 1)
                throw structural_error(std::string(to_string(variant)) +
                                       " needs unit sizes and speeds");
    if (variant == LpVariant::MachineDelays)
        for (const auto& jg : g.job_groups)
            if (jg.delay != 0)
                throw structural_error("machine_delays variant needs zero job delays");
}

// Single source of truth for the constraint system; the builder feeds the
// rows to the double-based solver, the checker re-evaluates them exactly.
void enumerate_constraints(const GroupedInstance& g, Rat alpha, LpVariant variant,
                           const std::function<void(RowSpec)>& emit) {
    check_variant(g, variant);
    const auto& dag = g.rounded.dag;
    int K = g.machine_group_count();
    auto pairs = dag.closure_pairs();

    auto job_group_delay = [&](int v) { return g.job_groups[g.group_of_job(v)].delay; };
    auto delay_coef = [&](int v, int k) {
        long long d = g.machine_groups[k].delay;
        if (variant != LpVariant::MachineDelays) d += job_group_delay(v);
        return Rat(d);
    };

    for (const auto& job : g.rounded.jobs) {
        int v = job.id;
        emit({"makespan_v" + std::to_string(v),
              {{VarRef::makespan(), Rat(1)}, {VarRef::completion(v), Rat(-1)}},
              Sense::GE,
              Rat(0)});
    }
    for (int k = 0; k < K; ++k) {
        const auto& mg = g.machine_groups[k];
        Rat cap(static_cast<long long>(mg.machines.size()));
        if (variant == LpVariant::GeneralRelated) cap = cap * Rat(mg.size * mg.speed);
        RowSpec row{"load_k" + std::to_string(k), {{VarRef::makespan(), cap}}, Sense::GE, Rat(0)};
        for (const auto& job : g.rounded.jobs)
            row.terms.push_back({VarRef::copy(job.id, k), Rat(-1)});
        emit(std::move(row));
    }
    for (const auto& [u, v] : pairs) {
        for (int k = 0; k < K; ++k) {
            Rat d = delay_coef(v, k);
            emit({"delay_u" + std::to_string(u) + "_v" + std::to_string(v) + "_k" +
                      std::to_string(k),
                  {{VarRef::completion(v), Rat(1)},
                   {VarRef::completion(u), Rat(-1)},
                   {VarRef::exec(v, k), -d},
                   {VarRef::dup(u, v, k), d}},
                  Sense::GE,
                  Rat(0)});
        }
        RowSpec prec{"prec_u" + std::to_string(u) + "_v" + std::to_string(v),
                     {{VarRef::completion(v), Rat(1)}, {VarRef::completion(u), Rat(-1)}},
                     Sense::GE,
                     Rat(0)};
        for (int k = 0; k < K; ++k) {
            Rat w = variant == LpVariant::GeneralRelated ? Rat(1, g.machine_groups[k].speed)
                                                         : Rat(1);
            prec.terms.push_back({VarRef::exec(v, k), -w});
        }
        emit(std::move(prec));
    }
    for (const auto& job : g.rounded.jobs) {
        int v = job.id;
        auto preds = dag.predecessors_of(v);
        for (int k = 0; k < K && !preds.empty(); ++k) {
            Rat budget = alpha * delay_coef(v, k);
            if (variant == LpVariant::GeneralRelated)
                budget = budget * Rat(g.machine_groups[k].size * g.machine_groups[k].speed);
            RowSpec row{"dupbudget_v" + std::to_string(v) + "_k" + std::to_string(k),
                        {},
                        Sense::LE,
                        budget};
            for (int u : preds) row.terms.push_back({VarRef::dup(u, v, k), Rat(1)});
            emit(std::move(row));
        }
        RowSpec exec{"exec_v" + std::to_string(v), {}, Sense::EQ, Rat(1)};
        for (int k = 0; k < K; ++k) exec.terms.push_back({VarRef::exec(v, k), Rat(1)});
        emit(std::move(exec));
    }
    for (const auto& [u, v] : pairs)
        for (int k = 0; k < K; ++k) {
            std::string suffix = "_u" + std::to_string(u) + "_v" + std::to_string(v) + "_k" +
                                 std::to_string(k);
            emit({"xz" + suffix,
                  {{VarRef::exec(v, k), Rat(1)}, {VarRef::dup(u, v, k), Rat(-1)}},
                  Sense::GE,
                  Rat(0)});
            emit({"yz" + suffix,
                  {{VarRef::copy(u, k), Rat(1)}, {VarRef::dup(u, v, k), Rat(-1)}},
                  Sense::GE,
                  Rat(0)});
        }
    for (const auto& job : g.rounded.jobs)
        for (int k = 0; k < K; ++k)
            emit({"yx_v" + std::to_string(job.id) + "_k" + std::to_string(k),
                  {{VarRef::copy(job.id, k), Rat(1)}, {VarRef::exec(job.id, k), Rat(-1)}},
                  Sense::GE,
                  Rat(0)});

    if (variant == LpVariant::GeneralRelated) {
        for (const auto& job : g.rounded.jobs) {
            int v = job.id;
            auto preds = dag.predecessors_of(v);
            for (int k = 0; k < K; ++k) {
                Rat speed(g.machine_groups[k].speed);
                for (int u : preds) {
                    std::string suffix = "_v" + std::to_string(v) + "_k" + std::to_string(k) +
                                         "_u" + std::to_string(u);
                    emit({"chaincap" + suffix,
                          {{VarRef::chain(v, k, u), Rat(1)}},
                          Sense::LE,
                          alpha * delay_coef(v, k)});
                    for (int u2 : preds)
                        if (dag.precedes(u2, u))
                            emit({"chainprec" + suffix + "_p" + std::to_string(u2),
                                  {{VarRef::chain(v, k, u), Rat(1)},
                                   {VarRef::chain(v, k, u2), Rat(-1)},
                                   {VarRef::dup(u, v, k), Rat(0) - Rat(1) / speed}},
                                  Sense::GE,
                                  Rat(0)});
                }
            }
        }
    }
}

}  // namespace

RelaxationLp build_lp(const GroupedInstance& grouped, double alpha, LpVariant variant) {
    if (alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");
    RelaxationLp lp;
    lp.variant = variant;
    lp.alpha = alpha;
    int K = grouped.machine_group_count();
    const auto& dag = grouped.rounded.dag;

    lp.makespan_var = lp.problem.add_variable("Cstar");
    for (const auto& job : grouped.rounded.jobs)
        lp.completion_var[job.id] = lp.problem.add_variable("C_" + std::to_string(job.id));
    for (const auto& job : grouped.rounded.jobs)
        for (int k = 0; k < K; ++k) {
            lp.exec_var[{job.id, k}] = lp.problem.add_variable(
                "x_" + std::to_string(job.id) + "_" + std::to_string(k));
            lp.copy_var[{job.id, k}] = lp.problem.add_variable(
                "y_" + std::to_string(job.id) + "_" + std::to_string(k));
        }
    for (const auto& [u, v] : dag.closure_pairs())
        for (int k = 0; k < K; ++k)
            lp.dup_var[{u, v, k}] = lp.problem.add_variable(
                "z_" + std::to_string(u) + "_" + std::to_string(v) + "_" + std::to_string(k));
    if (variant == LpVariant::GeneralRelated)
        for (const auto& job : grouped.rounded.jobs)
            for (int u : dag.predecessors_of(job.id))
                for (int k = 0; k < K; ++k)
                    lp.chain_var[{job.id, k, u}] = lp.problem.add_variable(
                        "Cc_" + std::to_string(job.id) + "_" + std::to_string(k) + "_" +
                        std::to_string(u));

    auto var_of = [&](const VarRef& r) -> int {
        switch (r.kind) {
            case VarRef::Makespan: return lp.makespan_var;
            case VarRef::Completion: return lp.completion_var.at(r.a);
            case VarRef::Exec: return lp.exec_var.at({r.a, r.b});
            case VarRef::Copy: return lp.copy_var.at({r.a, r.b});
            case VarRef::Dup: return lp.dup_var.at({r.a, r.b, r.c});
            case VarRef::Chain: return lp.chain_var.at({r.a, r.b, r.c});
        }
        throw std::logic_error("bad VarRef");
    };
    enumerate_constraints(grouped, Rat::from_double(alpha), variant, [&](RowSpec row) {
        std::vector<LinTerm> terms;
        terms.reserve(row.terms.size());
        for (const auto& [ref, coef] : row.terms) terms.push_back({var_of(ref), coef.to_double()});
        lp.problem.add_constraint(std::move(row.name), std::move(terms), row.sense,
                                  row.rhs.to_double());
    });
    lp.problem.set_objective({{lp.makespan_var, 1.0}});
    return lp;
}

RoundedSolution round_solution(const LpSolution& fractional, const RelaxationLp& lp,
                               const GroupedInstance& grouped) {
    if (fractional.status != LpStatus::Optimal)
        throw std::invalid_argument("rounding needs an optimal fractional solution");
    int K = grouped.machine_group_count();
    Rat scale(2LL * K);
    RoundedSolution out;
    out.variant = lp.variant;
    out.alpha = scale;
    out.makespan_bound = Rat::from_double(fractional.objective) * scale;

    for (const auto& [job, var] : lp.completion_var)
        out.completion[job] = Rat::from_double(fractional.values[var]) * scale;
    for (const auto& job : grouped.rounded.jobs) {
        int best = 0;
        double best_val = -1.0;
        for (int k = 0; k < K; ++k) {
            double v = fractional.values[lp.exec_var.at({job.id, k})];
            if (v > best_val + kLpEps) {  // ties resolve to the lowest group
                best_val = v;
                best = k;
            }
        }
        out.exec_group[job.id] = best;
    }
    double threshold = 1.0 / (2.0 * K) - kLpEps;
    for (const auto& [key, var] : lp.dup_var) {
        auto [u, v, k] = key;
        if (out.exec_group.at(v) == k && fractional.values[var] >= threshold)
            out.dups.insert({u, v, k});
    }
    for (const auto& job : grouped.rounded.jobs)
        out.copies.insert({job.id, out.exec_group.at(job.id)});
    for (const auto& [key, var] : lp.dup_var) {
        auto [u, v, k] = key;
        (void)var;
        if (out.dups.count({u, v, k})) out.copies.insert({u, k});
    }
    for (const auto& [key, var] : lp.chain_var)
        out.chain[key] = Rat::from_double(fractional.values[var]) * scale;
    return out;
}

namespace {

Rat value_of(const RoundedSolution& s, const VarRef& r) {
    switch (r.kind) {
        case VarRef::Makespan: return s.makespan_bound;
        case VarRef::Completion: return s.completion.at(r.a);
        case VarRef::Exec: return Rat(s.exec_group.at(r.a) == r.b ? 1 : 0);
        case VarRef::Copy: return Rat(s.copies.count({r.a, r.b}) ? 1 : 0);
        case VarRef::Dup: return Rat(s.dups.count({r.a, r.b, r.c}) ? 1 : 0);
        case VarRef::Chain: {
            auto it = s.chain.find({r.a, r.b, r.c});
            return it == s.chain.end() ? Rat(0) : it->second;
        }
    }
    throw std::logic_error("bad VarRef");
}

}  // namespace

FeasibilityReport check_rounded_feasible(const RoundedSolution& rounded,
                                         const GroupedInstance& grouped, Rat alpha_prime) {
    FeasibilityReport report;
    Rat eps(1, 1000000);
    enumerate_constraints(grouped, alpha_prime, rounded.variant, [&](RowSpec row) {
        Rat lhs(0);
        for (const auto& [ref, coef] : row.terms) lhs += coef * value_of(rounded, ref);
        Rat slack(0);
        switch (row.sense) {
            case Sense::GE: slack = lhs - row.rhs; break;
            case Sense::LE: slack = row.rhs - lhs; break;
            case Sense::EQ: slack = lhs > row.rhs ? row.rhs - lhs : lhs - row.rhs; break;
        }
        if (slack < Rat(0) - eps) report.violations.push_back({row.name, slack});
    });
    report.feasible = report.violations.empty();
    return report;
}

RoundedSolution combinatorial_rounded_solution(const GroupedInstance& grouped) {
    if (grouped.machine_group_count() != 1)
        throw structural_error("combinatorial construction needs a single machine group");
    const auto& mg = grouped.machine_groups[0];
    if (mg.size != 1 || mg.speed != 1)
        throw structural_error("combinatorial construction needs unit machines");
    const auto& inst = grouped.rounded;
    long long delta = mg.delay;

    RoundedSolution out;
    out.variant = LpVariant::JobMachineDelays;
    out.alpha = Rat(1);
    for (const auto& job : inst.jobs) {
        out.exec_group[job.id] = 0;
        out.copies.insert({job.id, 0});
    }
    for (int v : inst.dag.topological_order()) {
        auto preds = inst.dag.predecessors_of(v);
        long long rho = delta + inst.job(v).in_delay;
        if (preds.empty()) {
            out.completion[v] = Rat(0);
            continue;
        }
        // Predecessors ordered by non-increasing completion, ids break ties.
        std::sort(preds.begin(), preds.end(), [&](int a, int b) {
            if (out.completion.at(a) != out.completion.at(b))
                return out.completion.at(b) < out.completion.at(a);
            return a < b;
        });
        Rat c = out.completion.at(preds[0]) + Rat(1);  // precedence floor
        long long limit = std::min<long long>(rho, static_cast<long long>(preds.size()));
        for (long long i = 1; i <= limit; ++i) {
            Rat cand = out.completion.at(preds[i - 1]) + Rat(i);
            if (cand > c) c = cand;
        }
        out.completion[v] = c;
    }
    for (const auto& [u, v] : inst.dag.closure_pairs()) {
        long long rho = delta + inst.job(v).in_delay;
        if (out.completion.at(v) - out.completion.at(u) < Rat(rho)) {
            out.dups.insert({u, v, 0});
            out.copies.insert({u, 0});
        }
    }
    Rat load(static_cast<long long>(inst.n()), static_cast<long long>(mg.machines.size()));
    out.makespan_bound = load;
    for (const auto& [v, c] : out.completion)
        if (c > out.makespan_bound) out.makespan_bound = c;
    return out;
}

RoundedSolution solution_from_schedule(const Schedule& schedule, const GroupedInstance& grouped,
                                       LpVariant variant) {
    if (variant == LpVariant::GeneralRelated)
        throw std::invalid_argument(
            "schedule-induced points are built for the unit-machine variants only");
    const Instance& inst = grouped.rounded;
    RoundedSolution out;
    out.variant = variant;
    out.alpha = Rat(1);
    out.makespan_bound = makespan(schedule, inst);
    for (const auto& job : inst.jobs) {
        const auto& ps = schedule.placements.at(job.id);
        const Placement* first = nullptr;
        Rat best;
        for (const auto& p : ps) {
            Rat done = p.start + Rat(1, inst.machine(p.machine).speed);
            if (!first || done < best || (done == best && p.machine < first->machine)) {
                first = &p;
                best = done;
            }
        }
        out.completion[job.id] = best;
        out.exec_group[job.id] = grouped.group_of_machine(first->machine);
        out.copies.insert({job.id, out.exec_group[job.id]});
    }
    for (const auto& [u, v] : inst.dag.closure_pairs()) {
        int k = out.exec_group.at(v);
        long long d = grouped.machine_groups[k].delay;
        if (variant == LpVariant::JobMachineDelays)
            d += grouped.job_groups[grouped.group_of_job(v)].delay;
        if (out.completion.at(v) - out.completion.at(u) < Rat(d)) {
            out.dups.insert({u, v, k});
            out.copies.insert({u, k});
        }
    }
    return out;
}

}  // namespace ds
