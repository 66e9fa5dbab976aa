#include "delaysched/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "delaysched/nodup.hpp"
#include "delaysched/oracle.hpp"
#include "delaysched/reduction.hpp"
#include "delaysched/udps.hpp"

namespace ds {

std::vector<Phase> extract_phases(const RoundedSolution& rounded,
                                  const GroupedInstance& grouped) {
    std::vector<Phase> phases;
    if (rounded.completion.empty()) return phases;
    const auto& dag = grouped.rounded.dag;
    int K = grouped.machine_group_count();
    int L = grouped.job_group_count();
    // Completions can exceed C* by solver roundoff; scan far enough anyway.
    Rat last = rounded.makespan_bound;
    for (const auto& [v, c] : rounded.completion)
        if (c > last) last = c;
    long long horizon = last.floor();

    for (long long t = 0; t <= horizon; ++t) {
        for (int k = 0; k < K; ++k) {
            for (int l = L - 1; l >= 0; --l) {
                long long delta = grouped.machine_groups[k].delay + grouped.job_groups[l].delay;
                long long window = std::max(1LL, delta);
                if (t % window != 0) continue;
                Phase phase;
                phase.machine_group = k;
                phase.job_group = l;
                phase.window_index = t / window;
                phase.delay = delta;
                Rat lo(t), hi(t + window);
                for (int v : grouped.job_groups[l].jobs) {
                    if (rounded.exec_group.at(v) != k) continue;
                    Rat c = rounded.completion.at(v);
                    if (lo <= c && c < hi) phase.first_jobs.push_back(v);
                }
                if (phase.first_jobs.empty()) continue;
                std::set<int> dup;
                for (int v : phase.first_jobs)
                    for (int u : dag.predecessors_of(v)) {
                        Rat c = rounded.completion.at(u);
                        if (lo <= c && c < hi) dup.insert(u);
                    }
                for (int v : phase.first_jobs) dup.erase(v);
                phase.dup_jobs.assign(dup.begin(), dup.end());
                phases.push_back(std::move(phase));
            }
        }
    }
    return phases;
}

Schedule build_schedule(const RoundedSolution& rounded, const GroupedInstance& grouped,
                        bool nodup_fragments, std::vector<Phase>* phases_out) {
    auto phases = extract_phases(rounded, grouped);
    Schedule out;
    Rat theta(0);
    for (const auto& phase : phases) {
        UdpsInput input;
        input.dag = &grouped.rounded.dag;
        input.jobs = phase.first_jobs;
        input.jobs.insert(input.jobs.end(), phase.dup_jobs.begin(), phase.dup_jobs.end());
        std::sort(input.jobs.begin(), input.jobs.end());
        const auto& mg = grouped.machine_groups[phase.machine_group];
        input.group = {mg.machines, mg.size, mg.speed};
        input.delay = phase.delay;
        input.alpha = rounded.alpha;
        UdpsResult frag;
        try {
            frag = nodup_fragments ? phase_nodup_fragment(input) : udps_solve(input);
        } catch (const std::invalid_argument& e) {
            throw structural_error("phase (k=" + std::to_string(phase.machine_group) +
                                   ", l=" + std::to_string(phase.job_group) +
                                   ", d=" + std::to_string(phase.window_index) +
                                   ") rejected by the fragment solver: " + e.what() +
                                   " (the rounded solution is infeasible)");
        }
        Rat offset = theta + Rat(phase.delay);
        for (const auto& [job, ps] : frag.schedule.placements)
            for (const auto& p : ps) out.add(job, p.machine, offset + p.start);
        theta += Rat(2 * phase.delay) + frag.makespan;
    }
    out.canonicalize();
    if (phases_out) *phases_out = std::move(phases);
    return out;
}

namespace {

LpVariant pick_variant(const GroupedInstance& grouped) {
    for (const auto& mg : grouped.machine_groups)
        if (mg.size != 1 || mg.speed != 1) return LpVariant::GeneralRelated;
    for (const auto& jg : grouped.job_groups)
        if (jg.delay != 0) return LpVariant::JobMachineDelays;
    return LpVariant::MachineDelays;
}

Rat core_bound_value(const PipelineReport& r) {
    double dmax = static_cast<double>(r.delta_max);
    double logd = std::max(1.0, std::log2(std::max(2.0, dmax)));
    double kl = static_cast<double>(r.machine_groups) * r.job_groups;
    double val = 12.0 * r.alpha.to_double() * logd *
                 (kl * r.completion_bound.to_double() +
                  dmax * (r.machine_groups + r.job_groups));
    return Rat::from_double(val);
}

}  // namespace

std::pair<Schedule, PipelineReport> run_pipeline(const Instance& instance,
                                                 const PipelineOptions& options,
                                                 PipelineArtifacts* artifacts) {
    if (instance.model != DelayModel::Additive)
        throw structural_error("pipeline: only the additive delay model is supported");
    if (instance.jobs.empty()) throw structural_error("pipeline: no jobs");
    instance.check_consistent();

    PipelineReport report;
    Instance merged = merge_out_into_in(instance);
    GroupedInstance grouped = round_and_group(merged);
    if (artifacts) artifacts->grouped = grouped;
    report.machine_groups = grouped.machine_group_count();
    report.job_groups = grouped.job_group_count();
    report.delta_max = grouped.rounded.max_total_delay();

    bool comb_legal = grouped.machine_group_count() == 1 &&
                      grouped.machine_groups[0].size == 1 && grouped.machine_groups[0].speed == 1;
    if (options.force_combinatorial && !comb_legal)
        throw structural_error("pipeline: combinatorial path needs one unit machine group");
    bool comb = options.force_combinatorial || (options.auto_combinatorial && comb_legal);

    RoundedSolution rounded;
    if (comb) {
        rounded = combinatorial_rounded_solution(grouped);
        report.used_combinatorial = true;
        report.variant = rounded.variant;
    } else {
        LpVariant variant = options.variant.value_or(pick_variant(grouped));
        auto lp = build_lp(grouped, options.alpha, variant);
        auto sol = solve(lp.problem);
        if (sol.status != LpStatus::Optimal)
            throw structural_error("pipeline: relaxation not optimal (status " +
                                   std::to_string(static_cast<int>(sol.status)) + ")");
        report.lp_objective = sol.objective;
        report.lp_pivots = sol.pivots;
        report.variant = variant;
        rounded = round_solution(sol, lp, grouped);
    }
    report.alpha = rounded.alpha;
    report.completion_bound = rounded.makespan_bound;
    if (artifacts) artifacts->rounded = rounded;

    std::vector<Phase> phases;
    Schedule core = build_schedule(rounded, grouped, options.nodup, &phases);
    report.phase_count = phases.size();
    if (options.nodup) {
        auto pruned = prune_duplicates(grouped.rounded, core);
        report.residual_duplicates = pruned.residual_duplicates;
        core = std::move(pruned.schedule);
    }
    if (artifacts) artifacts->core_schedule = core;
    report.core_makespan = core.empty() ? Rat(0) : makespan(core, grouped.rounded);
    report.core_bound = core_bound_value(report);
    report.core_within_bound = report.core_makespan <= report.core_bound;

    // Back to the original model. With zero job delays the exact per-machine
    // shift applies (padded first so no start goes negative); otherwise the
    // phase expansion pays its polylog factor.
    bool zero_job_delays = true;
    for (const auto& j : instance.jobs)
        zero_job_delays &= j.in_delay == 0 && j.out_delay == 0;
    long long max_out = 0;
    for (const auto& m : instance.machines) max_out = std::max(max_out, m.out_delay);

    Schedule final_schedule;
    if (max_out == 0 && zero_job_delays) {
        final_schedule = core;
        report.expand_pad_level = -1;
    } else if (zero_job_delays) {
        final_schedule = shift_schedule_machine_delays(instance, core.shifted(Rat(max_out)),
                                                       ShiftDirection::Backward);
        report.expand_pad_level = -1;
    } else {
        auto expanded = expand_in_to_inout(instance, core);
        final_schedule = std::move(expanded.schedule);
        report.expand_pad_level = expanded.pad_level;
        if (options.nodup) {
            auto pruned = prune_duplicates(instance, final_schedule);
            report.residual_duplicates = pruned.residual_duplicates;
            final_schedule = std::move(pruned.schedule);
        }
    }
    if (options.nodup && report.residual_duplicates == 0)
        final_schedule.no_duplication = true;

    report.validated = Validator(instance).accepts(final_schedule);
    if (!report.validated) {
        // The delay cap can make the rounded instance strictly easier than
        // the real one; the single-machine baseline is always valid.
        final_schedule = baseline_single_machine(instance);
        report.fell_back_to_baseline = true;
        report.validated = Validator(instance).accepts(final_schedule);
    }
    report.final_makespan = makespan(final_schedule, instance);
    return {std::move(final_schedule), report};
}

std::string report_to_json(const PipelineReport& r) {
    nlohmann::json doc;
    doc["variant"] = to_string(r.variant);
    doc["used_combinatorial"] = r.used_combinatorial;
    doc["lp_objective"] = r.lp_objective;
    doc["lp_pivots"] = r.lp_pivots;
    doc["machine_groups"] = r.machine_groups;
    doc["job_groups"] = r.job_groups;
    doc["alpha"] = r.alpha.str();
    doc["completion_bound"] = r.completion_bound.str();
    doc["phase_count"] = r.phase_count;
    doc["core_makespan"] = r.core_makespan.str();
    doc["core_bound"] = r.core_bound.str();
    doc["core_within_bound"] = r.core_within_bound;
    doc["final_makespan"] = r.final_makespan.str();
    doc["expand_pad_level"] = r.expand_pad_level;
    doc["residual_duplicates"] = r.residual_duplicates;
    doc["fell_back_to_baseline"] = r.fell_back_to_baseline;
    doc["validated"] = r.validated;
    doc["delta_max"] = r.delta_max;
    return doc.dump(2) + "\n";
}

}  // namespace ds
