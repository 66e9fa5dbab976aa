#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delaysched/oracle.hpp"
#include "delaysched/pipeline.hpp"
#include "delaysched/reduction.hpp"
#include "delaysched/validate.hpp"
#include "helpers.hpp"

using namespace ds;
using namespace ds::testing;

namespace {

GroupedInstance grouped_of(const Instance& inst) {
    return round_and_group(merge_out_into_in(inst));
}

}  // namespace

TEST_CASE("extract_phases windows") {
    SUBCASE("everything below one delta lands in the d=0 phase") {
        std::vector<Machine> machines = {{0, 1, 1, 4, 0}, {1, 1, 1, 4, 0}};
        auto inst = make_instance(unit_jobs(3), machines, {{0, 1}});
        auto g = round_and_group(inst);
        auto rounded = combinatorial_rounded_solution(g);
        auto phases = extract_phases(rounded, g);
        REQUIRE(phases.size() == 1);
        CHECK(phases[0].window_index == 0);
        CHECK(phases[0].first_jobs.size() == 3);
    }
    SUBCASE("a job lands in exactly the window that holds its completion") {
        std::vector<Machine> machines = {{0, 1, 1, 2, 0}};
        auto inst = make_instance(unit_jobs(4), machines, {});
        auto g = round_and_group(inst);
        REQUIRE(g.machine_groups[0].delay == 2);
        RoundedSolution rounded;
        rounded.variant = LpVariant::JobMachineDelays;
        rounded.alpha = Rat(2);
        for (int v = 0; v < 4; ++v) {
            rounded.exec_group[v] = 0;
            rounded.copies.insert({v, 0});
            rounded.completion[v] = Rat(0);
        }
        rounded.completion[0] = Rat(5);  // delta = 2, window d = 2 covers [4, 6)
        rounded.makespan_bound = Rat(6);
        auto phases = extract_phases(rounded, g);
        REQUIRE(phases.size() == 2);
        bool found = false;
        for (const auto& ph : phases)
            if (std::count(ph.first_jobs.begin(), ph.first_jobs.end(), 0)) {
                CHECK(ph.window_index == 2);
                found = true;
            }
        CHECK(found);
    }
    SUBCASE("every duplicated predecessor has a z witness in its phase") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            GenParams p;
            p.seed = seed;
            p.n = 6;
            p.m = 2;
            p.edge_prob = 0.45;
            p.delay_max = 4;
            auto inst = generate(p);
            auto g = grouped_of(inst);
            auto lp = build_lp(g, 1.0, LpVariant::JobMachineDelays);
            auto sol = solve(lp.problem);
            REQUIRE(sol.status == LpStatus::Optimal);
            auto rounded = round_solution(sol, lp, g);
            CAPTURE(seed);
            std::map<int, int> appearances;
            for (const auto& phase : extract_phases(rounded, g)) {
                for (int u : phase.dup_jobs) {
                    bool witnessed = false;
                    for (int v : phase.first_jobs)
                        witnessed |= rounded.has_dup(u, v, phase.machine_group);
                    CHECK(witnessed);
                }
                for (int v : phase.first_jobs) ++appearances[v];
            }
            // the first placement of every job sits in exactly one phase
            for (const auto& job : g.rounded.jobs) CHECK(appearances[job.id] == 1);
        }
    }
}

TEST_CASE("build_schedule basics") {
    SUBCASE("no jobs -> empty schedule") {
        auto inst = make_instance(unit_jobs(1), unit_machines(1), {});
        auto g = round_and_group(inst);
        RoundedSolution empty;
        auto s = build_schedule(empty, g);
        CHECK(s.empty());
    }
    SUBCASE("single phase: append offset plus the fragment's own delay pad") {
        std::vector<Machine> machines = {{0, 1, 1, 2, 0}};
        auto inst = make_instance(unit_jobs(2), machines, {});
        auto g = round_and_group(inst);
        auto rounded = combinatorial_rounded_solution(g);
        auto s = build_schedule(rounded, g);
        Rat first = s.placements.begin()->second.front().start;
        for (const auto& [job, ps] : s.placements)
            for (const auto& p : ps)
                if (p.start < first) first = p.start;
        CHECK(first == Rat(4));  // theta(0) + delta(2) + fragment pad(2)
        CHECK(validate_schedule(g.rounded, s).ok);
    }
}

TEST_CASE("pipeline on a zero-delay single machine behaves like list scheduling") {
    auto inst = chain_instance(5, 1);
    auto [sched, rep] = run_pipeline(inst);
    CHECK(rep.validated);
    CHECK(!rep.fell_back_to_baseline);
    CHECK(rep.final_makespan == Rat(5));  // chain bound, no delays anywhere
}

TEST_CASE("combinatorial path skips the LP") {
    std::vector<Machine> machines = {{0, 1, 1, 2, 0}, {1, 1, 1, 2, 0}};
    auto inst = make_instance(unit_jobs(5), machines, {{0, 2}, {1, 2}});
    PipelineOptions opts;
    opts.auto_combinatorial = true;
    auto [sched, rep] = run_pipeline(inst, opts);
    CHECK(rep.used_combinatorial);
    CHECK(rep.lp_pivots == 0);
    CHECK(rep.validated);
    CHECK(rep.alpha == Rat(1));
}

TEST_CASE("pipeline end-to-end on random instances") {
    int done = 0, lp_done = 0;
    for (std::uint64_t seed = 300; seed < 340; ++seed) {
        GenParams p;
        p.seed = seed;
        p.n = 4 + static_cast<int>(seed % 9);
        p.m = 1 + static_cast<int>(seed % 3);
        p.edge_prob = 0.3;
        p.delay_max = 4;
        if (seed % 4 == 0) {
            p.speed_max = 2;
            p.size_max = 2;
        }
        auto inst = generate(p);
        PipelineOptions opts;
        opts.auto_combinatorial = seed % 2 == 0;
        auto [sched, rep] = run_pipeline(inst, opts);
        CAPTURE(seed);
        CHECK(rep.validated);
        CHECK(validate_schedule(inst, sched).ok);
        if (!rep.fell_back_to_baseline) {
            CHECK(rep.core_within_bound);
            ++done;
        }
        lp_done += !rep.used_combinatorial;
    }
    CHECK(done >= 30);
    CHECK(lp_done >= 10);
}

TEST_CASE("pipeline rejects non-additive models") {
    auto umps = make_instance(unit_jobs(1), unit_machines(1), {}, DelayModel::Umps);
    umps.assigned_machine = {{0, 0}};
    CHECK_THROWS_AS(run_pipeline(umps), structural_error);
}

TEST_CASE("pipeline artifacts carry the stage checkpoints") {
    GenParams p;
    p.seed = 77;
    p.n = 5;
    p.m = 2;
    p.edge_prob = 0.4;
    p.delay_max = 3;
    auto inst = generate(p);
    PipelineArtifacts artifacts;
    auto [sched, rep] = run_pipeline(inst, {}, &artifacts);
    CHECK(artifacts.grouped.has_value());
    CHECK(artifacts.rounded.has_value());
    CHECK(artifacts.core_schedule.has_value());
    CHECK(report_to_json(rep).find("core_makespan") != std::string::npos);
}
