#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delaysched/json_io.hpp"
#include "delaysched/oracle.hpp"
#include "delaysched/validate.hpp"
#include "helpers.hpp"

using namespace ds;
using namespace ds::testing;

TEST_CASE("generate is deterministic and honors degenerate edge probabilities") {
    GenParams p;
    p.seed = 7;
    p.n = 6;
    p.m = 2;
    p.edge_prob = 0.4;
    p.delay_max = 4;
    auto a = generate(p);
    auto b = generate(p);
    CHECK(instance_to_json(a) == instance_to_json(b));

    p.edge_prob = 0.0;
    CHECK(generate(p).dag.edges().empty());

    p.edge_prob = 1.0;
    auto dense = generate(p);  // layered order keeps it acyclic
    CHECK_NOTHROW(dense.dag.topological_order());

    p.n = 0;
    CHECK_THROWS_AS(generate(p), std::invalid_argument);
}

TEST_CASE("baseline single machine is always valid and Graham-bounded") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        GenParams p;
        p.seed = seed;
        p.n = 7;
        p.m = 3;
        p.edge_prob = 0.35;
        p.delay_max = 5;
        p.speed_max = 2;
        p.size_max = 2;
        auto inst = generate(p);
        auto sched = baseline_single_machine(inst);
        CAPTURE(seed);
        CHECK(validate_schedule(inst, sched).ok);
        const Machine* best = &inst.machines.front();
        for (const auto& m : inst.machines)
            if (m.size * m.speed > best->size * best->speed) best = &m;
        std::vector<int> all;
        for (const auto& j : inst.jobs) all.push_back(j.id);
        Rat bound = Rat(static_cast<long long>(inst.n()), best->size * best->speed) +
                    Rat(static_cast<long long>(critical_path(inst, all)), best->speed);
        CHECK(makespan(sched, inst) <= bound);
    }
}

TEST_CASE("oracle basics") {
    SUBCASE("one job, one machine -> 1") {
        auto inst = make_instance(unit_jobs(1), unit_machines(1), {});
        auto res = brute_force_opt(inst, 4, true);
        REQUIRE(res.has_value());
        CHECK(res->makespan == Rat(1));
    }
    SUBCASE("chain of 2 across machines with lag 3: staying local wins") {
        std::vector<Job> jobs = {{0, 0, 0}, {1, 0, 0}};
        std::vector<Machine> machines = {{0, 1, 1, 0, 1}, {1, 1, 1, 2, 0}};
        auto inst = make_instance(jobs, machines, {{0, 1}});
        auto res = brute_force_opt(inst, 8, false);
        REQUIRE(res.has_value());
        CHECK(res->makespan == Rat(2));
    }
    SUBCASE("infeasible within horizon -> nullopt") {
        auto inst = chain_instance(4);
        CHECK(!brute_force_opt(inst, 3, false).has_value());
        CHECK(brute_force_opt(inst, 4, false).has_value());
    }
    SUBCASE("caps rejected") {
        auto inst = chain_instance(12);
        CHECK_THROWS_AS(brute_force_opt(inst, 4, false), std::invalid_argument);
    }
}

TEST_CASE("duplication never hurts: OPT(dup) <= OPT(no-dup)") {
    for (std::uint64_t seed = 10; seed < 18; ++seed) {
        GenParams p;
        p.seed = seed;
        p.n = 5;
        p.m = 2;
        p.edge_prob = 0.4;
        p.delay_max = 3;
        auto inst = generate(p);
        auto dup = brute_force_opt(inst, 12, true);
        auto nodup = brute_force_opt(inst, 12, false);
        REQUIRE(dup.has_value());
        REQUIRE(nodup.has_value());
        CAPTURE(seed);
        CHECK(dup->makespan <= nodup->makespan);
        CHECK(dup->makespan <= makespan(baseline_single_machine(inst), inst));
    }
}

TEST_CASE("oracle monotonicity in the horizon") {
    GenParams p;
    p.seed = 3;
    p.n = 4;
    p.m = 2;
    p.edge_prob = 0.5;
    p.delay_max = 2;
    auto inst = generate(p);
    Rat prev;
    bool have_prev = false;
    for (long long h : {5, 8, 12}) {
        auto res = brute_force_opt(inst, h, true);
        REQUIRE(res.has_value());
        if (have_prev) CHECK(res->makespan <= prev);
        prev = res->makespan;
        have_prev = true;
    }
}

TEST_CASE("slot quantization: doubling the grid does not find better optima") {
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
        GenParams p;
        p.seed = seed;
        p.n = 4;
        p.m = 2;
        p.edge_prob = 0.4;
        p.delay_max = 2;
        p.speed_max = 2;
        auto inst = generate(p);
        auto coarse = brute_force_opt(inst, 8, true);
        OracleCaps fine_caps;
        fine_caps.grid_mult = 2;
        fine_caps.max_grid = 24;
        fine_caps.node_budget = 400'000'000;
        auto fine = brute_force_opt(inst, 8, true, fine_caps);
        REQUIRE(coarse.has_value());
        REQUIRE(fine.has_value());
        CAPTURE(seed);
        CHECK(coarse->makespan == fine->makespan);
    }
}

TEST_CASE("validator accepts exactly the enumerated feasible set") {
    for (std::uint64_t seed = 30; seed < 35; ++seed) {
        GenParams p;
        p.seed = seed;
        p.n = 3;
        p.m = 2;
        p.edge_prob = 0.5;
        p.delay_max = 2;
        auto inst = generate(p);
        Validator val(inst);
        long long feas = 0;
        enumerate_schedules(inst, 5, [&](const Schedule& s, bool feasible) {
            bool accepted = val.accepts(s);
            REQUIRE(accepted == feasible);
            feas += feasible;
        });
        CAPTURE(seed);
        CHECK(feas > 0);  // the space is never vacuously empty
    }
}
