#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delaysched/validate.hpp"
#include "helpers.hpp"

using namespace ds;
using namespace ds::testing;

TEST_CASE("topological order is deterministic with id tie-break") {
    SUBCASE("empty dag on 3 jobs -> ascending ids") {
        auto inst = make_instance(unit_jobs(3), unit_machines(1), {});
        CHECK(inst.dag.topological_order() == std::vector<int>{0, 1, 2});
    }
    SUBCASE("chain") {
        auto inst = chain_instance(3);
        CHECK(inst.dag.topological_order() == std::vector<int>{0, 1, 2});
    }
    SUBCASE("diamond: source first, sink last") {
        auto inst = make_instance(unit_jobs(4), unit_machines(1),
                                  {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
        auto order = inst.dag.topological_order();
        CHECK(order.front() == 0);
        CHECK(order.back() == 3);
    }
    SUBCASE("cycle reports a witness") {
        CHECK_THROWS_AS(make_instance(unit_jobs(3), unit_machines(1), {{0, 1}, {1, 2}, {2, 0}}),
                        cycle_error);
    }
}

TEST_CASE("critical path") {
    SUBCASE("antichain of 4 -> 1") {
        auto inst = make_instance(unit_jobs(4), unit_machines(1), {});
        CHECK(critical_path(inst, {0, 1, 2, 3}) == 1);
    }
    SUBCASE("path of 5 -> 5") {
        auto inst = chain_instance(5);
        CHECK(critical_path(inst, {0, 1, 2, 3, 4}) == 5);
    }
    SUBCASE("random dag n=7 equals exhaustive chain enumeration") {
        // Fixed seven-node dag; enumerate every subset, test chain-ness.
        std::vector<std::pair<int, int>> edges = {{0, 2}, {0, 3}, {1, 3}, {2, 4},
                                                  {3, 4}, {3, 5}, {4, 6}, {5, 6}};
        auto inst = make_instance(unit_jobs(7), unit_machines(1), edges);
        std::size_t best = 0;
        for (unsigned mask = 1; mask < (1u << 7); ++mask) {
            std::vector<int> sel;
            for (int i = 0; i < 7; ++i)
                if (mask & (1u << i)) sel.push_back(i);
            bool chain = true;
            for (std::size_t a = 0; a < sel.size() && chain; ++a)
                for (std::size_t b = a + 1; b < sel.size() && chain; ++b)
                    if (!inst.dag.precedes(sel[a], sel[b]) && !inst.dag.precedes(sel[b], sel[a]))
                        chain = false;
            if (chain) best = std::max(best, sel.size());
        }
        CHECK(critical_path(inst, {0, 1, 2, 3, 4, 5, 6}) == best);
    }
}

TEST_CASE("makespan") {
    SUBCASE("one placement at 3 on speed-2 machine -> 3.5") {
        auto inst = make_instance(unit_jobs(1), {{0, 1, 2, 0, 0}}, {});
        Schedule s;
        s.add(0, 0, Rat(3));
        CHECK(makespan(s, inst) == Rat(7, 2));
    }
    SUBCASE("two placements at 0 and 5, unit speed -> 6") {
        auto inst = make_instance(unit_jobs(2), unit_machines(1), {});
        Schedule s;
        s.add(0, 0, Rat(0));
        s.add(1, 0, Rat(5));
        CHECK(makespan(s, inst) == Rat(6));
    }
    SUBCASE("empty schedule errors") {
        auto inst = make_instance(unit_jobs(1), unit_machines(1), {});
        CHECK_THROWS_AS(makespan(Schedule{}, inst), structural_error);
    }
}

TEST_CASE("validator basics") {
    SUBCASE("single free job is fine, makespan 1") {
        auto inst = make_instance(unit_jobs(1), unit_machines(1), {});
        Schedule s;
        s.add(0, 0, Rat(0));
        auto rep = validate_schedule(inst, s);
        CHECK(rep.ok);
        CHECK(rep.makespan == Rat(1));
    }
    SUBCASE("availability inequality is enforced") {
        // u=0 on machine 1 completing at 3; v=1 starts on machine 0 at 4.
        // Needed lag out_1 + out_u + in_0 + in_v = 2, so completion must be <= 2.
        std::vector<Job> jobs = {{0, 0, 1}, {1, 1, 0}};
        std::vector<Machine> machines = {{0, 1, 1, 0, 0}, {1, 1, 1, 0, 0}};
        auto inst = make_instance(jobs, machines, {{0, 1}});
        Schedule s;
        s.add(0, 1, Rat(2));  // completes at 3
        s.add(1, 0, Rat(4));
        auto rep = validate_schedule(inst, s);
        CHECK(!rep.ok);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].kind == ViolationKind::Availability);
        // Shifting v to start 5 (completion 3 <= 5 - 2) fixes it.
        Schedule s2;
        s2.add(0, 1, Rat(2));
        s2.add(1, 0, Rat(5));
        CHECK(validate_schedule(inst, s2).ok);
    }
    SUBCASE("co-located back-to-back needs no delay") {
        auto inst = chain_instance(2);
        Schedule s;
        s.add(0, 0, Rat(0));
        s.add(1, 0, Rat(1));
        CHECK(validate_schedule(inst, s).ok);
    }
    SUBCASE("capacity respects half-open intervals") {
        auto inst = make_instance(unit_jobs(3), {{0, 2, 1, 0, 0}}, {});
        Schedule s;
        s.add(0, 0, Rat(0));
        s.add(1, 0, Rat(0));
        s.add(2, 0, Rat(1));  // starts exactly when the first two finish
        CHECK(validate_schedule(inst, s).ok);
        Schedule bad = s;
        bad.placements[2][0].start = Rat(1, 2);
        auto rep = validate_schedule(inst, bad);
        CHECK(!rep.ok);
        CHECK(rep.violations[0].kind == ViolationKind::Capacity);
    }
    SUBCASE("duplication flag") {
        auto inst = make_instance(unit_jobs(1), unit_machines(2), {});
        Schedule s;
        s.no_duplication = true;
        s.add(0, 0, Rat(0));
        s.add(0, 1, Rat(0));
        auto rep = validate_schedule(inst, s);
        CHECK(!rep.ok);
        CHECK(rep.violations[0].kind == ViolationKind::Duplication);
    }
    SUBCASE("missing job is a precedence violation") {
        auto inst = make_instance(unit_jobs(2), unit_machines(1), {});
        Schedule s;
        s.add(0, 0, Rat(0));
        auto rep = validate_schedule(inst, s);
        CHECK(!rep.ok);
        CHECK(rep.violations[0].kind == ViolationKind::Precedence);
    }
    SUBCASE("unknown ids are structural errors, not violations") {
        auto inst = make_instance(unit_jobs(1), unit_machines(1), {});
        Schedule s;
        s.add(7, 0, Rat(0));
        CHECK_THROWS_AS(validate_schedule(inst, s), structural_error);
        Schedule s2;
        s2.add(0, 9, Rat(0));
        CHECK_THROWS_AS(validate_schedule(inst, s2), structural_error);
    }
    SUBCASE("transitive predecessors are checked, not just direct ones") {
        // 0 -> 1 -> 2 with a delayed machine hop: 1 is fine via co-location,
        // but 0's result never reaches 2's machine in time.
        std::vector<Job> jobs = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
        std::vector<Machine> machines = {{0, 1, 1, 0, 0}, {1, 1, 1, 5, 0}};
        auto inst = make_instance(jobs, machines, {{0, 1}, {1, 2}});
        Schedule s;
        s.add(0, 0, Rat(0));
        s.add(1, 0, Rat(1));
        s.add(2, 1, Rat(7));  // 1 completes at 2, needs in-delay 5 -> ok (2+5<=7)
        CHECK(validate_schedule(inst, s).ok);
        Schedule late = s;
        late.placements[0][0].start = Rat(1);   // 0 completes at 2 too
        late.placements[1][0].start = Rat(2);   // 1 completes at 3, 3+5 > 7
        CHECK(!validate_schedule(inst, late).ok);
    }
}

TEST_CASE("validator on the job-machine model") {
    std::vector<Job> jobs = {{0, 0, 0}, {1, 0, 0}};
    std::vector<Machine> machines = {{0, 1, 1, 0, 0}, {1, 1, 1, 0, 0}};
    auto inst = make_instance(jobs, machines, {{0, 1}}, DelayModel::JobMachine);
    inst.table[0][0] = 0;
    inst.table[0][1] = 0;
    inst.table[1][0] = 3;
    inst.table[1][1] = 0;
    inst.check_consistent();
    Schedule s;
    s.add(0, 1, Rat(0));
    s.add(1, 0, Rat(2));  // needs completion <= 2 - delay(1, 0) = -1
    CHECK(!validate_schedule(inst, s).ok);
    Schedule s2;
    s2.add(0, 1, Rat(0));
    s2.add(1, 0, Rat(4));  // 1 <= 4 - 3
    CHECK(validate_schedule(inst, s2).ok);
    Schedule s3;  // co-located: no table delay
    s3.add(0, 0, Rat(0));
    s3.add(1, 0, Rat(1));
    CHECK(validate_schedule(inst, s3).ok);
}

TEST_CASE("validator on the UMPS model") {
    auto inst = make_instance(unit_jobs(2), unit_machines(2), {{0, 1}}, DelayModel::Umps);
    inst.assigned_machine = {{0, 0}, {1, 1}};
    inst.check_consistent();
    Schedule s;
    s.add(0, 0, Rat(0));
    s.add(1, 1, Rat(1));  // strictly after 0
    CHECK(validate_schedule(inst, s).ok);
    Schedule wrong_machine;
    wrong_machine.add(0, 0, Rat(0));
    wrong_machine.add(1, 0, Rat(1));
    CHECK(!validate_schedule(inst, wrong_machine).ok);
    Schedule same_slot;
    same_slot.add(0, 0, Rat(0));
    same_slot.add(1, 1, Rat(0));  // not strictly after
    CHECK(!validate_schedule(inst, same_slot).ok);
}

TEST_CASE("validator monotonicity: constant shift preserves validity") {
    std::vector<Job> jobs = {{0, 1, 0}, {1, 0, 2}, {2, 1, 1}};
    std::vector<Machine> machines = {{0, 1, 2, 1, 0}, {1, 2, 1, 0, 3}};
    auto inst = make_instance(jobs, machines, {{0, 1}, {0, 2}});
    Schedule s;
    s.add(0, 0, Rat(0));
    s.add(1, 0, Rat(1, 2));
    s.add(2, 1, Rat(13, 2));
    REQUIRE(validate_schedule(inst, s).ok);
    for (int delta : {1, 3, 10}) {
        CHECK(validate_schedule(inst, s.shifted(Rat(delta))).ok);
    }
}

TEST_CASE("dilation: doubling times stays valid when all delays double") {
    std::vector<Job> jobs = {{0, 1, 1}, {1, 0, 0}, {2, 1, 0}};
    std::vector<Machine> machines = {{0, 1, 1, 1, 2}, {1, 1, 1, 2, 0}};
    auto inst = make_instance(jobs, machines, {{0, 1}, {1, 2}});
    Schedule s;
    s.add(0, 0, Rat(0));
    s.add(1, 1, Rat(6));
    s.add(2, 1, Rat(7));
    REQUIRE(validate_schedule(inst, s).ok);
    auto doubled_inst = inst;
    for (auto& j : doubled_inst.jobs) {
        j.in_delay *= 2;
        j.out_delay *= 2;
    }
    for (auto& m : doubled_inst.machines) {
        m.in_delay *= 2;
        m.out_delay *= 2;
    }
    Schedule doubled;
    for (const auto& [job, ps] : s.placements)
        for (const auto& p : ps) doubled.add(job, p.machine, p.start * Rat(2));
    CHECK(validate_schedule(doubled_inst, doubled).ok);
    CHECK(makespan(doubled, doubled_inst) ==
          makespan(s, inst) * Rat(2) - Rat(1));  // unit job: 2t+1 vs 2(t+1)-1
}
