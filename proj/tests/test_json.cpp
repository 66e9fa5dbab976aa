#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delaysched/json_io.hpp"
#include "delaysched/oracle.hpp"
#include "helpers.hpp"

using namespace ds;
using namespace ds::testing;

TEST_CASE("instance json round trip is byte-stable across all models") {
    for (auto model : {DelayModel::Additive, DelayModel::JobMachine, DelayModel::Umps}) {
        GenParams p;
        p.seed = 42;
        p.n = 5;
        p.m = 2;
        p.edge_prob = 0.4;
        p.delay_max = 3;
        p.speed_max = model == DelayModel::Additive ? 2 : 1;
        p.size_max = model == DelayModel::Additive ? 3 : 1;
        p.model = model;
        auto inst = generate(p);
        auto text = instance_to_json(inst);
        auto again = instance_to_json(instance_from_json(text));
        CHECK(text == again);
    }
}

TEST_CASE("schedule json round trip keeps rational times exact") {
    auto inst = make_instance(unit_jobs(2), {{0, 1, 3, 0, 0}}, {});
    Schedule s;
    s.add(0, 0, Rat(1, 3));
    s.add(1, 0, Rat(7, 3));
    s.no_duplication = true;
    auto text = schedule_to_json(s);
    CHECK(text.find("\"1/3\"") != std::string::npos);
    auto back = schedule_from_json(text);
    CHECK(back.no_duplication);
    CHECK(back.placements.at(0)[0].start == Rat(1, 3));
    CHECK(schedule_to_json(back) == text);
}

TEST_CASE("malformed documents are structural errors") {
    CHECK_THROWS_AS(instance_from_json(R"({"version":"v0","model":"additive","jobs":[],)"
                                       R"("machines":[],"edges":[]})"),
                    structural_error);
    CHECK_THROWS_AS(instance_from_json(R"({"version":"v1","model":"quantum","jobs":[],)"
                                       R"("machines":[],"edges":[]})"),
                    structural_error);
    // UMPS partition must cover jobs exactly once.
    CHECK_THROWS_AS(instance_from_json(R"({"version":"v1","model":"umps",
        "jobs":[{"id":0,"in_delay":0,"out_delay":0}],
        "machines":[{"id":0,"size":1,"speed":1,"in_delay":0,"out_delay":0},
                    {"id":1,"size":1,"speed":1,"in_delay":0,"out_delay":0}],
        "edges":[],"partition":{"0":[0],"1":[0]}})"),
                    structural_error);
}

TEST_CASE("validation report serializes violations") {
    auto inst = chain_instance(2);
    Schedule s;
    s.add(0, 0, Rat(0));
    s.add(1, 0, Rat(0));
    auto rep = validate_schedule(inst, s);
    auto text = report_to_json(rep);
    CHECK(text.find("\"ok\": false") != std::string::npos);
    CHECK(text.find("availability") != std::string::npos);
}
