#pragma once

#include <string>

#include "delaysched/grouping.hpp"
#include "delaysched/instance.hpp"
#include "delaysched/relaxation.hpp"
#include "delaysched/schedule.hpp"
#include "delaysched/validate.hpp"

namespace ds {

// JSON schema "v1". Rational times serialize as "p/q" strings to stay exact.
//
// Instance: {version, model: "additive"|"job_machine"|"umps",
//            jobs: [{id, in_delay, out_delay}],
//            machines: [{id, size, speed, in_delay, out_delay}],
//            edges: [[u, v]],
//            table?: {job: {machine: delay}},
//            partition?: {machine: [jobs]}}
// Schedule: {version, no_duplication, placements: [{job, machine, start}]}

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

std::string schedule_to_json(const Schedule& sched);
Schedule schedule_from_json(const std::string& text);

std::string report_to_json(const ValidationReport& report);

// Pipeline checkpoints (--emit-stages): group tables and the rounded solution.
std::string grouped_to_json(const GroupedInstance& grouped);
std::string rounded_to_json(const RoundedSolution& rounded);

}  // namespace ds
