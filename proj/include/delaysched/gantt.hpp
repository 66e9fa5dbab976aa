#pragma once

#include <string>

#include "delaysched/instance.hpp"
#include "delaysched/schedule.hpp"

namespace ds {

/// Deterministic SVG timeline: one row per machine, one box per placement,
/// duplicated copies hatched. No timestamps or randomness embedded, so equal
/// schedules produce byte-equal output.
std::string gantt_svg(const Instance& instance, const Schedule& schedule);

/// Plain-text companion: per machine, the placements in start order.
std::string gantt_ascii(const Instance& instance, const Schedule& schedule);

}  // namespace ds
