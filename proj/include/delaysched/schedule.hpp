#pragma once

#include <map>
#include <vector>

#include "delaysched/rational.hpp"

namespace ds {

struct Placement {
    int machine{0};
    Rat start;
    friend bool operator==(const Placement&, const Placement&) = default;
    friend bool operator<(const Placement& a, const Placement& b) {
        return a.start != b.start ? a.start < b.start : a.machine < b.machine;
    }
};

/// A schedule assigns each job a nonempty set of (machine, start time) pairs.
/// Duplication means several placements for one job; `no_duplication` asserts
/// the single-placement invariant and is enforced by the validator.
struct Schedule {
    std::map<int, std::vector<Placement>> placements;  // job id -> placements
    bool no_duplication{false};

    void add(int job, int machine, Rat start) {
        placements[job].push_back({machine, start});
    }
    bool empty() const { return placements.empty(); }

    /// Normalize: sort each job's placements, drop exact duplicates.
    void canonicalize() {
        for (auto& [job, ps] : placements) {
            std::sort(ps.begin(), ps.end());
            ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        }
    }

    /// Shift every placement by a constant.
    Schedule shifted(const Rat& delta) const {
        Schedule out = *this;
        for (auto& [job, ps] : out.placements)
            for (auto& p : ps) p.start += delta;
        return out;
    }
};

}  // namespace ds
