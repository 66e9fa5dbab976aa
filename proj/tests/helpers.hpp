#pragma once

// Small builders shared by the test binaries.

#include <vector>

#include "delaysched/instance.hpp"
#include "delaysched/schedule.hpp"

namespace ds::testing {

// n unit jobs with zero delays, ids 0..n-1.
inline std::vector<Job> unit_jobs(int n) {
    std::vector<Job> jobs;
    for (int i = 0; i < n; ++i) jobs.push_back({i, 0, 0});
    return jobs;
}

// m unit machines with zero delays, ids 0..m-1.
inline std::vector<Machine> unit_machines(int m) {
    std::vector<Machine> ms;
    for (int i = 0; i < m; ++i) ms.push_back({i, 1, 1, 0, 0});
    return ms;
}

inline Instance chain_instance(int n, int m = 1) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return make_instance(unit_jobs(n), unit_machines(m), edges);
}

}  // namespace ds::testing
