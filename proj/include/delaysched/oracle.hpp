#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "delaysched/instance.hpp"
#include "delaysched/schedule.hpp"

namespace ds {

/// Deterministic random-instance parameters. The seed fully determines the
/// output (portable generator, no library distributions).
struct GenParams {
    std::uint64_t seed{0};
    int n{4};
    int m{2};
    double edge_prob{0.3};
    long long delay_min{0};
    long long delay_max{3};
    long long speed_max{1};
    long long size_max{1};
    DelayModel model{DelayModel::Additive};
};

Instance generate(const GenParams& params);

struct OracleResult {
    Rat makespan;
    Schedule witness;
};

struct OracleCaps {
    int max_jobs{10};
    int max_machines{3};
    long long max_horizon{24};
    long long max_grid{12};          // lcm of speeds (times grid_mult)
    std::uint64_t node_budget{80'000'000};
    int grid_mult{1};                // finer grids for quantization spot checks
};

/// Exact minimum makespan over slot-quantized schedules within `horizon`,
/// by exhaustive chronological search with branch-and-bound. Returns nullopt
/// when no schedule completes within the horizon. The witness is re-checked
/// with validate_schedule before being returned.
std::optional<OracleResult> brute_force_opt(const Instance& instance, long long horizon,
                                            bool allow_dup, const OracleCaps& caps = {});

/// List-schedules every job on the machine with the largest size*speed.
/// Always valid: a single machine needs no communication.
Schedule baseline_single_machine(const Instance& instance);

/// Visits every complete no-duplication schedule on the integer-slot grid
/// within `horizon` (unit speeds only) and reports whether it is feasible.
/// Feasibility here is decided from first principles, independently of
/// validate_schedule, so the two can be cross-checked against each other.
void enumerate_schedules(const Instance& instance, long long horizon,
                         const std::function<void(const Schedule&, bool feasible)>& visit);

/// Deterministic 64-bit generator used by `generate` (splitmix64).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform-ish integer in [lo, hi]; modulo bias is irrelevant here.
    long long range(long long lo, long long hi) {
        if (hi < lo) throw std::invalid_argument("empty range");
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool coin(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

private:
    std::uint64_t state_;
};

}  // namespace ds
