#include "delaysched/reduction.hpp"

#include <algorithm>

#include "delaysched/validate.hpp"

namespace ds {

Instance merge_out_into_in(const Instance& instance) {
    if (instance.model != DelayModel::Additive)
        throw structural_error("merge_out_into_in requires the additive model");
    Instance out = instance;
    for (auto& mach : out.machines) {
        mach.in_delay += mach.out_delay;
        mach.out_delay = 0;
    }
    for (auto& job : out.jobs) {
        job.in_delay += job.out_delay;
        job.out_delay = 0;
    }
    return out;
}

Schedule shift_schedule_machine_delays(const Instance& original, const Schedule& schedule,
                                       ShiftDirection direction) {
    for (const auto& job : original.jobs)
        if (job.in_delay != 0 || job.out_delay != 0)
            throw structural_error("machine-delay shift requires zero job delays");
    Schedule out;
    out.no_duplication = schedule.no_duplication;
    for (const auto& [job, ps] : schedule.placements)
        for (const auto& p : ps) {
            Rat delta(original.machine(p.machine).out_delay);
            Rat start = direction == ShiftDirection::Forward ? p.start + delta : p.start - delta;
            if (start < Rat(0))
                throw structural_error("backward shift produced a negative start for job " +
                                       std::to_string(job));
            out.add(job, p.machine, start);
        }
    out.canonicalize();
    return out;
}

namespace {

struct PhaseId {
    long long window_start;  // in pre-shifted time
    PhaseKey key;
    // Layout order: earlier windows first; same start -> larger delta first;
    // residual ties lexicographic on the key for determinism.
    friend bool operator<(const PhaseId& a, const PhaseId& b) {
        if (a.window_start != b.window_start) return a.window_start < b.window_start;
        if (a.key.delta() != b.key.delta()) return a.key.delta() > b.key.delta();
        if (a.key.in_exp != b.key.in_exp) return a.key.in_exp < b.key.in_exp;
        return a.key.out_exp < b.key.out_exp;
    }
    friend bool operator==(const PhaseId&, const PhaseId&) = default;
};

struct Copy {
    int job;
    int machine;
    Rat shifted_start;  // position in the pre-shifted timeline
};

// Shared skeleton of both expansions. `to_inout` selects the direction:
// true  = input valid on merged, output valid on `original`;
// false = input valid on `original`, output valid on merged.
ExpandResult expand_phases(const Instance& original, const Schedule& input, bool to_inout) {
    ExpandResult result;
    result.schedule.no_duplication = false;  // phase copies may duplicate
    if (input.empty()) return result;

    Instance merged = merge_out_into_in(original);
    const Instance& target = to_inout ? original : merged;
    long long delta_max = original.max_total_delay();

    // Pre-shift: +delta_max - out_i toward the in/out model, +delta_max + out_i
    // toward the merged model.
    std::vector<Copy> shifted;
    for (const auto& [job, ps] : input.placements)
        for (const auto& p : ps) {
            long long out_i = original.machine(p.machine).out_delay;
            Rat t = p.start + Rat(to_inout ? delta_max - out_i : delta_max + out_i);
            shifted.push_back({job, p.machine, t});
        }

    // Delay class of each job from its original in/out delays.
    std::map<int, PhaseKey> key_of;
    for (const auto& job : original.jobs)
        key_of[job.id] = {pow2_exponent_up(job.in_delay), pow2_exponent_up(job.out_delay)};

    // Bucket every placement into its own phase, then copy it into the phase
    // of each successor whose window contains it (the copies are what let a
    // close successor consume it without cross-phase communication).
    std::map<PhaseId, std::vector<Copy>> phases;
    std::map<PhaseId, std::vector<int>> first_members;
    for (const auto& c : shifted) {
        const PhaseKey& key = key_of.at(c.job);
        long long w = key.window();
        long long d = (c.shifted_start / Rat(w)).floor();
        phases[{d * w, key}].push_back(c);
        first_members[{d * w, key}].push_back(c.job);
    }
    for (const auto& c : shifted) {
        for (int succ : original.dag.successors_of(c.job)) {
            const PhaseKey& skey = key_of.at(succ);
            long long w = skey.window();
            long long d = (c.shifted_start / Rat(w)).floor();
            PhaseId pid{d * w, skey};
            auto it = first_members.find(pid);
            if (it == first_members.end()) continue;
            if (std::find(it->second.begin(), it->second.end(), succ) != it->second.end())
                phases[pid].push_back(c);
        }
    }
    for (auto& [pid, copies] : phases) {
        std::sort(copies.begin(), copies.end(), [](const Copy& a, const Copy& b) {
            if (a.shifted_start != b.shifted_start) return a.shifted_start < b.shifted_start;
            if (a.machine != b.machine) return a.machine < b.machine;
            return a.job < b.job;
        });
        copies.erase(std::unique(copies.begin(), copies.end(),
                                 [](const Copy& a, const Copy& b) {
                                     return a.job == b.job && a.machine == b.machine &&
                                            a.shifted_start == b.shifted_start;
                                 }),
                     copies.end());
    }

    Validator validator(target);
    for (int level = 0; level <= 2; ++level) {
        Schedule candidate;
        candidate.no_duplication = false;
        Rat theta(0);
        long long scale = level == 0 ? 1 : 2;
        for (const auto& [pid, copies] : phases) {
            long long in_pad = pid.key.in_pad();
            long long out_pad = pid.key.out_pad();
            if (!to_inout) {  // merged model: the receiving side pays in+out
                in_pad = pid.key.delta();
                out_pad = 0;
            }
            if (level >= 1) {
                in_pad *= 2;
                out_pad *= 2;
            }
            if (level >= 2) {
                in_pad = std::max(in_pad, 2 * delta_max);
                out_pad = std::max(out_pad, 2 * delta_max);
            }
            Rat body_start = theta + Rat(in_pad);
            Rat span(0);
            for (const auto& c : copies) {
                Rat offset = (c.shifted_start - Rat(pid.window_start)) * Rat(scale);
                candidate.add(c.job, c.machine, body_start + offset);
                Rat end = offset + Rat(1, target.machine(c.machine).speed);
                if (end > span) span = end;
            }
            if (span < Rat(pid.key.window())) span = Rat(pid.key.window());
            theta = body_start + span + Rat(out_pad);
        }
        candidate.canonicalize();
        if (validator.accepts(candidate)) {
            result.schedule = std::move(candidate);
            result.pad_level = level;
            return result;
        }
    }

    // Last resort: serialize every copy with a full communication gap. Loses
    // the phase-count makespan bound but is valid for any input. Ties in the
    // pre-shifted order break by topological rank so predecessors stay first.
    std::map<int, int> rank;
    {
        int r = 0;
        for (int id : original.dag.topological_order()) rank[id] = r++;
    }
    Schedule serial;
    serial.no_duplication = false;
    std::vector<Copy> all = shifted;
    std::sort(all.begin(), all.end(), [&](const Copy& a, const Copy& b) {
        if (a.shifted_start != b.shifted_start) return a.shifted_start < b.shifted_start;
        if (rank.at(a.job) != rank.at(b.job)) return rank.at(a.job) < rank.at(b.job);
        return a.machine < b.machine;
    });
    Rat t(0);
    for (const auto& c : all) {
        serial.add(c.job, c.machine, t);
        t += Rat(1, target.machine(c.machine).speed) + Rat(4 * delta_max + 1);
    }
    serial.canonicalize();
    if (!Validator(target).accepts(serial))
        throw std::logic_error("phase expansion fallback failed validation");
    result.schedule = std::move(serial);
    result.pad_level = 3;
    return result;
}

}  // namespace

ExpandResult expand_in_to_inout(const Instance& original, const Schedule& merged_schedule) {
    return expand_phases(original, merged_schedule, true);
}

ExpandResult expand_inout_to_in(const Instance& original, const Schedule& original_schedule) {
    return expand_phases(original, original_schedule, false);
}

UmpsReduction umps_to_job_machine(const Instance& umps) {
    if (umps.model != DelayModel::Umps) throw structural_error("expected a UMPS instance");
    umps.check_consistent();
    long long n = static_cast<long long>(umps.n());
    int next_id = 0;
    for (const auto& j : umps.jobs) next_id = std::max(next_id, j.id + 1);

    std::vector<Job> jobs = umps.jobs;
    std::vector<std::pair<int, int>> edges = umps.dag.edges();
    UmpsReduction red;
    std::map<int, std::vector<int>> pinned;  // machine -> jobs
    for (const auto& [jid, mid] : umps.assigned_machine) pinned[mid].push_back(jid);
    for (const auto& mach : umps.machines) {
        int source = next_id++;
        int sink = next_id++;
        jobs.push_back({source, 0, 0});
        jobs.push_back({sink, 0, 0});
        red.gadget[mach.id] = {source, sink};
        for (int v : pinned[mach.id]) {
            edges.emplace_back(source, v);
            edges.emplace_back(v, sink);
        }
    }
    red.jm = make_instance(std::move(jobs), umps.machines, std::move(edges),
                           DelayModel::JobMachine);
    // delay 0 on the home machine, n elsewhere, for every involved job
    for (const auto& mach : umps.machines) {
        auto [source, sink] = red.gadget.at(mach.id);
        std::vector<int> involved = pinned[mach.id];
        involved.push_back(source);
        involved.push_back(sink);
        for (int v : involved)
            for (const auto& other : umps.machines)
                red.jm.table[v][other.id] = other.id == mach.id ? 0 : n;
    }
    red.jm.check_consistent();
    return red;
}

Schedule umps_schedule_to_jm(const Instance& umps, const UmpsReduction& red,
                             const Schedule& umps_schedule) {
    Rat d = makespan(umps_schedule, umps);
    Schedule out;
    out.no_duplication = true;
    for (const auto& [job, ps] : umps_schedule.placements)
        for (const auto& p : ps) out.add(job, p.machine, p.start + Rat(1));
    for (const auto& [mach, pair] : red.gadget) {
        out.add(pair.first, mach, Rat(0));
        out.add(pair.second, mach, d + Rat(1));
    }
    out.canonicalize();
    return out;
}

Schedule jm_schedule_to_umps(const Instance& umps, const Schedule& jm_schedule) {
    UmpsReduction red = umps_to_job_machine(umps);
    auto report = validate_schedule(red.jm, jm_schedule);
    if (!report.ok || !jm_schedule.no_duplication)
        throw structural_error("input is not a valid no-duplication schedule of the reduction");
    Rat c = report.makespan;
    long long n = static_cast<long long>(umps.n());

    Schedule out;
    out.no_duplication = true;
    if (c >= Rat(n)) {
        // List-schedule each job on its pinned machine, one slot per step.
        std::map<int, long long> next_free;
        std::map<int, long long> done;
        for (int id : umps.dag.topological_order()) {
            long long ready = 0;
            for (int u : umps.dag.predecessors_of(id)) ready = std::max(ready, done.at(u));
            int mach = umps.assigned_machine.at(id);
            long long start = std::max(ready, next_free.count(mach) ? next_free[mach] : 0);
            out.add(id, mach, Rat(start));
            next_free[mach] = start + 1;
            done[id] = start + 1;
        }
        out.canonicalize();
        return out;
    }

    auto placement_of = [&](int job) -> const Placement& {
        return jm_schedule.placements.at(job).front();
    };
    for (const auto& mach : umps.machines) {
        auto [source, sink] = red.gadget.at(mach.id);
        int source_machine = placement_of(source).machine;
        int sink_machine = placement_of(sink).machine;
        if (source_machine == mach.id && sink_machine != mach.id)
            throw structural_error(
                "gadget split source-home/sink-away is impossible below makespan n; "
                "input schedule is not valid");
        // mu_i: the machine holding the source gadget. Jobs executed on mu_i
        // move to their pinned machine at unchanged times (their predecessors
        // are all co-located on mu_i); jobs executed on the pinned machine
        // itself shift to the second block at C + t + 1.
        int mu = source_machine;
        for (const auto& [jid, pin] : umps.assigned_machine) {
            if (pin != mach.id) continue;
            const Placement& p = placement_of(jid);
            if (p.machine == mu && mu != mach.id)
                out.add(jid, mach.id, p.start);
            else if (p.machine == mach.id)
                out.add(jid, mach.id, c + p.start + Rat(1));
            else
                throw structural_error("job " + std::to_string(jid) +
                                       " executed off both candidate machines; "
                                       "input schedule is not valid");
        }
    }
    out.canonicalize();
    auto check = validate_schedule(umps, out);
    if (!check.ok)
        throw std::logic_error("reconstructed UMPS schedule failed validation");
    return out;
}

}  // namespace ds
