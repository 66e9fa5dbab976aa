#include "delaysched/json_io.hpp"

#include <json.hpp>

namespace ds {

using nlohmann::json;

namespace {

const char* model_name(DelayModel m) {
    switch (m) {
        case DelayModel::Additive: return "additive";
        case DelayModel::JobMachine: return "job_machine";
        case DelayModel::Umps: return "umps";
    }
    return "?";
}

DelayModel model_from_name(const std::string& s) {
    if (s == "additive") return DelayModel::Additive;
    if (s == "job_machine") return DelayModel::JobMachine;
    if (s == "umps") return DelayModel::Umps;
    throw structural_error("unknown delay model: " + s);
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
    json doc;
    doc["version"] = "v1";
    doc["model"] = model_name(inst.model);
    doc["jobs"] = json::array();
    for (const auto& j : inst.jobs)
        doc["jobs"].push_back({{"id", j.id}, {"in_delay", j.in_delay}, {"out_delay", j.out_delay}});
    doc["machines"] = json::array();
    for (const auto& i : inst.machines)
        doc["machines"].push_back({{"id", i.id},
                                   {"size", i.size},
                                   {"speed", i.speed},
                                   {"in_delay", i.in_delay},
                                   {"out_delay", i.out_delay}});
    doc["edges"] = json::array();
    for (const auto& [u, v] : inst.dag.edges()) doc["edges"].push_back({u, v});
    if (inst.model == DelayModel::JobMachine) {
        json table = json::object();
        for (const auto& [jid, row] : inst.table) {
            json r = json::object();
            for (const auto& [mid, d] : row) r[std::to_string(mid)] = d;
            table[std::to_string(jid)] = std::move(r);
        }
        doc["table"] = std::move(table);
    }
    if (inst.model == DelayModel::Umps) {
        json part = json::object();
        for (const auto& i : inst.machines) part[std::to_string(i.id)] = json::array();
        for (const auto& [jid, mid] : inst.assigned_machine)
            part[std::to_string(mid)].push_back(jid);
        doc["partition"] = std::move(part);
    }
    return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.value("version", "") != "v1") throw structural_error("unsupported instance version");
    std::vector<Job> jobs;
    for (const auto& j : doc.at("jobs"))
        jobs.push_back({j.at("id").get<int>(), j.value("in_delay", 0LL), j.value("out_delay", 0LL)});
    std::vector<Machine> machines;
    for (const auto& i : doc.at("machines"))
        machines.push_back({i.at("id").get<int>(), i.value("size", 1LL), i.value("speed", 1LL),
                            i.value("in_delay", 0LL), i.value("out_delay", 0LL)});
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    Instance inst = make_instance(std::move(jobs), std::move(machines), std::move(edges),
                                  model_from_name(doc.at("model").get<std::string>()));
    if (inst.model == DelayModel::JobMachine) {
        for (const auto& [jid, row] : doc.at("table").items())
            for (const auto& [mid, d] : row.items())
                inst.table[std::stoi(jid)][std::stoi(mid)] = d.get<long long>();
    }
    if (inst.model == DelayModel::Umps) {
        for (const auto& [mid, jids] : doc.at("partition").items())
            for (const auto& j : jids) {
                int jid = j.get<int>();
                if (inst.assigned_machine.count(jid))
                    throw structural_error("UMPS partition assigns job " + std::to_string(jid) +
                                           " twice");
                inst.assigned_machine[jid] = std::stoi(mid);
            }
    }
    inst.check_consistent();
    return inst;
}

std::string schedule_to_json(const Schedule& sched) {
    json doc;
    doc["version"] = "v1";
    doc["no_duplication"] = sched.no_duplication;
    doc["placements"] = json::array();
    for (const auto& [job, ps] : sched.placements) {
        auto sorted = ps;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& p : sorted)
            doc["placements"].push_back(
                {{"job", job}, {"machine", p.machine}, {"start", p.start.str()}});
    }
    return doc.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.value("version", "") != "v1") throw structural_error("unsupported schedule version");
    Schedule s;
    s.no_duplication = doc.value("no_duplication", false);
    for (const auto& p : doc.at("placements"))
        s.add(p.at("job").get<int>(), p.at("machine").get<int>(),
              Rat::parse(p.at("start").get<std::string>()));
    s.canonicalize();
    return s;
}

std::string grouped_to_json(const GroupedInstance& g) {
    json doc;
    doc["rounded_instance"] = json::parse(instance_to_json(g.rounded));
    doc["delay_cap"] = g.delay_cap;
    doc["capped_machines"] = g.capped_machines;
    doc["capped_jobs"] = g.capped_jobs;
    doc["machine_groups"] = json::array();
    for (const auto& mg : g.machine_groups)
        doc["machine_groups"].push_back({{"delay", mg.delay},
                                         {"size", mg.size},
                                         {"speed", mg.speed},
                                         {"machines", mg.machines}});
    doc["job_groups"] = json::array();
    for (const auto& jg : g.job_groups)
        doc["job_groups"].push_back({{"delay", jg.delay}, {"jobs", jg.jobs}});
    return doc.dump(2) + "\n";
}

std::string rounded_to_json(const RoundedSolution& r) {
    json doc;
    doc["variant"] = to_string(r.variant);
    doc["alpha"] = r.alpha.str();
    doc["completion_bound"] = r.makespan_bound.str();
    json completions = json::object();
    for (const auto& [job, c] : r.completion) completions[std::to_string(job)] = c.str();
    doc["completions"] = std::move(completions);
    json exec = json::object();
    for (const auto& [job, k] : r.exec_group) exec[std::to_string(job)] = k;
    doc["exec_group"] = std::move(exec);
    doc["copies"] = json::array();
    for (const auto& [job, k] : r.copies) doc["copies"].push_back({job, k});
    doc["duplications"] = json::array();
    for (const auto& [u, v, k] : r.dups) doc["duplications"].push_back({u, v, k});
    return doc.dump(2) + "\n";
}

std::string report_to_json(const ValidationReport& report) {
    json doc;
    doc["ok"] = report.ok;
    doc["makespan"] = report.makespan.str();
    doc["violations"] = json::array();
    for (const auto& v : report.violations)
        doc["violations"].push_back({{"kind", to_string(v.kind)},
                                     {"job", v.job},
                                     {"machine", v.machine},
                                     {"time", v.time.str()},
                                     {"detail", v.detail}});
    return doc.dump(2) + "\n";
}

}  // namespace ds
