// delaysched: generate, solve, validate, brute-force, benchmark, and plot
// precedence-constrained schedules under communication delays.
//
// Exit codes: 0 success, 2 invalid input, 3 infeasible / threshold assertion /
// validation failure, 4 internal invariant breach.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "delaysched/gantt.hpp"
#include "delaysched/json_io.hpp"
#include "delaysched/nodup.hpp"
#include "delaysched/oracle.hpp"
#include "delaysched/pipeline.hpp"
#include "delaysched/reduction.hpp"

namespace {

using namespace ds;

int log_level() {
    static int level = [] {
        const char* env = std::getenv("DELAYSCHED_LOG");
        if (!env) return 1;
        std::string s(env);
        if (s == "error") return 0;
        if (s == "warn") return 1;
        if (s == "info") return 2;
        if (s == "debug") return 3;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[delaysched] " << msg << "\n";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw structural_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw structural_error("cannot write " + path);
    out << content;
}

DelayModel parse_model(const std::string& s) {
    if (s == "additive") return DelayModel::Additive;
    if (s == "job_machine") return DelayModel::JobMachine;
    if (s == "umps") return DelayModel::Umps;
    throw structural_error("unknown model " + s);
}

struct BenchRow {
    std::uint64_t seed{};
    int n{}, m{};
    std::string opt;  // empty when the oracle could not finish
    double lp{};
    std::string cstar;
    std::string makespan;
    std::string core_bound;
    double ratio{};
    bool ok{};
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scheduling under non-uniform communication delays"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "emit a random instance");
    GenParams gp;
    std::string gen_model = "additive", gen_out = "-";
    gen->add_option("--seed", gp.seed, "rng seed");
    gen->add_option("-n,--jobs", gp.n, "job count");
    gen->add_option("-m,--machines", gp.m, "machine count");
    gen->add_option("--edge-prob", gp.edge_prob, "layered edge probability");
    gen->add_option("--delay-min", gp.delay_min, "min delay");
    gen->add_option("--delay-max", gp.delay_max, "max delay");
    gen->add_option("--speed-max", gp.speed_max, "max machine speed");
    gen->add_option("--size-max", gp.size_max, "max machine size");
    gen->add_option("--model", gen_model, "additive|job_machine|umps");
    gen->add_option("-o,--output", gen_out, "output path (- for stdout)");

    auto* solve_cmd = app.add_subcommand("solve", "run the full pipeline");
    std::string solve_in, solve_out = "-", solve_report, solve_variant = "auto";
    std::string solve_nodup = "off", emit_prefix;
    double solve_alpha = 1.0;
    long long solve_threshold = 0;
    bool solve_comb = false;
    solve_cmd->add_option("-i,--input", solve_in, "instance json")->required();
    solve_cmd->add_option("-o,--output", solve_out, "schedule json (- for stdout)");
    solve_cmd->add_option("--report", solve_report, "pipeline report json path");
    solve_cmd->add_option("--variant", solve_variant,
                          "auto|machine_delays|job_machine_delays|general_related");
    solve_cmd->add_option("--alpha", solve_alpha, "relaxation duplication budget (>= 1)");
    solve_cmd->add_option("--nodup", solve_nodup, "off|prune|symmetric");
    solve_cmd->add_option("--threshold", solve_threshold,
                          "probe a single T for --nodup symmetric (0 = binary search)");
    solve_cmd->add_flag("--combinatorial", solve_comb, "force the combinatorial path");
    solve_cmd->add_option("--emit-stages", emit_prefix, "write stage checkpoints PREFIX.*.json");

    auto* val = app.add_subcommand("validate", "check a schedule against an instance");
    std::string val_inst, val_sched, val_out = "-";
    val->add_option("-i,--instance", val_inst, "instance json")->required();
    val->add_option("-s,--schedule", val_sched, "schedule json")->required();
    val->add_option("-o,--output", val_out, "validation report json (- for stdout)");

    auto* orc = app.add_subcommand("oracle", "exact brute-force optimum");
    std::string orc_in, orc_out = "-";
    long long orc_horizon = 12;
    bool orc_nodup = false;
    orc->add_option("-i,--input", orc_in, "instance json")->required();
    orc->add_option("--horizon", orc_horizon, "makespan horizon");
    orc->add_flag("--no-dup", orc_nodup, "restrict to one placement per job");
    orc->add_option("-o,--output", orc_out, "record json (- for stdout)");

    auto* bench = app.add_subcommand("bench", "seeded suite of oracle-vs-pipeline rows");
    int bench_count = 20, bench_workers = 1, bench_n = 5;
    std::uint64_t bench_base = 1000;
    std::string bench_csv, bench_text = "-";
    bench->add_option("--count", bench_count, "instances");
    bench->add_option("--seed-base", bench_base, "first seed");
    bench->add_option("--jobs", bench_n, "jobs per instance (keep oracle-able)");
    bench->add_option("--workers", bench_workers, "concurrent instances");
    bench->add_option("--csv", bench_csv, "csv output path");
    bench->add_option("-o,--output", bench_text, "table output (- for stdout)");

    auto* gantt = app.add_subcommand("gantt", "emit an svg (and ascii) timeline");
    std::string gantt_inst, gantt_sched, gantt_out = "-", gantt_ascii_out;
    gantt->add_option("-i,--instance", gantt_inst, "instance json")->required();
    gantt->add_option("-s,--schedule", gantt_sched, "schedule json")->required();
    gantt->add_option("-o,--output", gantt_out, "svg path (- for stdout)");
    gantt->add_option("--ascii", gantt_ascii_out, "also write a text timeline");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            gp.model = parse_model(gen_model);
            spit(gen_out, instance_to_json(generate(gp)));
            return 0;
        }

        if (solve_cmd->parsed()) {
            Instance inst = instance_from_json(slurp(solve_in));
            if (solve_nodup == "symmetric") {
                long long best_t = -1;
                ThresholdOutcome best;
                if (solve_threshold > 0) {
                    best = symmetric_threshold(inst, solve_threshold);
                    best_t = best.asserted() ? -1 : solve_threshold;
                } else {
                    Rat base = makespan(baseline_single_machine(inst), inst);
                    long long lo = 1, hi = base.floor() + 1;
                    while (lo <= hi) {  // smallest T that yields a schedule
                        long long mid = lo + (hi - lo) / 2;
                        auto out = symmetric_threshold(inst, mid);
                        log_info("threshold probe T=" + std::to_string(mid) + " -> " +
                                 (out.asserted() ? out.assertion->kind : "schedule"));
                        if (out.asserted()) {
                            lo = mid + 1;
                        } else {
                            best = std::move(out);
                            best_t = mid;
                            hi = mid - 1;
                        }
                    }
                }
                nlohmann::json rep;
                rep["threshold"] = best_t;
                if (best_t < 0) {
                    if (best.assertion.has_value())
                        rep["assertion"] = {{"kind", best.assertion->kind},
                                            {"detail", best.assertion->detail}};
                    if (!solve_report.empty()) spit(solve_report, rep.dump(2) + "\n");
                    std::cerr << "no schedule at the probed threshold\n";
                    return 3;
                }
                rep["length"] = best.length.str();
                if (!solve_report.empty()) spit(solve_report, rep.dump(2) + "\n");
                spit(solve_out, schedule_to_json(*best.schedule));
                return 0;
            }

            PipelineOptions opts;
            opts.alpha = solve_alpha;
            opts.nodup = solve_nodup == "prune";
            opts.force_combinatorial = solve_comb;
            opts.auto_combinatorial = solve_comb;
            if (solve_variant == "machine_delays") opts.variant = LpVariant::MachineDelays;
            else if (solve_variant == "job_machine_delays")
                opts.variant = LpVariant::JobMachineDelays;
            else if (solve_variant == "general_related")
                opts.variant = LpVariant::GeneralRelated;
            else if (solve_variant != "auto")
                throw structural_error("unknown variant " + solve_variant);
            PipelineArtifacts artifacts;
            auto [sched, rep] =
                run_pipeline(inst, opts, emit_prefix.empty() ? nullptr : &artifacts);
            log_info("pipeline done: makespan " + rep.final_makespan.str());
            if (!emit_prefix.empty()) {
                spit(emit_prefix + ".grouped.json", grouped_to_json(*artifacts.grouped));
                spit(emit_prefix + ".rounded.json", rounded_to_json(*artifacts.rounded));
                spit(emit_prefix + ".core.json", schedule_to_json(*artifacts.core_schedule));
            }
            if (!solve_report.empty()) spit(solve_report, report_to_json(rep));
            spit(solve_out, schedule_to_json(sched));
            return rep.validated ? 0 : 4;
        }

        if (val->parsed()) {
            Instance inst = instance_from_json(slurp(val_inst));
            Schedule sched = schedule_from_json(slurp(val_sched));
            auto rep = validate_schedule(inst, sched);
            spit(val_out, report_to_json(rep));
            return rep.ok ? 0 : 3;
        }

        if (orc->parsed()) {
            Instance inst = instance_from_json(slurp(orc_in));
            auto res = brute_force_opt(inst, orc_horizon, !orc_nodup);
            nlohmann::json doc;
            doc["horizon"] = orc_horizon;
            doc["allow_duplication"] = !orc_nodup;
            doc["feasible"] = res.has_value();
            if (res) {
                doc["makespan"] = res->makespan.str();
                doc["schedule"] = nlohmann::json::parse(schedule_to_json(res->witness));
            }
            spit(orc_out, doc.dump(2) + "\n");
            return res ? 0 : 3;
        }

        if (bench->parsed()) {
            std::vector<BenchRow> rows(bench_count);
            std::mutex mu;
            std::atomic<int> next{0};
            auto worker = [&] {
                for (;;) {
                    int idx = next.fetch_add(1);
                    if (idx >= bench_count) return;
                    BenchRow row;
                    row.seed = bench_base + static_cast<std::uint64_t>(idx);
                    GenParams p;
                    p.seed = row.seed;
                    p.n = bench_n;
                    p.m = 2;
                    p.edge_prob = 0.35;
                    p.delay_max = 3;
                    auto inst = generate(p);
                    row.n = static_cast<int>(inst.n());
                    row.m = static_cast<int>(inst.m());
                    try {
                        auto opt = brute_force_opt(inst, 16, true);
                        if (opt) row.opt = opt->makespan.str();
                    } catch (const std::exception&) {
                        // caps exceeded: leave opt empty
                    }
                    auto [sched, rep] = run_pipeline(inst, {});
                    row.lp = rep.lp_objective;
                    row.cstar = rep.completion_bound.str();
                    row.makespan = rep.final_makespan.str();
                    row.core_bound = rep.core_bound.str();
                    row.ok = rep.validated;
                    if (!row.opt.empty()) {
                        double opt_val = Rat::parse(row.opt).to_double();
                        if (opt_val > 0) row.ratio = rep.final_makespan.to_double() / opt_val;
                    }
                    std::lock_guard<std::mutex> lock(mu);
                    rows[idx] = std::move(row);
                }
            };
            int nw = std::max(1, bench_workers);
            std::vector<std::thread> pool;
            for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();

            std::ostringstream csv, txt;
            csv << "seed,n,m,opt,lp_value,completion_bound,final_makespan,core_bound,ratio,ok\n";
            txt << "seed\tn\tm\topt\tlp\tC*\tmakespan\tratio\n";
            for (const auto& r : rows) {
                csv << r.seed << "," << r.n << "," << r.m << "," << r.opt << "," << r.lp << ","
                    << r.cstar << "," << r.makespan << "," << r.core_bound << "," << r.ratio
                    << "," << (r.ok ? 1 : 0) << "\n";
                txt << r.seed << "\t" << r.n << "\t" << r.m << "\t"
                    << (r.opt.empty() ? "-" : r.opt) << "\t" << r.lp << "\t" << r.cstar << "\t"
                    << r.makespan << "\t" << r.ratio << "\n";
            }
            if (!bench_csv.empty()) spit(bench_csv, csv.str());
            spit(bench_text, txt.str());
            return 0;
        }

        if (gantt->parsed()) {
            Instance inst = instance_from_json(slurp(gantt_inst));
            Schedule sched = schedule_from_json(slurp(gantt_sched));
            spit(gantt_out, gantt_svg(inst, sched));
            if (!gantt_ascii_out.empty()) spit(gantt_ascii_out, gantt_ascii(inst, sched));
            return 0;
        }
    } catch (const structural_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cycle_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
