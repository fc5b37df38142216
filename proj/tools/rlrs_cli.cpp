// Command-line harness: instance generation, subgradient-method experiment
// presets, stepsize sweeps, and the RDPP vs sign-RIP comparison table.
// Outputs are data-only (CSV + JSON); plotting is left to external tools.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rlrs/io.hpp"
#include "rlrs/spectral_init.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rlrs;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitBudget = 4;

struct Config {
    int d = 60;
    int r = 3;
    int k = 0;  // 0 = default to r
    int m = 0;  // 0 = default to 10*d*r
    std::string model = "ac";
    double p = 0.2;
    std::string rule = "adaptive";
    double eta0 = 0.1;
    double ratio = 0.9;
    double c_eta = 0.5;
    double f_star = std::numeric_limits<double>::quiet_NaN();  // NaN = value at the true factor
    std::string init = "spectral";
    double tiny_sigma = 1e-7;
    int iters = 1000;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string out = "out";
    bool deterministic = true;
    std::uint64_t budget_bytes = kDefaultBudgetBytes;
    std::string preset;
    // rdpp-table grid
    std::vector<int> grid_d = {50, 100, 200, 300};
    std::vector<int> grid_r = {1, 5};
    // sweep
    std::vector<std::string> sweep_rules = {"constant", "geometric", "sublinear", "polyak",
                                            "adaptive"};

    int k_eff() const { return k > 0 ? k : r; }
    int m_eff() const { return m > 0 ? m : 10 * d * r; }
};

void to_json(json& j, const Config& c) {
    j = json{{"d", c.d},
             {"r", c.r},
             {"k", c.k_eff()},
             {"m", c.m_eff()},
             {"model", c.model},
             {"p", c.p},
             {"rule", c.rule},
             {"eta0", c.eta0},
             {"ratio", c.ratio},
             {"c_eta", c.c_eta},
             {"init", c.init},
             {"tiny_sigma", c.tiny_sigma},
             {"iters", c.iters},
             {"seeds", c.seeds},
             {"deterministic", c.deterministic},
             {"budget_bytes", c.budget_bytes},
             {"preset", c.preset}};
}

std::string hash_of(const Config& c) {
    json j;
    to_json(j, c);
    return config_hash(j.dump());
}

void load_config_file(Config& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    json j = json::parse(in);
    if (j.contains("d")) c.d = j["d"];
    if (j.contains("r")) c.r = j["r"];
    if (j.contains("k")) c.k = j["k"];
    if (j.contains("m")) c.m = j["m"];
    if (j.contains("model")) c.model = j["model"];
    if (j.contains("p")) c.p = j["p"];
    if (j.contains("rule")) c.rule = j["rule"];
    if (j.contains("eta0")) c.eta0 = j["eta0"];
    if (j.contains("ratio")) c.ratio = j["ratio"];
    if (j.contains("c_eta")) c.c_eta = j["c_eta"];
    if (j.contains("init")) c.init = j["init"];
    if (j.contains("tiny_sigma")) c.tiny_sigma = j["tiny_sigma"];
    if (j.contains("iters")) c.iters = j["iters"];
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("out")) c.out = j["out"];
    if (j.contains("deterministic")) c.deterministic = j["deterministic"];
    if (j.contains("budget_bytes")) c.budget_bytes = j["budget_bytes"];
}

void apply_preset(Config& c, bool full) {
    if (c.preset.empty()) return;
    const int base_d = full ? 100 : 60;
    if (c.preset == "fig1a") {
        c.d = base_d;
        c.r = 3;
        c.k = c.r;
    } else if (c.preset == "fig1b") {
        c.d = base_d;
        c.r = 3;
        c.k = 2 * c.r;
    } else if (c.preset == "fig1c") {
        c.d = base_d;
        c.r = 3;
        c.k = c.d;
        c.init = "tiny";
        c.sweep_rules = {"constant", "adaptive"};
        c.eta0 = 0.1;
    } else if (c.preset == "fig2") {
        c.d = base_d;
        c.r = 3;
        c.k = c.r;
        c.sweep_rules = {"adaptive", "polyak"};
    } else if (c.preset == "table1") {
        c.grid_d = {50, 100, 200, 300};
        c.grid_r = {1, 5};
        c.p = 0.0;
        c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    } else {
        throw CLI::ValidationError("--preset", "unknown preset: " + c.preset);
    }
    if (c.preset != "table1") {
        c.model = "ac";
        c.p = 0.2;
        c.m = 0;  // 10*d*r
        c.iters = 1000;
    }
}

CorruptionSpec corruption_of(const Config& c) {
    CorruptionSpec spec;
    spec.model = c.model == "rc" ? CorruptionModel::RC : CorruptionModel::AC;
    spec.p = c.p;
    spec.value_law = ValueLaw{};  // N(0, 100)
    return spec;
}

StepsizeRule rule_of(const Config& c, const std::string& name, const ProblemInstance& instance) {
    if (name == "constant") return Constant{c.eta0};
    if (name == "geometric") return Geometric{c.eta0 > 0 ? c.eta0 : 2.0, c.ratio};
    if (name == "sublinear") return Sublinear{c.eta0};
    if (name == "adaptive") return AdaptiveMedian{c.c_eta};
    if (name == "polyak") {
        double f_star = c.f_star;
        if (std::isnan(f_star)) {
            f_star = instance.s.lpNorm<1>() / (2.0 * instance.measurements());
        }
        return Polyak{f_star};
    }
    throw CLI::ValidationError("--rule", "unknown stepsize rule: " + name);
}

Matrix initial_factor(const Config& c, const ProblemInstance& instance, std::uint64_t seed) {
    if (c.init == "spectral") return spectral_init(instance, c.k_eff()).f0;
    if (c.init == "tiny") return tiny_init(instance.dim(), c.k_eff(), c.tiny_sigma, seed);
    throw CLI::ValidationError("--init", "unknown init scheme: " + c.init);
}

json stage_json(const StageSummary& s) {
    return json{{"stage1_exit", s.stage1_exit},
                {"d_nonincreasing", s.d_nonincreasing},
                {"tail_exponent", s.tail_exponent},
                {"tail_r2", s.tail_r2}};
}

int cmd_gen(const Config& c) {
    fs::create_directories(c.out);
    for (const auto seed : c.seeds) {
        ProblemInstance instance =
            generate_instance(c.d, c.r, c.m_eff(), corruption_of(c), seed, c.budget_bytes);
        save_instance(instance, fs::path(c.out) / ("instance_seed" + std::to_string(seed) + ".rlrs"));
    }
    json meta;
    to_json(meta, c);
    meta["config_hash"] = hash_of(c);
    std::ofstream(fs::path(c.out) / "gen_config.json") << meta.dump(2) << "\n";
    return 0;
}

int cmd_run(const Config& c) {
    fs::create_directories(c.out);
    const std::string hash = hash_of(c);
    std::vector<std::string> rules = {c.rule};
    if (c.preset == "fig1c") rules = c.sweep_rules;  // constant vs adaptive comparison

    json summary;
    summary["config_hash"] = hash;
    to_json(summary["config"], c);
    summary["runs"] = json::array();

    for (const auto seed : c.seeds) {
        ProblemInstance instance =
            generate_instance(c.d, c.r, c.m_eff(), corruption_of(c), seed, c.budget_bytes);
        const Matrix f0 = initial_factor(c, instance, seed);
        for (const auto& rname : rules) {
            RunOptions opts;
            opts.iters = c.iters;
            opts.diagnostics = true;
            IterationTrace trace = run(instance, f0, rule_of(c, rname, instance), opts);
            const std::string stem = "trace_" + rname + "_seed" + std::to_string(seed);
            write_trace_csv(trace, fs::path(c.out) / (stem + ".csv"));

            const auto& last = trace.records.back();
            json entry = {{"seed", seed},
                          {"rule", rname},
                          {"status", trace.diverged ? "diverged" : "ok"},
                          {"hit_floor", trace.hit_floor},
                          {"iterations", static_cast<int>(trace.records.size()) - 1},
                          {"final_op_error", last.op_error},
                          {"final_fro_error", last.fro_error},
                          {"final_objective", last.objective}};
            if (!trace.records.empty() && trace.records.front().stage) {
                entry["stage"] = stage_json(stage_trace(trace, instance.truth));
            }
            summary["runs"].push_back(std::move(entry));
        }
    }
    std::ofstream out(fs::path(c.out) / "summary.json");
    if (!out) throw IoError("cmd_run: cannot write summary.json");
    out << summary.dump(2) << "\n";
    return 0;
}

int cmd_rdpp_table(const Config& c) {
    fs::create_directories(c.out);
    const fs::path csv_path = fs::path(c.out) / "rdpp_table.csv";
    std::ofstream out(csv_path);
    if (!out) throw IoError("cmd_rdpp_table: cannot write " + csv_path.string());
    out << "d,r,op_dev_mean,op_dev_std,fro_dev_mean,fro_dev_std,seeds\n";
    const double psi = std::sqrt(2.0 / M_PI);
    for (const int d : c.grid_d) {
        for (const int r : c.grid_r) {
            const int m = 5 * d * r;
            std::vector<double> op_devs, fro_devs;
            for (const auto seed : c.seeds) {
                CorruptionSpec clean;
                clean.model = CorruptionModel::AC;
                clean.p = 0.0;
                ProblemInstance instance =
                    generate_instance(d, r, m, clean, seed, c.budget_bytes);
                RdppReport rep =
                    rdpp_probe(instance.sensing, instance.s, instance.truth.x_nat, psi);
                op_devs.push_back(rep.op_dev);
                fro_devs.push_back(rep.fro_dev);
            }
            auto mean_std = [](const std::vector<double>& v) {
                double mean = 0.0;
                for (double x : v) mean += x;
                mean /= v.size();
                double var = 0.0;
                for (double x : v) var += (x - mean) * (x - mean);
                return std::pair{mean, v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0};
            };
            const auto [op_m, op_s] = mean_std(op_devs);
            const auto [fr_m, fr_s] = mean_std(fro_devs);
            out << d << ',' << r << ',' << format_double(op_m) << ',' << format_double(op_s)
                << ',' << format_double(fr_m) << ',' << format_double(fr_s) << ','
                << c.seeds.size() << '\n';
        }
    }
    json meta;
    to_json(meta, c);
    meta["config_hash"] = hash_of(c);
    std::ofstream(fs::path(c.out) / "rdpp_table_config.json") << meta.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const Config& c) {
    fs::create_directories(c.out);
    const fs::path csv_path = fs::path(c.out) / "sweep.csv";
    std::ofstream out(csv_path);
    if (!out) throw IoError("cmd_sweep: cannot write " + csv_path.string());
    out << "rule,seed,t,fro_error,eta\n";
    json summary;
    summary["config_hash"] = hash_of(c);
    summary["divergences"] = json::array();
    for (const auto seed : c.seeds) {
        // One instance per seed, shared by every rule.
        ProblemInstance instance =
            generate_instance(c.d, c.r, c.m_eff(), corruption_of(c), seed, c.budget_bytes);
        const Matrix f0 = initial_factor(c, instance, seed);
        for (const auto& rname : c.sweep_rules) {
            RunOptions opts;
            opts.iters = c.iters;
            IterationTrace trace = run(instance, f0, rule_of(c, rname, instance), opts);
            for (const auto& rec : trace.records) {
                out << rname << ',' << seed << ',' << rec.t << ',' << format_double(rec.fro_error)
                    << ',' << format_double(rec.eta) << '\n';
            }
            if (trace.diverged) {
                summary["divergences"].push_back({{"rule", rname}, {"seed", seed}});
            }
        }
    }
    std::ofstream(fs::path(c.out) / "sweep_summary.json") << summary.dump(2) << "\n";
    return 0;
}

void add_common_flags(CLI::App* cmd, Config& c, std::string& config_file, bool& full) {
    cmd->add_option("--config", config_file, "JSON config file (flags override file values)");
    cmd->add_option("--preset", c.preset, "experiment preset: fig1a fig1b fig1c fig2 table1");
    cmd->add_flag("--full", full, "use the full-scale preset dimensions (d = 100)");
    cmd->add_option("--d", c.d, "ambient dimension");
    cmd->add_option("--r", c.r, "ground-truth rank");
    cmd->add_option("--k", c.k, "factor width (0 = use r)");
    cmd->add_option("--m", c.m, "measurement count (0 = 10*d*r)");
    cmd->add_option("--p", c.p, "corruption rate");
    cmd->add_option("--model", c.model, "corruption model: ac | rc");
    cmd->add_option("--rule", c.rule,
                    "stepsize rule: constant geometric sublinear polyak adaptive");
    cmd->add_option("--eta0", c.eta0, "base stepsize");
    cmd->add_option("--ratio", c.ratio, "geometric decay ratio");
    cmd->add_option("--c-eta", c.c_eta, "adaptive median stepsize multiplier");
    cmd->add_option("--init", c.init, "initialization: spectral | tiny");
    cmd->add_option("--iters", c.iters, "iteration count");
    cmd->add_option("--seeds", c.seeds, "seed list");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_flag("--deterministic,!--no-deterministic", c.deterministic,
                  "sequential reductions for bit-stable output");
    cmd->add_option("--budget-bytes", c.budget_bytes, "memory budget for instance generation");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust low-rank recovery from corrupted measurements"};
    app.require_subcommand(1);

    Config cfg;
    std::string config_file;
    bool full = false;

    auto* gen = app.add_subcommand("gen", "generate and serialize problem instances");
    auto* runcmd = app.add_subcommand("run", "run the subgradient method, export trace CSVs");
    auto* table = app.add_subcommand("rdpp-table", "RDPP vs sign-RIP deviation table");
    auto* sweep = app.add_subcommand("sweep", "run several stepsize rules on shared instances");
    for (auto* cmd : {gen, runcmd, table, sweep}) add_common_flags(cmd, cfg, config_file, full);
    table->add_option("--grid-d", cfg.grid_d, "table dimensions");
    table->add_option("--grid-r", cfg.grid_r, "table ranks");
    sweep->add_option("--rules", cfg.sweep_rules, "rules to sweep");

    try {
        app.parse(argc, argv);
        if (!config_file.empty()) {
            Config file_cfg;
            load_config_file(file_cfg, config_file);
            // flags override the file: re-parse on top of file values
            cfg = file_cfg;
            app.clear();
            app.parse(argc, argv);
        }
        apply_preset(cfg, full);

        if (gen->parsed()) return cmd_gen(cfg);
        if (runcmd->parsed()) return cmd_run(cfg);
        if (table->parsed()) return cmd_rdpp_table(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
