// Command-line front end: generate instances and side information, run a
// single algorithm, sweep a benchmark config, or print lower-bound
// reference values.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "queryclust/harness.hpp"

namespace qc = queryclust;

namespace {

qc::SizeProfile parse_profile(const std::string& text) {
    if (text == "balanced") return qc::SizeProfile::balanced();
    auto open = text.find(':');
    if (open != std::string::npos) {
        std::string kind = text.substr(0, open);
        double param = std::stod(text.substr(open + 1));
        if (kind == "skewed") return qc::SizeProfile::skewed(param);
        if (kind == "powerlaw") return qc::SizeProfile::powerlaw(param);
    }
    throw CLI::ValidationError("profile must be balanced, skewed:R, or powerlaw:A");
}

std::optional<std::pair<qc::Pmf, qc::Pmf>> parse_preset(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "pointmass") return qc::pointmass_pmfs();
    auto first = text.find(':');
    if (first != std::string::npos) {
        std::string kind = text.substr(0, first);
        std::string rest = text.substr(first + 1);
        auto second = rest.find(':');
        if (kind == "example2") {
            double eps = std::stod(second == std::string::npos ? rest : rest.substr(0, second));
            int grid = second == std::string::npos ? 2 : std::stoi(rest.substr(second + 1));
            return qc::example2_pmfs(eps, grid);
        }
        if (kind == "twopoint") {
            double gap = std::stod(second == std::string::npos ? rest : rest.substr(0, second));
            double flip = second == std::string::npos ? 0.0 : std::stod(rest.substr(second + 1));
            return qc::twopoint_pmfs(gap, flip);
        }
    }
    throw CLI::ValidationError("preset must be example2:EPS[:GRID], twopoint:GAP[:FLIP], or pointmass");
}

qc::Pmf load_pmf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pmf file " + path);
    qc::json j;
    in >> j;
    return qc::pmf_from_json(j);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << content;
}

int cmd_gen(int n, int k, const std::string& profile, uint64_t seed, const std::string& out_path,
            const std::string& preset, const std::string& fplus_path,
            const std::string& fminus_path, const std::string& sideinfo_path,
            const std::string& csv_path) {
    qc::Instance inst = qc::gen_instance(n, k, parse_profile(profile), seed);
    write_text(out_path, qc::to_json(inst).dump(2) + "\n");
    std::cout << "instance: " << out_path << " (n=" << inst.n << ", k=" << inst.k << ")\n";

    auto pmfs = parse_preset(preset);
    if (!fplus_path.empty() != !fminus_path.empty())
        throw std::runtime_error("need both --fplus and --fminus");
    if (!fplus_path.empty()) pmfs = {{load_pmf(fplus_path), load_pmf(fminus_path)}};

    if (!sideinfo_path.empty()) {
        if (!pmfs) throw std::runtime_error("side-info output needs a preset or explicit pmfs");
        qc::SideInfoMatrix w =
            qc::gen_sideinfo(inst, pmfs->first, pmfs->second, qc::rng::mix(seed, 2));
        std::ofstream out(sideinfo_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + sideinfo_path);
        qc::write_sideinfo(out, w);
        std::cout << "side info: " << sideinfo_path << " (grid " << w.grid_size() << ")\n";
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path);
            if (!csv) throw std::runtime_error("cannot open " + csv_path);
            qc::write_sideinfo_csv(csv, w);
            std::cout << "side info csv: " << csv_path << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"query-efficient clustering simulator"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "emit an instance file and optional side information");
    int gen_n = 100, gen_k = 5;
    std::string gen_profile = "balanced", gen_out = "instance.json";
    std::string gen_preset, gen_fplus, gen_fminus, gen_side, gen_csv;
    uint64_t gen_seed = 1;
    gen->add_option("--n", gen_n, "number of vertices")->required();
    gen->add_option("--k", gen_k, "number of clusters")->required();
    gen->add_option("--profile", gen_profile, "balanced | skewed:R | powerlaw:A");
    gen->add_option("--seed", gen_seed, "generation seed");
    gen->add_option("--out", gen_out, "instance JSON path");
    gen->add_option("--preset", gen_preset, "side-info preset");
    gen->add_option("--fplus", gen_fplus, "intra-cluster pmf JSON");
    gen->add_option("--fminus", gen_fminus, "inter-cluster pmf JSON");
    gen->add_option("--sideinfo", gen_side, "side-info matrix output path");
    gen->add_option("--csv", gen_csv, "side-info CSV export path");

    // run
    auto* run = app.add_subcommand("run", "run one algorithm and print its report");
    std::string run_algorithm, run_profile = "balanced", run_oracle = "perfect";
    std::string run_preset, run_fplus, run_fminus, run_report, run_ledger, run_scorer = "average";
    int run_n = 100, run_k = 5, run_threshold = 1;
    uint64_t run_seed = 1;
    double run_scale = 1.0;
    long run_cap = 0, run_khint = 0;
    run->add_option("--algorithm", run_algorithm, "algorithm name")->required();
    run->add_option("--n", run_n, "number of vertices")->required();
    run->add_option("--k", run_k, "number of clusters")->required();
    run->add_option("--profile", run_profile, "balanced | skewed:R | powerlaw:A");
    run->add_option("--oracle", run_oracle, "perfect | faulty:P");
    run->add_option("--seed", run_seed, "run seed");
    run->add_option("--preset", run_preset, "side-info preset");
    run->add_option("--fplus", run_fplus, "intra-cluster pmf JSON");
    run->add_option("--fminus", run_fminus, "inter-cluster pmf JSON");
    run->add_option("--desk-scale", run_scale, "threshold down-scaling");
    run->add_option("--round-cap", run_cap, "batch cap override");
    run->add_option("--k-hint", run_khint, "size bar hint for alg2-poly");
    run->add_option("--scorer", run_scorer, "average | neg_tv | div");
    run->add_option("--size-threshold", run_threshold, "big-cluster recall threshold");
    run->add_option("--report", run_report, "report JSON output path");
    run->add_option("--ledger", run_ledger, "ledger JSON output path");

    // bench
    auto* bench = app.add_subcommand("bench", "run a JSON config sweep and emit CSV");
    std::string bench_config, bench_out;
    bool bench_stable = false;
    bench->add_option("--config", bench_config, "experiment config JSON")->required();
    bench->add_option("--out", bench_out, "CSV output path (overrides config)");
    bench->add_flag("--stable-output", bench_stable, "zero the wall_time column for reproducible CSV");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "print lower-bound reference values");
    int bounds_n = 100, bounds_k = 5;
    double bounds_p = -1.0;
    std::string bounds_preset, bounds_fplus, bounds_fminus;
    bounds->add_option("--n", bounds_n, "number of vertices")->required();
    bounds->add_option("--k", bounds_k, "number of clusters")->required();
    bounds->add_option("--p", bounds_p, "oracle error rate");
    bounds->add_option("--preset", bounds_preset, "side-info preset");
    bounds->add_option("--fplus", bounds_fplus, "intra-cluster pmf JSON");
    bounds->add_option("--fminus", bounds_fminus, "inter-cluster pmf JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_n, gen_k, gen_profile, gen_seed, gen_out, gen_preset, gen_fplus,
                           gen_fminus, gen_side, gen_csv);

        if (run->parsed()) {
            qc::ExperimentConfig cfg;
            cfg.algorithm = run_algorithm;
            cfg.n = run_n;
            cfg.k = run_k;
            cfg.profile = parse_profile(run_profile);
            if (run_oracle.rfind("faulty", 0) == 0) {
                cfg.faulty_oracle = true;
                auto colon = run_oracle.find(':');
                if (colon == std::string::npos)
                    throw std::runtime_error("faulty oracle needs an error rate: faulty:P");
                cfg.p = std::stod(run_oracle.substr(colon + 1));
            } else if (run_oracle != "perfect") {
                throw std::runtime_error("oracle must be perfect or faulty:P");
            }
            cfg.sideinfo = parse_preset(run_preset);
            if (!run_fplus.empty()) cfg.sideinfo = {{load_pmf(run_fplus), load_pmf(run_fminus)}};
            cfg.desk_scale = run_scale;
            cfg.round_cap = run_cap;
            cfg.k_hint = run_khint;
            cfg.scorer = run_scorer;
            cfg.size_threshold = run_threshold;
            cfg.seeds = {run_seed};
            cfg.validate();

            qc::QueryLedger ledger;
            qc::RunReport report = qc::run_single(cfg, run_seed, &ledger);
            qc::json out = qc::to_json(report);
            std::cout << out.dump(2) << "\n";
            if (!run_report.empty()) write_text(run_report, out.dump(2) + "\n");
            if (!run_ledger.empty()) write_text(run_ledger, qc::to_json(ledger).dump(2) + "\n");
            return 0;
        }

        if (bench->parsed()) {
            std::ifstream in(bench_config);
            if (!in) throw std::runtime_error("cannot open config " + bench_config);
            qc::json j;
            in >> j;
            qc::ExperimentConfig cfg = qc::config_from_json(j);
            auto reports = qc::run_experiment(cfg);
            std::string csv = qc::to_csv(reports, cfg.emit_wall_time && !bench_stable);
            std::string out_path = bench_out.empty() ? cfg.output : bench_out;
            if (out_path.empty())
                std::cout << csv;
            else
                write_text(out_path, csv);
            auto summary = qc::summarize(reports);
            std::cerr << "runs=" << summary.runs << " recovery=" << summary.recovery_rate
                      << " queries=" << summary.query_mean << "+-" << summary.query_stddev
                      << " rounds=" << summary.round_mean << " bound_ratio="
                      << summary.bound_ratio_mean << "\n";
            return 0;
        }

        if (bounds->parsed()) {
            std::optional<std::pair<qc::Pmf, qc::Pmf>> pmfs = parse_preset(bounds_preset);
            if (!bounds_fplus.empty()) pmfs = {{load_pmf(bounds_fplus), load_pmf(bounds_fminus)}};
            qc::json out;
            if (pmfs) {
                double delta = qc::stats::symmetric_divergence(pmfs->first, pmfs->second);
                out["delta"] = delta;
                out["perfect_side"] = qc::stats::lower_bound_perfect_side(bounds_k, delta);
                out["lasvegas"] = qc::stats::lower_bound_lasvegas(bounds_n, bounds_k, delta);
            }
            if (bounds_p >= 0.0)
                out["faulty"] = qc::stats::lower_bound_faulty(bounds_n, bounds_k, bounds_p);
            out["nk"] = static_cast<double>(bounds_n) * bounds_k;
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
