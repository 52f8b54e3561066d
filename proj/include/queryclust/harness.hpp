#pragma once

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "queryclust/algo_faulty.hpp"
#include "queryclust/algo_perfect.hpp"
#include "queryclust/json_io.hpp"
#include "queryclust/rounds.hpp"
#include "queryclust/synth.hpp"

namespace queryclust {

// One experiment: an algorithm, an instance family, an oracle, optional
// side information, constants overrides, and a seed list. Each seed yields
// one fully deterministic run.
struct ExperimentConfig {
    std::string algorithm;
    int n = 0;
    int k = 0;
    SizeProfile profile = SizeProfile::balanced();
    bool faulty_oracle = false;
    double p = 0.0;

    std::optional<std::pair<Pmf, Pmf>> sideinfo;
    std::string sideinfo_desc = "none";

    double desk_scale = 1.0;
    long round_cap = 0;    // 0: default
    long sample_size = 0;  // 0: default
    int exact_subgraph_limit = 16;
    int exact_partition_limit = 10;
    int restarts = 8;
    int local_search_budget = 600;
    long k_hint = 0;
    std::string scorer = "average";
    int size_threshold = 1;

    std::vector<uint64_t> seeds;
    std::string output;
    bool emit_wall_time = true;

    static const std::vector<std::string>& algorithm_names() {
        static const std::vector<std::string> names{
            "baseline",    "alg1",       "alg1a-mc",      "alg1a-lv",   "alg-div", "alg2",
            "alg2-poly",   "alg3",       "rounds-noside", "rounds-side", "rounds-faulty"};
        return names;
    }

    bool needs_sideinfo() const {
        return algorithm == "alg1" || algorithm == "alg1a-mc" || algorithm == "alg1a-lv" ||
               algorithm == "alg-div" || algorithm == "alg3" || algorithm == "rounds-side";
    }
    bool needs_rounds() const {
        return algorithm == "rounds-noside" || algorithm == "rounds-side" ||
               algorithm == "rounds-faulty";
    }
    bool needs_faulty() const {
        return algorithm == "alg2" || algorithm == "alg2-poly" || algorithm == "alg3" ||
               algorithm == "rounds-faulty";
    }

    void validate() const {
        bool known = false;
        for (const auto& name : algorithm_names()) known = known || name == algorithm;
        if (!known) throw std::invalid_argument("config: unknown algorithm '" + algorithm + "'");
        if (n <= 0 || k <= 0 || k > n) throw std::invalid_argument("config: need 0 < k <= n");
        if (seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
        if (needs_sideinfo() && !sideinfo)
            throw std::invalid_argument("config: algorithm '" + algorithm + "' needs side info");
        if (needs_faulty() && !faulty_oracle)
            throw std::invalid_argument("config: algorithm '" + algorithm + "' needs a faulty oracle");
        if (!needs_faulty() && faulty_oracle)
            throw std::invalid_argument("config: algorithm '" + algorithm + "' needs a perfect oracle");
        if (faulty_oracle && (p < 0.0 || p >= 0.5))
            throw std::invalid_argument("config: faulty oracle needs p in [0, 1/2)");
        if (scorer != "average" && scorer != "neg_tv" && scorer != "div")
            throw std::invalid_argument("config: scorer must be average|neg_tv|div");
        if (scorer == "div" && !sideinfo)
            throw std::invalid_argument("config: div scorer needs side-info pmfs");
        if (size_threshold < 1) throw std::invalid_argument("config: size_threshold must be >= 1");
    }

    MembershipScorer make_scorer() const {
        if (scorer == "neg_tv") return MembershipScorer::neg_tv();
        if (scorer == "div") return MembershipScorer::div_test(sideinfo->first, sideinfo->second);
        return MembershipScorer::average();
    }

    FaultyConfig make_faulty() const {
        FaultyConfig cfg;
        cfg.lambda = 0.5 - p;
        cfg.desk_scale = desk_scale;
        cfg.exact_subgraph_limit = exact_subgraph_limit;
        cfg.exact_partition_limit = exact_partition_limit;
        cfg.restarts = restarts;
        cfg.local_search_budget = local_search_budget;
        return cfg;
    }
};

namespace detail {

inline double side_delta(const ExperimentConfig& cfg) {
    if (!cfg.sideinfo) return stats::kInfDivergence;
    return stats::symmetric_divergence(cfg.sideinfo->first, cfg.sideinfo->second);
}

inline double reference_bound(const ExperimentConfig& cfg) {
    if (cfg.needs_faulty()) return stats::lower_bound_faulty(cfg.n, cfg.k, cfg.p);
    if (cfg.algorithm == "alg1a-mc" || cfg.algorithm == "alg-div")
        return stats::lower_bound_perfect_side(cfg.k, side_delta(cfg));
    return stats::lower_bound_lasvegas(cfg.n, cfg.k, side_delta(cfg));
}

}  // namespace detail

// Runs one seed of a validated config. Seeds for the instance, the side
// info, the oracle noise, and the algorithm's own sampling are derived
// independently from the run seed.
inline RunReport run_single(const ExperimentConfig& cfg, uint64_t seed,
                            QueryLedger* ledger_out = nullptr) {
    Instance inst = gen_instance(cfg.n, cfg.k, cfg.profile, rng::mix(seed, 1));

    std::optional<SideInfoMatrix> w;
    if (cfg.sideinfo)
        w = gen_sideinfo(inst, cfg.sideinfo->first, cfg.sideinfo->second, rng::mix(seed, 2));

    OracleSpec spec = cfg.faulty_oracle ? OracleSpec::faulty(cfg.p, rng::mix(seed, 3))
                                        : OracleSpec::perfect(rng::mix(seed, 3));
    std::optional<long> cap;
    if (cfg.needs_rounds()) cap = cfg.round_cap > 0 ? cfg.round_cap : default_round_cap(cfg.n);
    OracleSession session(inst, spec, cap);

    RoundConfig rounds;
    rounds.cap = cfg.round_cap;
    rounds.sample_size = cfg.sample_size;
    rounds.faulty = cfg.make_faulty();
    rounds.seed = rng::mix(seed, 4);

    if (cfg.algorithm == "alg3" && cfg.sideinfo) {
        double side = detail::side_delta(cfg);
        double query = 2.0 * stats::bsc_divergence(cfg.p);
        if (side >= query)
            std::cerr << "warning: side information outweighs querying (Delta(f+,f-)="
                      << side << " >= Delta(p,1-p)=" << query << ")\n";
    }

    auto start = std::chrono::steady_clock::now();
    Clustering result;
    if (cfg.algorithm == "baseline") {
        result = baseline_nk(session);
    } else if (cfg.algorithm == "alg1") {
        result = alg1_lasvegas(session, *w, cfg.make_scorer());
    } else if (cfg.algorithm == "alg1a-mc") {
        GapParams gap = GapParams::from_pmfs(cfg.sideinfo->first, cfg.sideinfo->second);
        result = alg1a_montecarlo(session, *w, gap.mu_plus, gap.mu_minus, cfg.desk_scale);
    } else if (cfg.algorithm == "alg1a-lv") {
        GapParams gap = GapParams::from_pmfs(cfg.sideinfo->first, cfg.sideinfo->second);
        result = alg1a_lasvegas(session, *w, gap.mu_plus, gap.mu_minus, cfg.desk_scale);
    } else if (cfg.algorithm == "alg-div") {
        result = alg_div_montecarlo(session, *w, cfg.sideinfo->first, cfg.sideinfo->second,
                                    cfg.desk_scale);
    } else if (cfg.algorithm == "alg2") {
        result = alg2(session, cfg.make_faulty());
    } else if (cfg.algorithm == "alg2-poly") {
        result = alg2_poly(session, cfg.make_faulty(), cfg.k_hint).clustering;
    } else if (cfg.algorithm == "alg3") {
        result = alg3(session, *w, cfg.make_faulty(), cfg.make_scorer());
    } else if (cfg.algorithm == "rounds-noside") {
        result = rounds_perfect_noside(session).clustering;
    } else if (cfg.algorithm == "rounds-side") {
        result = rounds_perfect_side(session, *w, rounds, cfg.make_scorer()).clustering;
    } else if (cfg.algorithm == "rounds-faulty") {
        result = rounds_faulty_noside(session, rounds).clustering;
    } else {
        throw std::invalid_argument("config: unknown algorithm '" + cfg.algorithm + "'");
    }
    auto stop = std::chrono::steady_clock::now();

    auto comparison = compare_clusterings(result, inst, cfg.size_threshold);
    RunReport report;
    report.algorithm = cfg.algorithm;
    report.n = cfg.n;
    report.k = cfg.k;
    report.p = cfg.faulty_oracle ? cfg.p : 0.0;
    report.seed = seed;
    report.query_count = session.ledger().query_count;
    report.round_count = session.ledger().round_count;
    report.exact_recovery = comparison.exact;
    report.big_cluster_recall = comparison.big_cluster_recall;
    double bound = detail::reference_bound(cfg);
    report.bound_ratio = (bound > 0.0 && std::isfinite(bound))
                             ? static_cast<double>(report.query_count) / bound
                             : 0.0;
    report.wall_time = std::chrono::duration<double>(stop - start).count();
    if (ledger_out) *ledger_out = session.ledger();
    return report;
}

inline std::vector<RunReport> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<RunReport> reports;
    reports.reserve(cfg.seeds.size());
    for (uint64_t seed : cfg.seeds) reports.push_back(run_single(cfg, seed));
    return reports;
}

struct Summary {
    size_t runs = 0;
    double recovery_rate = 0.0;
    double recall_mean = 0.0;
    double query_mean = 0.0;
    double query_stddev = 0.0;
    double round_mean = 0.0;
    double round_stddev = 0.0;
    double bound_ratio_mean = 0.0;
};

inline Summary summarize(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("summarize: no reports");
    Summary s;
    s.runs = reports.size();
    double q1 = 0, q2 = 0, r1 = 0, r2 = 0;
    for (const auto& r : reports) {
        s.recovery_rate += r.exact_recovery ? 1.0 : 0.0;
        s.recall_mean += r.big_cluster_recall;
        s.bound_ratio_mean += r.bound_ratio;
        q1 += static_cast<double>(r.query_count);
        q2 += static_cast<double>(r.query_count) * static_cast<double>(r.query_count);
        r1 += r.round_count;
        r2 += static_cast<double>(r.round_count) * r.round_count;
    }
    double m = static_cast<double>(s.runs);
    s.recovery_rate /= m;
    s.recall_mean /= m;
    s.bound_ratio_mean /= m;
    s.query_mean = q1 / m;
    s.query_stddev = std::sqrt(std::max(0.0, q2 / m - s.query_mean * s.query_mean));
    s.round_mean = r1 / m;
    s.round_stddev = std::sqrt(std::max(0.0, r2 / m - s.round_mean * s.round_mean));
    return s;
}

inline const char* csv_header() {
    return "algorithm,n,k,p,seed,queries,rounds,exact,recall,bound_ratio,wall_time";
}

inline void write_csv_row(std::ostream& out, const RunReport& r, bool emit_wall_time) {
    out << r.algorithm << ',' << r.n << ',' << r.k << ',' << r.p << ',' << r.seed << ','
        << r.query_count << ',' << r.round_count << ',' << (r.exact_recovery ? 1 : 0) << ','
        << r.big_cluster_recall << ',' << r.bound_ratio << ','
        << (emit_wall_time ? r.wall_time : 0.0) << '\n';
}

inline std::string to_csv(const std::vector<RunReport>& reports, bool emit_wall_time) {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const auto& r : reports) write_csv_row(out, r, emit_wall_time);
    return out.str();
}

// Config file schema (JSON): see README. Named side-info presets:
// example2(eps, grid), twopoint(gap, flip), pointmass, or explicit pmfs.
inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.algorithm = j.at("algorithm").get<std::string>();
    cfg.n = j.at("n").get<int>();
    cfg.k = j.at("k").get<int>();

    if (j.contains("profile")) {
        const auto& prof = j.at("profile");
        std::string kind = prof.at("kind").get<std::string>();
        if (kind == "balanced")
            cfg.profile = SizeProfile::balanced();
        else if (kind == "skewed")
            cfg.profile = SizeProfile::skewed(prof.at("ratio").get<double>());
        else if (kind == "powerlaw")
            cfg.profile = SizeProfile::powerlaw(prof.at("alpha").get<double>());
        else
            throw std::invalid_argument("config: unknown profile kind '" + kind + "'");
    }

    if (j.contains("oracle")) {
        const auto& oracle = j.at("oracle");
        std::string mode = oracle.at("mode").get<std::string>();
        if (mode == "faulty") {
            cfg.faulty_oracle = true;
            cfg.p = oracle.at("p").get<double>();
        } else if (mode != "perfect") {
            throw std::invalid_argument("config: oracle mode must be perfect|faulty");
        }
    }

    if (j.contains("sideinfo") && !j.at("sideinfo").is_null()) {
        const auto& side = j.at("sideinfo");
        if (side.contains("preset")) {
            std::string preset = side.at("preset").get<std::string>();
            if (preset == "example2") {
                double eps = side.at("eps").get<double>();
                int grid = side.value("grid", 2);
                cfg.sideinfo = example2_pmfs(eps, grid);
                cfg.sideinfo_desc = "example2(" + std::to_string(eps) + "," + std::to_string(grid) + ")";
            } else if (preset == "twopoint") {
                double gap = side.at("gap").get<double>();
                double flip = side.value("flip", 0.0);
                cfg.sideinfo = twopoint_pmfs(gap, flip);
                cfg.sideinfo_desc = "twopoint(" + std::to_string(gap) + "," + std::to_string(flip) + ")";
            } else if (preset == "pointmass") {
                cfg.sideinfo = pointmass_pmfs();
                cfg.sideinfo_desc = "pointmass";
            } else {
                throw std::invalid_argument("config: unknown side-info preset '" + preset + "'");
            }
        } else {
            cfg.sideinfo = {pmf_from_json(side.at("f_plus")), pmf_from_json(side.at("f_minus"))};
            cfg.sideinfo_desc = "explicit";
        }
    }

    if (j.contains("constants")) {
        const auto& c = j.at("constants");
        cfg.desk_scale = c.value("desk_scale", 1.0);
        cfg.round_cap = c.value("round_cap", 0L);
        cfg.sample_size = c.value("sample_size", 0L);
        cfg.exact_subgraph_limit = c.value("exact_subgraph_limit", 16);
        cfg.exact_partition_limit = c.value("exact_partition_limit", 10);
        cfg.restarts = c.value("restarts", 8);
        cfg.local_search_budget = c.value("local_search_budget", 600);
        cfg.k_hint = c.value("k_hint", 0L);
        cfg.scorer = c.value("scorer", std::string("average"));
        cfg.size_threshold = c.value("size_threshold", 1);
    }

    const auto& seeds = j.at("seeds");
    if (seeds.is_array()) {
        cfg.seeds = seeds.get<std::vector<uint64_t>>();
    } else {
        uint64_t count = seeds.at("count").get<uint64_t>();
        uint64_t base = seeds.value("base", 1ULL);
        for (uint64_t i = 0; i < count; ++i) cfg.seeds.push_back(base + i);
    }

    cfg.output = j.value("output", std::string{});
    cfg.emit_wall_time = j.value("emit_wall_time", true);
    cfg.validate();
    return cfg;
}

}  // namespace queryclust
