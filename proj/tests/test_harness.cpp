#include <doctest.h>

#include "queryclust/harness.hpp"

using namespace queryclust;

namespace {

ExperimentConfig baseline_config() {
    ExperimentConfig cfg;
    cfg.algorithm = "baseline";
    cfg.n = 50;
    cfg.k = 5;
    for (uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
    return cfg;
}

}  // namespace

TEST_CASE("baseline experiment: all runs exact") {
    auto reports = run_experiment(baseline_config());
    CHECK(reports.size() == 10);
    for (const auto& r : reports) {
        CHECK(r.exact_recovery);
        CHECK(r.big_cluster_recall == doctest::Approx(1.0));
        CHECK(r.query_count <= 50L * 5L);
        CHECK(r.bound_ratio > 0.0);
    }
    auto summary = summarize(reports);
    CHECK(summary.recovery_rate == doctest::Approx(1.0));
    CHECK(summary.runs == 10);
}

TEST_CASE("alg1a-mc sweep produces monotone query counts") {
    std::vector<double> means;
    for (int n : {500, 1000, 2000}) {
        ExperimentConfig cfg;
        cfg.algorithm = "alg1a-mc";
        cfg.n = n;
        cfg.k = 10;
        cfg.sideinfo = twopoint_pmfs(0.4, 0.04);
        cfg.desk_scale = 0.05;
        for (uint64_t s = 1; s <= 5; ++s) cfg.seeds.push_back(s);
        auto summary = summarize(run_experiment(cfg));
        means.push_back(summary.query_mean);
    }
    CHECK(means[0] < means[1]);
    CHECK(means[1] < means[2]);
}

TEST_CASE("config validation errors") {
    ExperimentConfig cfg = baseline_config();
    cfg.algorithm = "nosuch";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = baseline_config();
    cfg.seeds.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = baseline_config();
    cfg.algorithm = "alg1";  // needs side info
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = baseline_config();
    cfg.algorithm = "alg2";
    cfg.faulty_oracle = true;
    cfg.p = 0.6;  // lambda would be negative
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = baseline_config();
    cfg.faulty_oracle = true;  // baseline needs the perfect oracle
    cfg.p = 0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("summarize") {
    CHECK_THROWS_AS((void)summarize({}), std::invalid_argument);

    RunReport r;
    r.query_count = 42;
    r.round_count = 3;
    r.exact_recovery = true;
    r.big_cluster_recall = 1.0;
    r.bound_ratio = 2.0;
    auto s1 = summarize({r});
    CHECK(s1.query_mean == doctest::Approx(42.0));
    CHECK(s1.query_stddev == doctest::Approx(0.0));
    CHECK(s1.recovery_rate == doctest::Approx(1.0));

    // Recount on a larger batch.
    auto reports = run_experiment(baseline_config());
    auto s = summarize(reports);
    double manual_rate = 0.0, manual_mean = 0.0;
    for (const auto& rep : reports) {
        manual_rate += rep.exact_recovery ? 1.0 : 0.0;
        manual_mean += static_cast<double>(rep.query_count);
    }
    manual_rate /= reports.size();
    manual_mean /= reports.size();
    CHECK(s.recovery_rate == doctest::Approx(manual_rate));
    CHECK(s.query_mean == doctest::Approx(manual_mean));
}

TEST_CASE("csv is byte-stable across reruns") {
    ExperimentConfig cfg = baseline_config();
    cfg.emit_wall_time = false;
    std::string csv1 = to_csv(run_experiment(cfg), cfg.emit_wall_time);
    std::string csv2 = to_csv(run_experiment(cfg), cfg.emit_wall_time);
    CHECK(csv1 == csv2);
    CHECK(csv1.rfind("algorithm,n,k,p,seed,queries,rounds,exact,recall,bound_ratio,wall_time", 0) ==
          0);
}

TEST_CASE("json config round trip") {
    json j = {
        {"algorithm", "alg1a-mc"},
        {"n", 100},
        {"k", 4},
        {"profile", {{"kind", "powerlaw"}, {"alpha", 1.5}}},
        {"oracle", {{"mode", "perfect"}}},
        {"sideinfo", {{"preset", "example2"}, {"eps", 0.3}, {"grid", 2}}},
        {"constants", {{"desk_scale", 0.5}, {"scorer", "average"}}},
        {"seeds", {{"count", 3}, {"base", 10}}},
    };
    ExperimentConfig cfg = config_from_json(j);
    CHECK(cfg.algorithm == "alg1a-mc");
    CHECK(cfg.seeds == std::vector<uint64_t>{10, 11, 12});
    CHECK(cfg.sideinfo.has_value());
    CHECK(cfg.desk_scale == doctest::Approx(0.5));

    auto reports = run_experiment(cfg);
    CHECK(reports.size() == 3);

    json bad = j;
    bad["oracle"] = {{"mode", "faulty"}, {"p", 0.7}};
    CHECK_THROWS(config_from_json(bad));
}

TEST_CASE("faulty runs wire through the harness") {
    ExperimentConfig cfg;
    cfg.algorithm = "alg2";
    cfg.n = 60;
    cfg.k = 3;
    cfg.faulty_oracle = true;
    cfg.p = 0.0;
    cfg.desk_scale = 0.05;
    cfg.seeds = {1, 2, 3};
    auto reports = run_experiment(cfg);
    for (const auto& r : reports) {
        CHECK(r.exact_recovery);
        CHECK(r.p == doctest::Approx(0.0));
        CHECK(r.bound_ratio > 0.0);  // nk reference at p = 0
    }
}

TEST_CASE("instance and report json shapes") {
    Instance inst = gen_instance(10, 2, SizeProfile::balanced(), 4);
    json j = to_json(inst);
    Instance back = instance_from_json(j);
    CHECK(back.labels == inst.labels);

    Clustering c({0, 0, 1, 1});
    CHECK(clustering_from_json(to_json(c)).assignment == c.assignment);

    Pmf p({0.0, 1.0}, {0.4, 0.6});
    Pmf pback = pmf_from_json(to_json(p));
    CHECK(pback.mass == p.mass);
}

TEST_CASE("sideinfo container round trip") {
    Instance inst = gen_instance(30, 3, SizeProfile::balanced(), 6);
    auto [fp, fm] = example2_pmfs(0.2, 4);
    SideInfoMatrix w = gen_sideinfo(inst, fp, fm, 60);
    std::stringstream buf;
    write_sideinfo(buf, w);
    SideInfoMatrix back = read_sideinfo(buf);
    CHECK(back.n == w.n);
    CHECK(back.support == w.support);
    CHECK(back.idx == w.idx);

    std::stringstream csv;
    write_sideinfo_csv(csv, w);
    std::string first_line;
    std::getline(csv, first_line);
    CHECK(std::count(first_line.begin(), first_line.end(), ',') == 29);
}
