#include <doctest.h>

#include <cmath>

#include "queryclust/rounds.hpp"
#include "queryclust/synth.hpp"

using namespace queryclust;

namespace {

void check_caps(const QueryLedger& ledger, long cap) {
    for (long sz : ledger.per_round_sizes) CHECK(sz <= cap);
}

}  // namespace

TEST_CASE("rounds without side info equal the cluster count") {
    struct Case {
        int n, k;
    };
    for (Case c : {Case{40, 1}, Case{12, 12}, Case{300, 7}}) {
        Instance inst = gen_instance(c.n, c.k, SizeProfile::balanced(), 17 + c.n);
        long cap = default_round_cap(c.n);
        OracleSession session(inst, OracleSpec::perfect(3), cap);
        auto [clustering, rounds] = rounds_perfect_noside(session);
        CHECK(compare_clusterings(clustering, inst, 1).exact);
        CHECK(rounds == c.k);
        check_caps(session.ledger(), cap);
    }

    Instance inst = gen_instance(50, 2, SizeProfile::balanced(), 5);
    OracleSession tight(inst, OracleSpec::perfect(3), 10);  // cap below n-1
    CHECK_THROWS_AS((void)rounds_perfect_noside(tight), std::invalid_argument);
}

TEST_CASE("rounds with side info recover exactly and respect the cap") {
    auto [fp, fm] = example2_pmfs(0.4, 2);
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = gen_instance(150, 6, SizeProfile::balanced(), seed);
        SideInfoMatrix w = gen_sideinfo(inst, fp, fm, seed + 8);
        long cap = default_round_cap(150);
        OracleSession session(inst, OracleSpec::perfect(seed), cap);
        RoundConfig cfg;
        cfg.seed = seed;
        auto [clustering, rounds] = rounds_perfect_side(session, w, cfg, MembershipScorer::average());
        CHECK(compare_clusterings(clustering, inst, 1).exact);
        CHECK(rounds >= 2);
        check_caps(session.ledger(), cap);
    }
}

TEST_CASE("rounds with noiseless side info finish in a few rounds") {
    auto [fp, fm] = pointmass_pmfs();
    long cap = default_round_cap(200);
    int worst = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = gen_instance(200, 8, SizeProfile::balanced(), seed);
        SideInfoMatrix w = gen_sideinfo(inst, fp, fm, seed + 4);
        OracleSession session(inst, OracleSpec::perfect(seed), cap);
        RoundConfig cfg;
        cfg.seed = seed;
        auto [clustering, rounds] = rounds_perfect_side(session, w, cfg, MembershipScorer::average());
        CHECK(compare_clusterings(clustering, inst, 1).exact);
        worst = std::max(worst, rounds);
    }
    int budget = 3 + static_cast<int>((8 * 8 + cap - 1) / cap);
    CHECK(worst <= budget);
}

TEST_CASE("faulty rounds with p=0 recover exactly") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        Instance inst = gen_instance(100, 4, SizeProfile::balanced(), seed);
        long cap = default_round_cap(100);
        OracleSession session(inst, OracleSpec::faulty(0.0, seed), cap);
        RoundConfig cfg;
        cfg.seed = seed;
        cfg.faulty.lambda = 0.5;
        cfg.faulty.desk_scale = 5.0 / (stats::faulty_constants(0.5).c * std::log(100.0));
        auto [clustering, rounds] = rounds_faulty_noside(session, cfg);
        CHECK(compare_clusterings(clustering, inst, 1).exact);
        CHECK(rounds >= 1);
        check_caps(session.ledger(), cap);
    }
}

TEST_CASE("faulty rounds with noise at desk constants") {
    int exact_count = 0;
    const int runs = 15;
    for (uint64_t seed = 1; seed <= runs; ++seed) {
        Instance inst = gen_instance(200, 3, SizeProfile::balanced(), seed);
        long cap = default_round_cap(200);
        OracleSession session(inst, OracleSpec::faulty(0.2, seed + 2), cap);
        RoundConfig cfg;
        cfg.seed = seed;
        cfg.faulty.lambda = 0.3;
        cfg.faulty.desk_scale = 30.0 / (stats::faulty_constants(0.3).c * std::log(200.0));
        auto [clustering, rounds] = rounds_faulty_noside(session, cfg);
        if (compare_clusterings(clustering, inst, 1).exact) ++exact_count;
        check_caps(session.ledger(), cap);
        CHECK(session.ledger().query_count <= cap * static_cast<long>(rounds));
    }
    CHECK(exact_count >= runs * 7 / 10);
}

TEST_CASE("round config feasibility") {
    RoundConfig cfg;
    cfg.cap = 10;
    cfg.sample_size = 40;
    CHECK_THROWS_AS(cfg.check_feasible(100), std::invalid_argument);
}
