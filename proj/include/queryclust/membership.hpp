#pragma once

#include <stdexcept>
#include <vector>

#include "queryclust/stats.hpp"
#include "queryclust/synth.hpp"

namespace queryclust {

// Ranks clusters as candidate homes for a vertex. Three flavors:
//   average  — mean similarity of v to the cluster,
//   neg_tv   — negative TV distance between the inter and intra empirical
//              distributions (higher = closer),
//   div_test — likelihood-ratio score D(p_{v,C}||f-) - D(p_{v,C}||f+),
//              positive iff the divergence rule accepts v.
struct MembershipScorer {
    enum class Kind { average, neg_tv, div_test };
    Kind kind = Kind::average;
    Pmf f_plus, f_minus;  // div_test only; must be strictly positive

    static MembershipScorer average() { return {Kind::average, {}, {}}; }
    static MembershipScorer neg_tv() { return {Kind::neg_tv, {}, {}}; }
    static MembershipScorer div_test(Pmf fp, Pmf fm) {
        if (fp.min_mass() <= 0.0 || fm.min_mass() <= 0.0)
            throw std::invalid_argument("div_test scorer: pmfs must be strictly positive");
        stats::require_same_support(fp, fm);
        return {Kind::div_test, std::move(fp), std::move(fm)};
    }
};

// Sentinel ranking score for clusters whose intra distribution is
// undefined (|C| = 1 under neg_tv); below any true score so such clusters
// fall through to the exhaustive stage.
inline constexpr double kSingletonScore = -2.0;

inline double avg_membership(VertexId v, const std::vector<VertexId>& cluster,
                             const SideInfoMatrix& w) {
    if (cluster.empty()) throw std::invalid_argument("avg_membership: empty cluster");
    double sum = 0.0;
    for (VertexId u : cluster) {
        if (u == v) throw std::invalid_argument("avg_membership: v inside cluster");
        sum += w.value(v, u);
    }
    return sum / static_cast<double>(cluster.size());
}

// Histogram of w(v, u) over u in the cluster, normalized by |C|.
inline Pmf inter_dist(VertexId v, const std::vector<VertexId>& cluster, const SideInfoMatrix& w) {
    if (cluster.empty()) throw std::invalid_argument("inter_dist: empty cluster");
    std::vector<double> mass(w.grid_size(), 0.0);
    for (VertexId u : cluster) {
        if (u == v) throw std::invalid_argument("inter_dist: v inside cluster");
        mass[w.index(v, u)] += 1.0;
    }
    for (double& m : mass) m /= static_cast<double>(cluster.size());
    return Pmf(w.support, mass);
}

// Histogram of pairwise values inside the cluster. Unordered counting with
// denominator C(|C|,2) equals the ordered-pair formulation.
inline Pmf intra_dist(const std::vector<VertexId>& cluster, const SideInfoMatrix& w) {
    if (cluster.size() < 2) throw std::invalid_argument("intra_dist: cluster smaller than 2");
    std::vector<double> mass(w.grid_size(), 0.0);
    for (size_t i = 0; i < cluster.size(); ++i)
        for (size_t j = i + 1; j < cluster.size(); ++j) mass[w.index(cluster[i], cluster[j])] += 1.0;
    double pairs = static_cast<double>(cluster.size()) * (cluster.size() - 1) / 2.0;
    for (double& m : mass) m /= pairs;
    return Pmf(w.support, mass);
}

inline double membership(const MembershipScorer& scorer, VertexId v,
                         const std::vector<VertexId>& cluster, const SideInfoMatrix& w) {
    switch (scorer.kind) {
        case MembershipScorer::Kind::average:
            return avg_membership(v, cluster, w);
        case MembershipScorer::Kind::neg_tv: {
            if (cluster.size() < 2) return kSingletonScore;
            return -stats::tv(inter_dist(v, cluster, w), intra_dist(cluster, w));
        }
        case MembershipScorer::Kind::div_test: {
            Pmf inter = inter_dist(v, cluster, w);
            return stats::kl(inter, scorer.f_minus) - stats::kl(inter, scorer.f_plus);
        }
    }
    throw std::logic_error("membership: unknown scorer");
}

}  // namespace queryclust
