#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "queryclust/membership.hpp"
#include "queryclust/oracle.hpp"
#include "queryclust/stats.hpp"

namespace queryclust {

// Optional per-run bookkeeping beyond the oracle ledger.
struct PerfectRunStats {
    long estimation_queries = 0;
    long sideinfo_reads = 0;
};

namespace detail {

inline void require_perfect(const OracleSession& session, const char* who) {
    if (!session.is_perfect())
        throw std::invalid_argument(std::string(who) + ": requires a perfect-mode oracle");
}

// Ranks of clusters sorted by nonincreasing current size; ties keep
// creation order.
inline std::vector<int> size_ranking(const std::vector<std::vector<VertexId>>& clusters) {
    std::vector<int> order(clusters.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return clusters[a].size() > clusters[b].size();
    });
    return order;
}

// Dyadic size-class index (1-based): class i holds clusters with current
// size in (top/2^i, top/2^(i-1)].
inline int dyadic_class(size_t top, size_t size) {
    int i = 1;
    while (size << i <= top) ++i;
    return i;
}

inline double cached_score(const MembershipScorer& scorer, VertexId v,
                           const std::vector<VertexId>& cluster, const SideInfoMatrix& w,
                           const Pmf* intra) {
    if (scorer.kind == MembershipScorer::Kind::neg_tv) {
        if (cluster.size() < 2) return kSingletonScore;
        return -stats::tv(inter_dist(v, cluster, w), *intra);
    }
    return membership(scorer, v, cluster, w);
}

}  // namespace detail

// One question per existing cluster until a +1; at most nk queries and
// always the exact partition.
inline Clustering baseline_nk(OracleSession& session) {
    detail::require_perfect(session, "baseline_nk");
    const int n = session.n();
    std::vector<std::vector<VertexId>> clusters;
    for (VertexId v = 0; v < n; ++v) {
        bool joined = false;
        for (auto& cluster : clusters) {
            if (session.query(v, cluster.front()) == 1) {
                cluster.push_back(v);
                joined = true;
                break;
            }
        }
        if (!joined) clusters.push_back({v});
    }
    return Clustering::from_clusters(n, clusters);
}

// Membership-guided exact clustering with unknown generating
// distributions. Each outer iteration resolves one vertex: a verification
// query at its best-ranked cluster, a logarithmic search over dyadic size
// classes of the larger clusters, an exhaustive sweep guarded by query
// history, and finally a fresh singleton. Every inclusion is certified by
// a +1 answer, so the output always equals the hidden partition.
inline Clustering alg1_lasvegas(OracleSession& session, const SideInfoMatrix& w,
                                const MembershipScorer& scorer,
                                PerfectRunStats* stats = nullptr) {
    detail::require_perfect(session, "alg1_lasvegas");
    if (scorer.kind == MembershipScorer::Kind::div_test)
        throw std::invalid_argument("alg1_lasvegas: scorer must be average or neg_tv");
    const int n = session.n();
    if (w.n != n) throw std::invalid_argument("alg1_lasvegas: side info size mismatch");

    std::vector<std::vector<VertexId>> clusters{{0}};
    std::vector<char> assigned(n, 0);
    assigned[0] = 1;
    int remaining = n - 1;
    long reads = 0;

    std::vector<Pmf> intra_cache;
    const bool needs_intra = scorer.kind == MembershipScorer::Kind::neg_tv;

    while (remaining > 0) {
        auto order = detail::size_ranking(clusters);
        const int l = static_cast<int>(clusters.size());

        if (needs_intra) {
            intra_cache.assign(l, Pmf{});
            for (int c = 0; c < l; ++c)
                if (clusters[c].size() >= 2) intra_cache[c] = intra_dist(clusters[c], w);
        }
        auto score = [&](VertexId v, int cluster_id) {
            ++reads;
            const Pmf* intra =
                needs_intra && clusters[cluster_id].size() >= 2 ? &intra_cache[cluster_id] : nullptr;
            return detail::cached_score(scorer, v, clusters[cluster_id], w, intra);
        };

        // Ranked selection: the smallest rank j at which some unassigned
        // vertex attains its maximum membership; lowest vertex id breaks
        // ties among candidates.
        int best_rank = l;
        VertexId chosen = -1;
        for (VertexId v = 0; v < n; ++v) {
            if (assigned[v]) continue;
            double top = -std::numeric_limits<double>::infinity();
            int top_rank = 0;
            for (int r = 0; r < l; ++r) {
                double s = score(v, order[r]);
                if (s > top) {
                    top = s;
                    top_rank = r;
                }
            }
            if (top_rank < best_rank) {
                best_rank = top_rank;
                chosen = v;
            }
        }

        auto join = [&](int cluster_id, VertexId v) {
            clusters[cluster_id].push_back(v);
            assigned[v] = 1;
            --remaining;
        };

        int target = order[best_rank];
        if (session.query(chosen, clusters[target].front()) == 1) {
            join(target, chosen);
            continue;
        }

        // Logarithmic search over dyadic size classes of the larger
        // clusters (ranks before best_rank).
        bool placed = false;
        if (best_rank > 0) {
            size_t top_size = clusters[order[0]].size();
            int max_class = detail::dyadic_class(top_size, 1);
            for (int cls = 1; cls <= max_class && !placed; ++cls) {
                int best_in_class = -1;
                double best_score = -std::numeric_limits<double>::infinity();
                for (int r = 0; r < best_rank; ++r) {
                    int c = order[r];
                    if (detail::dyadic_class(top_size, clusters[c].size()) != cls) continue;
                    double s = score(chosen, c);
                    if (best_in_class == -1 || s > best_score) {
                        best_in_class = c;
                        best_score = s;
                    }
                }
                if (best_in_class == -1) continue;
                if (session.query(chosen, clusters[best_in_class].front()) == 1) {
                    join(best_in_class, chosen);
                    placed = true;
                }
            }
        }
        if (placed) continue;

        // Exhaustive sweep, skipping clusters that already answered for
        // this vertex (any earlier answer must have been -1).
        for (int r = 0; r < l && !placed; ++r) {
            int c = order[r];
            bool seen = false;
            for (VertexId u : clusters[c])
                if (session.asked(u, chosen)) {
                    seen = true;
                    break;
                }
            if (seen) continue;
            if (session.query(chosen, clusters[c].front()) == 1) {
                join(c, chosen);
                placed = true;
            }
        }
        if (!placed) {
            clusters.push_back({chosen});
            assigned[chosen] = 1;
            --remaining;
        }
    }

    if (stats) stats->sideinfo_reads = reads;
    return Clustering::from_clusters(n, clusters);
}

namespace detail {

// Shared skeleton of the known-parameter algorithms: a querying phase over
// active clusters (size < M) and an estimation phase that absorbs the rest
// of a cluster once it reaches M members. The estimation decision rule and
// its optional Las Vegas verification are supplied by the caller.
template <typename AcceptFn>
Clustering known_param_phases(OracleSession& session, const SideInfoMatrix& w, long m_threshold,
                              AcceptFn accept, bool las_vegas, PerfectRunStats* stats) {
    const int n = session.n();
    if (w.n != n) throw std::invalid_argument("side info size mismatch");

    std::vector<std::vector<VertexId>> clusters;
    std::vector<char> active;  // size < M and not yet finalized
    std::vector<char> assigned(n, 0);
    long est_queries = 0;

    // Estimation phase for a cluster that just reached M members.
    auto estimate = [&](size_t ci) {
        active[ci] = 0;
        for (VertexId v = 0; v < n; ++v) {
            if (assigned[v]) continue;
            if (!accept(v, clusters[ci])) continue;
            if (!las_vegas) {
                clusters[ci].push_back(v);
                assigned[v] = 1;
                continue;
            }
            // Las Vegas verification: confirm with one query; on failure
            // sweep one member of every other cluster before opening a
            // fresh singleton.
            ++est_queries;
            if (session.query(v, clusters[ci].front()) == 1) {
                clusters[ci].push_back(v);
                assigned[v] = 1;
                continue;
            }
            bool placed = false;
            for (size_t other = 0; other < clusters.size() && !placed; ++other) {
                if (other == ci) continue;
                ++est_queries;
                if (session.query(v, clusters[other].front()) == 1) {
                    clusters[other].push_back(v);
                    assigned[v] = 1;
                    placed = true;
                }
            }
            if (!placed) {
                clusters.push_back({v});
                active.push_back(1);
                assigned[v] = 1;
            }
        }
    };

    for (VertexId v = 0; v < n; ++v) {
        if (assigned[v]) continue;
        bool joined = false;
        for (size_t ci = 0; ci < clusters.size() && !joined; ++ci) {
            if (!active[ci]) continue;
            if (session.query(v, clusters[ci].front()) == 1) {
                clusters[ci].push_back(v);
                assigned[v] = 1;
                joined = true;
                if (static_cast<long>(clusters[ci].size()) >= m_threshold) estimate(ci);
            }
        }
        if (joined) continue;
        if (las_vegas) {
            // Inactive clusters must also answer before a new cluster may
            // open; this keeps the output exact even when an estimation
            // phase missed this vertex.
            for (size_t ci = 0; ci < clusters.size() && !joined; ++ci) {
                if (active[ci]) continue;
                if (session.query(v, clusters[ci].front()) == 1) {
                    clusters[ci].push_back(v);
                    assigned[v] = 1;
                    joined = true;
                }
            }
            if (joined) continue;
        }
        clusters.push_back({v});
        active.push_back(1);
        assigned[v] = 1;
        if (m_threshold <= 1) estimate(clusters.size() - 1);
    }

    if (stats) stats->estimation_queries = est_queries;
    return Clustering::from_clusters(n, clusters);
}

}  // namespace detail

// Known means: include v when its average similarity to a full cluster
// clears mu_plus - theta_gap/2. Monte Carlo; queries only in the querying
// phase, at most k^2 * M of them.
inline Clustering alg1a_montecarlo(OracleSession& session, const SideInfoMatrix& w, double mu_plus,
                                   double mu_minus, double desk_scale = 1.0) {
    detail::require_perfect(session, "alg1a_montecarlo");
    if (mu_plus <= mu_minus) throw std::invalid_argument("alg1a: requires mu_plus > mu_minus");
    double theta = mu_plus - mu_minus;
    long m = stats::threshold_M_mean(session.n(), theta, desk_scale);
    double threshold = mu_plus - theta / 2.0;
    auto accept = [&](VertexId v, const std::vector<VertexId>& cluster) {
        return avg_membership(v, cluster, w) >= threshold;
    };
    return detail::known_param_phases(session, w, m, accept, /*las_vegas=*/false, nullptr);
}

// Las Vegas variant: every estimation-phase inclusion is verified by a
// query, with an exhaustive fallback; exact recovery always.
inline Clustering alg1a_lasvegas(OracleSession& session, const SideInfoMatrix& w, double mu_plus,
                                 double mu_minus, double desk_scale = 1.0,
                                 PerfectRunStats* stats = nullptr) {
    detail::require_perfect(session, "alg1a_lasvegas");
    if (mu_plus <= mu_minus) throw std::invalid_argument("alg1a: requires mu_plus > mu_minus");
    double theta = mu_plus - mu_minus;
    long m = stats::threshold_M_mean(session.n(), theta, desk_scale);
    double threshold = mu_plus - theta / 2.0;
    auto accept = [&](VertexId v, const std::vector<VertexId>& cluster) {
        return avg_membership(v, cluster, w) >= threshold;
    };
    return detail::known_param_phases(session, w, m, accept, /*las_vegas=*/true, stats);
}

// Known distributions: the divergence decision rule D(p_{v,C}||f+) <
// D(p_{v,C}||f-) replaces the mean test; M comes from the decision-rule
// exponent. Monte Carlo.
inline Clustering alg_div_montecarlo(OracleSession& session, const SideInfoMatrix& w,
                                     const Pmf& f_plus, const Pmf& f_minus,
                                     double desk_scale = 1.0) {
    detail::require_perfect(session, "alg_div_montecarlo");
    if (f_plus.min_mass() <= 0.0 || f_minus.min_mass() <= 0.0)
        throw std::invalid_argument("alg_div_montecarlo: pmfs must be strictly positive");
    long m = stats::threshold_M_div(session.n(), f_plus, f_minus, desk_scale);
    auto accept = [&](VertexId v, const std::vector<VertexId>& cluster) {
        Pmf inter = inter_dist(v, cluster, w);
        return stats::kl(inter, f_plus) < stats::kl(inter, f_minus);
    };
    return detail::known_param_phases(session, w, m, accept, /*las_vegas=*/false, nullptr);
}

}  // namespace queryclust
