#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "queryclust/algo_perfect.hpp"
#include "queryclust/membership.hpp"
#include "queryclust/oracle.hpp"
#include "queryclust/stats.hpp"

namespace queryclust {

// Knobs of the faulty-oracle algorithms. lambda = 1/2 - p is known to the
// algorithm; desk_scale shrinks the c = 6/lambda^2 constants for
// desk-size experiments.
struct FaultyConfig {
    double lambda = 0.25;
    double desk_scale = 1.0;
    int exact_subgraph_limit = 16;   // largest |V| solved by branch and bound
    int exact_partition_limit = 10;  // largest |V| solved by partition enumeration
    int restarts = 8;
    int local_search_budget = 600;

    void validate() const {
        if (lambda <= 0.0 || lambda > 0.5)
            throw std::invalid_argument("faulty config: lambda must lie in (0, 1/2]");
        if (exact_subgraph_limit < 2 || exact_partition_limit < 2)
            throw std::invalid_argument("faulty config: exact limits must be >= 2");
        if (restarts < 1) throw std::invalid_argument("faulty config: restarts must be >= 1");
    }

    // Majority-panel size and extraction bar: ceil(c ln n), c = 6/lambda^2.
    long panel_size(int n) const {
        auto c = stats::faulty_constants(lambda, desk_scale).c;
        return static_cast<long>(std::ceil(c * std::log(static_cast<double>(n))));
    }
};

using Partition = std::vector<std::vector<VertexId>>;

struct SubgraphResult {
    std::vector<VertexId> vertices;  // ascending
    long weight = 0;
    bool exact = false;
};

namespace detail {

// Dense +1/-1/0 view of a signed graph for the subset solvers.
struct DenseSigned {
    std::vector<VertexId> ids;
    std::vector<int8_t> w;  // m*m
    int m = 0;

    explicit DenseSigned(const SignedGraph& g) {
        ids = g.vertices;
        m = static_cast<int>(ids.size());
        w.assign(static_cast<size_t>(m) * m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                int8_t wt = static_cast<int8_t>(g.weight(ids[i], ids[j]));
                w[static_cast<size_t>(i) * m + j] = wt;
                w[static_cast<size_t>(j) * m + i] = wt;
            }
    }

    int weight(int i, int j) const { return w[static_cast<size_t>(i) * m + j]; }
};

// Preference order for subgraph candidates: heavier, then larger, then
// lexicographically smaller vertex list.
inline bool subgraph_better(long w1, const std::vector<int>& s1, long w2,
                            const std::vector<int>& s2) {
    if (w1 != w2) return w1 > w2;
    if (s1.size() != s2.size()) return s1.size() > s2.size();
    return s1 < s2;
}

struct BranchAndBound {
    const DenseSigned& g;
    std::vector<int> chosen;
    std::vector<long> gain_pos;  // per vertex: sum of positive weights to chosen
    std::vector<long> gain;      // per vertex: signed sum of weights to chosen
    std::vector<long> suffix_pos;
    std::vector<int> best_set;
    long best_weight = 0;

    explicit BranchAndBound(const DenseSigned& dense) : g(dense) {
        int m = g.m;
        gain_pos.assign(m, 0);
        gain.assign(m, 0);
        suffix_pos.assign(m + 1, 0);
        for (int i = m - 1; i >= 0; --i) {
            long acc = suffix_pos[i + 1];
            for (int j = i + 1; j < m; ++j)
                if (g.weight(i, j) > 0) acc += g.weight(i, j);
            suffix_pos[i] = acc;
        }
        best_set.clear();  // empty set, weight 0, is admissible
    }

    void run() { descend(0, 0); }

    void descend(int idx, long cur) {
        if (idx == g.m) {
            if (subgraph_better(cur, chosen, best_weight, best_set)) {
                best_weight = cur;
                best_set = chosen;
            }
            return;
        }
        long optimistic = cur + suffix_pos[idx];
        for (int u = idx; u < g.m; ++u) optimistic += gain_pos[u];
        if (optimistic < best_weight) return;

        // Include idx.
        chosen.push_back(idx);
        long delta = gain[idx];
        for (int u = idx + 1; u < g.m; ++u) {
            int wt = g.weight(idx, u);
            gain[u] += wt;
            if (wt > 0) gain_pos[u] += wt;
        }
        descend(idx + 1, cur + delta);
        for (int u = idx + 1; u < g.m; ++u) {
            int wt = g.weight(idx, u);
            gain[u] -= wt;
            if (wt > 0) gain_pos[u] -= wt;
        }
        chosen.pop_back();

        // Exclude idx.
        descend(idx + 1, cur);
    }
};

inline SubgraphResult exact_subgraph(const DenseSigned& dense) {
    BranchAndBound bb(dense);
    bb.run();
    SubgraphResult out;
    out.exact = true;
    out.weight = bb.best_weight;
    out.vertices.reserve(bb.best_set.size());
    for (int i : bb.best_set) out.vertices.push_back(dense.ids[i]);
    return out;
}

// Greedy growth from a high-positive-degree seed followed by single
// add/remove local search; deterministic across restarts.
inline SubgraphResult heuristic_subgraph(const DenseSigned& dense, int restarts, int budget) {
    const int m = dense.m;
    SubgraphResult best;  // empty set baseline
    if (m == 0) return best;

    std::vector<int> seed_order(m);
    std::vector<long> posdeg(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (j != i && dense.weight(i, j) > 0) posdeg[i] += dense.weight(i, j);
    for (int i = 0; i < m; ++i) seed_order[i] = i;
    std::stable_sort(seed_order.begin(), seed_order.end(),
                     [&](int a, int b) { return posdeg[a] > posdeg[b]; });

    std::vector<int> best_local;
    long best_local_weight = 0;
    bool have = false;
    for (int r = 0; r < restarts && r < m; ++r) {
        int seed = seed_order[r];
        std::vector<char> in_set(m, 0);
        std::vector<long> gain(m, 0);
        in_set[seed] = 1;
        long weight = 0;
        int size = 1;
        for (int u = 0; u < m; ++u)
            if (u != seed) gain[u] = dense.weight(u, seed);

        auto add = [&](int u) {
            in_set[u] = 1;
            weight += gain[u];
            ++size;
            for (int t = 0; t < m; ++t)
                if (t != u) gain[t] += dense.weight(t, u);
        };
        auto drop = [&](int u) {
            in_set[u] = 0;
            weight -= gain[u];
            --size;
            for (int t = 0; t < m; ++t)
                if (t != u) gain[t] -= dense.weight(t, u);
        };

        // Greedy growth.
        for (;;) {
            int pick = -1;
            long pick_gain = 0;
            for (int u = 0; u < m; ++u) {
                if (in_set[u]) continue;
                if (gain[u] > pick_gain) {
                    pick_gain = gain[u];
                    pick = u;
                }
            }
            if (pick == -1) break;
            add(pick);
        }
        // 1-move local search: any single add or remove that strictly
        // improves the weight.
        for (int it = 0; it < budget; ++it) {
            int move = -1;
            bool is_add = true;
            long move_gain = 0;
            for (int u = 0; u < m; ++u) {
                long g = in_set[u] ? -gain[u] : gain[u];
                if (g > move_gain) {
                    move_gain = g;
                    move = u;
                    is_add = !in_set[u];
                }
            }
            if (move == -1) break;
            if (is_add)
                add(move);
            else
                drop(move);
        }

        std::vector<int> members;
        for (int u = 0; u < m; ++u)
            if (in_set[u]) members.push_back(u);
        if (!have || subgraph_better(weight, members, best_local_weight, best_local)) {
            best_local_weight = weight;
            best_local = members;
            have = true;
        }
    }

    // An all-negative graph keeps singletons at weight 0; the empty set is
    // only preferred when m == 0.
    if (have && subgraph_better(best_local_weight, best_local, best.weight, {})) {
        best.weight = best_local_weight;
        best.vertices.reserve(best_local.size());
        for (int i : best_local) best.vertices.push_back(dense.ids[i]);
    }
    best.exact = false;
    return best;
}

}  // namespace detail

// Heaviest-weight subgraph: maximizes the sum of signed weights inside the
// chosen set. Exact branch and bound (optimistic bound: current weight
// plus all positive weight still reachable) up to the configured size,
// greedy-plus-local-search beyond it.
inline SubgraphResult max_weight_subgraph(const SignedGraph& g, const FaultyConfig& cfg,
                                          bool force_heuristic = false) {
    cfg.validate();
    detail::DenseSigned dense(g);
    if (!force_heuristic && dense.m <= cfg.exact_subgraph_limit)
        return detail::exact_subgraph(dense);
    return detail::heuristic_subgraph(dense, cfg.restarts, cfg.local_search_budget);
}

// Objective of a candidate partition: total signed weight inside parts.
inline long ml_objective(const SignedGraph& g, const Partition& parts) {
    long sum = 0;
    for (const auto& part : parts)
        for (size_t i = 0; i < part.size(); ++i)
            for (size_t j = i + 1; j < part.size(); ++j) sum += g.weight(part[i], part[j]);
    return sum;
}

// Agreement count of correlation clustering: positive pairs inside parts
// plus negative pairs across parts (over pairs present in the graph).
inline long corrclust_objective(const SignedGraph& g, const Partition& parts) {
    std::unordered_map<VertexId, int> part_of;
    for (size_t pi = 0; pi < parts.size(); ++pi)
        for (VertexId v : parts[pi]) part_of[v] = static_cast<int>(pi);
    long agree = 0;
    for (const auto& [key, wt] : g.weights) {
        VertexId u = static_cast<VertexId>(key >> 32);
        VertexId v = static_cast<VertexId>(key & 0xffffffffULL);
        bool same = part_of.at(u) == part_of.at(v);
        if ((same && wt > 0) || (!same && wt < 0)) ++agree;
    }
    return agree;
}

namespace detail {

// Exact maximum of the partition objective by enumerating restricted
// growth strings.
inline Partition exact_partition(const SignedGraph& g) {
    const auto& ids = g.vertices;
    const int m = static_cast<int>(ids.size());
    if (m == 0) return {};
    DenseSigned dense(g);

    std::vector<int> rgs(m, 0), maxval(m, 0), best_rgs(m, 0);
    long best = std::numeric_limits<long>::min();
    for (;;) {
        long obj = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (rgs[i] == rgs[j]) obj += dense.weight(i, j);
        if (obj > best) {
            best = obj;
            best_rgs = rgs;
        }
        // Next restricted growth string.
        int i = m - 1;
        while (i > 0 && rgs[i] == maxval[i - 1] + 1) --i;
        if (i == 0) break;
        ++rgs[i];
        maxval[i] = std::max(maxval[i - 1], rgs[i]);
        for (int j = i + 1; j < m; ++j) {
            rgs[j] = 0;
            maxval[j] = maxval[j - 1];
        }
    }

    int parts_count = *std::max_element(best_rgs.begin(), best_rgs.end()) + 1;
    Partition parts(parts_count);
    for (int i = 0; i < m; ++i) parts[best_rgs[i]].push_back(ids[i]);
    return parts;
}

// Iterated peeling: extract the heaviest subgraph as one part until the
// extract is no longer positive, then singletons.
inline Partition peel_partition(const SignedGraph& g, const FaultyConfig& cfg) {
    SignedGraph work = g;
    Partition parts;
    while (!work.vertices.empty()) {
        SubgraphResult s = max_weight_subgraph(work, cfg);
        if (s.weight <= 0 || s.vertices.empty()) break;
        parts.push_back(s.vertices);
        for (VertexId v : s.vertices) work.remove_vertex(v);
    }
    for (VertexId v : work.vertices) parts.push_back({v});
    return parts;
}

}  // namespace detail

// Maximum-likelihood partition of a fully queried signed graph: exact by
// set-partition enumeration when small, otherwise peeling.
inline Partition ml_estimate(const SignedGraph& g, const FaultyConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(g.vertices.size()) <= cfg.exact_partition_limit)
        return detail::exact_partition(g);
    return detail::peel_partition(g, cfg);
}

namespace detail {

// Strict majority of a panel of queries against the earliest members.
inline bool majority_vote(OracleSession& session, VertexId v, const std::vector<VertexId>& cluster,
                          long panel) {
    long take = std::min<long>(panel, static_cast<long>(cluster.size()));
    long pos = 0;
    for (long i = 0; i < take; ++i)
        if (session.query(v, cluster[i]) == 1) ++pos;
    return 2 * pos > take;
}

// Extraction step shared by the faulty-oracle algorithms: pull the
// heaviest subgraph out of the pool once it clears the size bar, then
// greedily absorb pool vertices whose recorded answers into the new
// cluster sum positive (max score first).
inline bool extract_and_absorb(OracleSession& session, SignedGraph& pool, const FaultyConfig& cfg,
                               long size_bar, bool force_heuristic,
                               std::vector<std::vector<VertexId>>& clusters) {
    if (static_cast<long>(pool.vertices.size()) < size_bar) return false;
    SubgraphResult s = max_weight_subgraph(pool, cfg, force_heuristic);
    if (static_cast<long>(s.vertices.size()) < size_bar) return false;

    std::vector<VertexId> cluster = s.vertices;
    for (VertexId v : cluster) pool.remove_vertex(v);
    for (;;) {
        VertexId pick = -1;
        long pick_score = 0;
        for (VertexId z : pool.vertices) {
            long score = 0;
            for (VertexId u : cluster) score += session.query(z, u);  // memoized answers
            if (score > pick_score) {
                pick_score = score;
                pick = z;
            }
        }
        if (pick == -1) break;
        cluster.push_back(pick);
        pool.remove_vertex(pick);
    }
    clusters.push_back(std::move(cluster));
    return true;
}

inline void require_faulty(const OracleSession& session, const char* who) {
    if (session.is_perfect())
        throw std::invalid_argument(std::string(who) + ": requires a faulty-mode oracle");
}

}  // namespace detail

// No side information: majority votes against the active clusters, a fully
// queried pool graph for the rest, heaviest-subgraph extraction once a
// subcluster of c log n members can exist, and an ML estimate of the
// residual pool.
inline Clustering alg2(OracleSession& session, const FaultyConfig& cfg) {
    detail::require_faulty(session, "alg2");
    cfg.validate();
    const int n = session.n();
    const long panel = cfg.panel_size(n);

    std::vector<std::vector<VertexId>> clusters;
    SignedGraph pool;
    std::vector<char> done(n, 0);  // voted into a cluster or sent to the pool

    for (VertexId v = 0; v < n; ++v) {
        if (done[v]) continue;
        done[v] = 1;
        bool joined = false;
        for (auto& cluster : clusters) {
            if (detail::majority_vote(session, v, cluster, panel)) {
                cluster.push_back(v);
                joined = true;
                break;
            }
        }
        if (joined) continue;
        pool.add_vertex(v);
        for (VertexId u : pool.vertices)
            if (u != v) pool.set_weight(u, v, session.query(u, v));
        detail::extract_and_absorb(session, pool, cfg, panel, /*force_heuristic=*/false, clusters);
    }

    Partition residual = ml_estimate(pool, cfg);
    for (auto& part : residual) clusters.push_back(std::move(part));
    return Clustering::from_clusters(n, clusters);
}

struct PolyResult {
    Clustering clustering;
    std::vector<VertexId> unresolved;
};

// Polynomial-time variant: extraction always uses the heuristic solver and
// only subgraphs of size >= max(panel, k_hint) are accepted; the residual
// pool is reported unresolved and returned as singletons.
inline PolyResult alg2_poly(OracleSession& session, const FaultyConfig& cfg, long k_hint) {
    detail::require_faulty(session, "alg2_poly");
    cfg.validate();
    if (k_hint < 0) throw std::invalid_argument("alg2_poly: k_hint must be nonnegative");
    const int n = session.n();
    const long panel = cfg.panel_size(n);
    const long bar = std::max(panel, k_hint);

    std::vector<std::vector<VertexId>> clusters;
    SignedGraph pool;

    for (VertexId v = 0; v < n; ++v) {
        bool joined = false;
        for (auto& cluster : clusters) {
            if (detail::majority_vote(session, v, cluster, panel)) {
                cluster.push_back(v);
                joined = true;
                break;
            }
        }
        if (joined) continue;
        pool.add_vertex(v);
        for (VertexId u : pool.vertices)
            if (u != v) pool.set_weight(u, v, session.query(u, v));
        detail::extract_and_absorb(session, pool, cfg, bar, /*force_heuristic=*/true, clusters);
    }

    PolyResult out;
    out.unresolved = pool.vertices;
    for (VertexId v : pool.vertices) clusters.push_back({v});
    out.clustering = Clustering::from_clusters(n, clusters);
    return out;
}

// Side information + faulty oracle: membership-ranked cluster selection as
// in the perfect-oracle search, but every verification is a majority vote
// over c log n distinct members, with checked(v, cluster) flags preventing
// repeat panels; unplaced vertices fall through to the pool as in alg2.
inline Clustering alg3(OracleSession& session, const SideInfoMatrix& w, const FaultyConfig& cfg,
                       const MembershipScorer& scorer) {
    detail::require_faulty(session, "alg3");
    cfg.validate();
    const int n = session.n();
    if (w.n != n) throw std::invalid_argument("alg3: side info size mismatch");
    const long panel = cfg.panel_size(n);

    std::vector<std::vector<VertexId>> clusters;
    SignedGraph pool;
    std::vector<char> processed(n, 0);
    std::unordered_set<uint64_t> checked;  // (vertex, cluster index) panels already voted
    int remaining = n;

    auto checked_key = [](VertexId v, size_t ci) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(v)) << 32) | static_cast<uint64_t>(ci);
    };
    auto vote = [&](VertexId v, size_t ci) {
        uint64_t key = checked_key(v, ci);
        if (checked.count(key)) throw std::logic_error("alg3: repeated majority panel");
        checked.insert(key);
        return detail::majority_vote(session, v, clusters[ci], panel);
    };

    auto send_to_pool = [&](VertexId v) {
        pool.add_vertex(v);
        for (VertexId u : pool.vertices)
            if (u != v) pool.set_weight(u, v, session.query(u, v));
        processed[v] = 1;
        --remaining;
        detail::extract_and_absorb(session, pool, cfg, panel, /*force_heuristic=*/false, clusters);
    };

    std::vector<Pmf> intra_cache;
    const bool needs_intra = scorer.kind == MembershipScorer::Kind::neg_tv;

    while (remaining > 0) {
        if (clusters.empty()) {
            VertexId v = 0;
            while (processed[v]) ++v;
            send_to_pool(v);
            continue;
        }

        auto order = detail::size_ranking(clusters);
        const int l = static_cast<int>(clusters.size());
        if (needs_intra) {
            intra_cache.assign(l, Pmf{});
            for (int c = 0; c < l; ++c)
                if (clusters[c].size() >= 2) intra_cache[c] = intra_dist(clusters[c], w);
        }
        auto score = [&](VertexId v, int cluster_id) {
            const Pmf* intra =
                needs_intra && clusters[cluster_id].size() >= 2 ? &intra_cache[cluster_id] : nullptr;
            return detail::cached_score(scorer, v, clusters[cluster_id], w, intra);
        };

        int best_rank = l;
        VertexId chosen = -1;
        for (VertexId v = 0; v < n; ++v) {
            if (processed[v]) continue;
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

        auto join = [&](int ci, VertexId v) {
            clusters[ci].push_back(v);
            processed[v] = 1;
            --remaining;
        };

        int target = order[best_rank];
        if (vote(chosen, static_cast<size_t>(target))) {
            join(target, chosen);
            continue;
        }

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
                if (checked.count(checked_key(chosen, static_cast<size_t>(best_in_class)))) continue;
                if (vote(chosen, static_cast<size_t>(best_in_class))) {
                    join(best_in_class, chosen);
                    placed = true;
                }
            }
        }
        if (placed) continue;

        for (int r = 0; r < l && !placed; ++r) {
            int c = order[r];
            if (checked.count(checked_key(chosen, static_cast<size_t>(c)))) continue;
            if (vote(chosen, static_cast<size_t>(c))) {
                join(c, chosen);
                placed = true;
            }
        }
        if (!placed) send_to_pool(chosen);
    }

    Partition residual = ml_estimate(pool, cfg);
    for (auto& part : residual) clusters.push_back(std::move(part));
    return Clustering::from_clusters(n, clusters);
}

}  // namespace queryclust
