#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "queryclust/algo_faulty.hpp"
#include "queryclust/algo_perfect.hpp"
#include "queryclust/membership.hpp"
#include "queryclust/oracle.hpp"
#include "queryclust/rng.hpp"

namespace queryclust {

struct RoundConfig {
    long cap = 0;          // 0: ceil(n log2 n)
    long sample_size = 0;  // 0: ceil(sqrt(n log2 n))
    FaultyConfig faulty;
    uint64_t seed = 0;  // drives the sampling steps

    long cap_for(int n) const { return cap > 0 ? cap : default_round_cap(n); }
    long sample_for(int n) const { return sample_size > 0 ? sample_size : default_sample_size(n); }

    void check_feasible(int n) const {
        long c = cap_for(n), s = sample_for(n);
        if (s * s / 2 > c)
            throw std::invalid_argument("round config: cap below sample_size^2/2");
    }
};

struct RoundResult {
    Clustering clustering;
    int rounds = 0;
};

namespace detail {

// Splits a pair list into consecutive batches of at most cap pairs. Groups
// (one per vertex) are kept contiguous; a group larger than cap is an
// error.
inline std::vector<std::vector<int>> contiguous_batches(const std::vector<long>& group_sizes,
                                                        long cap) {
    std::vector<std::vector<int>> batches;
    std::vector<int> current;
    long load = 0;
    for (size_t gi = 0; gi < group_sizes.size(); ++gi) {
        long sz = group_sizes[gi];
        if (sz > cap) throw std::logic_error("batch group exceeds round cap");
        if (load + sz > cap) {
            if (!current.empty()) batches.push_back(std::move(current));
            current.clear();
            load = 0;
        }
        current.push_back(static_cast<int>(gi));
        load += sz;
    }
    if (!current.empty()) batches.push_back(std::move(current));
    return batches;
}

// Submits all-pairs queries over a vertex sample (chunked under the cap)
// and returns the connected components of the +1 answers.
inline std::vector<std::vector<VertexId>> sample_components(OracleSession& session,
                                                            const std::vector<VertexId>& sample,
                                                            long cap) {
    std::vector<QueryPair> pairs;
    for (size_t i = 0; i < sample.size(); ++i)
        for (size_t j = i + 1; j < sample.size(); ++j) pairs.emplace_back(sample[i], sample[j]);

    std::vector<int> parent(sample.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (size_t off = 0; off < pairs.size(); off += static_cast<size_t>(cap)) {
        size_t len = std::min<size_t>(cap, pairs.size() - off);
        std::span<const QueryPair> chunk(pairs.data() + off, len);
        auto answers = session.batch_query(chunk);
        for (size_t i = 0; i < len; ++i) {
            if (answers[i] != 1) continue;
            const auto& [u, v] = chunk[i];
            auto iu = std::lower_bound(sample.begin(), sample.end(), u) - sample.begin();
            auto iv = std::lower_bound(sample.begin(), sample.end(), v) - sample.begin();
            parent[find(static_cast<int>(iu))] = find(static_cast<int>(iv));
        }
    }

    std::vector<std::vector<VertexId>> components(sample.size());
    for (size_t i = 0; i < sample.size(); ++i) components[find(static_cast<int>(i))].push_back(sample[i]);
    components.erase(std::remove_if(components.begin(), components.end(),
                                    [](const auto& c) { return c.empty(); }),
                     components.end());
    return components;
}

inline std::vector<VertexId> draw_sample(std::vector<VertexId> candidates, long want,
                                         rng::Sequence& seq) {
    seq.shuffle(candidates);
    if (static_cast<long>(candidates.size()) > want)
        candidates.resize(static_cast<size_t>(want));
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

}  // namespace detail

// Perfect oracle, no side information: each round queries one unassigned
// vertex against every other vertex, completing its whole cluster, so the
// number of rounds equals the number of hidden clusters.
inline RoundResult rounds_perfect_noside(OracleSession& session) {
    detail::require_perfect(session, "rounds_perfect_noside");
    const int n = session.n();
    if (!session.round_cap()) throw std::invalid_argument("rounds_perfect_noside: no round cap");
    if (*session.round_cap() < n - 1)
        throw std::invalid_argument("rounds_perfect_noside: cap below n-1");

    std::vector<char> assigned(n, 0);
    std::vector<std::vector<VertexId>> clusters;
    for (VertexId v = 0; v < n; ++v) {
        if (assigned[v]) continue;
        std::vector<QueryPair> batch;
        batch.reserve(n - 1);
        for (VertexId u = 0; u < n; ++u)
            if (u != v) batch.emplace_back(v, u);
        auto answers = session.batch_query(batch);
        std::vector<VertexId> cluster{v};
        assigned[v] = 1;
        for (size_t i = 0; i < batch.size(); ++i) {
            VertexId u = batch[i].second;
            if (answers[i] == 1 && !assigned[u]) {
                cluster.push_back(u);
                assigned[u] = 1;
            }
        }
        std::sort(cluster.begin(), cluster.end());
        clusters.push_back(std::move(cluster));
    }
    return {Clustering::from_clusters(n, clusters), session.ledger().round_count};
}

// Perfect oracle with side information, batched: all-pairs queries on a
// fresh sample, membership-guided candidate queries for every unassigned
// vertex, a second fresh sample, and cluster merging; repeated to a
// fixpoint. Exact recovery always.
inline RoundResult rounds_perfect_side(OracleSession& session, const SideInfoMatrix& w,
                                       const RoundConfig& cfg, const MembershipScorer& scorer) {
    detail::require_perfect(session, "rounds_perfect_side");
    const int n = session.n();
    if (w.n != n) throw std::invalid_argument("rounds_perfect_side: side info size mismatch");
    if (!session.round_cap()) throw std::invalid_argument("rounds_perfect_side: no round cap");
    cfg.check_feasible(n);
    const long cap = *session.round_cap();
    const long s = cfg.sample_for(n);
    rng::Sequence seq(rng::mix(cfg.seed, 0x726f756e64ULL));

    std::vector<char> assigned(n, 0);
    std::vector<std::vector<VertexId>> clusters;
    long unassigned = n;

    auto unassigned_list = [&]() {
        std::vector<VertexId> out;
        out.reserve(unassigned);
        for (VertexId v = 0; v < n; ++v)
            if (!assigned[v]) out.push_back(v);
        return out;
    };
    auto adopt = [&](std::vector<std::vector<VertexId>> newcl) {
        for (auto& cl : newcl) {
            for (VertexId v : cl) {
                assigned[v] = 1;
                --unassigned;
            }
            clusters.push_back(std::move(cl));
        }
    };

    // Step 1: seed clusters from an initial sample.
    adopt(detail::sample_components(session, detail::draw_sample(unassigned_list(), s, seq), cap));

    const bool needs_intra = scorer.kind == MembershipScorer::Kind::neg_tv;
    while (unassigned > 0) {
        // Step 2: one candidate per ranked choice plus one per dyadic size
        // class of the larger clusters, for every unassigned vertex;
        // batched with per-vertex contiguity.
        auto order = detail::size_ranking(clusters);
        const int l = static_cast<int>(clusters.size());
        std::vector<Pmf> intra_cache;
        if (needs_intra) {
            intra_cache.assign(l, Pmf{});
            for (int c = 0; c < l; ++c)
                if (clusters[c].size() >= 2) intra_cache[c] = intra_dist(clusters[c], w);
        }
        auto score = [&](VertexId v, int c) {
            const Pmf* intra = needs_intra && clusters[c].size() >= 2 ? &intra_cache[c] : nullptr;
            return detail::cached_score(scorer, v, clusters[c], w, intra);
        };

        std::vector<VertexId> pending = unassigned_list();
        std::vector<std::vector<int>> candidates(pending.size());
        std::vector<long> group_sizes(pending.size());
        for (size_t vi = 0; vi < pending.size(); ++vi) {
            VertexId v = pending[vi];
            double top = -std::numeric_limits<double>::infinity();
            int top_rank = 0;
            for (int r = 0; r < l; ++r) {
                double sc = score(v, order[r]);
                if (sc > top) {
                    top = sc;
                    top_rank = r;
                }
            }
            candidates[vi].push_back(order[top_rank]);
            if (top_rank > 0) {
                size_t top_size = clusters[order[0]].size();
                int max_class = detail::dyadic_class(top_size, 1);
                for (int cls = 1; cls <= max_class; ++cls) {
                    int best_in_class = -1;
                    double best_score = -std::numeric_limits<double>::infinity();
                    for (int r = 0; r < top_rank; ++r) {
                        int c = order[r];
                        if (detail::dyadic_class(top_size, clusters[c].size()) != cls) continue;
                        double sc = score(v, c);
                        if (best_in_class == -1 || sc > best_score) {
                            best_in_class = c;
                            best_score = sc;
                        }
                    }
                    if (best_in_class != -1) candidates[vi].push_back(best_in_class);
                }
            }
            group_sizes[vi] = static_cast<long>(candidates[vi].size());
        }

        for (const auto& batch_groups : detail::contiguous_batches(group_sizes, cap)) {
            std::vector<QueryPair> pairs;
            for (int gi : batch_groups)
                for (int c : candidates[gi]) pairs.emplace_back(pending[gi], clusters[c].front());
            auto answers = session.batch_query(pairs);
            size_t at = 0;
            for (int gi : batch_groups) {
                for (int c : candidates[gi]) {
                    if (answers[at++] == 1 && !assigned[pending[gi]]) {
                        clusters[c].push_back(pending[gi]);
                        assigned[pending[gi]] = 1;
                        --unassigned;
                    }
                }
            }
        }
        if (unassigned == 0) break;

        // Step 3: fresh sample among the leftovers.
        auto fresh =
            detail::sample_components(session, detail::draw_sample(unassigned_list(), s, seq), cap);

        // Step 4: merge the fresh clusters into the old ones with one
        // representative pair per (new, old) combination.
        std::vector<QueryPair> merge_pairs;
        for (const auto& nc : fresh)
            for (const auto& oc : clusters) merge_pairs.emplace_back(nc.front(), oc.front());
        std::vector<int> merge_target(fresh.size(), -1);
        for (size_t off = 0; off < merge_pairs.size(); off += static_cast<size_t>(cap)) {
            size_t len = std::min<size_t>(cap, merge_pairs.size() - off);
            std::span<const QueryPair> chunk(merge_pairs.data() + off, len);
            auto answers = session.batch_query(chunk);
            for (size_t i = 0; i < len; ++i) {
                if (answers[i] != 1) continue;
                size_t flat = off + i;
                merge_target[flat / clusters.size()] = static_cast<int>(flat % clusters.size());
            }
        }
        for (size_t fi = 0; fi < fresh.size(); ++fi) {
            for (VertexId v : fresh[fi]) {
                assigned[v] = 1;
                --unassigned;
            }
            if (merge_target[fi] >= 0) {
                auto& dst = clusters[merge_target[fi]];
                dst.insert(dst.end(), fresh[fi].begin(), fresh[fi].end());
            } else {
                clusters.push_back(fresh[fi]);
            }
        }
    }

    return {Clustering::from_clusters(n, clusters), session.ledger().round_count};
}

// Faulty oracle, no side information, batched: all-pairs queries on
// samples build a pool graph; the heaviest subgraph above the c log n bar
// is extracted and grown by batched majority panels; sampling continues
// until every vertex is clustered or pooled, then the pool residual is
// resolved by ML estimation.
inline RoundResult rounds_faulty_noside(OracleSession& session, const RoundConfig& cfg) {
    detail::require_faulty(session, "rounds_faulty_noside");
    const int n = session.n();
    if (!session.round_cap()) throw std::invalid_argument("rounds_faulty_noside: no round cap");
    cfg.check_feasible(n);
    cfg.faulty.validate();
    const long cap = *session.round_cap();
    const long panel = cfg.faulty.panel_size(n);
    rng::Sequence seq(rng::mix(cfg.seed, 0x6661756c7479ULL));

    std::vector<char> clustered(n, 0);
    std::vector<char> pooled(n, 0);
    SignedGraph pool;
    std::vector<std::vector<VertexId>> clusters;

    auto grow_cluster = [&](std::vector<VertexId> cluster) {
        for (VertexId v : cluster) {
            pool.remove_vertex(v);
            pooled[v] = 0;
            clustered[v] = 1;
        }
        // Batched majority panels for every vertex not yet clustered.
        std::vector<VertexId> audience;
        for (VertexId v = 0; v < n; ++v)
            if (!clustered[v]) audience.push_back(v);
        long per_vertex = std::min<long>(panel, static_cast<long>(cluster.size()));
        std::vector<long> group_sizes(audience.size(), per_vertex);
        for (const auto& batch_groups : detail::contiguous_batches(group_sizes, cap)) {
            std::vector<QueryPair> pairs;
            for (int gi : batch_groups)
                for (long i = 0; i < per_vertex; ++i)
                    pairs.emplace_back(audience[gi], cluster[static_cast<size_t>(i)]);
            auto answers = session.batch_query(pairs);
            size_t at = 0;
            for (int gi : batch_groups) {
                long pos = 0;
                for (long i = 0; i < per_vertex; ++i)
                    if (answers[at++] == 1) ++pos;
                if (2 * pos > per_vertex) {
                    VertexId v = audience[gi];
                    cluster.push_back(v);
                    clustered[v] = 1;
                    if (pooled[v]) {
                        pool.remove_vertex(v);
                        pooled[v] = 0;
                    }
                }
            }
        }
        clusters.push_back(std::move(cluster));
    };

    bool first = true;
    for (;;) {
        // Extract while the pool still yields subgraphs above the bar.
        while (static_cast<long>(pool.vertices.size()) >= panel) {
            SubgraphResult s = max_weight_subgraph(pool, cfg.faulty);
            if (static_cast<long>(s.vertices.size()) < panel) break;
            grow_cluster(s.vertices);
        }

        std::vector<VertexId> avail;
        for (VertexId v = 0; v < n; ++v)
            if (!clustered[v] && !pooled[v]) avail.push_back(v);
        if (avail.empty()) break;

        // Choose r so that the within-sample and cross-to-pool queries fit
        // one round.
        long pool_size = static_cast<long>(pool.vertices.size());
        long r = first ? std::min<long>(cfg.sample_for(n), static_cast<long>(avail.size())) : 0;
        if (!first) {
            r = 1;
            while (r < static_cast<long>(avail.size()) &&
                   (r + 1) * r / 2 + (r + 1) * pool_size <= cap)
                ++r;
        }
        if (r * (r - 1) / 2 + r * pool_size > cap)
            throw std::logic_error("rounds_faulty_noside: pool too large for the round cap");
        first = false;

        auto sample = detail::draw_sample(avail, r, seq);
        std::vector<QueryPair> pairs;
        for (size_t i = 0; i < sample.size(); ++i)
            for (size_t j = i + 1; j < sample.size(); ++j) pairs.emplace_back(sample[i], sample[j]);
        for (VertexId v : sample)
            for (VertexId u : pool.vertices) pairs.emplace_back(v, u);
        for (VertexId v : sample) {
            pool.add_vertex(v);
            pooled[v] = 1;
        }
        for (size_t off = 0; off < pairs.size(); off += static_cast<size_t>(cap)) {
            size_t len = std::min<size_t>(cap, pairs.size() - off);
            std::span<const QueryPair> chunk(pairs.data() + off, len);
            auto answers = session.batch_query(chunk);
            for (size_t i = 0; i < len; ++i)
                pool.set_weight(chunk[i].first, chunk[i].second, answers[i]);
        }
    }

    Partition residual = ml_estimate(pool, cfg.faulty);
    for (auto& part : residual) clusters.push_back(std::move(part));
    return {Clustering::from_clusters(n, clusters), session.ledger().round_count};
}

}  // namespace queryclust
