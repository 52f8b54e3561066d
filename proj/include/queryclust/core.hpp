#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace queryclust {

using VertexId = int;

// Unordered pair of vertex ids packed into one key.
inline uint64_t pair_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<uint64_t>(static_cast<uint32_t>(u)) << 32) |
           static_cast<uint64_t>(static_cast<uint32_t>(v));
}

// Hidden ground truth: a partition of n vertices into k clusters.
// Algorithms never see this directly; only the oracle reads it.
struct Instance {
    int n = 0;
    int k = 0;
    std::vector<int> labels;          // per-vertex cluster id in [0, k)
    std::string size_profile;         // descriptor of the size distribution
    uint64_t seed = 0;

    void validate() const {
        if (n <= 0 || k <= 0 || k > n) throw std::invalid_argument("instance: need 0 < k <= n");
        if (static_cast<int>(labels.size()) != n)
            throw std::invalid_argument("instance: labels size mismatch");
        std::vector<char> seen(k, 0);
        for (int lbl : labels) {
            if (lbl < 0 || lbl >= k) throw std::invalid_argument("instance: label out of range");
            seen[lbl] = 1;
        }
        for (char s : seen)
            if (!s) throw std::invalid_argument("instance: empty cluster id");
    }

    std::vector<std::vector<VertexId>> clusters() const {
        std::vector<std::vector<VertexId>> out(k);
        for (int v = 0; v < n; ++v) out[labels[v]].push_back(v);
        return out;
    }
};

// An algorithm's output partition. Cluster ids are dense from 0 and every
// vertex is assigned to exactly one cluster.
struct Clustering {
    std::vector<int> assignment;
    int num_clusters = 0;

    Clustering() = default;

    explicit Clustering(std::vector<int> assign) : assignment(std::move(assign)) {
        if (assignment.empty()) throw std::invalid_argument("clustering: empty assignment");
        int maxid = -1;
        for (int c : assignment) {
            if (c < 0) throw std::invalid_argument("clustering: negative cluster id");
            maxid = std::max(maxid, c);
        }
        num_clusters = maxid + 1;
        std::vector<char> seen(num_clusters, 0);
        for (int c : assignment) seen[c] = 1;
        for (char s : seen)
            if (!s) throw std::invalid_argument("clustering: cluster ids not dense");
    }

    static Clustering from_clusters(int n, const std::vector<std::vector<VertexId>>& clusters) {
        std::vector<int> assign(n, -1);
        int next = 0;
        for (const auto& cl : clusters) {
            if (cl.empty()) continue;
            for (VertexId v : cl) {
                if (v < 0 || v >= n) throw std::invalid_argument("clustering: vertex out of range");
                if (assign[v] != -1) throw std::invalid_argument("clustering: vertex assigned twice");
                assign[v] = next;
            }
            ++next;
        }
        for (int a : assign)
            if (a == -1) throw std::invalid_argument("clustering: unassigned vertex");
        return Clustering(std::move(assign));
    }

    int n() const { return static_cast<int>(assignment.size()); }

    std::vector<std::vector<VertexId>> clusters() const {
        std::vector<std::vector<VertexId>> out(num_clusters);
        for (int v = 0; v < n(); ++v) out[assignment[v]].push_back(v);
        return out;
    }

    // Canonical form: clusters sorted by their minimum vertex id, members
    // ascending. Two partitions are equal up to relabeling iff their
    // canonical forms are identical.
    std::vector<std::vector<VertexId>> canonical() const {
        auto cl = clusters();
        std::sort(cl.begin(), cl.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        return cl;
    }
};

// Signed graph over a subset of vertices; edge weights are +1/-1 oracle
// answers keyed by unordered pair.
struct SignedGraph {
    std::vector<VertexId> vertices;  // ascending
    std::unordered_map<uint64_t, int8_t> weights;

    bool has_vertex(VertexId v) const {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    }

    void add_vertex(VertexId v) {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it != vertices.end() && *it == v) throw std::invalid_argument("signed graph: duplicate vertex");
        vertices.insert(it, v);
    }

    void set_weight(VertexId u, VertexId v, int w) {
        if (u == v) throw std::invalid_argument("signed graph: self-loop");
        if (w != 1 && w != -1) throw std::invalid_argument("signed graph: weight must be +1/-1");
        if (!has_vertex(u) || !has_vertex(v))
            throw std::invalid_argument("signed graph: endpoint not present");
        weights[pair_key(u, v)] = static_cast<int8_t>(w);
    }

    // 0 when the pair was never assigned a weight.
    int weight(VertexId u, VertexId v) const {
        auto it = weights.find(pair_key(u, v));
        return it == weights.end() ? 0 : it->second;
    }

    void remove_vertex(VertexId v) {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it == vertices.end() || *it != v) return;
        vertices.erase(it);
        for (VertexId u : vertices) weights.erase(pair_key(u, v));
    }

    size_t size() const { return vertices.size(); }
};

// Query accounting: distinct pairs asked plus batch-round bookkeeping.
struct QueryLedger {
    std::unordered_set<uint64_t> asked;
    long query_count = 0;
    int round_count = 0;
    std::vector<long> per_round_sizes;

    // Returns true when the pair is new.
    bool record(VertexId u, VertexId v) {
        bool fresh = asked.insert(pair_key(u, v)).second;
        if (fresh) ++query_count;
        return fresh;
    }

    bool was_asked(VertexId u, VertexId v) const { return asked.count(pair_key(u, v)) > 0; }

    void record_round(long batch_size) {
        ++round_count;
        per_round_sizes.push_back(batch_size);
    }
};

// Cost/accuracy record of one algorithm run.
struct RunReport {
    std::string algorithm;
    int n = 0;
    int k = 0;
    double p = 0.0;
    long query_count = 0;
    int round_count = 0;
    bool exact_recovery = false;
    double big_cluster_recall = 0.0;
    double bound_ratio = 0.0;
    double wall_time = 0.0;
    uint64_t seed = 0;
};

struct ComparisonResult {
    bool exact = false;
    double big_cluster_recall = 0.0;
};

// Compares a found partition against the ground truth. exact is label-
// invariant; recall counts truth clusters of size >= size_threshold that
// are reproduced verbatim, and defaults to 1 when no truth cluster meets
// the threshold.
inline ComparisonResult compare_clusterings(const Clustering& found, const Instance& truth,
                                            int size_threshold) {
    if (found.n() != truth.n) throw std::invalid_argument("compare_clusterings: vertex count mismatch");

    auto found_cl = found.canonical();
    Clustering truth_as(std::vector<int>(truth.labels));
    auto truth_cl = truth_as.canonical();

    ComparisonResult result;
    result.exact = found_cl == truth_cl;

    // Canonical clusters are disjoint and sorted by minimum member, so a
    // truth cluster is reproduced iff the found cluster sharing its first
    // vertex is identical.
    auto reproduced = [&](const std::vector<VertexId>& cl) {
        auto it = std::lower_bound(found_cl.begin(), found_cl.end(), cl.front(),
                                   [](const auto& a, VertexId v) { return a.front() < v; });
        return it != found_cl.end() && *it == cl;
    };

    long big = 0, recovered = 0;
    for (const auto& cl : truth_cl) {
        if (static_cast<int>(cl.size()) < size_threshold) continue;
        ++big;
        if (reproduced(cl)) ++recovered;
    }
    result.big_cluster_recall = big == 0 ? 1.0 : static_cast<double>(recovered) / static_cast<double>(big);
    return result;
}

}  // namespace queryclust
