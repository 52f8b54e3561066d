#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "queryclust/core.hpp"
#include "queryclust/rng.hpp"

namespace queryclust {

struct OracleSpec {
    enum class Mode { perfect, faulty };
    Mode mode = Mode::perfect;
    double p = 0.0;  // flip probability, < 1/2 strictly
    uint64_t seed = 0;

    static OracleSpec perfect(uint64_t seed) { return {Mode::perfect, 0.0, seed}; }
    static OracleSpec faulty(double p, uint64_t seed) {
        if (p < 0.0 || p >= 0.5)
            throw std::invalid_argument("oracle: error rate must lie in [0, 1/2)");
        return {Mode::faulty, p, seed};
    }

    double lambda() const { return 0.5 - p; }
};

using QueryPair = std::pair<VertexId, VertexId>;

// The only channel through which algorithms observe the hidden partition.
// Faulty answers are drawn once per pair, keyed by (seed, u, v), and
// memoized: re-asking returns the stored answer and is never recounted
// (the no-resampling model). Batched rounds enforce the configured cap.
class OracleSession {
public:
    OracleSession(const Instance& truth, OracleSpec spec,
                  std::optional<long> round_cap = std::nullopt)
        : truth_(&truth), spec_(spec), round_cap_(round_cap) {
        truth.validate();
    }

    int n() const { return truth_->n; }
    double error_rate() const { return spec_.p; }
    bool is_perfect() const { return spec_.mode == OracleSpec::Mode::perfect; }
    std::optional<long> round_cap() const { return round_cap_; }
    const QueryLedger& ledger() const { return ledger_; }

    bool asked(VertexId u, VertexId v) const { return ledger_.was_asked(u, v); }

    int query(VertexId u, VertexId v) {
        check_pair(u, v);
        uint64_t key = pair_key(u, v);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        int answer = draw_answer(u, v);
        memo_.emplace(key, static_cast<int8_t>(answer));
        ledger_.record(u, v);
        return answer;
    }

    // Submits one adaptive round. Pairs must be chosen before any answer in
    // the batch is seen; an empty batch consumes no round.
    std::vector<int> batch_query(std::span<const QueryPair> pairs) {
        if (!round_cap_) throw std::logic_error("batch_query: no round cap configured");
        if (static_cast<long>(pairs.size()) > *round_cap_)
            throw std::invalid_argument("batch_query: batch exceeds round cap");
        for (const auto& [u, v] : pairs) check_pair(u, v);
        if (pairs.empty()) return {};
        std::vector<int> answers;
        answers.reserve(pairs.size());
        for (const auto& [u, v] : pairs) answers.push_back(query(u, v));
        ledger_.record_round(static_cast<long>(pairs.size()));
        return answers;
    }

private:
    void check_pair(VertexId u, VertexId v) const {
        if (u == v) throw std::invalid_argument("oracle: self-query");
        if (u < 0 || v < 0 || u >= truth_->n || v >= truth_->n)
            throw std::invalid_argument("oracle: vertex out of range");
    }

    int draw_answer(VertexId u, VertexId v) const {
        bool same = truth_->labels[u] == truth_->labels[v];
        int sign = same ? 1 : -1;
        if (spec_.mode == OracleSpec::Mode::faulty && spec_.p > 0.0) {
            if (rng::pair_unit(spec_.seed, u, v) < spec_.p) sign = -sign;
        }
        return sign;
    }

    const Instance* truth_;  // sealed: never exposed to callers
    OracleSpec spec_;
    std::optional<long> round_cap_;
    std::unordered_map<uint64_t, int8_t> memo_;
    QueryLedger ledger_;
};

inline long default_round_cap(int n) {
    return static_cast<long>(std::ceil(n * std::log2(static_cast<double>(n))));
}

inline long default_sample_size(int n) {
    return static_cast<long>(std::ceil(std::sqrt(n * std::log2(static_cast<double>(n)))));
}

}  // namespace queryclust
