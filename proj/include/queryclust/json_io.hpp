#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "queryclust/core.hpp"
#include "queryclust/stats.hpp"
#include "queryclust/synth.hpp"

namespace queryclust {

using json = nlohmann::json;

inline json to_json(const Instance& inst) {
    return json{{"n", inst.n},
                {"k", inst.k},
                {"labels", inst.labels},
                {"size_profile", inst.size_profile},
                {"seed", inst.seed}};
}

inline Instance instance_from_json(const json& j) {
    Instance inst;
    inst.n = j.at("n").get<int>();
    inst.k = j.at("k").get<int>();
    inst.labels = j.at("labels").get<std::vector<int>>();
    inst.size_profile = j.value("size_profile", "unknown");
    inst.seed = j.value("seed", 0ULL);
    inst.validate();
    return inst;
}

inline json to_json(const Clustering& c) { return json{{"assignment", c.assignment}}; }

inline Clustering clustering_from_json(const json& j) {
    return Clustering(j.at("assignment").get<std::vector<int>>());
}

inline json to_json(const Pmf& p) { return json{{"support", p.support}, {"mass", p.mass}}; }

inline Pmf pmf_from_json(const json& j) {
    return Pmf(j.at("support").get<std::vector<double>>(), j.at("mass").get<std::vector<double>>());
}

inline json to_json(const QueryLedger& ledger) {
    return json{{"query_count", ledger.query_count},
                {"round_count", ledger.round_count},
                {"per_round_sizes", ledger.per_round_sizes}};
}

inline json to_json(const RunReport& r, bool emit_wall_time = true) {
    return json{{"algorithm", r.algorithm},
                {"n", r.n},
                {"k", r.k},
                {"p", r.p},
                {"seed", r.seed},
                {"query_count", r.query_count},
                {"round_count", r.round_count},
                {"exact_recovery", r.exact_recovery},
                {"big_cluster_recall", r.big_cluster_recall},
                {"bound_ratio", r.bound_ratio},
                {"wall_time", emit_wall_time ? r.wall_time : 0.0}};
}

// Side-info matrix container: magic, version, n, grid, support values,
// then the strict lower triangle of grid indices row-major.
inline void write_sideinfo(std::ostream& out, const SideInfoMatrix& w) {
    const char magic[4] = {'Q', 'C', 'S', 'I'};
    uint32_t version = 1, n = static_cast<uint32_t>(w.n), q = static_cast<uint32_t>(w.grid_size());
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&q), 4);
    out.write(reinterpret_cast<const char*>(w.support.data()),
              static_cast<std::streamsize>(q * sizeof(double)));
    out.write(reinterpret_cast<const char*>(w.idx.data()),
              static_cast<std::streamsize>(w.idx.size()));
    if (!out) throw std::runtime_error("sideinfo: write failed");
}

inline SideInfoMatrix read_sideinfo(std::istream& in) {
    char magic[4];
    uint32_t version = 0, n = 0, q = 0;
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "QCSI") throw std::runtime_error("sideinfo: bad magic");
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&q), 4);
    if (!in || version != 1) throw std::runtime_error("sideinfo: unsupported version");
    SideInfoMatrix w;
    w.n = static_cast<int>(n);
    w.support.resize(q);
    in.read(reinterpret_cast<char*>(w.support.data()),
            static_cast<std::streamsize>(q * sizeof(double)));
    w.idx.resize(static_cast<size_t>(n) * (n - 1) / 2);
    in.read(reinterpret_cast<char*>(w.idx.data()), static_cast<std::streamsize>(w.idx.size()));
    if (!in) throw std::runtime_error("sideinfo: truncated file");
    for (uint8_t cell : w.idx)
        if (cell >= q) throw std::runtime_error("sideinfo: index out of grid");
    return w;
}

inline void write_sideinfo_csv(std::ostream& out, const SideInfoMatrix& w) {
    for (int u = 0; u < w.n; ++u) {
        for (int v = 0; v < w.n; ++v) {
            if (v) out << ',';
            out << (u == v ? 0.0 : w.value(u, v));
        }
        out << '\n';
    }
}

}  // namespace queryclust
