#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "queryclust/core.hpp"
#include "queryclust/rng.hpp"
#include "queryclust/stats.hpp"

namespace queryclust {

// Cluster-size distribution presets.
struct SizeProfile {
    enum class Kind { balanced, skewed, powerlaw };
    Kind kind = Kind::balanced;
    double param = 0.0;  // skew ratio or power-law alpha

    static SizeProfile balanced() { return {Kind::balanced, 0.0}; }
    static SizeProfile skewed(double ratio) {
        if (ratio < 1.0) throw std::invalid_argument("skewed profile: ratio must be >= 1");
        return {Kind::skewed, ratio};
    }
    static SizeProfile powerlaw(double alpha) {
        if (alpha <= 0.0) throw std::invalid_argument("powerlaw profile: alpha must be positive");
        return {Kind::powerlaw, alpha};
    }

    std::string describe() const {
        switch (kind) {
            case Kind::balanced: return "balanced";
            case Kind::skewed: return "skewed(" + std::to_string(param) + ")";
            case Kind::powerlaw: return "powerlaw(" + std::to_string(param) + ")";
        }
        return "?";
    }

    // Deterministic sizes: each >= 1, summing to n.
    std::vector<int> sizes(int n, int k) const {
        if (k <= 0 || k > n) throw std::invalid_argument("size profile: need 0 < k <= n");
        std::vector<int> out(k, 1);
        if (kind == Kind::balanced) {
            int base = n / k, rem = n % k;
            for (int i = 0; i < k; ++i) out[i] = base + (i < rem ? 1 : 0);
            return out;
        }
        std::vector<double> weight(k);
        for (int i = 0; i < k; ++i) {
            if (kind == Kind::skewed)
                weight[i] = k == 1 ? 1.0 : 1.0 + (param - 1.0) * static_cast<double>(i) / (k - 1);
            else
                weight[i] = std::pow(static_cast<double>(i + 1), -param);
        }
        double total = 0.0;
        for (double w : weight) total += w;
        int assigned = 0;
        for (int i = 0; i < k; ++i) {
            out[i] = std::max(1, static_cast<int>(std::floor(n * weight[i] / total)));
            assigned += out[i];
        }
        // Distribute the rounding remainder over the largest clusters.
        int idx = 0;
        while (assigned < n) {
            ++out[idx % k];
            ++assigned;
            ++idx;
        }
        while (assigned > n) {
            int j = idx % k;
            if (out[j] > 1) {
                --out[j];
                --assigned;
            }
            ++idx;
        }
        return out;
    }
};

inline Instance gen_instance(int n, int k, const SizeProfile& profile, uint64_t seed) {
    auto sizes = profile.sizes(n, k);
    Instance inst;
    inst.n = n;
    inst.k = k;
    inst.size_profile = profile.describe();
    inst.seed = seed;
    inst.labels.reserve(n);
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < sizes[c]; ++i) inst.labels.push_back(c);
    rng::Sequence seq(rng::mix(seed, 0x696e7374ULL));  // "inst"
    seq.shuffle(inst.labels);
    inst.validate();
    return inst;
}

// Symmetric similarity matrix over a fixed support grid; entries stored as
// grid indices in the strict lower triangle (diagonal unused).
struct SideInfoMatrix {
    int n = 0;
    std::vector<double> support;
    std::vector<uint8_t> idx;  // row-major lower triangle, u > v

    static size_t tri(VertexId u, VertexId v) {
        if (u < v) std::swap(u, v);
        return static_cast<size_t>(u) * (static_cast<size_t>(u) - 1) / 2 + static_cast<size_t>(v);
    }

    uint8_t index(VertexId u, VertexId v) const { return idx[tri(u, v)]; }
    double value(VertexId u, VertexId v) const { return support[idx[tri(u, v)]]; }
    size_t grid_size() const { return support.size(); }
};

// One independent draw per unordered pair: from f_plus when the endpoints
// share a ground-truth cluster, else from f_minus. Keyed by (seed, u, v) so
// generation order cannot matter.
inline SideInfoMatrix gen_sideinfo(const Instance& inst, const Pmf& f_plus, const Pmf& f_minus,
                                   uint64_t seed) {
    stats::require_same_support(f_plus, f_minus);
    if (f_plus.size() > 256) throw std::invalid_argument("gen_sideinfo: grid too large");
    SideInfoMatrix w;
    w.n = inst.n;
    w.support = f_plus.support;
    w.idx.resize(static_cast<size_t>(inst.n) * (inst.n - 1) / 2);

    const size_t q = f_plus.size();
    std::vector<double> cdf_plus(q), cdf_minus(q);
    double acc_p = 0.0, acc_m = 0.0;
    for (size_t i = 0; i < q; ++i) {
        acc_p += f_plus.mass[i];
        acc_m += f_minus.mass[i];
        cdf_plus[i] = acc_p;
        cdf_minus[i] = acc_m;
    }

    for (VertexId u = 1; u < inst.n; ++u) {
        for (VertexId v = 0; v < u; ++v) {
            double r = rng::pair_unit(seed, u, v);
            const std::vector<double>& cdf =
                inst.labels[u] == inst.labels[v] ? cdf_plus : cdf_minus;
            uint8_t cell = 0;
            while (cell + 1 < q && r >= cdf[cell]) ++cell;
            w.idx[SideInfoMatrix::tri(u, v)] = cell;
        }
    }
    return w;
}

// Quantization of the perturbed-uniform density pair onto grid_size
// equal-width cells: f_minus has density 1+eps on [0,1/2) and 1-eps on
// [1/2,1]; f_plus is the mirror image. Support points are cell midpoints.
inline std::pair<Pmf, Pmf> example2_pmfs(double eps, int grid_size) {
    if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("example2_pmfs: eps in [0,1) required");
    if (grid_size < 2 || grid_size > 256)
        throw std::invalid_argument("example2_pmfs: grid_size in [2,256] required");
    std::vector<double> support(grid_size), minus_mass(grid_size), plus_mass(grid_size);
    double width = 1.0 / grid_size;
    for (int j = 0; j < grid_size; ++j) {
        double lo = j * width, hi = (j + 1) * width;
        support[j] = 0.5 * (lo + hi);
        double below = std::min(hi, 0.5) - std::min(lo, 0.5);  // cell length left of 1/2
        double above = (hi - lo) - below;
        minus_mass[j] = (1.0 + eps) * below + (1.0 - eps) * above;
        plus_mass[j] = (1.0 - eps) * below + (1.0 + eps) * above;
    }
    return {Pmf(support, plus_mass), Pmf(support, minus_mass)};
}

// Two-point pair with exact mean gap: support {1/2 - s/2, 1/2 + s/2} with
// s = gap/(1-2*flip); f_plus puts mass 1-flip on the high point, f_minus
// mirrors it. flip = 0 gives point masses.
inline std::pair<Pmf, Pmf> twopoint_pmfs(double gap, double flip) {
    if (gap <= 0.0) throw std::invalid_argument("twopoint_pmfs: gap must be positive");
    if (flip < 0.0 || flip >= 0.5) throw std::invalid_argument("twopoint_pmfs: flip in [0,1/2) required");
    double s = gap / (1.0 - 2.0 * flip);
    if (s > 1.0) throw std::invalid_argument("twopoint_pmfs: gap too large for flip");
    std::vector<double> support{0.5 - s / 2.0, 0.5 + s / 2.0};
    return {Pmf(support, {flip, 1.0 - flip}), Pmf(support, {1.0 - flip, flip})};
}

// Degenerate noiseless pair: point masses at 1 and 0 (encoded on a shared
// two-point grid).
inline std::pair<Pmf, Pmf> pointmass_pmfs() {
    std::vector<double> support{0.0, 1.0};
    return {Pmf(support, {0.0, 1.0}), Pmf(support, {1.0, 0.0})};
}

}  // namespace queryclust
