#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace queryclust {

// Discrete probability mass function over a fixed, strictly increasing
// support grid in [0, 1]. All empirical distributions in this library are
// built on the same grid as the generating pmfs; supports must match
// exactly (no interpolation).
struct Pmf {
    std::vector<double> support;
    std::vector<double> mass;

    Pmf() = default;
    Pmf(std::vector<double> s, std::vector<double> m) : support(std::move(s)), mass(std::move(m)) {
        validate();
    }

    size_t size() const { return support.size(); }

    void validate() const {
        if (support.empty() || support.size() != mass.size())
            throw std::invalid_argument("pmf: support/mass size mismatch");
        double total = 0.0;
        for (size_t i = 0; i < support.size(); ++i) {
            if (mass[i] < 0.0) throw std::invalid_argument("pmf: negative mass");
            if (support[i] < 0.0 || support[i] > 1.0)
                throw std::invalid_argument("pmf: support outside [0,1]");
            if (i > 0 && support[i] <= support[i - 1])
                throw std::invalid_argument("pmf: support not strictly increasing");
            total += mass[i];
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("pmf: mass does not sum to 1");
    }

    double mean() const {
        double m = 0.0;
        for (size_t i = 0; i < support.size(); ++i) m += support[i] * mass[i];
        return m;
    }

    double min_mass() const {
        double m = mass[0];
        for (double x : mass)
            if (x < m) m = x;
        return m;
    }
};

// Mean parameters of a (f+, f-) pair for the mean-gap algorithms.
struct GapParams {
    double mu_plus = 0.0;
    double mu_minus = 0.0;

    double theta_gap() const { return mu_plus - mu_minus; }

    static GapParams from_pmfs(const Pmf& f_plus, const Pmf& f_minus) {
        return GapParams{f_plus.mean(), f_minus.mean()};
    }
};

namespace stats {

inline constexpr double kInfDivergence = std::numeric_limits<double>::infinity();

inline void require_same_support(const Pmf& p, const Pmf& q) {
    if (p.support.size() != q.support.size())
        throw std::invalid_argument("pmf supports differ in size");
    for (size_t i = 0; i < p.support.size(); ++i)
        if (p.support[i] != q.support[i])
            throw std::invalid_argument("pmf supports differ");
}

// Kullback-Leibler divergence in nats. Terms with p(i)=0 contribute 0;
// p(i)>0 with q(i)=0 yields the +infinity sentinel, which propagates
// through the symmetric divergence and the bound calculators.
inline double kl(const Pmf& p, const Pmf& q) {
    require_same_support(p, q);
    double sum = 0.0;
    for (size_t i = 0; i < p.mass.size(); ++i) {
        if (p.mass[i] <= 0.0) continue;
        if (q.mass[i] <= 0.0) return kInfDivergence;
        sum += p.mass[i] * std::log(p.mass[i] / q.mass[i]);
    }
    return sum < 0.0 ? 0.0 : sum;
}

inline double symmetric_divergence(const Pmf& p, const Pmf& q) {
    double a = kl(p, q);
    double b = kl(q, p);
    return a + b;
}

// Total variation distance: half the l1 distance between the mass vectors.
inline double tv(const Pmf& p, const Pmf& q) {
    require_same_support(p, q);
    double sum = 0.0;
    for (size_t i = 0; i < p.mass.size(); ++i) sum += std::abs(p.mass[i] - q.mass[i]);
    return 0.5 * sum;
}

// Symmetric divergence of two equal-variance Gaussians: (mu1-mu2)^2/sigma^2.
inline double gaussian_delta(double mu1, double mu2, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_delta: sigma must be positive");
    double d = (mu1 - mu2) / sigma;
    return d * d;
}

// Bernoulli divergence D(p||1-p) = (1-2p) ln((1-p)/p); infinity at p=0,
// zero at p=1/2.
inline double bsc_divergence(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("bsc_divergence: p outside [0,1]");
    if (p == 0.5) return 0.0;
    if (p == 0.0 || p == 1.0) return kInfDivergence;
    return (1.0 - 2.0 * p) * std::log((1.0 - p) / p);
}

// Exponent of the likelihood-ratio decision rule: the minimum of D(p||f+)
// over the manifold D(p||f+) = D(p||f-). Realized by bisecting the tilted
// family p_lambda(i) proportional to f+(i)^lambda * f-(i)^(1-lambda);
// the balance function is monotone in lambda.
inline double chernoff_exponent(const Pmf& f_plus, const Pmf& f_minus) {
    require_same_support(f_plus, f_minus);
    for (size_t i = 0; i < f_plus.mass.size(); ++i)
        if (f_plus.mass[i] <= 0.0 || f_minus.mass[i] <= 0.0)
            throw std::invalid_argument("chernoff_exponent: pmfs must be strictly positive");

    const size_t q = f_plus.mass.size();
    std::vector<double> tilted(q);
    auto balance_at = [&](double lambda) {
        double z = 0.0;
        for (size_t i = 0; i < q; ++i) {
            tilted[i] = std::pow(f_plus.mass[i], lambda) * std::pow(f_minus.mass[i], 1.0 - lambda);
            z += tilted[i];
        }
        double diff = 0.0;  // D(p||f+) - D(p||f-) = sum p ln(f-/f+)
        for (size_t i = 0; i < q; ++i) {
            tilted[i] /= z;
            diff += tilted[i] * std::log(f_minus.mass[i] / f_plus.mass[i]);
        }
        return diff;
    };

    double lo = 0.0, hi = 1.0;
    double d_lo = balance_at(lo);
    double d_hi = balance_at(hi);
    if (std::abs(d_lo) <= 1e-10 && std::abs(d_hi) <= 1e-10) return 0.0;  // identical pmfs
    if (d_lo < 0.0 || d_hi > 0.0) return 0.0;  // non-bracketing: no separation

    double mid = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        double d = balance_at(mid);
        if (std::abs(d) <= 1e-10) break;
        if (d > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    balance_at(mid);
    double exponent = 0.0;
    for (size_t i = 0; i < q; ++i)
        if (tilted[i] > 0.0) exponent += tilted[i] * std::log(tilted[i] / f_plus.mass[i]);
    return exponent < 0.0 ? 0.0 : exponent;
}

// Sample-count thresholds. desk_scale (default 1) shrinks the paper-scale
// constants so experiments fit desk-size n without touching the formulas.

inline long threshold_M_mean(long n, double theta_gap, double desk_scale = 1.0) {
    if (theta_gap <= 0.0) throw std::invalid_argument("threshold_M_mean: theta_gap must be positive");
    if (n < 2) throw std::invalid_argument("threshold_M_mean: n too small");
    return static_cast<long>(std::ceil(desk_scale * 6.0 * std::log(static_cast<double>(n)) /
                                       (theta_gap * theta_gap)));
}

inline long threshold_M_tv(long n, double eps, double delta, double desk_scale = 1.0) {
    if (eps <= 0.0 || delta <= 0.0)
        throw std::invalid_argument("threshold_M_tv: eps and delta must be positive");
    if (n < 2) throw std::invalid_argument("threshold_M_tv: n too small");
    return static_cast<long>(
        std::ceil(desk_scale * 16.0 * std::log(static_cast<double>(n)) / (eps * delta)));
}

inline long threshold_M_div(long n, const Pmf& f_plus, const Pmf& f_minus,
                            double desk_scale = 1.0) {
    double exponent = chernoff_exponent(f_plus, f_minus);
    if (exponent <= 0.0) throw std::invalid_argument("threshold_M_div: zero exponent");
    if (n < 2) throw std::invalid_argument("threshold_M_div: n too small");
    return static_cast<long>(
        std::ceil(desk_scale * 8.0 * std::log(static_cast<double>(n)) / exponent));
}

// Constants of the faulty-oracle algorithms: c = 6/lambda^2 and c' = 6c,
// with lambda = 1/2 - p in (0, 1/2]. lambda = 1/2 is the noiseless
// degenerate case p = 0.
struct FaultyConstants {
    double c;
    double c_prime;
};

inline FaultyConstants faulty_constants(double lambda, double desk_scale = 1.0) {
    if (lambda <= 0.0 || lambda > 0.5)
        throw std::invalid_argument("faulty_constants: lambda must lie in (0, 1/2]");
    double c = desk_scale * 6.0 / (lambda * lambda);
    return FaultyConstants{c, 6.0 * c};
}

// Lower-bound reference values. The Omega constants are taken as 1; these
// are reporting references, not certified bounds.

inline double lower_bound_perfect_side(long k, double delta) {
    if (delta <= 0.0) return kInfDivergence;
    return static_cast<double>(k) * static_cast<double>(k) / delta;
}

inline double lower_bound_lasvegas(long n, long k, double delta) {
    if (delta <= 0.0) return kInfDivergence;
    double denom = delta < 1.0 ? delta : 1.0;
    return static_cast<double>(n) + static_cast<double>(k) * static_cast<double>(k) / denom;
}

inline double lower_bound_faulty(long n, long k, double p) {
    double nk = static_cast<double>(n) * static_cast<double>(k);
    if (p == 0.0) return nk;
    double d = bsc_divergence(p);
    if (d <= 0.0) return kInfDivergence;
    return nk / d;
}

}  // namespace stats
}  // namespace queryclust
