#pragma once

// Test-only utilities: seeded random pmf generation and independent
// reference solvers used as oracles against the library implementations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "queryclust/rng.hpp"
#include "queryclust/stats.hpp"

namespace qctest {

using queryclust::Pmf;
namespace rng = queryclust::rng;

// Random pmf on a jittered equal-spaced support; every mass is at least
// min_mass exactly (mixture with the uniform distribution).
inline Pmf random_pmf(rng::Sequence& seq, int q, double min_mass = 0.0,
                      const std::vector<double>* fixed_support = nullptr) {
    std::vector<double> support(q), mass(q);
    if (fixed_support) {
        support = *fixed_support;
    } else {
        for (int i = 0; i < q; ++i)
            support[i] = (i + 0.5 + 0.4 * (seq.unit() - 0.5)) / static_cast<double>(q);
    }
    double total = 0.0;
    for (int i = 0; i < q; ++i) {
        mass[i] = seq.unit() + 1e-3;
        total += mass[i];
    }
    double beta = min_mass * q;
    for (int i = 0; i < q; ++i) mass[i] = min_mass + (1.0 - beta) * mass[i] / total;
    return Pmf(support, mass);
}

inline double kl_direct(const std::vector<double>& p, const std::vector<double>& q) {
    double sum = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        sum += p[i] * std::log(p[i] / q[i]);
    }
    return sum;
}

// Reference solver for min D(p||f+) subject to D(p||f+) = D(p||f-).
// The constraint sum_i p_i ln(f-_i/f+_i) = 0 is linear in p, so the
// feasible set is a hyperplane slice of the simplex: a segment for 3-point
// supports and a polygon for 4-point supports. Scans it directly and
// refines; fully independent of the tilted-family implementation.
namespace chernoff_oracle {

inline double objective(const std::vector<double>& p, const Pmf& f_plus) {
    return kl_direct(p, f_plus.mass);
}

// 3-point support: parametrize p = (x, y(x), 1-x-y) on the constraint
// line, scan x, then ternary-search (the objective is convex along any
// line).
inline double solve3(const Pmf& f_plus, const Pmf& f_minus) {
    double a0 = std::log(f_minus.mass[0] / f_plus.mass[0]);
    double a1 = std::log(f_minus.mass[1] / f_plus.mass[1]);
    double a2 = std::log(f_minus.mass[2] / f_plus.mass[2]);
    // Constraint: a0 x + a1 y + a2 (1-x-y) = 0.
    auto y_of = [&](double x) { return (-a2 - (a0 - a2) * x) / (a1 - a2); };
    auto feasible = [&](double x, double& y) {
        y = y_of(x);
        return x >= 0.0 && y >= -1e-15 && x + y <= 1.0 + 1e-15;
    };
    auto eval = [&](double x) {
        double y;
        if (!feasible(x, y)) return std::numeric_limits<double>::infinity();
        y = std::max(y, 0.0);
        double z = std::max(1.0 - x - y, 0.0);
        return objective({x, y, z}, f_plus);
    };

    if (std::abs(a1 - a2) < 1e-14) {
        // Degenerate slope: x is pinned by the constraint instead.
        // a0 x + a1 (1-x) = 0 -> x = a1/(a1-a0); scan y.
        if (std::abs(a1 - a0) < 1e-14) return 0.0;  // f+ == f- up to rounding
        double x = a1 / (a1 - a0);
        if (x < 0.0 || x > 1.0) return std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 200000; ++i) {
            double y = (1.0 - x) * i / 200000.0;
            best = std::min(best, objective({x, y, 1.0 - x - y}, f_plus));
        }
        return best;
    }

    const int steps = 200000;
    double best_x = -1.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        double x = static_cast<double>(i) / steps;
        double val = eval(x);
        if (val < best) {
            best = val;
            best_x = x;
        }
    }
    if (best_x < 0.0) return best;
    double lo = std::max(0.0, best_x - 2.0 / steps), hi = std::min(1.0, best_x + 2.0 / steps);
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (eval(m1) <= eval(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::min(best, eval(0.5 * (lo + hi)));
}

// 4-point support: solve the constraint for the third coordinate on a
// (x, y) grid and refine the window around the best cell.
inline double solve4(const Pmf& f_plus, const Pmf& f_minus) {
    double a[4];
    for (int i = 0; i < 4; ++i) a[i] = std::log(f_minus.mass[i] / f_plus.mass[i]);
    if (std::abs(a[2] - a[3]) < 1e-12) {
        // Rare degenerate orientation; permute coordinates so the solved
        // coordinate has a nonzero pivot.
        std::vector<int> perm{0, 1, 2, 3};
        for (int i = 0; i < 3; ++i)
            if (std::abs(a[i] - a[3]) > 1e-12) {
                std::swap(perm[i], perm[2]);
                break;
            }
        Pmf fp2 = f_plus, fm2 = f_minus;
        for (int i = 0; i < 4; ++i) {
            fp2.mass[i] = f_plus.mass[perm[i]];
            fm2.mass[i] = f_minus.mass[perm[i]];
        }
        if (std::abs(std::log(fm2.mass[2] / fp2.mass[2]) - std::log(fm2.mass[3] / fp2.mass[3])) <
            1e-12)
            return 0.0;
        return solve4(fp2, fm2);
    }

    auto eval = [&](double x, double y) {
        double z = (-a[3] - (a[0] - a[3]) * x - (a[1] - a[3]) * y) / (a[2] - a[3]);
        if (x < 0.0 || y < 0.0 || z < -1e-14) return std::numeric_limits<double>::infinity();
        z = std::max(z, 0.0);
        double w = 1.0 - x - y - z;
        if (w < -1e-14) return std::numeric_limits<double>::infinity();
        w = std::max(w, 0.0);
        return objective({x, y, z, w}, f_plus);
    };

    double cx = 0.5, cy = 0.5, half = 0.5;
    double best = std::numeric_limits<double>::infinity();
    const int grid = 120;
    for (int round = 0; round < 14; ++round) {
        double bx = cx, by = cy;
        for (int i = 0; i <= grid; ++i) {
            for (int j = 0; j <= grid; ++j) {
                double x = cx - half + 2.0 * half * i / grid;
                double y = cy - half + 2.0 * half * j / grid;
                double val = eval(x, y);
                if (val < best) {
                    best = val;
                    bx = x;
                    by = y;
                }
            }
        }
        cx = bx;
        cy = by;
        half = half * 4.0 / grid;  // keep a couple of cells of slack
    }
    return best;
}

inline double solve(const Pmf& f_plus, const Pmf& f_minus) {
    if (f_plus.size() == 2) {
        // One free coordinate; the constraint pins it outright.
        double a0 = std::log(f_minus.mass[0] / f_plus.mass[0]);
        double a1 = std::log(f_minus.mass[1] / f_plus.mass[1]);
        if (std::abs(a0 - a1) < 1e-14) return 0.0;
        double x = a1 / (a1 - a0);  // a0 x + a1 (1-x) = 0
        if (x < 0.0 || x > 1.0) return std::numeric_limits<double>::infinity();
        return objective({x, 1.0 - x}, f_plus);
    }
    if (f_plus.size() == 3) return solve3(f_plus, f_minus);
    if (f_plus.size() == 4) return solve4(f_plus, f_minus);
    throw std::invalid_argument("chernoff oracle: support size not covered");
}

}  // namespace chernoff_oracle

// Brute-force heaviest subgraph by subset enumeration with the library's
// tie preference (weight, then size, then lexicographic members).
struct BruteSubgraph {
    std::vector<int> vertices;
    long weight = 0;
};

inline BruteSubgraph brute_force_subgraph(const std::vector<std::vector<int>>& w) {
    int m = static_cast<int>(w.size());
    BruteSubgraph best;  // empty set
    std::vector<int> members;
    for (uint32_t mask = 0; mask < (1u << m); ++mask) {
        members.clear();
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) members.push_back(i);
        long weight = 0;
        for (size_t i = 0; i < members.size(); ++i)
            for (size_t j = i + 1; j < members.size(); ++j) weight += w[members[i]][members[j]];
        bool better = weight > best.weight ||
                      (weight == best.weight && members.size() > best.vertices.size()) ||
                      (weight == best.weight && members.size() == best.vertices.size() &&
                       members < best.vertices);
        if (better) {
            best.weight = weight;
            best.vertices = members;
        }
    }
    return best;
}

// Brute-force best partition objective by enumerating assignments.
inline long brute_force_partition_objective(const std::vector<std::vector<int>>& w) {
    int m = static_cast<int>(w.size());
    std::vector<int> assign(m, 0);
    long best = std::numeric_limits<long>::min();
    std::function<void(int, int)> rec = [&](int idx, int maxid) {
        if (idx == m) {
            long obj = 0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (assign[i] == assign[j]) obj += w[i][j];
            best = std::max(best, obj);
            return;
        }
        for (int c = 0; c <= maxid + 1; ++c) {
            assign[idx] = c;
            rec(idx + 1, std::max(maxid, c));
        }
    };
    rec(0, -1);
    return best;
}

}  // namespace qctest
