#pragma once

// Parabolic cubes Q_r(z0) = {z : ||z - z0|| < r}: a spatial box of side 2r
// per axis times a time interval of length 2r^2. Cube functionals integrate
// the piecewise-constant (cell) interpretation of a sampled field, with
// partial cells weighted by their overlap, so every functional is exact for
// constants at every radius.

#include "paralog/norms.hpp"
#include "paralog/parallel.hpp"

#include <numeric>

namespace paralog {

struct ParabolicCube {
    Point center;
    double radius = 0.0;

    int n() const { return static_cast<int>(center.size()) - 1; }

    Box box() const {
        Point half = Point::Constant(center.size(), radius);
        half[center.size() - 1] = radius * radius;
        return Box{center - half, center + half};
    }

    /// (2r)^n * 2r^2
    double volume() const { return std::pow(2.0 * radius, n()) * 2.0 * radius * radius; }

    bool contains(const ParabolicCube& o, double tol = 1e-12) const { return box().contains(o.box(), tol); }
};

/// Samples of a field restricted to a cube, with overlap weights.
struct CubeSample {
    std::vector<double> value;
    std::vector<double> weight;
    double total_weight = 0.0;

    bool empty() const { return !(total_weight > 0.0); }
};

inline void gather(const Field& u, const Box& box, CubeSample& out) {
    out.value.clear();
    out.weight.clear();
    out.total_weight = 0.0;
    const Window w = make_window(u.grid, box);
    for_each_node(u.grid, w, [&](Index k, double wt) {
        if (wt <= 0.0) return;
        out.value.push_back(u.values[k]);
        out.weight.push_back(wt);
        out.total_weight += wt;
    });
}

inline CubeSample gather(const Field& u, const ParabolicCube& Q) {
    CubeSample s;
    gather(u, Q.box(), s);
    if (s.empty()) throw DomainError("cube: no grid cell intersects the cube");
    return s;
}

inline double mean(const CubeSample& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.value.size(); ++i) acc += s.weight[i] * s.value[i];
    return acc / s.total_weight;
}

inline double mean_deviation(const CubeSample& s, double c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.value.size(); ++i) acc += s.weight[i] * std::abs(s.value[i] - c);
    return acc / s.total_weight;
}

/// Lower weighted median: the smallest sample value whose cumulative weight
/// reaches half of the total. Minimises mean_deviation over c.
inline double weighted_median(const CubeSample& s, std::vector<std::size_t>& order) {
    order.resize(s.value.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.value[a] < s.value[b]; });
    const double half = 0.5 * s.total_weight;
    double acc = 0.0;
    for (std::size_t i : order) {
        acc += s.weight[i];
        if (acc >= half) return s.value[i];
    }
    return s.value[order.back()];
}

inline double oscillation(const CubeSample& s) { return mean_deviation(s, mean(s)); }

inline double inf_oscillation(const CubeSample& s, std::vector<std::size_t>& scratch) {
    return mean_deviation(s, weighted_median(s, scratch));
}

inline double cube_mean(const Field& u, const ParabolicCube& Q) { return mean(gather(u, Q)); }

/// (1/|Q|) int_Q |u - u_Q|
inline double oscillation(const Field& u, const ParabolicCube& Q) { return oscillation(gather(u, Q)); }

/// inf_c (1/|Q|) int_Q |u - c|, attained at a weighted median.
inline double inf_oscillation(const Field& u, const ParabolicCube& Q) {
    std::vector<std::size_t> scratch;
    return inf_oscillation(gather(u, Q), scratch);
}

/// Cell-weighted measure of the part of Q covered by the grid.
inline double discrete_volume(const Grid& g, const ParabolicCube& Q) {
    double v = 0.0;
    for_each_node(g, make_window(g, Q.box()), [&](Index, double wt) { v += wt; });
    return v * g.cell_volume();
}

enum class BmoForm { Oscillation, Infimum };

inline const char* to_string(BmoForm f) { return f == BmoForm::Oscillation ? "oscillation" : "inf"; }

/// Discretisation of the sup over cubes: dyadic radii r_max 2^{-i} down to a
/// floor of `min_cells` cells per spatial axis, centres on a lattice of
/// stride `stride * r` in space and `stride * r^2` in time.
struct CubeSearchPolicy {
    double r_max = 0.0;  ///< 0 selects the largest cube fitting the domain
    double stride = 0.5;
    int min_cells = 3;

    void validate() const {
        if (!(stride > 0.0 && stride <= 1.0)) throw DomainError("cube policy: stride must lie in (0, 1]");
        if (min_cells < 1) throw DomainError("cube policy: min_cells must be positive");
        if (r_max < 0.0) throw DomainError("cube policy: r_max must be nonnegative");
    }
};

inline std::vector<double> radius_ladder(const Grid& g, const Box& domain, const CubeSearchPolicy& policy) {
    policy.validate();
    const int n = g.n();
    double fit = kInf;
    double hmax = 0.0;
    for (int a = 0; a < n; ++a) {
        fit = std::min(fit, 0.5 * (domain.hi[a] - domain.lo[a]));
        hmax = std::max(hmax, g.spacing(a));
    }
    fit = std::min(fit, std::sqrt(0.5 * (domain.hi[n] - domain.lo[n])));
    const double top = policy.r_max > 0.0 ? std::min(policy.r_max, fit) : fit;
    const double floor = 0.5 * policy.min_cells * hmax;
    std::vector<double> radii;
    for (double r = top; r >= floor * (1.0 - 1e-12); r *= 0.5) radii.push_back(r);
    return radii;
}

inline std::vector<double> centre_positions(double lo, double hi, double half, double step) {
    std::vector<double> c;
    const double first = lo + half, last = hi - half;
    if (last < first - 1e-12) return c;
    const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
    for (long k = 0; k <= count; ++k) c.push_back(first + static_cast<double>(k) * step);
    if (c.back() < last - 1e-12 * std::max(1.0, std::abs(last))) c.push_back(last);
    return c;
}

/// Deterministic cube family for (domain, policy); every cube lies inside
/// the domain.
inline std::vector<ParabolicCube> cube_family(const Grid& g, const Box& domain, const CubeSearchPolicy& policy) {
    if (!Box::of(g).contains(domain, 1e-9)) throw DomainError("cube family: domain is not inside the grid");
    std::vector<ParabolicCube> family;
    const int A = g.axes();
    for (double r : radius_ladder(g, domain, policy)) {
        std::vector<std::vector<double>> centres(static_cast<std::size_t>(A));
        for (int a = 0; a < A; ++a) {
            const double half = a == g.time_axis() ? r * r : r;
            centres[static_cast<std::size_t>(a)] = centre_positions(domain.lo[a], domain.hi[a], half, policy.stride * half);
        }
        std::vector<std::size_t> idx(static_cast<std::size_t>(A), 0);
        bool any = true;
        for (const auto& c : centres) any = any && !c.empty();
        if (!any) continue;
        for (;;) {
            ParabolicCube Q{Point(A), r};
            for (int a = 0; a < A; ++a) Q.center[a] = centres[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
            family.push_back(std::move(Q));
            int a = A - 1;
            for (; a >= 0; --a) {
                const auto ua = static_cast<std::size_t>(a);
                if (++idx[ua] < centres[ua].size()) break;
                idx[ua] = 0;
            }
            if (a < 0) break;
        }
    }
    return family;
}

struct BmoResult {
    double value = 0.0;
    ParabolicCube argmax;
    std::size_t cubes = 0;
    BmoForm form = BmoForm::Oscillation;
    CubeSearchPolicy policy;
    std::vector<double> radii;
};

/// Max of the per-cube functional over an explicit cube list. Ties resolve
/// to the first cube in list order, so the result is thread-count
/// independent.
inline BmoResult bmo_over(const Field& u, const std::vector<ParabolicCube>& cubes, BmoForm form) {
    if (cubes.empty()) throw DomainError("bmo: empty cube family (domain smaller than the minimum cube)");
    const unsigned workers = thread_count();
    std::vector<double> best(workers, -1.0);
    std::vector<std::size_t> where(workers, 0);
    parallel_chunks(cubes.size(), [&](std::size_t b, std::size_t e, unsigned w) {
        CubeSample s;
        std::vector<std::size_t> scratch;
        for (std::size_t i = b; i < e; ++i) {
            gather(u, cubes[i].box(), s);
            if (s.empty()) continue;
            const double v = form == BmoForm::Oscillation ? oscillation(s) : inf_oscillation(s, scratch);
            if (v > best[w]) {
                best[w] = v;
                where[w] = i;
            }
        }
    });
    BmoResult r;
    r.form = form;
    r.cubes = cubes.size();
    double v = -1.0;
    std::size_t at = 0;
    for (unsigned w = 0; w < workers; ++w)
        if (best[w] > v || (best[w] == v && where[w] < at)) {
            v = best[w];
            at = where[w];
        }
    r.value = std::max(v, 0.0);
    r.argmax = cubes[at];
    return r;
}

inline BmoResult bmo_norm(const Field& u, const Box& domain, const CubeSearchPolicy& policy = {},
                          BmoForm form = BmoForm::Oscillation) {
    auto r = bmo_over(u, cube_family(u.grid, domain, policy), form);
    r.policy = policy;
    r.radii = radius_ladder(u.grid, domain, policy);
    return r;
}

inline BmoResult bmo_norm(const Field& u, const CubeSearchPolicy& policy = {}, BmoForm form = BmoForm::Oscillation) {
    return bmo_norm(u, Box::of(u.grid), policy, form);
}

struct OverlineBmo {
    double bmo = 0.0;
    double l1 = 0.0;
    double value = 0.0;  ///< bmo + l1
};

/// inf-form BMO plus the L^1 norm over the domain.
inline OverlineBmo overline_bmo_norm(const Field& u, const Box& domain, const CubeSearchPolicy& policy = {}) {
    OverlineBmo r;
    r.bmo = bmo_norm(u, domain, policy, BmoForm::Infimum).value;
    r.l1 = lp_norm(u, 1.0, domain);
    r.value = r.bmo + r.l1;
    return r;
}

struct MeanEstimateReport {
    int steps = 0;             ///< i with r_outer = 2^i r_inner
    double difference = 0.0;   ///< |u_outer - u_inner|
    double bmo = 0.0;          ///< oscillation-form BMO used in the bound
    double bound = 0.0;        ///< i (1 + 2^{n+2}) bmo
    double slack = 0.02;
    bool violated = false;
    std::vector<ParabolicCube> chain;
};

/// Nested chain inner = Q^0 ⊆ Q^1 ⊆ ... ⊆ Q^i = outer with doubling radii.
/// Centres move linearly in r (space) and r^2 (time), which keeps each link
/// nested whenever the end points are.
inline std::vector<ParabolicCube> doubling_chain(const ParabolicCube& inner, const ParabolicCube& outer, int steps) {
    std::vector<ParabolicCube> chain;
    const Index T = inner.center.size() - 1;
    const double dr = outer.radius - inner.radius;
    const double dr2 = outer.radius * outer.radius - inner.radius * inner.radius;
    for (int k = 0; k <= steps; ++k) {
        const double r = k == steps ? outer.radius : inner.radius * std::ldexp(1.0, k);
        ParabolicCube Q{inner.center, r};
        const double fs = dr > 0.0 ? (r - inner.radius) / dr : 0.0;
        const double ft = dr2 > 0.0 ? (r * r - inner.radius * inner.radius) / dr2 : 0.0;
        Q.center.head(T) += fs * (outer.center.head(T) - inner.center.head(T));
        Q.center[T] += ft * (outer.center[T] - inner.center[T]);
        chain.push_back(std::move(Q));
    }
    return chain;
}

/// |u_outer - u_inner| <= i (1 + 2^{n+2}) ||u||_BMO for nested cubes with
/// radius ratio 2^i. The BMO value is the search-family sup together with
/// the chain cubes themselves.
inline MeanEstimateReport mean_estimate_check(const Field& u, const ParabolicCube& inner, const ParabolicCube& outer,
                                              const CubeSearchPolicy& policy = {}, double slack = 0.02) {
    if (!outer.contains(inner, 1e-9)) throw DomainError("mean_estimate_check: cubes are not nested");
    const double ratio = outer.radius / inner.radius;
    const int steps = static_cast<int>(std::lround(std::log2(ratio)));
    if (steps < 1 || std::abs(ratio - std::ldexp(1.0, steps)) > 1e-9 * ratio)
        throw DomainError("mean_estimate_check: radius ratio must be 2^i with i >= 1");
    MeanEstimateReport r;
    r.steps = steps;
    r.slack = slack;
    r.chain = doubling_chain(inner, outer, steps);
    r.difference = std::abs(cube_mean(u, outer) - cube_mean(u, inner));
    double b = bmo_over(u, r.chain, BmoForm::Oscillation).value;
    try {
        b = std::max(b, bmo_norm(u, policy).value);
    } catch (const DomainError&) {
        // grid smaller than the policy floor: the chain alone bounds the sup
    }
    r.bmo = b;
    const int n = u.grid.n();
    r.bound = steps * (1.0 + std::ldexp(1.0, n + 2)) * b;
    r.violated = r.difference > r.bound * (1.0 + slack) + 1e-12 * (1.0 + u.max_abs());
    return r;
}

}  // namespace paralog
