#pragma once

// Higher-order reflection across the faces of a box.
//
// Across the left face lo of an axis of length l, the extended field on
// (lo - l, lo) is
//     u~(y) = sum_j c_j u(lo + lambda_j (lo - y)),   lambda_j = 2^{-j},
// and across the right face hi, u~(y) = sum_j c_j u(hi - lambda_j (y - hi)).
// The weights solve sum_j c_j (-lambda_j)^k = 1 for k = 0..L-1, so the first
// L-1 derivatives match at the face. Off-lattice source points are evaluated
// by Lagrange interpolation along the axis.

#include "paralog/cubes.hpp"
#include "paralog/littlewood_paley.hpp"

#include <Eigen/Sparse>

namespace paralog {

struct ExtensionScheme {
    int terms = 1;            ///< L
    Eigen::VectorXd coeffs;   ///< c_0..c_{L-1}
    Eigen::VectorXd nodes;    ///< lambda_j = 2^{-j}
    int interp_degree = 3;    ///< degree of the off-lattice interpolation

    /// max_k |sum_j c_j (-lambda_j)^k - 1|
    double residual() const {
        double worst = 0.0;
        for (int k = 0; k < terms; ++k) {
            double acc = 0.0;
            for (int j = 0; j < terms; ++j) acc += coeffs[j] * std::pow(-nodes[j], k);
            worst = std::max(worst, std::abs(acc - 1.0));
        }
        return worst;
    }

    /// Strip mass factor sum_j |c_j| / lambda_j: the L^1 norm of one reflected
    /// strip is at most this times the L^1 norm of the source.
    double strip_factor() const { return (coeffs.array().abs() / nodes.array()).sum(); }
};

constexpr int kMaxExtensionTerms = 8;

/// Default interpolation degree for an L-term scheme: 2L+1, clamped to
/// [3, 7]. Below 2L+1 the interpolation error leaks into the matched
/// derivatives; above 7 its Lebesgue constant amplifies rounding more than
/// it removes truncation error.
inline int default_interp_degree(int L) { return std::clamp(2 * L + 1, 3, 7); }

inline ExtensionScheme vandermonde_coeffs(int L, int interp_degree = 0) {
    if (L < 1 || L > kMaxExtensionTerms)
        throw DomainError("vandermonde_coeffs: term count must lie in [1, 8]");
    ExtensionScheme s;
    s.terms = L;
    s.nodes.resize(L);
    for (int j = 0; j < L; ++j) s.nodes[j] = std::ldexp(1.0, -j);
    // the system sum_j c_j (-lambda_j)^k = 1, k < L, says c_j is the Lagrange
    // basis polynomial of the nodes -lambda_j evaluated at 1
    s.coeffs.resize(L);
    for (int j = 0; j < L; ++j) {
        double c = 1.0;
        for (int i = 0; i < L; ++i)
            if (i != j) c *= (1.0 + s.nodes[i]) / (s.nodes[i] - s.nodes[j]);
        s.coeffs[j] = c;
    }
    s.interp_degree = interp_degree > 0 ? interp_degree : default_interp_degree(L);
    return s;
}

namespace detail {

/// Lagrange weights of the nodes start..start+degree (index coordinates) at
/// fractional index s.
inline void lagrange_weights(double s, Index start, int degree, std::vector<double>& w) {
    w.assign(static_cast<std::size_t>(degree + 1), 1.0);
    for (int i = 0; i <= degree; ++i) {
        const double xi = static_cast<double>(start + i);
        for (int k = 0; k <= degree; ++k) {
            if (k == i) continue;
            const double xk = static_cast<double>(start + k);
            w[static_cast<std::size_t>(i)] *= (s - xk) / (xi - xk);
        }
    }
}

/// Row of the interpolation operator for a physical point p on a
/// cell-centred axis with N nodes starting at lo with spacing h.
inline void interpolation_row(double p, double lo, double h, Index N, int degree,
                              std::vector<std::pair<Index, double>>& row) {
    const double s = (p - lo) / h - 0.5;
    Index start = degree % 2 == 1 ? static_cast<Index>(std::floor(s)) - (degree - 1) / 2
                                  : static_cast<Index>(std::lround(s)) - degree / 2;
    start = std::clamp<Index>(start, 0, N - 1 - degree);
    std::vector<double> w;
    lagrange_weights(s, start, degree, w);
    for (int i = 0; i <= degree; ++i) row.emplace_back(start + i, w[static_cast<std::size_t>(i)]);
}

}  // namespace detail

using AxisOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// 3N x N matrix taking the N samples of a line on [lo, lo + l] to the 3N
/// samples of the extended line on [lo - l, lo + 2l].
inline AxisOperator extension_operator(const ExtensionScheme& scheme, Index N, double length) {
    if (scheme.interp_degree + 1 > N)
        throw DomainError("extend_axis: too few samples along the axis for the interpolation degree");
    const double h = length / static_cast<double>(N);
    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<std::pair<Index, double>> row;
    for (Index i = 0; i < 3 * N; ++i) {
        const Index src = i - N;
        if (src >= 0 && src < N) {
            triplets.emplace_back(i, src, 1.0);
            continue;
        }
        // position relative to the source interval [0, length]
        const double y = (static_cast<double>(src) + 0.5) * h;
        row.clear();
        for (int j = 0; j < scheme.terms; ++j) {
            const double lam = scheme.nodes[j];
            const double p = src < 0 ? -lam * y : length - lam * (y - length);
            const std::size_t first = row.size();
            detail::interpolation_row(p, 0.0, h, N, scheme.interp_degree, row);
            for (std::size_t q = first; q < row.size(); ++q) row[q].second *= scheme.coeffs[j];
        }
        for (const auto& [col, w] : row) triplets.emplace_back(i, col, w);
    }
    AxisOperator E(3 * N, N);
    E.setFromTriplets(triplets.begin(), triplets.end());
    return E;
}

/// Applies a (rows x shape(axis)) operator along one axis; the axis of the
/// returned grid spans `new_length` from `new_origin` with `rows` samples.
inline Field apply_along_axis(const Field& u, int axis, const AxisOperator& E, double new_origin, double new_length) {
    const Grid& g = u.grid;
    auto shape = g.shape();
    auto lengths = g.lengths();
    auto origins = g.origins();
    const Index N = g.shape(axis);
    if (E.cols() != N) throw DomainError("apply_along_axis: operator does not match the axis");
    shape[static_cast<std::size_t>(axis)] = E.rows();
    lengths[static_cast<std::size_t>(axis)] = new_length;
    origins[static_cast<std::size_t>(axis)] = new_origin;
    Field out(Grid(g.n(), lengths, shape, origins));
    const Index in_stride = g.stride(axis);
    const Index out_stride = out.grid.stride(axis);
    const Index outer_count = g.size() / (N * in_stride);
    Eigen::VectorXd line(N), result(E.rows());
    for (Index o = 0; o < outer_count; ++o) {
        for (Index inner = 0; inner < in_stride; ++inner) {
            const Index in_base = o * N * in_stride + inner;
            const Index out_base = o * E.rows() * out_stride + inner;
            for (Index i = 0; i < N; ++i) line[i] = u.values[in_base + i * in_stride];
            result.noalias() = E * line;
            for (Index i = 0; i < E.rows(); ++i) out.values[out_base + i * out_stride] = result[i];
        }
    }
    return out;
}

/// Extends along `axis` from [lo, hi] to [lo - l, hi + l].
inline Field extend_axis(const Field& u, int axis, const ExtensionScheme& scheme) {
    const Grid& g = u.grid;
    const AxisOperator E = extension_operator(scheme, g.shape(axis), g.length(axis));
    return apply_along_axis(u, axis, E, g.origin(axis) - g.length(axis), 3.0 * g.length(axis));
}

/// Schemes used by extend_full: L = 2m on spatial axes, L = m in time.
struct ExtensionPlan {
    int m = 1;
    int interp_degree = 0;  ///< 0 selects default_interp_degree(L) per axis

    ExtensionScheme spatial() const { return vandermonde_coeffs(2 * m, interp_degree); }
    ExtensionScheme temporal() const { return vandermonde_coeffs(m, interp_degree); }
};

/// u on Omega_T = prod (lo_i, hi_i) x (t0, t0 + T) to u~ on the tripled box:
/// x_1, ..., x_n successively, then t.
inline Field extend_full(const Field& u, const ExtensionPlan& plan) {
    if (plan.m < 1) throw DomainError("extend_full: m must be >= 1");
    Field out = u;
    const auto spatial = plan.spatial();
    for (int a = 0; a < u.grid.n(); ++a) out = extend_axis(out, a, spatial);
    return extend_axis(out, u.grid.time_axis(), plan.temporal());
}

inline Field extend_full(const Field& u, int m) { return extend_full(u, ExtensionPlan{m, 0}); }

/// Samples of the extended field on the original box.
inline Field restrict_to(const Field& big, const Grid& small) {
    Field out(small);
    const Grid& g = big.grid;
    std::vector<Index> offset(static_cast<std::size_t>(g.axes()));
    for (int a = 0; a < g.axes(); ++a) {
        const double off = (small.origin(a) - g.origin(a)) / g.spacing(a);
        const Index o = static_cast<Index>(std::lround(off));
        if (std::abs(off - static_cast<double>(o)) > 1e-6 || std::abs(small.spacing(a) - g.spacing(a)) > 1e-12 * g.spacing(a) ||
            o < 0 || o + small.shape(a) > g.shape(a))
            throw DomainError("restrict_to: target is not a sub-lattice of the field's grid");
        offset[static_cast<std::size_t>(a)] = o;
    }
    for (Index k = 0; k < small.size(); ++k) {
        const auto idx = small.unflatten(k);
        Index flat = 0;
        for (int a = 0; a < g.axes(); ++a) flat += (idx[static_cast<std::size_t>(a)] + offset[static_cast<std::size_t>(a)]) * g.stride(a);
        out.values[k] = big.values[flat];
    }
    return out;
}

/// Derivative mismatch across one face of the extended field.
struct SeamEntry {
    int axis = 0;
    bool left = true;   ///< face at lo (true) or hi (false)
    int order = 0;      ///< derivative order k
    double inside = 0;  ///< one-sided estimate from the original box
    double outside = 0; ///< one-sided estimate from the reflected strip
    double abs_error = 0;
    double rel_error = 0;
};

/// Cube radii at which the extension keeps the BMO bound: r0 is the largest
/// r with Q_r inside the source box, r1 = r0/2, r2 = r1/sqrt(2).
/// Reported only, nothing branches on it.
struct RadiusLadder {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;

    static RadiusLadder of(const Grid& g) {
        RadiusLadder l;
        l.r0 = std::sqrt(g.length(g.time_axis()) / 2.0);
        for (int a = 0; a < g.n(); ++a) l.r0 = std::min(l.r0, g.length(a) / 2.0);
        l.r1 = l.r0 / 2.0;
        l.r2 = l.r1 / std::sqrt(2.0);
        return l;
    }
};

struct SeamReport {
    std::vector<SeamEntry> entries;
    double max_rel_error = 0.0;
    RadiusLadder ladder;
};

namespace detail {

/// k-th derivative at offset 0 of the polynomial through samples at the
/// index offsets `pos` (in units of h).
inline double one_sided_derivative(const std::vector<double>& pos, const std::vector<double>& val, int k, double h) {
    const auto q = static_cast<Index>(pos.size());
    Eigen::MatrixXd V(q, q);
    Eigen::VectorXd b(q);
    for (Index i = 0; i < q; ++i) {
        for (Index p = 0; p < q; ++p) V(i, p) = std::pow(pos[static_cast<std::size_t>(i)], static_cast<double>(p));
        b[i] = val[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd a = V.fullPivLu().solve(b);
    return std::tgamma(k + 1.0) * a[k] / std::pow(h, k);
}

}  // namespace detail

/// One-sided polynomial derivative estimates (L + 5 samples per side) of
/// orders 0..L-1 at every face of `extended`, taken on the line through the
/// middle of the original box; `orig` is the original grid.
inline SeamReport seam_report(const Field& extended, const Grid& orig, const ExtensionPlan& plan) {
    SeamReport rep;
    rep.ladder = RadiusLadder::of(orig);
    const Grid& g = extended.grid;
    const double scale = std::max(extended.max_abs(), 1e-300);
    for (int axis = 0; axis < g.axes(); ++axis) {
        const int L = axis == g.time_axis() ? plan.m : 2 * plan.m;
        const int q = L + 5;
        const Index N = orig.shape(axis);
        const double h = g.spacing(axis);
        // base node: middle of the original box on every other axis
        Index base = 0;
        for (int a = 0; a < g.axes(); ++a)
            if (a != axis) base += (orig.shape(a) + orig.shape(a) / 2) * g.stride(a);
        const Index stride = g.stride(axis);
        for (int side = 0; side < 2; ++side) {
            const bool left = side == 0;
            // seam between extended indices N-1|N (left) or 2N-1|2N (right)
            const Index seam = left ? N : 2 * N;
            std::vector<double> pin, vin, pout, vout;
            for (int i = 0; i < q; ++i) {
                const Index inside = left ? seam + i : seam - 1 - i;
                const Index outside = left ? seam - 1 - i : seam + i;
                const double off_in = left ? i + 0.5 : -(i + 0.5);
                pin.push_back(off_in);
                vin.push_back(extended.values[base + inside * stride]);
                pout.push_back(-off_in);
                vout.push_back(extended.values[base + outside * stride]);
            }
            for (int k = 0; k < L; ++k) {
                SeamEntry e;
                e.axis = axis;
                e.left = left;
                e.order = k;
                e.inside = detail::one_sided_derivative(pin, vin, k, h);
                e.outside = detail::one_sided_derivative(pout, vout, k, h);
                e.abs_error = std::abs(e.inside - e.outside);
                e.rel_error = e.abs_error / std::max(std::abs(e.inside), scale / std::pow(orig.length(axis), k));
                rep.max_rel_error = std::max(rep.max_rel_error, e.rel_error);
                rep.entries.push_back(e);
            }
        }
    }
    return rep;
}

struct L1Report {
    double source = 0.0;    ///< ||u||_{L^1(Omega_T)}
    double extended = 0.0;  ///< ||u~||_{L^1(tripled box)}
    double ratio = 0.0;
    double bound = 0.0;     ///< prod over axes of (1 + 2 sum_j |c_j| / lambda_j)
};

inline L1Report l1_report(const Field& u, const Field& extended, const ExtensionPlan& plan) {
    L1Report r;
    r.source = lp_norm(u, 1.0);
    r.extended = lp_norm(extended, 1.0);
    r.ratio = r.source > 0.0 ? r.extended / r.source : 0.0;
    const double fs = 1.0 + 2.0 * plan.spatial().strip_factor();
    const double ft = 1.0 + 2.0 * plan.temporal().strip_factor();
    r.bound = std::pow(fs, u.grid.n()) * ft;
    return r;
}

/// Smooth cut-off: 1 on Z1 = prod (lo - l/4, hi + l/4), 0 outside
/// Z2 = prod (lo - 3l/4, hi + 3l/4), built from the exp(-1/t) splice.
struct CutoffSpec {
    Box inner;
    Box outer;

    static CutoffSpec around(const Grid& omega) {
        CutoffSpec s{Box::of(omega), Box::of(omega)};
        for (int a = 0; a < omega.axes(); ++a) {
            const double l = omega.length(a);
            s.inner.lo[a] -= 0.25 * l;
            s.inner.hi[a] += 0.25 * l;
            s.outer.lo[a] -= 0.75 * l;
            s.outer.hi[a] += 0.75 * l;
        }
        return s;
    }

    double profile(int axis, double y) const {
        if (y <= inner.lo[axis]) {
            const double s = (inner.lo[axis] - y) / (inner.lo[axis] - outer.lo[axis]);
            return BumpProfile::transition(1.0 + s);
        }
        if (y >= inner.hi[axis]) {
            const double s = (y - inner.hi[axis]) / (outer.hi[axis] - inner.hi[axis]);
            return BumpProfile::transition(1.0 + s);
        }
        return 1.0;
    }

    double operator()(const Point& z) const {
        double v = 1.0;
        for (int a = 0; a < static_cast<int>(z.size()); ++a) v *= profile(a, z[a]);
        return v;
    }
};

inline Field build_cutoff(const CutoffSpec& spec, const Grid& grid) {
    if (!Box::of(grid).contains(spec.outer, 1e-9)) throw DomainError("build_cutoff: grid box does not contain Z2");
    return Field::sample(grid, [&](const Point& z) { return spec(z); });
}

/// Lattice-aligned periodic box `factor` times the size of Omega per axis,
/// centred on Omega. factor >= 3 so that it holds the tripled box.
inline Grid periodic_box(const Grid& omega, double factor = 4.0) {
    if (factor < 3.0) throw DomainError("periodic_box: box factor must be >= 3");
    std::vector<Index> shape;
    std::vector<double> lengths, origins;
    for (int a = 0; a < omega.axes(); ++a) {
        const double cells = factor * static_cast<double>(omega.shape(a));
        const double pad = 0.5 * (factor - 1.0) * static_cast<double>(omega.shape(a));
        if (std::abs(cells - std::round(cells)) > 1e-9 || std::abs(pad - std::round(pad)) > 1e-9 ||
            std::lround(cells) % 2 != 0)
            throw DomainError("periodic_box: factor does not give an aligned even lattice");
        shape.push_back(std::lround(cells));
        lengths.push_back(static_cast<double>(shape.back()) * omega.spacing(a));
        origins.push_back(omega.origin(a) - std::round(pad) * omega.spacing(a));
    }
    return Grid(omega.n(), lengths, shape, origins);
}

/// Psi u~ embedded (zero padded) into the periodic target grid.
inline Field localize(const Field& extended, const Field& cutoff, const Grid& target) {
    extended.check(cutoff);
    const Grid& g = extended.grid;
    // support of Psi, with a margin of one minimum BMO cube
    Box support{Point::Constant(g.axes(), kInf), Point::Constant(g.axes(), -kInf)};
    for (Index k = 0; k < g.size(); ++k) {
        if (cutoff.values[k] == 0.0) continue;
        const Point z = g.position(k);
        for (int a = 0; a < g.axes(); ++a) {
            support.lo[a] = std::min(support.lo[a], z[a] - 0.5 * g.spacing(a));
            support.hi[a] = std::max(support.hi[a], z[a] + 0.5 * g.spacing(a));
        }
    }
    Field out(target);
    if (!std::isfinite(support.lo[0])) return out;
    double hx = 0.0;
    for (int a = 0; a < g.n(); ++a) hx = std::max(hx, target.spacing(a));
    const double rf = 1.5 * hx;  // minimum cube radius: 3 cells per spatial axis
    Box need = support;
    for (int a = 0; a < g.axes(); ++a) {
        const double margin = a == g.time_axis() ? 2.0 * rf * rf : 2.0 * rf;
        need.lo[a] -= margin;
        need.hi[a] += margin;
    }
    if (!Box::of(target).contains(need, 1e-9)) throw DomainError("localize: cut-off support too close to the periodic box edge");
    std::vector<Index> offset(static_cast<std::size_t>(g.axes()));
    for (int a = 0; a < g.axes(); ++a) {
        if (std::abs(target.spacing(a) - g.spacing(a)) > 1e-12 * g.spacing(a))
            throw DomainError("localize: target lattice spacing differs from the extended field");
        const double off = (g.origin(a) - target.origin(a)) / g.spacing(a);
        if (std::abs(off - std::round(off)) > 1e-6) throw DomainError("localize: target lattice is not aligned");
        offset[static_cast<std::size_t>(a)] = std::lround(off);
    }
    for (Index k = 0; k < g.size(); ++k) {
        const double v = cutoff.values[k] * extended.values[k];
        if (v == 0.0) continue;
        const auto idx = g.unflatten(k);
        Index flat = 0;
        for (int a = 0; a < g.axes(); ++a) {
            const Index i = idx[static_cast<std::size_t>(a)] + offset[static_cast<std::size_t>(a)];
            if (i < 0 || i >= target.shape(a)) throw DomainError("localize: support falls outside the target box");
            flat += i * target.stride(a);
        }
        out.values[flat] = v;
    }
    return out;
}

/// The whole chain u -> u~ -> Psi u~ on a periodic box.
struct Localized {
    Field extended;
    Field cutoff;
    Field field;  ///< Psi u~ on the periodic box
};

inline Localized extend_and_localize(const Field& u, const ExtensionPlan& plan, double box_factor = 4.0) {
    Localized r;
    r.extended = extend_full(u, plan);
    r.cutoff = build_cutoff(CutoffSpec::around(u.grid), r.extended.grid);
    r.field = localize(r.extended, r.cutoff, periodic_box(u.grid, box_factor));
    return r;
}

/// W_2^{2m,m}(Omega) norm of a field given on Omega: extend, localise on the
/// tripled box, differentiate spectrally, restrict the L^2 norms to Omega.
inline SobolevResult<double> bounded_sobolev_norm_report(const Field& u, const SobolevOrder& order) {
    const auto loc = extend_and_localize(u, ExtensionPlan{std::max(order.m, 1), 0}, 3.0);
    return parabolic_sobolev_norm_report(loc.field, order, Box::of(u.grid));
}

inline double bounded_sobolev_norm(const Field& u, const SobolevOrder& order) {
    return bounded_sobolev_norm_report(u, order).value;
}

}  // namespace paralog
