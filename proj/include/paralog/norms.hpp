#pragma once

#include "paralog/spectral.hpp"

#include <limits>

namespace paralog {

/// Cell-sum quadrature of |u|^p over `domain` (partial cells weighted by
/// their overlap); p = inf is the max of |u| over the nodes touching it.
template <typename Scalar>
Scalar lp_norm(const FieldT<Scalar>& u, double p, const Box& domain) {
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must lie in [1, inf]");
    const Window w = make_window(u.grid, domain);
    if (w.empty()) return Scalar(0);
    if (std::isinf(p)) {
        Scalar m = 0;
        for_each_node(u.grid, w, [&](Index k, double wt) {
            if (wt > 0.0) m = std::max(m, std::abs(u.values[k]));
        });
        return m;
    }
    Scalar acc = 0;
    if (p == 1.0)
        for_each_node(u.grid, w, [&](Index k, double wt) { acc += Scalar(wt) * std::abs(u.values[k]); });
    else if (p == 2.0)
        for_each_node(u.grid, w, [&](Index k, double wt) { acc += Scalar(wt) * u.values[k] * u.values[k]; });
    else
        for_each_node(u.grid, w, [&](Index k, double wt) { acc += Scalar(wt) * std::pow(std::abs(u.values[k]), Scalar(p)); });
    acc *= static_cast<Scalar>(u.grid.cell_volume());
    return p == 2.0 ? std::sqrt(acc) : std::pow(acc, Scalar(1.0 / p));
}

/// lp_norm over the whole grid box.
template <typename Scalar>
Scalar lp_norm(const FieldT<Scalar>& u, double p) {
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must lie in [1, inf]");
    if (std::isinf(p)) return u.max_abs();
    const Scalar cv = static_cast<Scalar>(u.grid.cell_volume());
    if (p == 1.0) return cv * u.values.abs().sum();
    if (p == 2.0) return std::sqrt(cv * u.values.square().sum());
    return std::pow(cv * u.values.abs().pow(Scalar(p)).sum(), Scalar(1.0 / p));
}

/// D_t^r D_x^s: `time_order` time derivatives and one spatial order per
/// spatial axis.
struct DerivativeIndex {
    int time_order = 0;
    std::vector<int> space_order;

    int spatial_total() const {
        int s = 0;
        for (int o : space_order) s += o;
        return s;
    }
    int parabolic_order() const { return 2 * time_order + spatial_total(); }
};

template <typename Scalar>
struct DerivativeResult {
    FieldT<Scalar> field;
    /// Fraction of the input's spectral energy in the outer third of the
    /// differentiated axes; large values mean the derivative is not resolved.
    double tail_fraction = 0.0;
    bool under_resolved = false;
};

constexpr double kUnderResolvedTail = 1e-6;

namespace detail {

template <typename Scalar>
FieldT<Scalar> differentiate(const SpectrumT<Scalar>& s, const DerivativeIndex& d) {
    const Grid& g = s.grid;
    std::vector<int> order(static_cast<std::size_t>(g.axes()), 0);
    for (int a = 0; a < g.n(); ++a) order[static_cast<std::size_t>(a)] = d.space_order[static_cast<std::size_t>(a)];
    order[static_cast<std::size_t>(g.time_axis())] = d.time_order;
    int total = 0;
    for (int o : order) total += o;
    // i^total
    static const std::complex<Scalar> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<Scalar> phase = ipow[total % 4];

    SpectrumT<Scalar> out(g, s.coeffs);
    for (Index flat = 0; flat < g.size(); ++flat) {
        Index rest = flat;
        Scalar factor = 1;
        for (int a = g.axes() - 1; a >= 0; --a) {
            const Index k = rest % g.shape(a);
            rest /= g.shape(a);
            const int o = order[static_cast<std::size_t>(a)];
            if (o == 0) continue;
            // the Nyquist mode has no odd-derivative partner
            if (o % 2 == 1 && k == g.shape(a) / 2) { factor = 0; break; }
            factor *= static_cast<Scalar>(std::pow(g.angular_frequency(a, k), o));
        }
        out.coeffs[flat] *= phase * factor;
    }
    auto data = std::move(out.coeffs);
    transform_axes(g, data, true);
    return FieldT<Scalar>(g, data.real());
}

template <typename Scalar>
double tail_fraction(const SpectrumT<Scalar>& s, const DerivativeIndex& d) {
    const Grid& g = s.grid;
    double tail = 0.0, total = 0.0;
    for (Index flat = 0; flat < g.size(); ++flat) {
        const double e = std::norm(s.coeffs[flat]);
        total += e;
        Index rest = flat;
        bool outer = false;
        for (int a = g.axes() - 1; a >= 0; --a) {
            const Index k = rest % g.shape(a);
            rest /= g.shape(a);
            const int o = a == g.time_axis() ? d.time_order : d.space_order[static_cast<std::size_t>(a)];
            if (o > 0 && 3 * std::abs(g.wavenumber(a, k)) > g.shape(a)) outer = true;
        }
        if (outer) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace detail

template <typename Scalar>
DerivativeResult<Scalar> spectral_derivative(const SpectrumT<Scalar>& s, const DerivativeIndex& d) {
    if (static_cast<int>(d.space_order.size()) != s.grid.n())
        throw DomainError("spectral_derivative: spatial multi-index needs n entries");
    if (d.time_order < 0)
        throw DomainError("spectral_derivative: negative derivative order");
    for (int o : d.space_order)
        if (o < 0) throw DomainError("spectral_derivative: negative derivative order");
    DerivativeResult<Scalar> r{detail::differentiate(s, d), 0.0, false};
    if (d.parabolic_order() > 0) {
        r.tail_fraction = detail::tail_fraction(s, d);
        r.under_resolved = r.tail_fraction > kUnderResolvedTail;
    }
    return r;
}

template <typename Scalar>
DerivativeResult<Scalar> spectral_derivative(const FieldT<Scalar>& u, const DerivativeIndex& d) {
    return spectral_derivative(forward_transform(u), d);
}

/// Order m of W_2^{2m,m} together with its derivative index set
/// {D_t^r D_x^s : 2r + |s| <= 2m}, every spatial multi-index of total order
/// |s| listed once.
struct SobolevOrder {
    int m = 1;

    std::vector<DerivativeIndex> indices(int n) const {
        if (m < 0) throw DomainError("sobolev order: m must be nonnegative");
        std::vector<DerivativeIndex> out;
        for (int r = 0; 2 * r <= 2 * m; ++r) {
            const int smax = 2 * m - 2 * r;
            if (n == 1) {
                for (int s = 0; s <= smax; ++s) out.push_back({r, {s}});
            } else {
                for (int s = 0; s <= smax; ++s)
                    for (int s1 = s; s1 >= 0; --s1) out.push_back({r, {s1, s - s1}});
            }
        }
        return out;
    }
};

template <typename Scalar>
struct SobolevResult {
    Scalar value = 0;
    bool under_resolved = false;
};

/// sum over the index set of ||D_t^r D_x^s u||_{L^2(domain)}, derivatives
/// taken spectrally on the whole periodic grid.
template <typename Scalar>
SobolevResult<Scalar> parabolic_sobolev_norm_report(const FieldT<Scalar>& u, const SobolevOrder& order,
                                                    const Box& domain) {
    const auto spectrum = forward_transform(u);
    SobolevResult<Scalar> r;
    for (const auto& d : order.indices(u.grid.n())) {
        const auto der = spectral_derivative(spectrum, d);
        r.value += lp_norm(der.field, 2.0, domain);
        r.under_resolved = r.under_resolved || der.under_resolved;
    }
    return r;
}

template <typename Scalar>
Scalar parabolic_sobolev_norm(const FieldT<Scalar>& u, const SobolevOrder& order, const Box& domain) {
    return parabolic_sobolev_norm_report(u, order, domain).value;
}

template <typename Scalar>
Scalar parabolic_sobolev_norm(const FieldT<Scalar>& u, const SobolevOrder& order) {
    return parabolic_sobolev_norm(u, order, Box::of(u.grid));
}

struct EmbeddingReport {
    double linf = 0.0;
    double sobolev = 0.0;
    double ratio = 0.0;  ///< ||u||_inf / ||u||_W; 0 for the zero field
};

/// ||u||_inf against ||u||_{W_2^{2m,m}}; requires m > (n+2)/4.
inline EmbeddingReport sobolev_embedding_check(const Field& u, const SobolevOrder& order) {
    if (!(4 * order.m > u.grid.n() + 2))
        throw DomainError("sobolev_embedding_check: embedding into L^inf needs m > (n+2)/4");
    EmbeddingReport r;
    r.linf = lp_norm(u, kInf);
    r.sobolev = parabolic_sobolev_norm(u, order);
    r.ratio = r.sobolev > 0.0 ? r.linf / r.sobolev : 0.0;
    return r;
}

}  // namespace paralog
