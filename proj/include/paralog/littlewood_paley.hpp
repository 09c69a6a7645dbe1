#pragma once

// Anisotropic Littlewood-Paley decomposition on the dual lattice.
//
// psi_0(zeta) = g(rho_k(zeta)) where rho_k is the smooth quasi-distance
//   rho_k(xi, tau) = (sum xi_i^{2k} + tau^k)^{1/(2k)},   k even,
// homogeneous of degree one under (xi, tau) -> (eta xi, eta^2 tau), and g is
// the exp(-1/t) splice with g = 1 on [0, 1] and g = 0 on [2, inf).
// psi_j(zeta) = psi_0(2^{-ja} zeta) - psi_0(2^{-(j-1)a} zeta) reduces to
// g(2^{-j} rho) - g(2^{1-j} rho), which vanishes identically outside
// 2^{j-1} < rho < 2^{j+1}.

#include "paralog/norms.hpp"
#include "paralog/spectral.hpp"

#include <limits>

namespace paralog {

struct BumpProfile {
    /// Reproducibility tag of the transition function.
    static constexpr const char* version = "exp-splice/1";

    int smoothing_order = 4;

    void validate() const {
        if (smoothing_order < 2 || smoothing_order % 2 != 0)
            throw DomainError("bump profile: smoothing order k must be even and >= 2");
    }

    /// g(r): 1 for r <= 1, 0 for r >= 2, C-infinity and nonincreasing between.
    static double transition(double r) {
        if (r <= 1.0) return 1.0;
        if (r >= 2.0) return 0.0;
        const double a = std::exp(-1.0 / (2.0 - r));
        const double b = std::exp(-1.0 / (r - 1.0));
        return a / (a + b);
    }

    /// rho_k of a vector whose last entry is the time-like coordinate.
    template <typename Derived>
    double quasi_distance(const Eigen::MatrixBase<Derived>& z) const {
        const Index last = z.size() - 1;
        const double t = std::abs(static_cast<double>(z[last]));
        double scale = std::sqrt(t);
        for (Index i = 0; i < last; ++i) scale = std::max(scale, std::abs(static_cast<double>(z[i])));
        if (scale == 0.0) return 0.0;
        const int k = smoothing_order;
        double acc = std::pow(t / (scale * scale), k);
        for (Index i = 0; i < last; ++i) acc += std::pow(static_cast<double>(z[i]) / scale, 2 * k);
        return scale * std::pow(acc, 1.0 / (2.0 * k));
    }

    template <typename Derived>
    double bump(const Eigen::MatrixBase<Derived>& z) const {
        return transition(quasi_distance(z));
    }
};

/// Sampled multipliers psi_0..psi_J on the dual lattice of a grid.
struct DyadicPartition {
    Grid grid;
    BumpProfile profile;
    int J = 0;
    Eigen::ArrayXd rho;                       ///< rho_k at every lattice frequency
    std::vector<Eigen::ArrayXd> multipliers;  ///< psi_j at every lattice frequency

    int bands() const { return J + 1; }

    /// Range [lo, hi] of bands j >= 1 that the lattice samples in every
    /// direction; empty when hi < lo.
    std::pair<int, int> resolved_bands() const {
        double inner = std::numeric_limits<double>::infinity();
        double spacing = 0.0;
        for (int a = 0; a < grid.axes(); ++a) {
            const double nyq = grid.nyquist(a);
            const double dk = 2.0 * M_PI / grid.length(a);
            if (a == grid.time_axis()) {
                inner = std::min(inner, std::sqrt(nyq));
                spacing = std::max(spacing, std::sqrt(dk));
            } else {
                inner = std::min(inner, nyq);
                spacing = std::max(spacing, dk);
            }
        }
        // band j is resolved when its annulus [2^{j-1}, 2^{j+1}] reaches past
        // the lattice spacing and starts below the Nyquist shell on every
        // axis; the top band J is always cut by the lattice and excluded
        int lo = 1;
        while (lo < J && std::ldexp(1.0, lo + 1) <= spacing) ++lo;
        int hi = J - 1;
        while (hi >= 1 && std::ldexp(1.0, hi - 1) >= inner) --hi;
        return {lo, hi};
    }
};

inline DyadicPartition build_partition(const Grid& grid, const BumpProfile& profile = {}) {
    profile.validate();
    DyadicPartition P;
    P.grid = grid;
    P.profile = profile;
    P.rho.resize(grid.size());
    for (Index k = 0; k < grid.size(); ++k) P.rho[k] = profile.quasi_distance(frequency(grid, k));
    const double rmax = P.rho.maxCoeff();
    int J = 0;
    while (std::ldexp(1.0, J) < rmax) ++J;
    if (J < 2) throw DomainError("build_partition: grid too coarse (needs at least bands 0..2)");
    P.J = J;
    P.multipliers.reserve(static_cast<std::size_t>(J + 1));
    P.multipliers.push_back(P.rho.unaryExpr([](double r) { return BumpProfile::transition(r); }));
    for (int j = 1; j <= J; ++j) {
        const double outer = std::ldexp(1.0, -j);
        const double inner = std::ldexp(1.0, 1 - j);
        P.multipliers.push_back(P.rho.unaryExpr([&](double r) {
            return BumpProfile::transition(outer * r) - BumpProfile::transition(inner * r);
        }));
    }
    return P;
}

/// phi_j * u for j = 0..J, realised as multipliers on one shared spectrum.
struct BandStack {
    std::vector<Field> bands;

    int J() const { return static_cast<int>(bands.size()) - 1; }
};

inline Field band_filter(const Spectrum& spectrum, const DyadicPartition& P, int j) {
    if (j < 0 || j > P.J) throw DomainError("band_filter: band index out of range");
    if (!(spectrum.grid == P.grid)) throw DomainError("band_filter: partition built on a different grid");
    const auto& m = P.multipliers[static_cast<std::size_t>(j)];
    return apply_multiplier(spectrum, [&](Index k) { return m[k]; });
}

inline Field band_filter(const Field& u, const DyadicPartition& P, int j) {
    return band_filter(forward_transform(u), P, j);
}

inline BandStack decompose(const Field& u, const DyadicPartition& P) {
    const auto spectrum = forward_transform(u);
    BandStack B;
    B.bands.reserve(static_cast<std::size_t>(P.bands()));
    for (int j = 0; j <= P.J; ++j) B.bands.push_back(band_filter(spectrum, P, j));
    return B;
}

inline Field reconstruct(const BandStack& B) {
    if (B.bands.empty()) throw DomainError("reconstruct: empty band stack");
    Field sum(B.bands.front().grid);
    for (const auto& b : B.bands) sum += b;  // throws on mismatched grids
    return sum;
}

/// Energy ||phi_j * u||_{L^2}^2 per band.
inline Eigen::ArrayXd band_energy(const BandStack& B) {
    Eigen::ArrayXd e(static_cast<Index>(B.bands.size()));
    for (std::size_t j = 0; j < B.bands.size(); ++j)
        e[static_cast<Index>(j)] = B.bands[j].grid.cell_volume() * B.bands[j].values.square().sum();
    return e;
}

inline void check_exponent(double e, const char* what) {
    if (!(e >= 1.0)) throw DomainError(std::string(what) + " must lie in [1, inf]");
}

/// (sum_j 2^{sqj} ||phi_j * u||_{L^p}^q)^{1/q}; q = inf takes the sup over j.
inline double besov_norm(const BandStack& B, double s, double p, double q) {
    check_exponent(p, "besov_norm: p");
    check_exponent(q, "besov_norm: q");
    double acc = 0.0;
    for (int j = 0; j <= B.J(); ++j) {
        const double term = std::exp2(s * j) * lp_norm(B.bands[static_cast<std::size_t>(j)], p);
        acc = std::isinf(q) ? std::max(acc, term) : acc + std::pow(term, q);
    }
    return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

inline double besov_norm(const Field& u, const DyadicPartition& P, double s, double p, double q) {
    return besov_norm(decompose(u, P), s, p, q);
}

/// || (sum_{j >= j0} 2^{sqj} |phi_j * u|^q)^{1/q} ||_{L^p}, j0 = 1 when
/// truncated. q = inf takes the pointwise sup over j.
inline double lizorkin_triebel_norm(const BandStack& B, double s, double p, double q, bool truncated) {
    check_exponent(p, "lizorkin_triebel_norm: p");
    check_exponent(q, "lizorkin_triebel_norm: q");
    if (B.bands.empty()) throw DomainError("lizorkin_triebel_norm: empty band stack");
    Field pointwise(B.bands.front().grid);
    for (int j = truncated ? 1 : 0; j <= B.J(); ++j) {
        const auto mag = (std::exp2(s * j) * B.bands[static_cast<std::size_t>(j)].values.abs()).eval();
        if (std::isinf(q))
            pointwise.values = pointwise.values.max(mag);
        else
            pointwise.values += mag.pow(q);
    }
    if (!std::isinf(q)) pointwise.values = pointwise.values.pow(1.0 / q);
    return lp_norm(pointwise, p);
}

inline double lizorkin_triebel_norm(const Field& u, const DyadicPartition& P, double s, double p,
                                    double q, bool truncated) {
    return lizorkin_triebel_norm(decompose(u, P), s, p, q, truncated);
}

/// Physical-space profile of the band-1 kernel phi_1 against shells of
/// parabolic radius R.
struct DecayReport {
    int mbar = 0;
    double constant = 0.0;       ///< max over shells of sup |phi_1| R^mbar
    double integral = 0.0;       ///< quadrature of phi_1 over the box
    double peak = 0.0;           ///< |phi_1(0)|
    bool bounded = false;        ///< outer shells no larger than inner ones
    std::vector<double> radius;  ///< shell outer radii
    std::vector<double> profile; ///< sup |phi_1| R^mbar per shell
};

/// Minimal physical half-extent (parabolic radius) required to see the
/// decay of phi_1, whose spectrum lives at rho in [1, 4].
constexpr double kDecayMinRadius = 4.0;

inline DecayReport kernel_decay_check(const DyadicPartition& P, int mbar, int shells = 32) {
    const int k = P.profile.smoothing_order;
    if (mbar < 1 || mbar > 2 * k - 2)
        throw DomainError("kernel_decay_check: decay exponent must lie in [1, 2k-2]");
    const Grid& g = P.grid;
    double rmax = kInf;
    for (int a = 0; a < g.axes(); ++a) {
        const double half = 0.5 * g.length(a);
        rmax = std::min(rmax, a == g.time_axis() ? std::sqrt(half) : half);
    }
    if (rmax < kDecayMinRadius)
        throw DomainError("kernel_decay_check: grid extent too small to resolve kernel decay");

    // Band 1 of a unit-mass delta at the central node is phi_1 centred there.
    Field delta(g);
    Index centre = 0;
    for (int a = 0; a < g.axes(); ++a) centre += (g.shape(a) / 2) * g.stride(a);
    delta.values[centre] = 1.0 / g.cell_volume();
    const Field kernel = band_filter(delta, P, 1);

    DecayReport r;
    r.mbar = mbar;
    r.integral = g.cell_volume() * kernel.values.sum();
    r.peak = std::abs(kernel.values[centre]);
    r.radius.resize(static_cast<std::size_t>(shells));
    r.profile.assign(static_cast<std::size_t>(shells), 0.0);
    const double width = rmax / shells;
    for (int b = 0; b < shells; ++b) r.radius[static_cast<std::size_t>(b)] = (b + 1) * width;
    const Point zc = g.position(centre);
    for (Index m = 0; m < g.size(); ++m) {
        const double R = parabolic_distance(g.position(m) - zc);
        if (R <= 0.0 || R > rmax) continue;
        const auto b = std::min<std::size_t>(static_cast<std::size_t>(R / width), static_cast<std::size_t>(shells - 1));
        r.profile[b] = std::max(r.profile[b], std::abs(kernel.values[m]) * std::pow(R, mbar));
    }
    const auto half = r.profile.begin() + shells / 2;
    const double inner = *std::max_element(r.profile.begin(), half);
    const double outer = *std::max_element(half, r.profile.end());
    r.constant = std::max(inner, outer);
    r.bounded = std::isfinite(r.constant) && outer <= inner;
    return r;
}

}  // namespace paralog
