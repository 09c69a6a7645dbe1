#pragma once

// Discrete Fourier transform on an AnisotropicGrid.
//
// Normalisation is unitary: F_k = N^{-1/2} sum_m f_m exp(-2 pi i k.m / N) over
// all n+1 axes, and the inverse carries the other N^{-1/2}. Multiplying the
// spectrum by a multiplier psi(xi, tau) and transforming back is the periodic
// convolution of f with the kernel whose continuous transform is psi, so band
// filters and spectral derivatives need no further constants. Spectral
// energy is declared as cell_volume * sum |F_k|^2, which equals the
// quadrature cell_volume * sum |f_m|^2 (Parseval).

#include "paralog/grid.hpp"

#include <unsupported/Eigen/FFT>

namespace paralog {

namespace detail {

template <typename Scalar>
void transform_axes(const Grid& g, Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>& data,
                    bool inverse) {
    Eigen::FFT<Scalar> fft;
    fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    std::vector<std::complex<Scalar>> line, out;
    const Index total = g.size();
    for (int a = 0; a < g.axes(); ++a) {
        const Index N = g.shape(a);
        const Index stride = g.stride(a);
        const Index block = stride * N;
        line.resize(static_cast<std::size_t>(N));
        for (Index outer = 0; outer < total; outer += block) {
            for (Index inner = 0; inner < stride; ++inner) {
                const Index base = outer + inner;
                for (Index i = 0; i < N; ++i) line[static_cast<std::size_t>(i)] = data[base + i * stride];
                if (inverse)
                    fft.inv(out, line);
                else
                    fft.fwd(out, line);
                for (Index i = 0; i < N; ++i) data[base + i * stride] = out[static_cast<std::size_t>(i)];
            }
        }
    }
    data *= Scalar(1) / std::sqrt(static_cast<Scalar>(total));
}

}  // namespace detail

template <typename Scalar>
SpectrumT<Scalar> forward_transform(const FieldT<Scalar>& f) {
    if (!f.finite()) throw DomainError("forward_transform: field has non-finite values");
    SpectrumT<Scalar> s(f.grid);
    s.coeffs = f.values.template cast<std::complex<Scalar>>();
    detail::transform_axes(f.grid, s.coeffs, false);
    return s;
}

/// Largest |F_k - conj(F_{-k})| relative to max |F_k|.
template <typename Scalar>
Scalar hermitian_defect(const SpectrumT<Scalar>& s) {
    Scalar worst = 0;
    const Scalar scale = s.coeffs.size() ? s.coeffs.abs().maxCoeff() : Scalar(0);
    if (scale == Scalar(0)) return 0;
    for (Index k = 0; k < s.coeffs.size(); ++k)
        worst = std::max(worst, std::abs(s.coeffs[k] - std::conj(s.coeffs[s.mirror(k)])));
    return worst / scale;
}

/// Inverse transform; rejects spectra that would not produce a real field.
template <typename Scalar>
FieldT<Scalar> inverse_transform(const SpectrumT<Scalar>& s,
                                 Scalar hermitian_tol = Scalar(1e-9)) {
    if (hermitian_defect(s) > hermitian_tol)
        throw DomainError("inverse_transform: spectrum is not Hermitian symmetric");
    auto data = s.coeffs;
    detail::transform_axes(s.grid, data, true);
    return FieldT<Scalar>(s.grid, data.real());
}

template <typename Scalar>
Scalar spectral_energy(const SpectrumT<Scalar>& s) {
    return static_cast<Scalar>(s.grid.cell_volume()) * s.coeffs.abs2().sum();
}

/// Applies a real, even frequency multiplier m(flat spectral index).
template <typename Scalar, typename Multiplier>
FieldT<Scalar> apply_multiplier(const SpectrumT<Scalar>& s, Multiplier&& m) {
    SpectrumT<Scalar> out(s.grid, s.coeffs);
    for (Index k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] *= m(k);
    auto data = std::move(out.coeffs);
    detail::transform_axes(s.grid, data, true);
    return FieldT<Scalar>(s.grid, data.real());
}

/// Angular frequency vector (xi_1, ..., xi_n, tau) of a flat spectral index.
inline Point frequency(const Grid& g, Index flat) {
    Point f(g.axes());
    for (int a = g.axes() - 1; a >= 0; --a) {
        const Index k = flat % g.shape(a);
        flat /= g.shape(a);
        f[a] = g.angular_frequency(a, k);
    }
    return f;
}

}  // namespace paralog
