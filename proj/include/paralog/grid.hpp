#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace paralog {

using Index = Eigen::Index;
using Point = Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised for violated preconditions on domain objects (bad grids, empty
/// cube families, breached gradient floors...). The CLI maps it to exit 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Space-time lattice over a box in R^{n+1}. Axes are ordered
/// (x_1, ..., x_n, t); the time axis is always last and is the fastest
/// varying index of the row-major storage. Nodes are cell centred:
/// node i on axis a sits at origin[a] + (i + 1/2) * spacing(a), so the
/// cell of node i is [origin + i h, origin + (i+1) h).
class Grid {
public:
    Grid() = default;

    /// `lengths` and `shape` hold n+1 entries (spatial axes then time).
    /// `origin` defaults to zero.
    Grid(int n, std::vector<double> lengths, std::vector<Index> shape,
         std::vector<double> origin = {})
        : n_(n), length_(std::move(lengths)), shape_(std::move(shape)),
          origin_(std::move(origin)) {
        if (n_ < 1 || n_ > 2)
            throw DomainError("grid: only n = 1 or n = 2 spatial dimensions are supported");
        const auto axes = static_cast<std::size_t>(n_ + 1);
        if (origin_.empty())
            origin_.assign(axes, 0.0);
        if (length_.size() != axes || shape_.size() != axes || origin_.size() != axes)
            throw DomainError("grid: lengths, shape and origin need n+1 entries");
        for (std::size_t a = 0; a < axes; ++a) {
            if (shape_[a] < 4 || shape_[a] % 2 != 0)
                throw DomainError("grid: every shape entry must be even and >= 4 (axis " +
                                  std::to_string(a) + " has " + std::to_string(shape_[a]) + ")");
            if (!(length_[a] > 0.0) || !std::isfinite(length_[a]))
                throw DomainError("grid: axis lengths must be positive and finite");
            if (!std::isfinite(origin_[a]))
                throw DomainError("grid: origin must be finite");
        }
    }

    int n() const { return n_; }
    int axes() const { return n_ + 1; }
    int time_axis() const { return n_; }

    Index shape(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
    double length(int axis) const { return length_[static_cast<std::size_t>(axis)]; }
    double origin(int axis) const { return origin_[static_cast<std::size_t>(axis)]; }
    double upper(int axis) const { return origin(axis) + length(axis); }
    double spacing(int axis) const { return length(axis) / static_cast<double>(shape(axis)); }
    double box_len(int i) const { return length(i); }
    double time_len() const { return length(n_); }

    const std::vector<Index>& shape() const { return shape_; }
    const std::vector<double>& lengths() const { return length_; }
    const std::vector<double>& origins() const { return origin_; }

    Index size() const {
        Index s = 1;
        for (auto e : shape_) s *= e;
        return s;
    }

    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < axes(); ++a) v *= spacing(a);
        return v;
    }

    double volume() const {
        double v = 1.0;
        for (auto l : length_) v *= l;
        return v;
    }

    /// Row-major stride of `axis`.
    Index stride(int axis) const {
        Index s = 1;
        for (int a = axes() - 1; a > axis; --a) s *= shape(a);
        return s;
    }

    double node(int axis, Index i) const {
        return origin(axis) + (static_cast<double>(i) + 0.5) * spacing(axis);
    }

    /// Coordinates of the node with flat index `flat`.
    Point position(Index flat) const {
        Point z(axes());
        for (int a = axes() - 1; a >= 0; --a) {
            const Index i = flat % shape(a);
            flat /= shape(a);
            z[a] = node(a, i);
        }
        return z;
    }

    /// Multi-index of a flat index.
    std::vector<Index> unflatten(Index flat) const {
        std::vector<Index> idx(static_cast<std::size_t>(axes()));
        for (int a = axes() - 1; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = flat % shape(a);
            flat /= shape(a);
        }
        return idx;
    }

    /// Signed integer wavenumber of DFT index k on `axis`, in [-N/2, N/2).
    Index wavenumber(int axis, Index k) const {
        const Index N = shape(axis);
        return k < N / 2 ? k : k - N;
    }

    /// Angular frequency (xi for space, tau for time) of DFT index k.
    double angular_frequency(int axis, Index k) const {
        return 2.0 * M_PI * static_cast<double>(wavenumber(axis, k)) / length(axis);
    }

    /// Largest representable angular frequency on `axis`.
    double nyquist(int axis) const { return M_PI * static_cast<double>(shape(axis)) / length(axis); }

    bool same_lattice(const Grid& o) const {
        return n_ == o.n_ && shape_ == o.shape_ && length_ == o.length_ && origin_ == o.origin_;
    }

    friend bool operator==(const Grid& a, const Grid& b) { return a.same_lattice(b); }

private:
    int n_ = 1;
    std::vector<double> length_;
    std::vector<Index> shape_;
    std::vector<double> origin_;
};

/// Real field sampled at the nodes of a Grid.
template <typename Scalar>
struct FieldT {
    using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    Grid grid;
    Values values;

    FieldT() = default;
    explicit FieldT(Grid g) : grid(std::move(g)), values(Values::Zero(grid.size())) {}
    FieldT(Grid g, Values v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.size())
            throw DomainError("field: value count does not match grid shape");
    }

    static FieldT constant(const Grid& g, Scalar c) { return FieldT(g, Values::Constant(g.size(), c)); }

    /// Samples `f(z)` at every node; `f` receives an Eigen::VectorXd of
    /// length n+1.
    template <typename F>
    static FieldT sample(const Grid& g, F&& f) {
        FieldT out(g);
        for (Index k = 0; k < g.size(); ++k) out.values[k] = static_cast<Scalar>(f(g.position(k)));
        return out;
    }

    Index size() const { return values.size(); }
    bool finite() const { return values.isFinite().all(); }
    Scalar max_abs() const { return values.size() ? values.abs().maxCoeff() : Scalar(0); }

    FieldT& operator+=(const FieldT& o) { check(o); values += o.values; return *this; }
    FieldT& operator-=(const FieldT& o) { check(o); values -= o.values; return *this; }
    FieldT& operator*=(Scalar s) { values *= s; return *this; }

    friend FieldT operator+(FieldT a, const FieldT& b) { return a += b; }
    friend FieldT operator-(FieldT a, const FieldT& b) { return a -= b; }
    friend FieldT operator*(Scalar s, FieldT a) { return a *= s; }
    friend FieldT operator*(FieldT a, Scalar s) { return a *= s; }

    void check(const FieldT& o) const {
        if (!(grid == o.grid)) throw DomainError("field: grids do not match");
    }
};

/// Complex coefficients on the dual lattice of a Grid, in DFT index order.
template <typename Scalar>
struct SpectrumT {
    using Coeffs = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

    Grid grid;
    Coeffs coeffs;

    SpectrumT() = default;
    explicit SpectrumT(Grid g) : grid(std::move(g)), coeffs(Coeffs::Zero(grid.size())) {}
    SpectrumT(Grid g, Coeffs c) : grid(std::move(g)), coeffs(std::move(c)) {}

    /// Flat index of the frequency node mirrored through the origin.
    Index mirror(Index flat) const {
        Index out = 0;
        Index mul = 1;
        for (int a = grid.axes() - 1; a >= 0; --a) {
            const Index N = grid.shape(a);
            const Index k = flat % N;
            flat /= N;
            out += ((N - k) % N) * mul;
            mul *= N;
        }
        return out;
    }
};

using Field = FieldT<double>;
using Spectrum = SpectrumT<double>;

/// Parabolic distance max(|x_1|, ..., |x_n|, |t|^{1/2}). The last entry of
/// `z` is the time coordinate.
template <typename Derived>
double parabolic_distance(const Eigen::MatrixBase<Derived>& z) {
    const Index last = z.size() - 1;
    double d = std::sqrt(std::abs(static_cast<double>(z[last])));
    for (Index i = 0; i < last; ++i) d = std::max(d, std::abs(static_cast<double>(z[i])));
    return d;
}

/// eta^a z with a = (1, ..., 1, 2).
template <typename Derived>
Point anisotropic_dilate(const Eigen::MatrixBase<Derived>& z, double eta) {
    if (!(eta > 0.0)) throw DomainError("anisotropic_dilate: eta must be positive");
    Point out = z.template cast<double>();
    const Index last = out.size() - 1;
    out.head(last) *= eta;
    out[last] *= eta * eta;
    return out;
}

/// Axis-aligned box [lo, hi] in R^{n+1}.
struct Box {
    Point lo;
    Point hi;

    static Box of(const Grid& g) {
        Box b{Point(g.axes()), Point(g.axes())};
        for (int a = 0; a < g.axes(); ++a) {
            b.lo[a] = g.origin(a);
            b.hi[a] = g.upper(a);
        }
        return b;
    }

    int axes() const { return static_cast<int>(lo.size()); }

    double volume() const { return (hi - lo).prod(); }

    bool contains(const Box& o, double tol = 1e-12) const {
        return ((o.lo.array() >= lo.array() - tol) && (o.hi.array() <= hi.array() + tol)).all();
    }
};

/// Per-axis overlap of a box with the grid cells: the nodes whose cells meet
/// the box and, for each, the fraction of the cell covered. Product weights
/// make means exact for constants at any box size.
struct Window {
    struct Axis {
        Index begin = 0;
        std::vector<double> weight;
    };
    std::vector<Axis> axis;

    bool empty() const {
        for (const auto& a : axis)
            if (a.weight.empty()) return true;
        return axis.empty();
    }

    Index count() const {
        Index c = 1;
        for (const auto& a : axis) c *= static_cast<Index>(a.weight.size());
        return c;
    }
};

inline Window make_window(const Grid& g, const Box& box) {
    Window w;
    w.axis.resize(static_cast<std::size_t>(g.axes()));
    for (int a = 0; a < g.axes(); ++a) {
        const double h = g.spacing(a);
        const double lo = std::max(box.lo[a], g.origin(a));
        const double hi = std::min(box.hi[a], g.upper(a));
        auto& ax = w.axis[static_cast<std::size_t>(a)];
        if (!(hi > lo)) continue;
        Index first = static_cast<Index>(std::floor((lo - g.origin(a)) / h));
        Index last = static_cast<Index>(std::ceil((hi - g.origin(a)) / h)) - 1;
        first = std::clamp<Index>(first, 0, g.shape(a) - 1);
        last = std::clamp<Index>(last, 0, g.shape(a) - 1);
        ax.begin = first;
        for (Index i = first; i <= last; ++i) {
            const double c0 = g.origin(a) + static_cast<double>(i) * h;
            const double frac = (std::min(hi, c0 + h) - std::max(lo, c0)) / h;
            ax.weight.push_back(std::max(frac, 0.0));
        }
        // drop zero-weight edge cells produced by rounding
        while (!ax.weight.empty() && ax.weight.back() <= 0.0) ax.weight.pop_back();
        while (!ax.weight.empty() && ax.weight.front() <= 0.0) {
            ax.weight.erase(ax.weight.begin());
            ++ax.begin;
        }
    }
    return w;
}

/// Calls f(flat_index, weight) for every node of the window, in storage order.
template <typename F>
void for_each_node(const Grid& g, const Window& w, F&& f) {
    if (w.empty()) return;
    const int A = g.axes();
    std::vector<Index> idx(static_cast<std::size_t>(A), 0);
    std::vector<Index> stride(static_cast<std::size_t>(A));
    for (int a = 0; a < A; ++a) stride[static_cast<std::size_t>(a)] = g.stride(a);
    for (;;) {
        Index flat = 0;
        double wt = 1.0;
        for (int a = 0; a < A; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            flat += (w.axis[ua].begin + idx[ua]) * stride[ua];
            wt *= w.axis[ua].weight[static_cast<std::size_t>(idx[ua])];
        }
        f(flat, wt);
        int a = A - 1;
        for (; a >= 0; --a) {
            const auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] < static_cast<Index>(w.axis[ua].weight.size())) break;
            idx[ua] = 0;
        }
        if (a < 0) return;
    }
}

}  // namespace paralog
