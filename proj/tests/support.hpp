#pragma once

// Hand-rolled generators and small oracles shared by the test binaries.

#include "paralog/grid.hpp"

#include <random>

namespace paralog::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>()(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Point point(int axes, double scale = 1.0) {
        Point z(axes);
        for (int a = 0; a < axes; ++a) z[a] = uniform(-scale, scale);
        return z;
    }

    /// i.i.d. standard normal samples: rough, full-spectrum field
    Field noise(const Grid& g) {
        Field f(g);
        for (Index k = 0; k < f.size(); ++k) f.values[k] = normal();
        return f;
    }

    /// sum of a few random trigonometric modes, periodic on the box
    Field modes(const Grid& g, int count = 5, int kmax = 3) {
        std::vector<std::vector<int>> ks;
        std::vector<double> amp, phase;
        for (int c = 0; c < count; ++c) {
            std::vector<int> k(static_cast<std::size_t>(g.axes()));
            for (auto& e : k) e = integer(-kmax, kmax);
            ks.push_back(k);
            amp.push_back(normal());
            phase.push_back(uniform(0.0, 2.0 * M_PI));
        }
        return Field::sample(g, [&](const Point& z) {
            double v = 0.0;
            for (std::size_t c = 0; c < ks.size(); ++c) {
                double arg = phase[c];
                for (int a = 0; a < g.axes(); ++a)
                    arg += 2.0 * M_PI * ks[c][static_cast<std::size_t>(a)] * (z[a] - g.origin(a)) / g.length(a);
                v += amp[c] * std::cos(arg);
            }
            return v;
        });
    }

    Grid grid(int n, Index lo = 4, Index hi = 16) {
        std::vector<double> len;
        std::vector<Index> shape;
        std::vector<double> origin;
        for (int a = 0; a <= n; ++a) {
            len.push_back(uniform(0.5, 3.0));
            shape.push_back(2 * integer(static_cast<int>(lo / 2), static_cast<int>(hi / 2)));
            origin.push_back(uniform(-1.0, 1.0));
        }
        return Grid(n, len, shape, origin);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double max_abs_diff(const Field& a, const Field& b) { return (a.values - b.values).abs().maxCoeff(); }

}  // namespace paralog::testing
