#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "paralog/extension.hpp"
#include "paralog/harness.hpp"
#include "support.hpp"

#include <functional>
#include <set>

using namespace paralog;
using paralog::testing::Gen;

TEST_CASE("Lp norms") {
    const Grid g(1, {1.0, 1.0}, {16, 16});
    CHECK(lp_norm(Field::constant(g, -3.0), 1.0, Box::of(g)) == doctest::Approx(3.0));
    CHECK(lp_norm(Field(g), 2.0, Box::of(g)) == 0.0);
    CHECK(lp_norm(Field(g), kInf) == 0.0);
    const Grid h(1, {2.0, 3.0}, {64, 16});
    const double A = 1.7;
    const Field s = Field::sample(h, [&](const Point& z) { return A * std::sin(2.0 * M_PI * 2.0 * z[0] / 2.0); });
    CHECK(lp_norm(s, 2.0, Box::of(h)) == doctest::Approx(A / std::sqrt(2.0) * std::sqrt(h.volume())).epsilon(1e-6));
    CHECK(lp_norm(s, 2.0) == doctest::Approx(lp_norm(s, 2.0, Box::of(h))).epsilon(1e-14));
    CHECK(lp_norm(s, 3.0) == doctest::Approx(lp_norm(s, 3.0, Box::of(h))).epsilon(1e-14));
    CHECK_THROWS_AS(lp_norm(s, 0.5), DomainError);
    // half-cell domain edges get half weight
    const Box half{(Point(2) << 0.0, 0.0).finished(), (Point(2) << 0.5 / 16.0, 1.0).finished()};
    CHECK(lp_norm(Field::constant(g, 1.0), 1.0, half) == doctest::Approx(0.5 / 16.0));
}

TEST_CASE("spectral derivatives") {
    const double L = 3.0;
    const Grid g(1, {L, 2.0}, {32, 16});
    const Field s = Field::sample(g, [&](const Point& z) { return std::sin(2.0 * M_PI * z[0] / L); });
    const Field c = Field::sample(g, [&](const Point& z) { return 2.0 * M_PI / L * std::cos(2.0 * M_PI * z[0] / L); });
    const auto d = spectral_derivative(s, DerivativeIndex{0, {1}});
    CHECK(paralog::testing::max_abs_diff(d.field, c) <= 1e-10);
    CHECK_FALSE(d.under_resolved);
    CHECK(spectral_derivative(Field::constant(g, 4.0), DerivativeIndex{1, {2}}).field.max_abs() < 1e-12);
    CHECK_THROWS_AS(spectral_derivative(s, DerivativeIndex{0, {1, 1}}), DomainError);

    const Grid gt(1, {2.0, 8.0}, {16, 128}, {-1.0, -4.0});
    const Field gauss = Field::sample(gt, [](const Point& z) { return std::exp(-2.0 * z[1] * z[1]); });
    const auto d2 = spectral_derivative(gauss, DerivativeIndex{2, {0}});
    const auto d21 = spectral_derivative(d2.field, DerivativeIndex{1, {0}});
    const auto d3 = spectral_derivative(gauss, DerivativeIndex{3, {0}});
    CHECK(paralog::testing::max_abs_diff(d21.field, d3.field) <= 1e-10 * (1.0 + d3.field.max_abs()));

    Gen gen(3);
    const Field noise = gen.noise(g);
    const auto r = spectral_derivative(noise, DerivativeIndex{1, {1}});
    CHECK(r.under_resolved);
    CHECK(r.tail_fraction > 0.1);
    // commutation
    const auto xy = spectral_derivative(spectral_derivative(noise, DerivativeIndex{0, {1}}).field, DerivativeIndex{1, {0}});
    const auto yx = spectral_derivative(spectral_derivative(noise, DerivativeIndex{1, {0}}).field, DerivativeIndex{0, {1}});
    CHECK(paralog::testing::max_abs_diff(xy.field, yx.field) <= 1e-10 * (1.0 + xy.field.max_abs()));
}

TEST_CASE("Sobolev index sets") {
    const auto one = SobolevOrder{1}.indices(1);
    REQUIRE(one.size() == 4);
    std::set<std::pair<int, int>> got;
    for (const auto& d : one) got.insert({d.time_order, d.space_order[0]});
    CHECK(got == std::set<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {1, 0}});
    // n = 2, m = 1: r = 0 with |s| <= 2 gives 1 + 2 + 3 multi-indices, plus r = 1
    CHECK(SobolevOrder{1}.indices(2).size() == 7);
    for (int m = 1; m <= 3; ++m)
        for (const auto& d : SobolevOrder{m}.indices(2)) CHECK(d.parabolic_order() <= 2 * m);
}

TEST_CASE("parabolic Sobolev norm closed forms") {
    const Grid g(1, {1.0, 1.0}, {32, 32});
    CHECK(parabolic_sobolev_norm(Field(g), SobolevOrder{1}) == 0.0);
    for (int m = 1; m <= 3; ++m) CHECK(parabolic_sobolev_norm(Field::constant(g, -2.0), SobolevOrder{m}) == doctest::Approx(2.0));
    // u = sin(2 pi x) sin(2 pi t): each D_t^r D_x^s has L^2 norm (2 pi)^{r+s} / 2
    const Field u = Field::sample(g, [](const Point& z) { return std::sin(2.0 * M_PI * z[0]) * std::sin(2.0 * M_PI * z[1]); });
    const double k = 2.0 * M_PI;
    const double expect = 0.5 * (1.0 + k + k * k + k);
    CHECK(parabolic_sobolev_norm(u, SobolevOrder{1}) == doctest::Approx(expect).epsilon(1e-6));
    const double expect2 = 0.5 * (1.0 + k + k * k + k * k * k + k * k * k * k + k + k * k + k * k * k + k * k);
    CHECK(parabolic_sobolev_norm(u, SobolevOrder{2}) == doctest::Approx(expect2).epsilon(1e-6));
}

TEST_CASE("norm axioms on random pairs") {
    Gen gen(5);
    const Grid g(1, {2.0, 2.0}, {32, 32});
    const auto P = build_partition(g);
    for (int t = 0; t < 10; ++t) {
        const Field f = gen.modes(g, 6, 5), h = gen.modes(g, 6, 5);
        const double lam = gen.uniform(-3.0, 3.0);
        std::vector<std::function<double(const Field&)>> norms = {
            [](const Field& u) { return lp_norm(u, 1.0); },
            [](const Field& u) { return lp_norm(u, 2.5); },
            [](const Field& u) { return lp_norm(u, kInf); },
            [](const Field& u) { return parabolic_sobolev_norm(u, SobolevOrder{1}); },
            [&](const Field& u) { return besov_norm(u, P, 0.5, 2.0, 2.0); },
            [&](const Field& u) { return lizorkin_triebel_norm(u, P, 0.0, kInf, 1.0, true); },
            [&](const Field& u) { return lizorkin_triebel_norm(u, P, 0.3, 2.0, 2.0, false); },
        };
        for (const auto& N : norms) {
            const double nf = N(f), nh = N(h);
            CHECK(N(Field(f + h)) <= (nf + nh) * (1.0 + 1e-12));
            CHECK(N(Field(lam * f)) == doctest::Approx(std::abs(lam) * nf).epsilon(1e-12));
        }
    }
}

TEST_CASE("Sobolev embedding ratio") {
    const Grid g(1, {1.0, 1.0}, {16, 16});
    const auto r = sobolev_embedding_check(Field::constant(g, 1.0), SobolevOrder{1});
    CHECK(r.ratio == doctest::Approx(1.0));
    CHECK_THROWS_AS(sobolev_embedding_check(Field(g), SobolevOrder{0}), DomainError);
    Gen gen(7);
    const Field u = gen.modes(g);
    CHECK(sobolev_embedding_check(Field(-4.0 * u), SobolevOrder{1}).ratio ==
          doctest::Approx(sobolev_embedding_check(u, SobolevOrder{1}).ratio).epsilon(1e-12));

    // band-limited random fields at two resolutions: the max ratio is stable
    double worst[2] = {0.0, 0.0};
    for (int level = 0; level < 2; ++level) {
        const Index N = level == 0 ? 32 : 64;
        const Grid gl(1, {2.0, 2.0}, {N, N});
        for (int s = 0; s < 50; ++s) {
            Gen gs(1000 + s);
            worst[level] = std::max(worst[level], sobolev_embedding_check(gs.modes(gl, 5, 4), SobolevOrder{1}).ratio);
        }
    }
    CHECK(std::isfinite(worst[0]));
    CHECK(worst[1] == doctest::Approx(worst[0]).epsilon(0.2));
}

TEST_CASE("Besov over Sobolev embedding spot check") {
    double worst[2] = {0.0, 0.0};
    for (int level = 0; level < 2; ++level) {
        const Index N = level == 0 ? 32 : 64;
        const Grid g(1, {2.0, 2.0}, {N, N});
        const auto P = build_partition(g);
        for (int s = 0; s < 20; ++s) {
            Gen gs(2000 + s);
            const Field u = gs.modes(g, 5, 4);
            worst[level] = std::max(worst[level], besov_norm(u, P, 2.0, 2.0, kInf) / parabolic_sobolev_norm(u, SobolevOrder{1}));
        }
    }
    CHECK(std::isfinite(worst[0]));
    CHECK(worst[1] == doctest::Approx(worst[0]).epsilon(0.3));
}

TEST_CASE("bounded-domain Sobolev norm") {
    // the cut-off is resolved spectrally, so the error decays fast under refinement
    const double l2 = std::sqrt(1.0 + 2.0 + 4.0 / 3.0);  // int_0^1 (1 + 2x)^2
    double prev = kInf;
    for (Index N : {32, 64, 128}) {
        const Grid g(1, {1.0, 1.0}, {N, N});
        const double ec = std::abs(bounded_sobolev_norm(Field::constant(g, 3.0), SobolevOrder{1}) - 3.0);
        // affine in x is reproduced by the extension, so only u and u_x contribute
        const Field a = Field::sample(g, [](const Point& z) { return 1.0 + 2.0 * z[0]; });
        const double ea = std::abs(bounded_sobolev_norm(a, SobolevOrder{1}) - (l2 + 2.0));
        CHECK(ec <= prev / 20.0);
        prev = ec;
        if (N == 128) {
            CHECK(ec <= 1e-5);
            CHECK(ea <= 1e-5);
        }
    }
}
