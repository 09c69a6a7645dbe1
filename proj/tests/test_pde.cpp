#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "paralog/pde.hpp"

using namespace paralog;

namespace {

PdeConfig sine_config(double dt, double T = 0.1) {
    PdeConfig c;
    c.N = 128;
    c.dt = dt;
    c.T_end = T;
    c.v0 = "sine:0.5";
    return c;
}

Eigen::VectorXd integrate(const PdeConfig& c) {
    PdeSolver s(c);
    PdeState st = s.initial_state();
    const auto steps = std::llround(c.T_end / c.dt);
    for (long long n = 0; n < steps; ++n) s.step(st);
    return st.p;
}

}  // namespace

TEST_CASE("config validation") {
    PdeConfig c;
    CHECK_NOTHROW(c.validate());
    c.a = 1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.v0 = "sine:1.2";  // min v0 = -0.2 < delta0
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK_THROWS_AS(PdeSolver{c}, DomainError);
    c = {};
    c.v0 = "parabola";
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.dt = 1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.N = 96;  // snapshot_points 64 does not divide
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    CHECK(c.stability_bound() == doctest::Approx(0.5));
    c.v0 = "sine:0.5";
    CHECK(c.stability_bound() == doctest::Approx(1.0 / 3.5).epsilon(1e-3));
}

TEST_CASE("constant gradient is the exact travelling solution") {
    PdeConfig c;
    c.N = 128;
    c.dt = 1e-3;
    PdeSolver s(c);
    PdeState st = s.initial_state();
    double worst_p = 0.0, worst_v = 0.0;
    for (int n = 0; n < 1000; ++n) {
        s.step(st);
        worst_p = std::max(worst_p, (st.p.array() - std::sin(1.0) * st.time).abs().maxCoeff());
        worst_v = std::max(worst_v, (s.gradient(st).array() - 1.0).abs().maxCoeff());
    }
    CHECK(worst_p <= 1e-8);
    CHECK(worst_v <= 1e-8);
    CHECK(st.time == doctest::Approx(1.0));
}

TEST_CASE("heat flow mode decay and mean conservation") {
    PdeConfig c;
    c.N = 64;
    c.snapshot_points = 16;
    c.dt = 1e-4;
    c.forcing = false;
    PdeSolver s(c);
    const double eps = 1e-2;
    PdeState st{Eigen::VectorXd(64), 0.0, 0};
    for (Index i = 0; i < 64; ++i) st.p[i] = eps * std::sin(2.0 * M_PI * i / 64.0) + 0.3;
    const double mean0 = st.p.mean();
    const double decay = std::exp(-4.0 * M_PI * M_PI * c.dt);
    for (int n = 1; n <= 50; ++n) {
        s.step(st);
        const double amp = eps * std::pow(decay, n);
        double err = 0.0;
        for (Index i = 0; i < 64; ++i) err = std::max(err, std::abs(st.p[i] - 0.3 - amp * std::sin(2.0 * M_PI * i / 64.0)));
        CHECK(err <= 1e-12);
        CHECK(std::abs(st.p.mean() - mean0) <= 1e-12);
    }
}

TEST_CASE("periodic line helpers") {
    const PeriodicLine line(32);
    Eigen::VectorXd f(32), df(32), sh(32);
    for (Index i = 0; i < 32; ++i) {
        const double x = i / 32.0;
        f[i] = std::sin(2 * M_PI * 3 * x) + 0.5 * std::cos(2 * M_PI * x);
        df[i] = 6 * M_PI * std::cos(2 * M_PI * 3 * x) - M_PI * std::sin(2 * M_PI * x);
        sh[i] = std::sin(2 * M_PI * 3 * (x + 0.37)) + 0.5 * std::cos(2 * M_PI * (x + 0.37));
    }
    CHECK((line.derivative(f) - df).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK((line.shifted(f, 0.37) - sh).cwiseAbs().maxCoeff() <= 1e-12);
    // shifting by a whole period is the identity; derivative of a constant vanishes
    CHECK((line.shifted(f, 1.0) - f).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(line.derivative(Eigen::VectorXd::Constant(32, 4.0)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("initial state matches v0 and stays well-formed") {
    PdeConfig c = sine_config(1e-4);
    PdeSolver s(c);
    const PdeState st = s.initial_state();
    CHECK((s.gradient(st) - c.initial_gradient()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(st.p.mean()) <= 1e-14);
}

TEST_CASE("first-order self-convergence") {
    const Eigen::VectorXd p1 = integrate(sine_config(4e-4));
    const Eigen::VectorXd p2 = integrate(sine_config(2e-4));
    const Eigen::VectorXd p4 = integrate(sine_config(1e-4));
    const double e12 = (p1 - p2).cwiseAbs().maxCoeff();
    const double e24 = (p2 - p4).cwiseAbs().maxCoeff();
    const double order = std::log2(e12 / e24);
    MESSAGE("Richardson order " << order);
    CHECK(order == doctest::Approx(1.0).epsilon(0.15));
    // the Richardson combination agrees with the finest run to second order
    const Eigen::VectorXd rich = 2.0 * p4 - p2;
    CHECK((rich - p4).cwiseAbs().maxCoeff() <= 1.2 * e24);
}

TEST_CASE("gradient floor breach carries the time") {
    PdeConfig c;
    c.N = 64;
    c.snapshot_points = 16;
    c.delta0 = 1e-3;
    c.dt = 1e-4;
    PdeSolver s(c);
    PdeState st = s.initial_state();
    // push v below zero by hand: p_x = -2 cos(2 pi x) / (2 pi) * 2 pi
    for (Index i = 0; i < 64; ++i) st.p[i] = -2.0 * std::sin(2.0 * M_PI * i / 64.0) / (2.0 * M_PI);
    st.time = 0.25;
    try {
        s.step(st);
        FAIL("expected a breach");
    } catch (const GradientFloorBreach& e) {
        CHECK(e.time == 0.25);
        CHECK(e.minimum < 0.0);
    }
}

TEST_CASE("constant run diagnostics") {
    PdeConfig c;
    c.N = 64;
    c.snapshot_points = 16;
    c.dt = 1e-3;
    const auto tr = run(c);
    for (std::size_t k = 0; k < tr.diag.t.size(); ++k) {
        CHECK(tr.diag.m[k] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(tr.diag.G[k] <= 1e-10);
    }
    const auto fit = check_apriori(tr.diag);
    CHECK(fit.C1 == 0.0);
    CHECK(fit.mt_bound_violations == 0);
    const auto kt = kt_closure_check(tr.diag, 0.5);
    CHECK(kt.theorem2.lhs <= 1e-10);
    CHECK(kt.G <= 1e-10);
}

TEST_CASE("sine run diagnostics") {
    PdeConfig c = sine_config(2e-4, 0.5);
    c.N = 128;
    const auto tr = run(c, 2);
    REQUIRE(tr.diag.t.size() >= 10);
    for (std::size_t k = 0; k < tr.diag.t.size(); ++k) {
        CHECK(tr.diag.m[k] > 0.0);
        // m(t) never exceeds any stored v
        CHECK(tr.diag.m[k] <= tr.profiles[k].minCoeff());
    }
    const auto fit = check_apriori(tr.diag);
    CHECK(std::isfinite(fit.C1));
    CHECK(std::isfinite(fit.C2));
    CHECK(fit.mt_bound_violations == 0);
    REQUIRE(tr.diag.norm_bmo.size() == 2);
    for (double b : tr.diag.norm_bmo) CHECK(std::isfinite(b));
    CHECK(tr.diag.norm_bmo[1] == doctest::Approx(tr.diag.norm_bmo[0]).epsilon(0.5));

    Diagnostics few;
    few.t = {0, 1, 2};
    few.m = {1, 1, 1};
    few.G = {0, 0, 0};
    CHECK_THROWS_AS(check_apriori(few), DomainError);
}

TEST_CASE("space-time field assembly") {
    Diagnostics d;
    d.snapshot_dt = 0.1;
    d.snapshot_points = 4;
    for (int k = 0; k < 7; ++k) d.snapshots.push_back(Eigen::VectorXd::Constant(4, k));
    const Field f = d.space_time_field(0.7);
    CHECK(f.grid.shape(1) == 6);
    CHECK(f.grid.time_len() == doctest::Approx(0.6));
    CHECK(f.values[2 * 6 + 5] == 5.0);
    CHECK_THROWS_AS(d.space_time_field(0.2), DomainError);
}
