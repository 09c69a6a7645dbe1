#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "paralog/harness.hpp"
#include "support.hpp"

using namespace paralog;

namespace {

Grid box_grid(Index N = 64) { return Grid(1, {8.0, 8.0}, {N, N}, {-4.0, -4.0}); }

bool same_report(const InequalityReport& a, const InequalityReport& b) {
    return a.id == b.id && a.lhs == b.lhs && a.rhs == b.rhs && a.implied_constant == b.implied_constant &&
           a.ingredients == b.ingredients && a.profile == b.profile && a.degenerate == b.degenerate;
}

}  // namespace

TEST_CASE("log_plus") {
    CHECK(log_plus(0.0) == 0.0);
    CHECK(log_plus(0.5) == 0.0);
    CHECK(log_plus(1.0) == 0.0);
    CHECK(log_plus(std::exp(2.0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(log_plus(10.0) == std::log(10.0));
}

TEST_CASE("zero field gives zero or degenerate reports") {
    const Field z(box_grid(32));
    const auto t1 = verify_theorem1(z);
    CHECK(t1.lhs == 0.0);
    CHECK(t1.ingredient("bmo") == 0.0);
    CHECK(t1.implied_constant == 0.0);
    CHECK(low_band_check(z).lhs == 0.0);
    const auto ip = interpolation_check(z);
    CHECK(ip.degenerate);
    CHECK_FALSE(ip.note.empty());
    const Grid omega(1, {1.0, 1.0}, {16, 16});
    const auto t2 = verify_theorem2(Field(omega));
    CHECK(t2.lhs == 0.0);
    CHECK(t2.ingredient("bmo_bar") == 0.0);
    CHECK(t2.implied_constant == 0.0);
}

TEST_CASE("theorem 2 on a constant") {
    const Grid omega(1, {1.0, 1.0}, {64, 64});
    const auto r = verify_theorem2(Field::constant(omega, 5.0));
    CHECK(r.lhs == 5.0);
    CHECK(r.ingredient("bmo") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.ingredient("l1") == doctest::Approx(5.0).epsilon(1e-12));
    const double W = r.ingredient("sobolev");
    CHECK(W == doctest::Approx(5.0).epsilon(1e-3));  // only the zero-order term survives, up to cut-off resolution
    CHECK(r.implied_constant == doctest::Approx(5.0 / (1.0 + 5.0 * (1.0 + std::log(W)))).epsilon(1e-9));
}

TEST_CASE("cut-off itself through theorem 1") {
    const Grid omega(1, {1.0, 1.0}, {16, 16});
    const auto spec = CutoffSpec::around(omega);
    const Field psi = build_cutoff(spec, periodic_box(omega, 4.0));
    const auto r = verify_theorem1(psi);
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(std::isfinite(r.implied_constant));
    CHECK(r.implied_constant > 0.0);
    for (const auto& [k, v] : r.ingredients) CHECK(v >= 0.0);
}

TEST_CASE("band-sup: constants, homogeneity, single band") {
    const Grid g = box_grid(64);
    const auto c = band_sup_check(Field::constant(g, 3.0));
    CHECK(c.lhs <= 1e-12);
    for (double p : c.profile) CHECK(p == 0.0);
    const Field u = log_spike(g, 4.0, Point::Zero(2));
    const auto r1 = band_sup_check(u);
    const auto r2 = band_sup_check(2.0 * u);
    REQUIRE(r1.profile.size() == r2.profile.size());
    for (std::size_t j = 0; j < r1.profile.size(); ++j) CHECK(r2.profile[j] == doctest::Approx(r1.profile[j]).epsilon(1e-10));
}

TEST_CASE("basic log-Sobolev: constant and single band") {
    const Grid g = box_grid(64);
    const auto c = basic_log_sobolev_check(Field::constant(g, 2.0));
    CHECK(c.ingredient("lt_inf_1") <= 1e-12);
    CHECK(c.ingredient("lt_inf_2") <= 1e-12);
    // rho = 8 = 2^3: psi_3 = 1 there and every other multiplier vanishes
    const Grid g2(1, {2.0 * M_PI, 2.0 * M_PI}, {64, 64});
    const Field u = Field::sample(g2, [](const Point& z) { return std::cos(8.0 * z[0]); });
    const auto r = basic_log_sobolev_check(u);
    CHECK(r.ingredient("lt_inf_1") == doctest::Approx(r.ingredient("lt_inf_2")).epsilon(1e-10));
    CHECK(r.implied_constant <= 1.0 + 1e-9);
    const auto ip = interpolation_check(u);
    CHECK(ip.implied_constant == doctest::Approx(std::sqrt(ip.ingredient("lt_inf_1") / ip.ingredient("bmo"))).epsilon(1e-12));
}

TEST_CASE("scaling identity of the theorem-1 report") {
    paralog::testing::Gen gen(11);
    const Grid g = box_grid(32);
    for (int t = 0; t < 10; ++t) {
        const Field u = random_packet(g, 100 + t, 3);
        const double lam = gen.uniform(0.2, 5.0);
        const auto a = verify_theorem1(u);
        const auto b = verify_theorem1(lam * u);
        CHECK(b.lhs == doctest::Approx(lam * a.lhs).epsilon(1e-12));
        CHECK(b.ingredient("bmo") == doctest::Approx(lam * a.ingredient("bmo")).epsilon(1e-12));
        CHECK(b.ingredient("sobolev") == doctest::Approx(lam * a.ingredient("sobolev")).epsilon(1e-12));
        // rhs = 1 + B(1 + l); only the log factor reacts non-linearly
        const double expect_rhs = 1.0 + lam * a.ingredient("bmo") * (1.0 + log_plus(lam * a.ingredient("sobolev")));
        CHECK(b.rhs == doctest::Approx(expect_rhs).epsilon(1e-12));
    }
}

TEST_CASE("reports are reproducible") {
    const Grid g = box_grid(32);
    const Field u = random_packet(g, 5, 3);
    for (Check c : {Check::Theorem1, Check::Basic, Check::Interp, Check::BandSup, Check::LowBand})
        CHECK(same_report(run_check(c, u, {}), run_check(c, u, {})));
    const Grid omega(1, {1.0, 1.0}, {16, 16});
    const Field v = random_smooth(omega, 9, 3);
    CHECK(same_report(verify_theorem2(v), verify_theorem2(v)));
}

TEST_CASE("families") {
    const Grid g = box_grid(32);
    FieldFamily f;
    f.kind = FieldFamily::Kind::Random;
    f.params = {0, 1};
    f.seed = 42;
    CHECK(paralog::testing::max_abs_diff(f.generate(g, 0), f.generate(g, 0)) == 0.0);
    CHECK(paralog::testing::max_abs_diff(f.generate(g, 0), f.generate(g, 1)) > 0.0);
    CHECK_THROWS_AS(f.generate(g, 2), DomainError);
    CHECK(FieldFamily::parse_kind("logspike") == FieldFamily::Kind::LogSpike);
    CHECK_THROWS_AS(FieldFamily::parse_kind("nope"), DomainError);
    CHECK_THROWS_AS(parse_check("theorem3"), DomainError);
    CHECK(parse_check("bandsup") == Check::BandSup);

    // log spike: capped at M, clipped at 0, peak at the centre node
    const Field s = log_spike(g, 3.0, Point::Zero(2));
    CHECK(s.values.maxCoeff() == 3.0);
    CHECK(s.values.minCoeff() >= 0.0);

    // packet: the window is flat at the faces, so the outermost nodes are tiny
    const Field p = random_packet(g, 1, 3);
    for (Index k = 0; k < g.size(); ++k) {
        const Point z = g.position(k);
        if (std::abs(z[0]) >= 3.8 || std::abs(z[1]) >= 3.8) CHECK(std::abs(p.values[k]) <= 1e-3 * p.max_abs());
    }
}

TEST_CASE("constant sweep") {
    const Grid g = box_grid(32);
    FieldFamily consts;
    consts.kind = FieldFamily::Kind::Constant;
    consts.params = {1.0, 2.0, 7.0};
    const auto t = constant_sweep(consts, g, {Check::Theorem1});
    CHECK(t.rows.size() == 3);
    for (const auto& row : t.rows) CHECK(row.report.ingredient("bmo") <= 1e-12);
    CHECK(constant_sweep(consts, g, {}).rows.empty());
    CHECK(constant_sweep(consts, g, {}).summary.empty());
    CHECK_THROWS_AS(constant_sweep(FieldFamily{}, g, {Check::Theorem1}), DomainError);

    FieldFamily spikes;
    spikes.params = {2.0, 4.0, 8.0};
    const Grid sg(1, {4.0, 4.0}, {64, 64}, {-2.0, -2.0});
    const auto s = constant_sweep(spikes, sg, {Check::Theorem1, Check::LowBand});
    CHECK(s.rows.size() == 6);
    const auto* t1 = s.find(Check::Theorem1);
    REQUIRE(t1 != nullptr);
    CHECK(t1->count == 3);
    CHECK(t1->min <= t1->median);
    CHECK(t1->median <= t1->max);
    CHECK(std::isfinite(s.find(Check::LowBand)->max));
}
