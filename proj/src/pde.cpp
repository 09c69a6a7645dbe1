#include "paralog/pde.hpp"

#include <sstream>

namespace paralog {

void PdeConfig::validate() const {
    if (N < 8 || N % 2 != 0) throw DomainError("pde: N must be even and >= 8");
    if (!(dt > 0.0)) throw DomainError("pde: dt must be positive");
    if (!(a > 0.0 && a < 1.0)) throw DomainError("pde: shift a must lie in (0, 1)");
    if (!(T_end > 0.0)) throw DomainError("pde: T must be positive");
    if (!(delta0 > 0.0)) throw DomainError("pde: delta0 must be positive");
    if (snapshot_points < 4 || snapshot_points % 2 != 0 || N % snapshot_points != 0)
        throw DomainError("pde: snapshot_points must be even, >= 4 and divide N");
    if (dt > stability_bound())
        throw DomainError("pde: dt exceeds the stability bound " + std::to_string(stability_bound()));
    const Eigen::VectorXd v0 = initial_gradient();
    if (v0.minCoeff() < delta0)
        throw DomainError("pde: initial gradient violates the floor delta0");
    if (std::abs(v0.mean() - 1.0) > 1e-10)
        throw DomainError("pde: initial gradient must have mean 1 (u(x+1) = u(x) + 1)");
}

Eigen::VectorXd PdeConfig::initial_gradient() const {
    Eigen::VectorXd v(N);
    if (v0 == "const") {
        v.setOnes();
        return v;
    }
    if (v0.rfind("sine:", 0) == 0) {
        const double amp = std::stod(v0.substr(5));
        for (Index i = 0; i < N; ++i) v[i] = 1.0 + amp * std::sin(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(N));
        return v;
    }
    throw DomainError("pde: unknown initial profile '" + v0 + "' (const | sine:<amp>)");
}

double PdeConfig::stability_bound() const {
    // |dF/dv| <= |v(x+a)| + 1/v(x), evaluated on the initial profile
    const Eigen::VectorXd v = initial_gradient();
    const double lo = std::max(v.minCoeff(), delta0);
    return 1.0 / (v.cwiseAbs().maxCoeff() + 1.0 / lo);
}

PeriodicLine::PeriodicLine(Index N) : N_(N), kappa_(N) {
    for (Index k = 0; k < N; ++k) {
        const Index w = k < N / 2 ? k : k - N;
        kappa_[k] = 2.0 * M_PI * static_cast<double>(w);
    }
}

Eigen::VectorXcd PeriodicLine::fwd(const Eigen::VectorXd& f) const {
    Eigen::VectorXcd F;
    fft_.fwd(F, f);
    return F;
}

Eigen::VectorXd PeriodicLine::inv(const Eigen::VectorXcd& F) const {
    Eigen::VectorXcd f;
    fft_.inv(f, F);
    return f.real();
}

Eigen::VectorXd PeriodicLine::derivative(const Eigen::VectorXd& f) const {
    Eigen::VectorXcd F = fwd(f);
    for (Index k = 0; k < N_; ++k) F[k] *= k == N_ / 2 ? std::complex<double>(0.0) : std::complex<double>(0.0, kappa_[k]);
    return inv(F);
}

Eigen::VectorXd PeriodicLine::shifted(const Eigen::VectorXd& f, double shift) const {
    Eigen::VectorXcd F = fwd(f);
    for (Index k = 0; k < N_; ++k) {
        if (k == N_ / 2) {
            F[k] *= std::cos(kappa_[k] * shift);  // keep the Nyquist mode real
            continue;
        }
        F[k] *= std::polar(1.0, kappa_[k] * shift);
    }
    return inv(F);
}

PdeSolver::PdeSolver(PdeConfig cfg) : cfg_(std::move(cfg)), line_(cfg_.N), decay_(cfg_.N), phi_(cfg_.N) {
    cfg_.validate();
    for (Index k = 0; k < cfg_.N; ++k) {
        const double k2 = line_.wavenumber(k) * line_.wavenumber(k);
        decay_[k] = std::exp(-k2 * cfg_.dt);
        phi_[k] = k2 == 0.0 ? cfg_.dt : -std::expm1(-k2 * cfg_.dt) / k2;
    }
}

PdeState PdeSolver::initial_state() const {
    // p_x = v0 - 1 with zero mean; p has zero mean as well
    const Eigen::VectorXd dv = cfg_.initial_gradient().array() - 1.0;
    Eigen::VectorXcd F = line_.fwd(dv);
    for (Index k = 0; k < cfg_.N; ++k) {
        const double kap = line_.wavenumber(k);
        F[k] = (k == 0 || k == cfg_.N / 2) ? std::complex<double>(0.0) : F[k] / std::complex<double>(0.0, kap);
    }
    return PdeState{line_.inv(F), 0.0, 0};
}

Eigen::VectorXd PdeSolver::gradient(const PdeState& s) const { return (1.0 + line_.derivative(s.p).array()).matrix(); }

void PdeSolver::step(PdeState& s) const {
    Eigen::VectorXcd P = line_.fwd(s.p);
    if (cfg_.forcing) {
        const Eigen::VectorXd v = gradient(s);
        const double mv = v.minCoeff();
        if (!(mv > 0.0)) throw GradientFloorBreach(s.time, mv);
        const Eigen::VectorXd vs = line_.shifted(v, cfg_.a);
        const Eigen::VectorXd F = ((v.array() * vs.array()).sin() + v.array().log().sin()).matrix();
        const Eigen::VectorXcd Fh = line_.fwd(F);
        P = decay_.cast<std::complex<double>>().cwiseProduct(P) + phi_.cast<std::complex<double>>().cwiseProduct(Fh);
    } else {
        P = decay_.cast<std::complex<double>>().cwiseProduct(P);
    }
    s.p = line_.inv(P);
    s.time += cfg_.dt;
    ++s.steps;
}

Field Diagnostics::space_time_field(double t) const {
    if (snapshots.empty() || !(snapshot_dt > 0.0)) throw DomainError("diagnostics: no v_x snapshots recorded");
    Index K = 0;
    while (K < static_cast<Index>(snapshots.size()) && (static_cast<double>(K) + 0.5) * snapshot_dt < t + 1e-12) ++K;
    K -= K % 2;
    if (K < 4) throw DomainError("diagnostics: fewer than 4 snapshots before t");
    const Index Nx = snapshot_points;
    Grid g(1, {1.0, static_cast<double>(K) * snapshot_dt}, {Nx, K});
    Field f(g);
    for (Index i = 0; i < Nx; ++i)
        for (Index k = 0; k < K; ++k) f.values[i * K + k] = snapshots[static_cast<std::size_t>(k)][i];
    return f;
}

Trajectory run(const PdeConfig& cfg, int checkpoints, const HarnessConfig& harness) {
    PdeSolver solver(cfg);
    const PeriodicLine& line = solver.line();
    Trajectory tr;
    PdeState s = solver.initial_state();
    const auto steps = static_cast<Index>(std::llround(cfg.T_end / cfg.dt));
    const int record = cfg.record_every > 0 ? cfg.record_every : static_cast<int>(std::max<Index>(1, steps / 1000));
    Index snap = std::max<Index>(2, steps / std::max(cfg.snapshots, 1));
    snap += snap % 2;
    const Index ratio = cfg.N / cfg.snapshot_points;
    const double snap_shift = 0.5 / static_cast<double>(cfg.snapshot_points);
    tr.diag.snapshot_dt = static_cast<double>(snap) * cfg.dt;
    tr.diag.snapshot_points = cfg.snapshot_points;

    auto observe = [&](const PdeState& st) {
        const Eigen::VectorXd v = solver.gradient(st);
        if (st.steps % record == 0) {
            const Eigen::VectorXd vx = line.derivative(v);
            tr.diag.t.push_back(st.time);
            tr.diag.m.push_back(v.minCoeff());
            tr.diag.G.push_back(vx.cwiseAbs().maxCoeff());
            tr.times.push_back(st.time);
            tr.profiles.push_back(v);
        }
        if (st.steps % snap == snap / 2) {
            // cell-centred coarse lattice (i + 1/2) / snapshot_points
            const Eigen::VectorXd vx = line.shifted(line.derivative(v), snap_shift);
            Eigen::VectorXd coarse(cfg.snapshot_points);
            for (Index i = 0; i < cfg.snapshot_points; ++i) coarse[i] = vx[i * ratio];
            tr.diag.snapshots.push_back(std::move(coarse));
        }
    };

    observe(s);
    for (Index n = 0; n < steps; ++n) {
        solver.step(s);
        observe(s);
    }
    tr.final = s;

    for (int c = 1; c <= checkpoints; ++c) {
        const double tc = cfg.T_end * c / checkpoints;
        Field f;
        try {
            f = tr.diag.space_time_field(tc);
        } catch (const DomainError&) {
            continue;
        }
        tr.diag.norm_t.push_back(f.grid.time_len());
        tr.diag.norm_bmo.push_back(overline_bmo_norm(f, Box::of(f.grid), harness.policy).value);
        tr.diag.norm_sobolev.push_back(bounded_sobolev_norm(f, SobolevOrder{1}));
    }
    return tr;
}

AprioriFit check_apriori(const Diagnostics& diag) {
    const std::size_t n = diag.t.size();
    if (n < 10) throw DomainError("check_apriori: fewer than 10 diagnostic samples");
    for (double m : diag.m)
        if (!(m > 0.0)) throw DomainError("check_apriori: nonpositive gradient minimum in the record");
    AprioriFit fit;
    fit.samples = n;
    fit.min_m = *std::min_element(diag.m.begin(), diag.m.end());
    // differences below the rounding level of m are reported as zero
    const double mmax = *std::max_element(diag.m.begin(), diag.m.end());
    std::vector<double> mt(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double dm = diag.m[k + 1] - diag.m[k - 1];
        if (std::abs(dm) > 1e3 * std::numeric_limits<double>::epsilon() * mmax)
            mt[k] = dm / (diag.t[k + 1] - diag.t[k - 1]);
    }
    double lip = 0.0;
    for (std::size_t k = 1; k + 2 < n; ++k) lip = std::max(lip, std::abs(mt[k + 1] - mt[k]) / (diag.t[k + 1] - diag.t[k]));
    const double dts = (diag.t.back() - diag.t.front()) / static_cast<double>(n - 1);
    fit.slack = 2.0 * dts * lip;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double m = diag.m[k];
        const double weight = m * (std::abs(std::log(m)) + 1.0);
        fit.C1 = std::max(fit.C1, -mt[k] / weight);
        if (mt[k] < -m * diag.G[k] - fit.slack) ++fit.mt_bound_violations;
    }
    for (std::size_t k = 0; k < n; ++k) fit.C2 = std::max(fit.C2, diag.G[k] / (1.0 + std::abs(std::log(diag.m[k]))));
    return fit;
}

ClosureReport kt_closure_check(const Diagnostics& diag, double t, const HarnessConfig& harness) {
    ClosureReport r;
    const Field vx = diag.space_time_field(t);
    r.t = vx.grid.time_len();
    HarnessConfig cfg = harness;
    cfg.order = SobolevOrder{1};
    r.theorem2 = verify_theorem2(vx, cfg);
    r.theorem2.field = "v_x on (0,1)x(0," + std::to_string(r.t) + ")";
    double gsup = 0.0, mt = 0.0;
    for (std::size_t k = 0; k < diag.t.size() && diag.t[k] <= t + 1e-12; ++k) {
        gsup = std::max(gsup, diag.G[k]);
        r.G = diag.G[k];
        mt = diag.m[k];
    }
    r.implied_constant = r.theorem2.rhs > 0.0 ? gsup / r.theorem2.rhs : 0.0;
    r.sobolev_times_m2 = r.theorem2.ingredient("sobolev") * mt * mt;
    return r;
}

}  // namespace paralog
