#pragma once

// Pseudo-spectral solver for the 1-periodic model problem
//     u_t - u_xx = sin(u_x(x) u_x(x + a)) + sin(log u_x(x)),  u(x+1) = u(x) + 1,
// written as u = x + p with p periodic, so v = u_x = 1 + p_x. Diffusion is
// integrated exactly per Fourier mode, the forcing explicitly (exponential
// Euler, first order), and the shift x -> x + a is a spectral phase.

#include "paralog/harness.hpp"

#include <functional>
#include <string>

namespace paralog {

/// min_x v <= 0: log v undefined. Carries the time of the offending step.
class GradientFloorBreach : public DomainError {
public:
    GradientFloorBreach(double t, double m)
        : DomainError("gradient floor breached at t=" + std::to_string(t) + " (min v=" + std::to_string(m) + ")"),
          time(t), minimum(m) {}
    double time;
    double minimum;
};

struct PdeConfig {
    Index N = 256;            ///< spatial modes
    double dt = 1e-4;
    double a = 0.5;           ///< shift, 0 < a < 1
    double T_end = 1.0;
    double delta0 = 1e-3;     ///< required lower bound on v0
    std::string v0 = "const"; ///< "const" or "sine:<amp>"
    bool forcing = true;      ///< false: pure heat flow (test mode)
    int record_every = 0;     ///< diagnostic cadence in steps; 0 picks ~1000 records
    int snapshots = 64;       ///< target number of v_x snapshots over [0, T_end]
    Index snapshot_points = 64;

    void validate() const;
    /// v0 sampled at x_i = i/N.
    Eigen::VectorXd initial_gradient() const;
    /// Largest dt with |dF/dv| dt <= 1 on the initial profile.
    double stability_bound() const;
};

struct PdeState {
    Eigen::VectorXd p;  ///< periodic part of u at x_i = i/N
    double time = 0.0;
    Index steps = 0;
};

/// Spectral helpers on the unit periodic interval.
class PeriodicLine {
public:
    explicit PeriodicLine(Index N);

    Index size() const { return N_; }
    double wavenumber(Index k) const { return kappa_[k]; }

    Eigen::VectorXcd fwd(const Eigen::VectorXd& f) const;
    Eigen::VectorXd inv(const Eigen::VectorXcd& F) const;

    /// d/dx of a real periodic sample vector.
    Eigen::VectorXd derivative(const Eigen::VectorXd& f) const;
    /// f(x + shift), exact for band-limited f.
    Eigen::VectorXd shifted(const Eigen::VectorXd& f, double shift) const;

private:
    Index N_;
    Eigen::VectorXd kappa_;  ///< angular wavenumbers, Nyquist set to 0 for odd operators
    mutable Eigen::FFT<double> fft_;
};

class PdeSolver {
public:
    explicit PdeSolver(PdeConfig cfg);

    const PdeConfig& config() const { return cfg_; }
    const PeriodicLine& line() const { return line_; }

    PdeState initial_state() const;

    /// v = 1 + p_x
    Eigen::VectorXd gradient(const PdeState& s) const;

    /// One exponential-Euler step; throws GradientFloorBreach if min v <= 0.
    void step(PdeState& s) const;

private:
    PdeConfig cfg_;
    PeriodicLine line_;
    Eigen::VectorXd decay_;  ///< exp(-kappa^2 dt)
    Eigen::VectorXd phi_;    ///< (1 - exp(-kappa^2 dt)) / kappa^2, dt at kappa = 0
};

struct Diagnostics {
    std::vector<double> t;
    std::vector<double> m;  ///< min_x v
    std::vector<double> G;  ///< max_x |v_x|
    /// v_x on the snapshot lattice; snapshot k sits at time (k + 1/2) dt_snap
    std::vector<Eigen::VectorXd> snapshots;
    double snapshot_dt = 0.0;
    Index snapshot_points = 0;
    /// Running space-time norms of v_x on (0,1) x (0,t) at checkpoint times.
    std::vector<double> norm_t, norm_bmo, norm_sobolev;

    /// v_x on (0,1) x (0, t') from the snapshots with (k + 1/2) dt_snap < t,
    /// an even number of them (at least 4).
    Field space_time_field(double t) const;
};

struct Trajectory {
    PdeState final;
    Diagnostics diag;
    std::vector<double> times;             ///< times of stored p profiles
    std::vector<Eigen::VectorXd> profiles; ///< v at the diagnostic records
};

/// Integrates to T_end. `checkpoints` > 0 fills the running BMO / Sobolev
/// norms of v_x at that many equally spaced times.
Trajectory run(const PdeConfig& cfg, int checkpoints = 0, const HarnessConfig& harness = {});

struct AprioriFit {
    std::size_t samples = 0;
    double C1 = 0.0;  ///< smallest C with m_t >= -C m (|log m| + 1)
    double C2 = 0.0;  ///< smallest C with G <= C (1 + |log m|)
    double slack = 0.0;
    std::size_t mt_bound_violations = 0;  ///< samples with m_t < -m G - slack
    double min_m = 0.0;
};

AprioriFit check_apriori(const Diagnostics& diag);

struct ClosureReport {
    double t = 0.0;
    double G = 0.0;                  ///< G at the last diagnostic record <= t
    InequalityReport theorem2;       ///< v_x through the bounded-domain inequality
    double implied_constant = 0.0;   ///< sup_{s<=t} G(s) / rhs
    double sobolev_times_m2 = 0.0;   ///< ||v_x||_W m(t)^2
};

ClosureReport kt_closure_check(const Diagnostics& diag, double t, const HarnessConfig& harness = {});

}  // namespace paralog
