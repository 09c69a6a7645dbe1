#pragma once

// Inequality instances assembled from the norm modules, the seeded field
// families they are evaluated on, and the sweep that aggregates implied
// constants (lhs divided by the right-hand side taken with C = 1).

#include "paralog/extension.hpp"

#include <map>
#include <string>

namespace paralog {

/// max(log x, 0)
inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

struct HarnessConfig {
    SobolevOrder order{1};
    CubeSearchPolicy policy{};
    BumpProfile profile{};
    double box_factor = 4.0;  ///< periodic box size relative to Omega_T
};

struct InequalityReport {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;                          ///< right-hand side with C = 1
    double implied_constant = 0.0;             ///< lhs / rhs
    bool degenerate = false;                   ///< rhs vanished; constant undefined
    std::string note;
    std::map<std::string, double> ingredients; ///< named nonnegative inputs
    std::vector<double> profile;               ///< per-band ratios (band_sup)
    std::string field;
    std::string grid;
    std::string policy;

    double ingredient(const std::string& key) const {
        auto it = ingredients.find(key);
        return it == ingredients.end() ? 0.0 : it->second;
    }
};

std::string describe(const Grid& g);
std::string describe(const CubeSearchPolicy& p);

/// ||u||_inf <= C (1 + ||u||_BMO (1 + log+ ||u||_W)) on the periodic box.
InequalityReport verify_theorem1(const Field& u, const HarnessConfig& cfg = {});

/// ||u||_{L^inf(Omega_T)} <= C (1 + ||u||_{BMO-bar(Omega_T)} (1 + log+ ||u||_{W(Omega_T)}))
/// with u given on Omega_T; the report also carries the extension ratios
/// ||Psi u~||_W / ||u||_W and ||Psi u~||_BMO / ||u||_{BMO-bar}.
InequalityReport verify_theorem2(const Field& u, const HarnessConfig& cfg = {});

/// ||u||_{F~0_{inf,1}} <= C (1 + ||u||_{F~0_{inf,2}} (1 + (log+ ||u||_W)^{1/2}))
InequalityReport basic_log_sobolev_check(const Field& u, const HarnessConfig& cfg = {});

/// ||u||_{F~0_{inf,2}} <= C ||u||_BMO^{1/2} ||u||_{F~0_{inf,1}}^{1/2}
InequalityReport interpolation_check(const Field& u, const HarnessConfig& cfg = {});

/// sup_{j >= 1} ||phi_j * u||_inf <= C ||u||_BMO, with per-band ratios in
/// `profile` (index j-1) and the resolved-band spread in ingredients.
InequalityReport band_sup_check(const Field& u, const HarnessConfig& cfg = {});

/// ||phi_0 * u||_inf <= C (1 + ||u||_BMO (1 + log+ ||u||_W))
InequalityReport low_band_check(const Field& u, const HarnessConfig& cfg = {});

enum class Check { Theorem1, Theorem2, Basic, Interp, BandSup, LowBand };

const char* to_string(Check c);
Check parse_check(const std::string& s);
InequalityReport run_check(Check c, const Field& u, const HarnessConfig& cfg);

/// Seeded, deterministic field generators.
struct FieldFamily {
    enum class Kind { Constant, LogSpike, Random, Packet };

    Kind kind = Kind::LogSpike;
    std::vector<double> params;  ///< value / amplitude M / seed / frequency per member
    int modes = 6;               ///< random: maximal wavenumber per axis
    std::uint64_t seed = 1;
    bool corner = false;         ///< log spike at the node nearest the lower corner

    std::size_t size() const { return params.size(); }
    Field generate(const Grid& g, std::size_t member, const BumpProfile& profile = {}) const;
    std::string describe(std::size_t member) const;

    static Kind parse_kind(const std::string& s);
};

/// min(M, log(1/rho_k(z - c))) clipped below at 0, centred at the node
/// nearest to `centre`.
Field log_spike(const Grid& g, double M, const Point& centre, const BumpProfile& profile = {});

/// Random combination of Fourier modes with |k_a| <= modes, multiplied by
/// a smooth window equal to 1 on the middle half of the box and flat to all
/// orders at its faces.
Field random_packet(const Grid& g, std::uint64_t seed, int modes);

/// Random smooth, non-periodic field on a box (trigonometric terms with
/// non-integer frequencies plus a low-order polynomial).
Field random_smooth(const Grid& g, std::uint64_t seed, int modes);

struct SweepRow {
    Check check;
    std::string field;
    InequalityReport report;
};

struct SweepSummary {
    Check check;
    std::size_t count = 0;
    double min = 0.0, median = 0.0, max = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summary;

    const SweepSummary* find(Check c) const {
        for (const auto& s : summary)
            if (s.check == c) return &s;
        return nullptr;
    }
};

SweepTable constant_sweep(const FieldFamily& family, const Grid& grid, const std::vector<Check>& checks,
                          const HarnessConfig& cfg = {});

}  // namespace paralog
