#include "paralog/harness.hpp"

#include <random>
#include <sstream>

namespace paralog {

std::string describe(const Grid& g) {
    std::ostringstream os;
    os << "n=" << g.n() << " shape=";
    for (int a = 0; a < g.axes(); ++a) os << (a ? "x" : "") << g.shape(a);
    os << " box=";
    for (int a = 0; a < g.axes(); ++a) os << (a ? "x" : "") << g.length(a);
    return os.str();
}

std::string describe(const CubeSearchPolicy& p) {
    std::ostringstream os;
    os << "dyadic r_max=" << (p.r_max > 0.0 ? std::to_string(p.r_max) : std::string("auto")) << " stride=" << p.stride
       << " min_cells=" << p.min_cells;
    return os.str();
}

namespace {

void finish(InequalityReport& r, const Field& u, const HarnessConfig& cfg) {
    r.grid = describe(u.grid);
    r.policy = describe(cfg.policy);
    if (r.rhs > 0.0) {
        r.implied_constant = r.lhs / r.rhs;
    } else {
        r.degenerate = true;
        r.implied_constant = 0.0;
        if (r.note.empty()) r.note = "right-hand side vanishes";
    }
}

/// 1 + a (1 + b)
double log_rhs(double a, double b) { return 1.0 + a * (1.0 + b); }

}  // namespace

InequalityReport verify_theorem1(const Field& u, const HarnessConfig& cfg) {
    InequalityReport r;
    r.id = "theorem1";
    r.lhs = lp_norm(u, kInf);
    const double bmo = bmo_norm(u, cfg.policy, BmoForm::Oscillation).value;
    const double W = parabolic_sobolev_norm(u, cfg.order);
    r.ingredients = {{"bmo", bmo}, {"sobolev", W}, {"log_plus", log_plus(W)}};
    r.rhs = log_rhs(bmo, log_plus(W));
    finish(r, u, cfg);
    return r;
}

InequalityReport verify_theorem2(const Field& u, const HarnessConfig& cfg) {
    InequalityReport r;
    r.id = "theorem2";
    const Box omega = Box::of(u.grid);
    const auto loc = extend_and_localize(u, ExtensionPlan{std::max(cfg.order.m, 1), 0}, cfg.box_factor);
    r.lhs = lp_norm(u, kInf);
    const auto ob = overline_bmo_norm(u, omega, cfg.policy);
    const double W = parabolic_sobolev_norm(loc.field, cfg.order, omega);
    const double W_loc = parabolic_sobolev_norm(loc.field, cfg.order);
    const double bmo_loc = bmo_norm(loc.field, cfg.policy, BmoForm::Oscillation).value;
    r.ingredients = {{"bmo", ob.bmo},
                     {"l1", ob.l1},
                     {"bmo_bar", ob.value},
                     {"sobolev", W},
                     {"log_plus", log_plus(W)},
                     {"sobolev_localized", W_loc},
                     {"bmo_localized", bmo_loc},
                     {"sobolev_ratio", W > 0.0 ? W_loc / W : 0.0},
                     {"bmo_ratio", ob.value > 0.0 ? bmo_loc / ob.value : 0.0}};
    r.rhs = log_rhs(ob.value, log_plus(W));
    finish(r, u, cfg);
    return r;
}

InequalityReport basic_log_sobolev_check(const Field& u, const HarnessConfig& cfg) {
    InequalityReport r;
    r.id = "basic";
    const auto P = build_partition(u.grid, cfg.profile);
    const auto B = decompose(u, P);
    const double f1 = lizorkin_triebel_norm(B, 0.0, kInf, 1.0, true);
    const double f2 = lizorkin_triebel_norm(B, 0.0, kInf, 2.0, true);
    const double W = parabolic_sobolev_norm(u, cfg.order);
    r.lhs = f1;
    r.ingredients = {{"lt_inf_1", f1}, {"lt_inf_2", f2}, {"sobolev", W}, {"log_plus", log_plus(W)}};
    r.rhs = 1.0 + f2 * (1.0 + std::sqrt(log_plus(W)));
    finish(r, u, cfg);
    return r;
}

InequalityReport interpolation_check(const Field& u, const HarnessConfig& cfg) {
    InequalityReport r;
    r.id = "interp";
    const auto P = build_partition(u.grid, cfg.profile);
    const auto B = decompose(u, P);
    const double f1 = lizorkin_triebel_norm(B, 0.0, kInf, 1.0, true);
    const double f2 = lizorkin_triebel_norm(B, 0.0, kInf, 2.0, true);
    const double bmo = bmo_norm(u, cfg.policy, BmoForm::Oscillation).value;
    r.lhs = f2;
    r.ingredients = {{"lt_inf_1", f1}, {"lt_inf_2", f2}, {"bmo", bmo}};
    r.rhs = std::sqrt(bmo * f1);
    if (!(r.rhs > 0.0)) r.note = "degenerate: BMO or F~0_{inf,1} vanishes";
    finish(r, u, cfg);
    return r;
}

InequalityReport band_sup_check(const Field& u, const HarnessConfig& cfg) {
    InequalityReport r;
    r.id = "bandsup";
    const auto P = build_partition(u.grid, cfg.profile);
    const auto B = decompose(u, P);
    const double bmo = bmo_norm(u, cfg.policy, BmoForm::Oscillation).value;
    double sup = 0.0;
    for (int j = 1; j <= B.J(); ++j) {
        const double bj = lp_norm(B.bands[static_cast<std::size_t>(j)], kInf);
        sup = std::max(sup, bj);
        r.profile.push_back(bmo > 0.0 ? bj / bmo : 0.0);
    }
    const auto [lo, hi] = P.resolved_bands();
    double rmin = kInf, rmax = 0.0;
    for (int j = lo; j <= hi; ++j) {
        rmin = std::min(rmin, r.profile[static_cast<std::size_t>(j - 1)]);
        rmax = std::max(rmax, r.profile[static_cast<std::size_t>(j - 1)]);
    }
    r.lhs = sup;
    r.rhs = bmo;
    r.ingredients = {{"bmo", bmo},
                     {"band_sup", sup},
                     {"resolved_lo", lo},
                     {"resolved_hi", hi},
                     {"resolved_spread", hi >= lo && rmin > 0.0 ? rmax / rmin : 0.0}};
    if (!(bmo > 0.0) && sup > 1e-12 * (1.0 + u.max_abs()))
        r.note = "BMO vanishes on the search family while bands j>=1 do not: cube family too coarse";
    finish(r, u, cfg);
    return r;
}

InequalityReport low_band_check(const Field& u, const HarnessConfig& cfg) {
    InequalityReport r;
    r.id = "lowband";
    const auto P = build_partition(u.grid, cfg.profile);
    const double b0 = lp_norm(band_filter(u, P, 0), kInf);
    const double bmo = bmo_norm(u, cfg.policy, BmoForm::Oscillation).value;
    const double W = parabolic_sobolev_norm(u, cfg.order);
    r.lhs = b0;
    r.ingredients = {{"band0_sup", b0}, {"bmo", bmo}, {"sobolev", W}, {"log_plus", log_plus(W)}};
    r.rhs = log_rhs(bmo, log_plus(W));
    finish(r, u, cfg);
    return r;
}

const char* to_string(Check c) {
    switch (c) {
        case Check::Theorem1: return "theorem1";
        case Check::Theorem2: return "theorem2";
        case Check::Basic: return "basic";
        case Check::Interp: return "interp";
        case Check::BandSup: return "bandsup";
        case Check::LowBand: return "lowband";
    }
    return "?";
}

Check parse_check(const std::string& s) {
    for (Check c : {Check::Theorem1, Check::Theorem2, Check::Basic, Check::Interp, Check::BandSup, Check::LowBand})
        if (s == to_string(c)) return c;
    throw DomainError("unknown check '" + s + "'");
}

InequalityReport run_check(Check c, const Field& u, const HarnessConfig& cfg) {
    InequalityReport r;
    switch (c) {
        case Check::Theorem1: r = verify_theorem1(u, cfg); break;
        case Check::Theorem2: r = verify_theorem2(u, cfg); break;
        case Check::Basic: r = basic_log_sobolev_check(u, cfg); break;
        case Check::Interp: r = interpolation_check(u, cfg); break;
        case Check::BandSup: r = band_sup_check(u, cfg); break;
        case Check::LowBand: r = low_band_check(u, cfg); break;
    }
    return r;
}

// ---------------------------------------------------------------- families

namespace {

Index nearest_node(const Grid& g, const Point& z) {
    Index flat = 0;
    for (int a = 0; a < g.axes(); ++a) {
        const double s = (z[a] - g.origin(a)) / g.spacing(a) - 0.5;
        const Index i = std::clamp<Index>(std::lround(s), 0, g.shape(a) - 1);
        flat += i * g.stride(a);
    }
    return flat;
}

double window_1d(double y, double centre, double half) {
    const double s = std::abs(y - centre) / (0.5 * half);
    return BumpProfile::transition(s);  // 1 within half/2, 0 beyond half
}

}  // namespace

Field log_spike(const Grid& g, double M, const Point& centre, const BumpProfile& profile) {
    if (!(M > 0.0)) throw DomainError("log_spike: amplitude must be positive");
    const Point c = g.position(nearest_node(g, centre));
    return Field::sample(g, [&](const Point& z) {
        const double rho = profile.quasi_distance(z - c);
        if (rho == 0.0) return M;
        return std::clamp(-std::log(rho), 0.0, M);
    });
}

Field random_packet(const Grid& g, std::uint64_t seed, int modes) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> kd(-modes, modes);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::normal_distribution<double> amp(0.0, 1.0);
    struct Mode {
        std::vector<int> k;
        double a, phi;
    };
    std::vector<Mode> terms;
    for (int i = 0; i < 3 * std::max(modes, 1); ++i) {
        Mode m;
        double norm = 0.0;
        for (int a = 0; a < g.axes(); ++a) {
            m.k.push_back(kd(rng));
            norm += std::abs(m.k.back());
        }
        m.a = amp(rng) / (1.0 + norm);
        m.phi = phase(rng);
        terms.push_back(std::move(m));
    }
    return Field::sample(g, [&](const Point& z) {
        double w = 1.0;
        for (int a = 0; a < g.axes(); ++a) w *= window_1d(z[a], g.origin(a) + 0.5 * g.length(a), 0.5 * g.length(a));
        if (w == 0.0) return 0.0;
        double v = 0.0;
        for (const auto& m : terms) {
            double arg = m.phi;
            for (int a = 0; a < g.axes(); ++a) arg += 2.0 * M_PI * m.k[static_cast<std::size_t>(a)] * (z[a] - g.origin(a)) / g.length(a);
            v += m.a * std::cos(arg);
        }
        return w * v;
    });
}

Field random_smooth(const Grid& g, std::uint64_t seed, int modes) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    struct Term {
        std::vector<double> w;
        double a, phi;
    };
    std::vector<Term> terms;
    for (int i = 0; i < std::max(modes, 1); ++i) {
        Term t;
        double norm = 0.0;
        for (int a = 0; a < g.axes(); ++a) {
            t.w.push_back(M_PI * modes * unit(rng) / g.length(a));
            norm += std::abs(t.w.back()) * g.length(a);
        }
        t.a = unit(rng) / (1.0 + 0.2 * norm);
        t.phi = phase(rng);
        terms.push_back(std::move(t));
    }
    std::vector<double> poly;
    for (int a = 0; a <= g.axes(); ++a) poly.push_back(0.5 * unit(rng));
    return Field::sample(g, [&](const Point& z) {
        double v = poly[0];
        for (int a = 0; a < g.axes(); ++a) v += poly[static_cast<std::size_t>(a + 1)] * (z[a] - g.origin(a)) / g.length(a);
        for (const auto& t : terms) {
            double arg = t.phi;
            for (int a = 0; a < g.axes(); ++a) arg += t.w[static_cast<std::size_t>(a)] * (z[a] - g.origin(a));
            v += t.a * std::cos(arg);
        }
        return v;
    });
}

FieldFamily::Kind FieldFamily::parse_kind(const std::string& s) {
    if (s == "const") return Kind::Constant;
    if (s == "logspike") return Kind::LogSpike;
    if (s == "random") return Kind::Random;
    if (s == "packet") return Kind::Packet;
    throw DomainError("unknown family '" + s + "' (const|logspike|random|packet)");
}

Field FieldFamily::generate(const Grid& g, std::size_t member, const BumpProfile& profile) const {
    if (member >= params.size()) throw DomainError("field family: member out of range");
    const double p = params[member];
    switch (kind) {
        case Kind::Constant: return Field::constant(g, p);
        case Kind::LogSpike: {
            Point c(g.axes());
            for (int a = 0; a < g.axes(); ++a) c[a] = corner ? g.origin(a) : g.origin(a) + 0.5 * g.length(a);
            return log_spike(g, p, c, profile);
        }
        case Kind::Random:
            return random_packet(g, seed + static_cast<std::uint64_t>(p), modes);
        case Kind::Packet: {
            // cos(p x_1) under a smooth window
            return Field::sample(g, [&](const Point& z) {
                double w = 1.0;
                for (int a = 0; a < g.axes(); ++a) w *= window_1d(z[a], g.origin(a) + 0.5 * g.length(a), 0.5 * g.length(a));
                return w * std::cos(p * (z[0] - g.origin(0) - 0.5 * g.length(0)));
            });
        }
    }
    return Field(g);
}

std::string FieldFamily::describe(std::size_t member) const {
    std::ostringstream os;
    const double p = member < params.size() ? params[member] : 0.0;
    switch (kind) {
        case Kind::Constant: os << "const value=" << p; break;
        case Kind::LogSpike: os << "logspike M=" << p << (corner ? " corner" : " centre"); break;
        case Kind::Random: os << "random seed=" << seed + static_cast<std::uint64_t>(p) << " modes=" << modes; break;
        case Kind::Packet: os << "packet freq=" << p; break;
    }
    return os.str();
}

SweepTable constant_sweep(const FieldFamily& family, const Grid& grid, const std::vector<Check>& checks,
                          const HarnessConfig& cfg) {
    if (family.size() == 0) throw DomainError("constant_sweep: empty family");
    SweepTable table;
    for (Check c : checks) {
        std::vector<double> constants;
        for (std::size_t i = 0; i < family.size(); ++i) {
            const Field u = family.generate(grid, i, cfg.profile);
            SweepRow row{c, family.describe(i), run_check(c, u, cfg)};
            row.report.field = row.field;
            if (!row.report.degenerate) constants.push_back(row.report.implied_constant);
            table.rows.push_back(std::move(row));
        }
        SweepSummary s{c, constants.size(), 0.0, 0.0, 0.0};
        if (!constants.empty()) {
            std::sort(constants.begin(), constants.end());
            s.min = constants.front();
            s.max = constants.back();
            const std::size_t mid = constants.size() / 2;
            s.median = constants.size() % 2 ? constants[mid] : 0.5 * (constants[mid - 1] + constants[mid]);
        }
        table.summary.push_back(s);
    }
    return table;
}

}  // namespace paralog
