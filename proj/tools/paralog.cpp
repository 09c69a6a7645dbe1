// paralog: command-line front end. One subcommand per process; every
// artifact embeds the manifest of the run that produced it.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include "paralog/field_io.hpp"
#include "paralog/harness.hpp"
#include "paralog/pde.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace paralog;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kCutoffVersion = "exp-splice/1";

/// Command name, every option with its value (defaults included), versions.
json manifest_of(const CLI::App& sub) {
    json m;
    m["command"] = sub.get_name();
    json params = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_name() == "--help") continue;
        std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
        if (opt->count() > 0) {
            const auto& res = opt->results();
            params[key] = res.size() == 1 ? json(res.front()) : json(res);
        } else if (!opt->get_default_str().empty()) {
            params[key] = opt->get_default_str();
        } else if (opt->get_expected_min() == 0) {
            params[key] = false;
        }
    }
    m["params"] = params;
    m["versions"] = {{"bump", BumpProfile::version}, {"cutoff", kCutoffVersion}, {"field_format", kFieldFormatVersion}};
    return m;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "cannot parse '" + tok + "' as a number");
        }
    }
    if (out.empty()) throw CLI::ValidationError(what, "empty list");
    return out;
}

/// Grid flags shared by gen / verify / sweep.
struct GridArgs {
    int n = 1;
    std::string shape;
    std::string box;
    double T = 0.0;
    std::string origin;

    void add(CLI::App* sub) {
        sub->add_option("--n", n, "spatial dimension (1 or 2)")->check(CLI::Range(1, 2));
        sub->add_option("--shape", shape, "samples per axis, comma separated, time last");
        sub->add_option("--box", box, "spatial box lengths, comma separated");
        sub->add_option("--T", T, "time length");
        sub->add_option("--origin", origin, "lower corner, comma separated, time last");
    }

    /// Fills unset pieces from `fallback`.
    Grid build(const Grid& fallback) const {
        const int axes = n + 1;
        std::vector<Index> sh;
        std::vector<double> len, org;
        if (!shape.empty()) {
            for (double v : parse_list(shape, "--shape")) sh.push_back(static_cast<Index>(v));
        } else {
            for (int a = 0; a < axes; ++a) sh.push_back(fallback.shape(std::min(a, fallback.axes() - 1)));
        }
        const double tl = T > 0.0 ? T : fallback.time_len();
        if (!box.empty()) {
            len = parse_list(box, "--box");
            if (len.size() == 1) len.assign(static_cast<std::size_t>(n), len.front());
        } else {
            len.assign(static_cast<std::size_t>(n), fallback.length(0));
        }
        len.push_back(tl);
        if (!origin.empty()) {
            org = parse_list(origin, "--origin");
        } else {
            for (int a = 0; a < n; ++a) org.push_back(fallback.origin(0));
            org.push_back(fallback.origin(fallback.time_axis()));
        }
        return Grid(n, len, sh, org);
    }
};

/// Default lattices: a whole-space box around the origin for the periodic
/// checks, the unit square for the bounded-domain one.
Grid spike_grid() { return Grid(1, {4.0, 4.0}, {256, 128}, {-2.0, -2.0}); }
Grid omega_grid() { return Grid(1, {1.0, 1.0}, {64, 64}); }

struct FamilyArgs {
    std::string family = "logspike";
    std::string values;  // list of family parameters
    std::uint64_t seed = 1;
    int modes = 6;
    bool corner = false;

    void add(CLI::App* sub, bool require_values) {
        sub->add_option("--family", family, "const | logspike | random | packet")
            ->check(CLI::IsMember({"const", "logspike", "random", "packet"}));
        auto* v = sub->add_option("--M,--values", values, "family parameters: value, amplitude, seed offset or frequency");
        if (require_values) v->required();
        sub->add_option("--seed", seed, "base seed of the random family");
        sub->add_option("--modes", modes, "maximal wavenumber of the random family")->check(CLI::Range(1, 64));
        sub->add_flag("--corner", corner, "log spike at the lower corner");
    }

    FieldFamily build() const {
        FieldFamily f;
        f.kind = FieldFamily::parse_kind(family);
        f.params = parse_list(values, "--M");
        f.seed = seed;
        f.modes = modes;
        f.corner = corner;
        return f;
    }
};

json report_json(const InequalityReport& r) {
    json j;
    j["id"] = r.id;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["implied_constant"] = r.implied_constant;
    j["degenerate"] = r.degenerate;
    j["note"] = r.note;
    j["ingredients"] = r.ingredients;
    j["profile"] = r.profile;
    j["field"] = r.field;
    j["grid"] = r.grid;
    j["policy"] = r.policy;
    return j;
}

json cube_json(const ParabolicCube& Q) {
    return {{"center", std::vector<double>(Q.center.data(), Q.center.data() + Q.center.size())}, {"radius", Q.radius}};
}

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string csv_header(const json& manifest) { return "# manifest: " + manifest.dump() + "\n"; }

void emit(const std::string& out, const std::string& contents) {
    if (out.empty() || out == "-")
        std::cout << contents;
    else
        write_text(out, contents);
}

Box parse_domain(const std::string& s, const Grid& g) {
    if (s.empty()) return Box::of(g);
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--domain", "expected lo,..:hi,..");
    const auto lo = parse_list(s.substr(0, colon), "--domain");
    const auto hi = parse_list(s.substr(colon + 1), "--domain");
    if (static_cast<int>(lo.size()) != g.axes() || static_cast<int>(hi.size()) != g.axes())
        throw CLI::ValidationError("--domain", "needs one entry per axis on each side");
    Box b{Point(g.axes()), Point(g.axes())};
    for (int a = 0; a < g.axes(); ++a) {
        b.lo[a] = lo[static_cast<std::size_t>(a)];
        b.hi[a] = hi[static_cast<std::size_t>(a)];
    }
    return b;
}

struct PolicyArgs {
    double r_max = 0.0;
    double stride = 0.5;
    int min_cells = 3;

    void add(CLI::App* sub) {
        sub->add_option("--radii", r_max, "largest cube radius (0: fit the domain)");
        sub->add_option("--stride", stride, "centre stride as a fraction of the radius");
        sub->add_option("--min-cells", min_cells, "cells per spatial axis in the smallest cube");
    }

    CubeSearchPolicy build() const {
        CubeSearchPolicy p{r_max, stride, min_cells};
        p.validate();
        return p;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"paralog: parabolic BMO / log-Sobolev toolkit"};
    app.require_subcommand(1, 1);

    // ---- gen
    auto* gen = app.add_subcommand("gen", "generate a field file");
    GridArgs gen_grid;
    gen_grid.add(gen);
    std::string gen_family = "const", gen_out;
    double gen_value = 1.0;
    std::uint64_t gen_seed = 1;
    int gen_modes = 6;
    bool gen_corner = false;
    gen->add_option("--family", gen_family, "const | logspike | random | packet | smooth")
        ->check(CLI::IsMember({"const", "logspike", "random", "packet", "smooth"}));
    gen->add_option("--value,--M", gen_value, "constant value, spike amplitude or packet frequency");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--modes", gen_modes)->check(CLI::Range(1, 64));
    gen->add_flag("--corner", gen_corner);
    gen->add_option("--out,-o", gen_out, "output field file")->required();

    // ---- decompose
    auto* dec = app.add_subcommand("decompose", "Littlewood-Paley bands of a field");
    std::string dec_in, dec_dir, dec_json;
    int dec_k = 4;
    dec->add_option("--in,-i", dec_in)->required()->check(CLI::ExistingFile);
    dec->add_option("--out-dir", dec_dir, "write band_<j>.field files here");
    dec->add_option("--k", dec_k, "smoothing order of the quasi-distance (even)");
    dec->add_option("--json", dec_json, "energy report path (stdout if omitted)");

    // ---- norm
    auto* nrm = app.add_subcommand("norm", "function-space norm of a field");
    std::string nrm_in, nrm_space = "lp", nrm_out, nrm_domain;
    double nrm_s = 0.0, nrm_p = 2.0, nrm_q = 2.0;
    int nrm_m = 1, nrm_k = 4;
    bool nrm_bounded = false;
    nrm->add_option("--in,-i", nrm_in)->required()->check(CLI::ExistingFile);
    nrm->add_option("--space", nrm_space)->check(CLI::IsMember({"lp", "sobolev", "besov", "lt", "lt-trunc"}));
    nrm->add_option("--s", nrm_s);
    nrm->add_option("--p", nrm_p, "exponent p (inf allowed)");
    nrm->add_option("--q", nrm_q, "exponent q (inf allowed)");
    nrm->add_option("--m", nrm_m, "Sobolev order");
    nrm->add_option("--k", nrm_k, "smoothing order of the partition");
    nrm->add_flag("--bounded", nrm_bounded, "Sobolev norm of a field given on a bounded box (extend first)");
    nrm->add_option("--domain", nrm_domain, "lo,..:hi,.. restriction for lp / sobolev");
    nrm->add_option("--out,-o", nrm_out);

    // ---- bmo
    auto* bmo = app.add_subcommand("bmo", "parabolic BMO norm");
    std::string bmo_in, bmo_form = "osc", bmo_out, bmo_domain;
    PolicyArgs bmo_policy;
    bmo->add_option("--in,-i", bmo_in)->required()->check(CLI::ExistingFile);
    bmo->add_option("--form", bmo_form)->check(CLI::IsMember({"osc", "inf", "overline"}));
    bmo->add_option("--domain", bmo_domain, "lo,..:hi,..");
    bmo_policy.add(bmo);
    bmo->add_option("--out,-o", bmo_out);

    // ---- extend
    auto* ext = app.add_subcommand("extend", "reflect a field to the tripled box");
    std::string ext_in, ext_out, ext_seam, ext_local;
    int ext_m = 1;
    double ext_factor = 4.0;
    ext->add_option("--in,-i", ext_in)->required()->check(CLI::ExistingFile);
    ext->add_option("--m", ext_m)->check(CLI::Range(1, 4));
    ext->add_option("--out,-o", ext_out, "extended field file")->required();
    ext->add_option("--emit-seam-report", ext_seam, "JSON seam-derivative report path");
    ext->add_option("--localize", ext_local, "also write the cut-off field Psi u~ on the periodic box");
    ext->add_option("--box-factor", ext_factor);

    // ---- verify
    auto* ver = app.add_subcommand("verify", "evaluate one inequality over a field family");
    std::string ver_check, ver_emit = "csv", ver_out;
    GridArgs ver_grid;
    FamilyArgs ver_family;
    PolicyArgs ver_policy;
    int ver_m = 1, ver_k = 4;
    ver->add_option("--check", ver_check)
        ->required()
        ->check(CLI::IsMember({"theorem1", "theorem2", "basic", "interp", "bandsup", "lowband"}));
    ver_family.add(ver, true);
    ver_grid.add(ver);
    ver_policy.add(ver);
    ver->add_option("--m", ver_m, "Sobolev order")->check(CLI::Range(1, 3));
    ver->add_option("--k", ver_k, "smoothing order of the partition");
    ver->add_option("--emit", ver_emit)->check(CLI::IsMember({"csv", "json"}));
    ver->add_option("--out,-o", ver_out);

    // ---- sweep
    auto* swp = app.add_subcommand("sweep", "min / median / max implied constants per check");
    std::string swp_checks = "theorem1,lowband,bandsup", swp_out;
    GridArgs swp_grid;
    FamilyArgs swp_family;
    PolicyArgs swp_policy;
    int swp_m = 1;
    swp->add_option("--checks", swp_checks, "comma separated check names");
    swp_family.add(swp, true);
    swp_grid.add(swp);
    swp_policy.add(swp);
    swp->add_option("--m", swp_m)->check(CLI::Range(1, 3));
    swp->add_option("--out,-o", swp_out);

    // ---- pde-run
    auto* pde = app.add_subcommand("pde-run", "integrate the periodic model problem");
    PdeConfig pcfg;
    std::string pde_dir;
    int pde_checkpoints = 4;
    pde->add_option("--N", pcfg.N)->capture_default_str();
    pde->add_option("--dt", pcfg.dt)->capture_default_str();
    pde->add_option("--a", pcfg.a)->capture_default_str();
    pde->add_option("--T", pcfg.T_end)->capture_default_str();
    pde->add_option("--delta0", pcfg.delta0)->capture_default_str();
    pde->add_option("--v0", pcfg.v0, "const | sine:<amp>")->capture_default_str();
    pde->add_option("--checkpoints", pde_checkpoints, "times at which running BMO / Sobolev norms are taken");
    pde->add_option("--out-dir", pde_dir, "directory for trajectory.field, diagnostics.csv, fit.json")->required();

    for (auto* sub : app.get_subcommands({}))
        for (CLI::Option* o : sub->get_options())
            if (o->get_name() != "--help") o->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            const json man = manifest_of(*gen);
            const Grid fallback = gen_family == "smooth" ? omega_grid() : spike_grid();
            const Grid g = gen_grid.build(fallback);
            Field u(g);
            if (gen_family == "smooth") {
                u = random_smooth(g, gen_seed, gen_modes);
            } else {
                FieldFamily f;
                f.kind = FieldFamily::parse_kind(gen_family);
                f.params = {gen_family == "random" ? 0.0 : gen_value};
                f.seed = gen_seed;
                f.modes = gen_modes;
                f.corner = gen_corner;
                u = f.generate(g, 0);
            }
            write_field(gen_out, u, man.dump());
        } else if (*dec) {
            json man = manifest_of(*dec);
            const auto in = read_field(dec_in);
            BumpProfile prof{dec_k};
            const auto P = build_partition(in.field.grid, prof);
            const auto B = decompose(in.field, P);
            const auto e = band_energy(B);
            const auto [lo, hi] = P.resolved_bands();
            json rep;
            rep["manifest"] = man;
            rep["J"] = P.J;
            rep["energy"] = std::vector<double>(e.data(), e.data() + e.size());
            rep["resolved_bands"] = {lo, hi};
            rep["total_energy"] = e.sum();
            if (!dec_dir.empty()) {
                fs::create_directories(dec_dir);
                for (int j = 0; j <= P.J; ++j)
                    write_field((fs::path(dec_dir) / ("band_" + std::to_string(j) + ".field")).string(),
                                B.bands[static_cast<std::size_t>(j)], man.dump());
            }
            emit(dec_json, rep.dump(2) + "\n");
        } else if (*nrm) {
            json man = manifest_of(*nrm);
            const auto in = read_field(nrm_in);
            const Field& u = in.field;
            const Box dom = parse_domain(nrm_domain, u.grid);
            double value = 0.0;
            bool under = false;
            if (nrm_space == "lp") {
                value = lp_norm(u, nrm_p, dom);
            } else if (nrm_space == "sobolev") {
                const SobolevOrder order{nrm_m};
                if (nrm_bounded) {
                    const auto r = bounded_sobolev_norm_report(u, order);
                    value = r.value;
                    under = r.under_resolved;
                } else {
                    const auto r = parabolic_sobolev_norm_report(u, order, dom);
                    value = r.value;
                    under = r.under_resolved;
                }
            } else {
                const auto P = build_partition(u.grid, BumpProfile{nrm_k});
                if (nrm_space == "besov")
                    value = besov_norm(u, P, nrm_s, nrm_p, nrm_q);
                else
                    value = lizorkin_triebel_norm(u, P, nrm_s, nrm_p, nrm_q, nrm_space == "lt-trunc");
            }
            json rep;
            rep["manifest"] = man;
            rep["space"] = nrm_space;
            rep["params"] = {{"s", nrm_s}, {"p", nrm_p}, {"q", nrm_q}, {"m", nrm_m}, {"k", nrm_k}};
            rep["value"] = value;
            rep["under_resolved"] = under;
            rep["domain"] = {{"lo", std::vector<double>(dom.lo.data(), dom.lo.data() + dom.lo.size())},
                             {"hi", std::vector<double>(dom.hi.data(), dom.hi.data() + dom.hi.size())}};
            emit(nrm_out, rep.dump(2) + "\n");
        } else if (*bmo) {
            json man = manifest_of(*bmo);
            const auto in = read_field(bmo_in);
            const Box dom = parse_domain(bmo_domain, in.field.grid);
            const auto pol = bmo_policy.build();
            json rep;
            rep["manifest"] = man;
            if (bmo_form == "overline") {
                const auto ob = overline_bmo_norm(in.field, dom, pol);
                const auto r = bmo_norm(in.field, dom, pol, BmoForm::Infimum);
                rep["value"] = ob.value;
                rep["bmo"] = ob.bmo;
                rep["l1"] = ob.l1;
                rep["argmax_cube"] = cube_json(r.argmax);
            } else {
                const auto r = bmo_norm(in.field, dom, pol, bmo_form == "inf" ? BmoForm::Infimum : BmoForm::Oscillation);
                rep["value"] = r.value;
                rep["argmax_cube"] = cube_json(r.argmax);
                rep["cubes"] = r.cubes;
                rep["radii"] = r.radii;
            }
            rep["policy"] = describe(pol);
            emit(bmo_out, rep.dump(2) + "\n");
        } else if (*ext) {
            json man = manifest_of(*ext);
            const auto in = read_field(ext_in);
            const ExtensionPlan plan{ext_m, 0};
            const Field e = extend_full(in.field, plan);
            if (!ext_local.empty()) {
                const auto loc = extend_and_localize(in.field, plan, ext_factor);
                write_field(ext_local, loc.field, man.dump());
            }
            if (!ext_seam.empty()) {
                const auto rep = seam_report(e, in.field.grid, plan);
                const auto l1 = l1_report(in.field, e, plan);
                json j;
                j["manifest"] = man;
                j["max_rel_error"] = rep.max_rel_error;
                j["entries"] = json::array();
                for (const auto& s : rep.entries)
                    j["entries"].push_back({{"axis", s.axis},
                                            {"face", s.left ? "lo" : "hi"},
                                            {"order", s.order},
                                            {"inside", s.inside},
                                            {"outside", s.outside},
                                            {"abs_error", s.abs_error},
                                            {"rel_error", s.rel_error}});
                j["ladder"] = {{"r0", rep.ladder.r0}, {"r1", rep.ladder.r1}, {"r2", rep.ladder.r2}};
                j["l1"] = {{"source", l1.source}, {"extended", l1.extended}, {"ratio", l1.ratio}, {"bound", l1.bound}};
                const auto sp = plan.spatial(), tm = plan.temporal();
                j["coeffs_space"] = std::vector<double>(sp.coeffs.data(), sp.coeffs.data() + sp.coeffs.size());
                j["coeffs_time"] = std::vector<double>(tm.coeffs.data(), tm.coeffs.data() + tm.coeffs.size());
                write_text(ext_seam, j.dump(2) + "\n");
            }
            write_field(ext_out, e, man.dump());
        } else if (*ver || *swp) {
            CLI::App* sub = *ver ? ver : swp;
            const json man = manifest_of(*sub);
            const FamilyArgs& fa = *ver ? ver_family : swp_family;
            const GridArgs& ga = *ver ? ver_grid : swp_grid;
            std::vector<Check> checks;
            if (*ver) {
                checks.push_back(parse_check(ver_check));
            } else {
                std::stringstream ss(swp_checks);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    if (!tok.empty()) checks.push_back(parse_check(tok));
            }
            const bool bounded = checks.size() == 1 && checks.front() == Check::Theorem2;
            const Grid g = ga.build(bounded ? omega_grid() : spike_grid());
            HarnessConfig cfg;
            cfg.order = SobolevOrder{*ver ? ver_m : swp_m};
            cfg.policy = (*ver ? ver_policy : swp_policy).build();
            cfg.profile = BumpProfile{*ver ? ver_k : 4};
            cfg.profile.validate();
            const auto table = constant_sweep(fa.build(), g, checks, cfg);
            std::ostringstream os;
            if (*ver && ver_emit == "json") {
                json j;
                j["manifest"] = man;
                j["rows"] = json::array();
                for (const auto& row : table.rows) j["rows"].push_back(report_json(row.report));
                const auto& s = table.summary.front();
                j["summary"] = {{"count", s.count}, {"min", s.min}, {"median", s.median}, {"max", s.max}};
                os << j.dump(2) << "\n";
            } else if (*ver) {
                os << csv_header(man);
                os << "check,field,lhs,rhs,implied_constant,degenerate";
                std::vector<std::string> keys;
                for (const auto& [k, v] : table.rows.front().report.ingredients) keys.push_back(k);
                for (const auto& k : keys) os << "," << k;
                os << "\n";
                for (const auto& row : table.rows) {
                    const auto& r = row.report;
                    os << r.id << "," << row.field << "," << num(r.lhs) << "," << num(r.rhs) << ","
                       << num(r.implied_constant) << "," << (r.degenerate ? 1 : 0);
                    for (const auto& k : keys) os << "," << num(r.ingredient(k));
                    os << "\n";
                }
            } else {
                os << csv_header(man) << "check,count,min,median,max\n";
                for (const auto& s : table.summary)
                    os << to_string(s.check) << "," << s.count << "," << num(s.min) << "," << num(s.median) << ","
                       << num(s.max) << "\n";
            }
            emit(*ver ? ver_out : swp_out, os.str());
        } else if (*pde) {
            const json man = manifest_of(*pde);
            pcfg.validate();
            const auto tr = run(pcfg, pde_checkpoints);
            const auto fit = check_apriori(tr.diag);
            json j;
            j["manifest"] = man;
            j["final_time"] = tr.final.time;
            j["apriori"] = {{"samples", fit.samples}, {"C1", fit.C1},         {"C2", fit.C2},
                            {"slack", fit.slack},     {"min_m", fit.min_m},   {"mt_bound_violations", fit.mt_bound_violations}};
            j["closure"] = json::array();
            for (double t : {0.5 * pcfg.T_end, pcfg.T_end}) {
                try {
                    const auto kt = kt_closure_check(tr.diag, t);
                    j["closure"].push_back({{"t", kt.t},
                                            {"G", kt.G},
                                            {"implied_constant", kt.implied_constant},
                                            {"sobolev_times_m2", kt.sobolev_times_m2},
                                            {"theorem2", report_json(kt.theorem2)}});
                } catch (const DomainError& e) {
                    j["closure"].push_back({{"t", t}, {"error", e.what()}});
                }
            }

            std::ostringstream csv;
            csv << csv_header(man) << "t,m,G,bmo,sobolev\n";
            std::size_t c = 0;
            for (std::size_t k = 0; k < tr.diag.t.size(); ++k) {
                csv << num(tr.diag.t[k]) << "," << num(tr.diag.m[k]) << "," << num(tr.diag.G[k]) << ",";
                // running norms at the first record at or after each checkpoint
                if (c < tr.diag.norm_t.size() && tr.diag.t[k] + 1e-12 >= tr.diag.norm_t[c]) {
                    csv << num(tr.diag.norm_bmo[c]) << "," << num(tr.diag.norm_sobolev[c]);
                    ++c;
                } else {
                    csv << ",";
                }
                csv << "\n";
            }

            // v(x, t) at the diagnostic records, an even number of them
            const auto N = pcfg.N;
            auto R = static_cast<Index>(tr.profiles.size());
            R -= R % 2;
            const double span = R > 1 ? tr.times[static_cast<std::size_t>(R - 1)] - tr.times.front() : pcfg.T_end;
            const double dtr = R > 1 ? span / static_cast<double>(R - 1) : pcfg.T_end;
            Field traj(Grid(1, {1.0, dtr * static_cast<double>(R)}, {N, R}, {-0.5 / static_cast<double>(N), -0.5 * dtr}));
            for (Index i = 0; i < N; ++i)
                for (Index k = 0; k < R; ++k) traj.values[i * R + k] = tr.profiles[static_cast<std::size_t>(k)][i];

            fs::create_directories(pde_dir);
            const fs::path dir(pde_dir);
            write_field((dir / "trajectory.field").string(), traj, man.dump());
            write_text((dir / "diagnostics.csv").string(), csv.str());
            write_text((dir / "fit.json").string(), j.dump(2) + "\n");
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
