#include "cli.hpp"

#include "fermi/charpoly.hpp"
#include "fermi/error.hpp"
#include "fermi/floquet.hpp"
#include "fermi/spectrum.hpp"
#include "fermi/variety.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <gmp.h>

#include <chrono>
#include <fstream>
#include <sstream>

namespace fermi::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    json raw;
    std::vector<int> periods;
    std::vector<GaussianRational> values;
    std::vector<int> grid;
    std::uint64_t seed = 1;

    LatticeSpec lattice() const { return LatticeSpec(periods); }
    PeriodicPotential potential() const { return {lattice(), values}; }
};

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path);
    RunConfig c;
    try {
        c.raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config is not valid JSON: " + std::string(e.what()));
    }
    try {
        c.periods = c.raw.at("periods").get<std::vector<int>>();
        for (const auto& v : c.raw.at("potential")) {
            if (v.is_string()) {
                c.values.push_back(GaussianRational::parse(v.get<std::string>()));
            } else if (v.is_array() && v.size() == 2) {
                c.values.push_back(GaussianRational::parse_pair(v[0].get<std::string>(), v[1].get<std::string>()));
            } else {
                throw UsageError("potential entries are \"p/q\" strings or [\"p/q\", \"r/s\"] pairs");
            }
        }
        if (c.raw.contains("grid")) {
            const auto& g = c.raw["grid"];
            if (g.is_number_integer()) {
                c.grid.assign(c.periods.size(), g.get<int>());
            } else {
                c.grid = g.get<std::vector<int>>();
            }
        }
        if (c.raw.contains("seed")) c.seed = c.raw["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw UsageError("bad config: " + std::string(e.what()));
    } catch (const ConstructionError& e) {
        throw UsageError("bad config: " + std::string(e.what()));
    }
    // validates period count and sizes
    try {
        c.potential();
    } catch (const ConstructionError& e) {
        throw UsageError("bad config: " + std::string(e.what()));
    }
    return c;
}

GaussianRational parse_exact(const std::string& s, const char* flag) {
    try {
        return GaussianRational::parse(s);
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + " expects an exact rational such as 1/3, got '" + s + "'");
    }
}

double parse_float(const std::string& s, const char* flag) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(flag) + " expects a number, got '" + s + "'");
}

std::vector<int> grid_for(const RunConfig& c, int flag_grid, int fallback) {
    if (flag_grid > 0) return std::vector<int>(c.periods.size(), flag_grid);
    if (!c.grid.empty()) {
        if (c.grid.size() != c.periods.size()) throw UsageError("grid needs one resolution per axis");
        return c.grid;
    }
    return std::vector<int>(c.periods.size(), fallback);
}

json poly_json(const LaurentPoly& p) { return p.to_string(); }

json certificate_json(const IrreducibilityCertificate& c) {
    json ev = json::array();
    for (const auto& e : c.evidence) ev.push_back({{"step", e.step}, {"detail", e.detail}, {"passed", e.passed}});
    json f = json::array();
    for (const auto& p : c.factors) f.push_back(poly_json(p));
    return {{"verdict", to_string(c.verdict)}, {"evidence", ev}, {"factors", f}};
}

json extremum_json(const Extremum& e) {
    return {{"band", e.band}, {"k", e.k}, {"value", e.value}, {"kind", to_string(e.kind)}, {"refined", e.refined}};
}

struct Outcome {
    json result = json::object();
    bool ok = true;
    std::string failed_check;

    void fail(const std::string& check) {
        if (ok) failed_check = check;
        ok = false;
    }
};

struct Options {
    std::string config;
    std::string out_path;
    std::string csv_path;
    bool normalize = false;
    int grid = 0;
    int band = 1;
    std::string lambda;
    std::vector<std::string> lambdas;
    double tol = -1.0;
    int samples = 50;
    double margin = 1e-6;
    double gamma = 1.5;
    double amp = 0.0;
    bool bump = false;
    std::vector<int> boxes;
    std::vector<double> exclude;
    double ipr = 0.05;
    double delta = 0.1;
};

Outcome cmd_bands(const RunConfig& c, const Options& o, json& params) {
    auto V = c.potential();
    auto grid = grid_for(c, o.grid, 64);
    params["grid"] = grid;
    auto bs = compute_bands(V, grid);
    Outcome r;
    json bands = json::array();
    for (int m = 1; m <= bs.bands_count(); ++m) {
        const auto& [a, b] = bs.bands[static_cast<std::size_t>(m - 1)];
        bands.push_back({{"m", m}, {"a", a}, {"b", b}});
        if (!(a < b)) r.fail("band " + std::to_string(m) + " has a_m < b_m");
    }
    json uni = json::array();
    for (const auto& [lo, hi] : band_union(bs)) uni.push_back({lo, hi});
    r.result = {{"bands", bands}, {"union", uni}};
    if (!o.csv_path.empty()) {
        std::ofstream csv(o.csv_path);
        if (!csv) throw UsageError("cannot write " + o.csv_path);
        const int d = bs.lattice.dim();
        for (int j = 1; j <= d; ++j) csv << "k" << j << ",";
        for (int m = 1; m <= bs.bands_count(); ++m) csv << "lambda" << m << (m < bs.bands_count() ? "," : "\n");
        for (std::size_t p = 0; p < bs.points(); ++p) {
            for (double k : bs.k_of(p)) csv << json(k).dump() << ",";
            for (int m = 1; m <= bs.bands_count(); ++m) {
                csv << json(bs.value(p, m)).dump() << (m < bs.bands_count() ? "," : "\n");
            }
        }
        r.result["csv"] = o.csv_path;
    }
    return r;
}

Outcome cmd_charpoly(const RunConfig& c, const Options&, json&) {
    auto b = charpoly_exact(c.potential(), DetMethod::Bareiss, 3, c.seed);
    Outcome r;
    json facts = json::array();
    for (const auto& f : check_facts(b).facts) {
        facts.push_back({{"name", f.name}, {"ok", f.ok}, {"detail", f.detail}, {"informational", f.informational}});
        if (!f.ok && !f.informational) r.fail(f.name);
    }
    r.result = {{"P", poly_json(b.p)},
                {"P_pretty", b.p.pretty()},
                {"P1", poly_json(b.p1)},
                {"Ptilde", poly_json(b.ptilde)},
                {"terms", b.p.size()},
                {"facts", facts}};
    return r;
}

Outcome cmd_facts(const RunConfig& c, const Options&, json&) {
    auto rep = check_facts(charpoly_exact(c.potential(), DetMethod::Bareiss, 3, c.seed));
    Outcome r;
    json facts = json::array();
    for (const auto& f : rep.facts) {
        facts.push_back({{"name", f.name}, {"ok", f.ok}, {"detail", f.detail}, {"informational", f.informational}});
        if (!f.ok && !f.informational) r.fail(f.name);
    }
    r.result = {{"facts", facts}};
    return r;
}

std::vector<GaussianRational> lambda_list(const Options& o, const PeriodicPotential& V, json& params) {
    std::vector<GaussianRational> out;
    if (o.lambdas.empty()) {
        out = {GaussianRational(0), GaussianRational(1), V.average()};
    } else {
        for (const auto& s : o.lambdas) out.push_back(parse_exact(s, "--lambda"));
    }
    json l = json::array();
    for (const auto& x : out) l.push_back(x.to_string());
    params["lambda"] = l;
    return out;
}

Outcome cmd_lowest(const RunConfig& c, const Options& o, json& params) {
    auto V = c.potential();
    auto b = charpoly_exact(V, DetMethod::Bareiss, 3, c.seed);
    Outcome r;
    json rows = json::array();
    for (const auto& lam : lambda_list(o, V, params)) {
        auto rep = lowest_component_check(b, lam);
        rows.push_back({{"lambda", lam.to_string()},
                        {"phi_lowest", poly_json(rep.phi_lowest)},
                        {"h1_tilde", poly_json(rep.h1)},
                        {"h1_match", rep.h1_match},
                        {"psi_lowest", poly_json(rep.psi_lowest)},
                        {"h2_tilde", poly_json(rep.h2)},
                        {"h2_match", rep.h2_match}});
        if (!rep.h1_match) r.fail("lowest component of Phi equals h1~ at lambda = " + lam.to_string());
        if (!rep.h2_match) r.fail("lowest component of Psi equals h2~ at lambda = " + lam.to_string());
    }
    r.result = {{"checks", rows}};
    return r;
}

Outcome cmd_degree(const RunConfig& c, const Options& o, json& params) {
    auto V = c.potential();
    auto b = charpoly_exact(V, DetMethod::Bareiss, 3, c.seed);
    Outcome r;
    json rows = json::array();
    std::vector<std::optional<GaussianRational>> levels{std::nullopt};
    for (const auto& s : o.lambdas) levels.emplace_back(parse_exact(s, "--lambda"));
    params["lambda"] = o.lambdas;
    for (const auto& lam : levels) {
        auto rep = degree_bound_check(b, lam);
        rows.push_back({{"lambda", lam ? json(lam->to_string()) : json("symbolic")},
                        {"degree", rep.degree},
                        {"bound", rep.bound},
                        {"bound_name", rep.bound_name},
                        {"attained", rep.attained}});
        if (!rep.ok) r.fail("total degree of Phi is at most " + rep.bound_name);
    }
    r.result = {{"checks", rows}};
    return r;
}

Outcome cmd_irreducible(const RunConfig& c, const Options& o, json& params) {
    if (o.lambda.empty()) throw UsageError("irreducible needs --lambda");
    auto V = c.potential();
    auto lam = parse_exact(o.lambda, "--lambda");
    params["lambda"] = lam.to_string();
    auto cert = certify_fermi_irreducible(V, lam);
    Outcome r;
    r.result = certificate_json(cert);
    r.result["lambda"] = lam.to_string();
    r.result["average"] = V.average().to_string();
    bool at_average = lam == V.average();
    if (cert.verdict == Verdict::Reducible && !at_average && V.lattice().coprime() && V.lattice().dim() == 2) {
        r.fail("P1(., lambda) irreducible for lambda other than [V]");
    } else if (cert.verdict == Verdict::Inconclusive) {
        r.fail("irreducibility certificate concluded");
    }
    return r;
}

Outcome cmd_factor_average(const RunConfig& c, const Options&, json&) {
    auto rep = factor_at_average(c.potential());
    Outcome r;
    json lf = json::array(), pf = json::array(), certs = json::array();
    for (const auto& f : rep.lhs_factors) lf.push_back(poly_json(f));
    for (const auto& f : rep.p1_factors) {
        pf.push_back(poly_json(f));
        auto cert = certify_irreducible(f);
        certs.push_back(certificate_json(cert));
        if (cert.verdict != Verdict::Irreducible) r.fail("each factor at the average is irreducible");
    }
    r.result = {{"average", rep.average.to_string()},
                {"verdict", rep.verdict == Verdict::Reducible ? "reducible" : "irreducible-at-average"},
                {"identity_holds", rep.identity_holds},
                {"K", rep.K ? json(rep.K->to_string()) : json(nullptr)},
                {"lhs", poly_json(rep.lhs)},
                {"pi1", poly_json(rep.pi1)},
                {"pi2", poly_json(rep.pi2)},
                {"lhs_factors", lf},
                {"p1_factors", pf},
                {"factor_certificates", certs}};
    if (rep.verdict == Verdict::Reducible) {
        if (rep.lhs_factors.size() != 2 || rep.lhs_factors[0] * rep.lhs_factors[1] != rep.lhs) {
            r.fail("two factors reproduce (-1)^Q (z1 z2)^Q P~ at the average");
        }
        if (rep.p1_factors.size() == 2 && rep.p1_factors[0] == rep.p1_factors[1]) {
            r.fail("the two factors at the average are distinct");
        }
    } else {
        r.result["p1_certificate"] = certificate_json(rep.p1_certificate);
    }
    return r;
}

Outcome cmd_squarefree(const RunConfig& c, const Options& o, json& params) {
    if (o.lambda.empty()) throw UsageError("squarefree needs --lambda");
    auto lam = parse_exact(o.lambda, "--lambda");
    params["lambda"] = lam.to_string();
    Outcome r;
    bool sf = squarefree_check(c.potential(), lam);
    r.result = {{"lambda", lam.to_string()}, {"squarefree", sf}};
    if (!sf) r.fail("P1(., lambda) is square-free");
    return r;
}

Outcome cmd_singular(const RunConfig& c, const Options& o, json& params) {
    if (o.lambda.empty()) throw UsageError("singular needs --lambda");
    auto b = charpoly_exact(c.potential(), DetMethod::Bareiss, 3, c.seed);
    double tol = o.tol > 0 ? o.tol : 1e-8;
    params["tol"] = tol;
    SingularPointReport rep;
    bool exact = true;
    try {
        auto lam = GaussianRational::parse(o.lambda);
        params["lambda"] = lam.to_string();
        rep = singular_points_d2(b, lam, tol);
    } catch (const ConstructionError&) {
        double lam = parse_float(o.lambda, "--lambda");
        params["lambda"] = lam;
        exact = false;
        rep = singular_points_d2_numeric(b, lam, tol);
    }
    Outcome r;
    json pts = json::array();
    for (const auto& p : rep.points) {
        pts.push_back({{"k", p.k}, {"residual_p", p.residual_p}, {"residual_grad", p.residual_grad}});
    }
    r.result = {{"exact_level", exact},
                {"lambda", exact ? json(rep.lambda_star.to_string()) : json(rep.lambda_value)},
                {"squarefree", rep.squarefree},
                {"count", rep.count},
                {"bound", rep.bound},
                {"points", pts}};
    if (rep.count > rep.bound) r.fail("singular points number at most 4 (q1 + q2)^2");
    return r;
}

Outcome cmd_extrema(const RunConfig& c, const Options& o, json& params) {
    auto V = c.potential();
    auto grid = grid_for(c, o.grid, 64);
    params["grid"] = grid;
    params["band"] = o.band;
    auto bs = compute_bands(V, grid);
    auto ex = find_extrema(V, o.band, bs);
    Outcome r;
    json list = json::array();
    for (const auto& e : ex) list.push_back(extremum_json(e));
    const auto& [a, b] = bs.bands.at(static_cast<std::size_t>(o.band - 1));
    r.result = {{"band", o.band}, {"grid_interval", {a, b}}, {"extrema", list}};
    return r;
}

Outcome cmd_level_set(const RunConfig& c, const Options& o, json& params) {
    if (o.lambda.empty()) throw UsageError("level-set needs --lambda");
    auto V = c.potential();
    double lam = parse_float(o.lambda, "--lambda");
    double tol = o.tol > 0 ? o.tol : 1e-7;
    auto grid = grid_for(c, o.grid, 48);
    params["grid"] = grid;
    params["band"] = o.band;
    params["lambda"] = lam;
    params["tol"] = tol;
    auto rep = level_set_check(V, o.band, lam, compute_bands(V, grid), tol);
    Outcome r;
    json pts = json::array();
    for (const auto& p : rep.points) {
        pts.push_back({{"k", p.k},
                       {"band_value", p.band_value},
                       {"residual_p", p.residual_p},
                       {"residual_grad", p.residual_grad},
                       {"newton_polished", p.newton_polished}});
    }
    r.result = {{"band", rep.band},
                {"lambda", rep.lambda},
                {"kind", to_string(rep.kind)},
                {"seeds", rep.seeds},
                {"points", pts},
                {"max_residual_p", rep.max_residual_p},
                {"max_residual_grad", rep.max_residual_grad}};
    if (!rep.ok) r.fail("level set of an extremum lies where grad_k P vanishes");
    return r;
}

Outcome cmd_free(const RunConfig& c, const Options& o, json& params) {
    auto grid = grid_for(c, o.grid, 400);
    params["grid"] = grid;
    params["samples"] = o.samples;
    params["margin"] = o.margin;
    if (!c.potential().is_constant() || !c.potential().average().is_zero()) {
        throw PreconditionError("free-checks needs the zero potential");
    }
    auto rep = free_operator_checks(c.periods, grid, o.samples, o.margin);
    Outcome r;
    json s = json::array();
    for (const auto& x : rep.samples) s.push_back({{"lambda", x.lambda}, {"interior", x.interior}, {"band", x.band}});
    r.result = {{"samples", s}};
    if (rep.zero) r.result["zero"] = {{"interior", rep.zero->interior}, {"band", rep.zero->band}};
    if (!rep.ok) r.fail("every lambda in (-2d, 2d) minus {0} is interior to a band");
    return r;
}

Outcome cmd_embedded(const RunConfig& c, const Options& o, json& params) {
    if (o.boxes.empty()) throw UsageError("embedded needs --boxes");
    if (o.exclude.size() % 2 != 0) throw UsageError("--exclude takes pairs lo,hi");
    Perturbation v{o.amp, o.gamma, o.bump ? PerturbationProfile::Bump : PerturbationProfile::Decay};
    ScanOptions so;
    so.ipr_threshold = o.ipr;
    so.margin = o.delta;
    for (std::size_t i = 0; i < o.exclude.size(); i += 2) so.exclusions.emplace_back(o.exclude[i], o.exclude[i + 1]);
    params["amp"] = o.amp;
    params["gamma"] = o.gamma;
    params["profile"] = o.bump ? "bump" : "decay";
    params["boxes"] = o.boxes;
    params["ipr_threshold"] = so.ipr_threshold;
    params["margin"] = so.margin;
    params["exclude"] = o.exclude;
    auto rep = embedded_scan(c.potential(), v, o.boxes, so);
    Outcome r;
    json boxes = json::array();
    auto eig = [](const BoxEigen& e) { return json{{"lambda", e.lambda}, {"ipr", e.ipr}, {"edge_mass", e.edge_mass}}; };
    for (const auto& b : rep.boxes) {
        json flagged = json::array();
        for (const auto& f : b.flagged) flagged.push_back(eig(f));
        boxes.push_back({{"N", b.N},
                         {"sites", b.size},
                         {"in_band", b.in_band},
                         {"max_in_band_ipr", b.max_in_band_ipr},
                         {"lowest", eig(b.lowest)},
                         {"highest", eig(b.highest)},
                         {"flagged", flagged}});
    }
    json bands = json::array();
    for (const auto& [a, b] : rep.bands) bands.push_back({a, b});
    r.result = {{"bands", bands}, {"boxes", boxes}, {"persistent", rep.persistent}};
    if (!rep.ok) r.fail("no persistent in-band localized eigenvector");
    return r;
}

Outcome cmd_verify_transform(const RunConfig& c, const Options& o, json& params) {
    auto V = c.potential();
    const int d = V.lattice().dim();
    int g = o.grid > 0 ? o.grid : 10;
    double tol = o.tol > 0 ? o.tol : 1e-9;
    params["grid"] = g;
    params["tol"] = tol;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(g);
    double worst = 0.0;
    std::vector<double> worst_x;
    for (std::size_t p = 0; p < total; ++p) {
        std::vector<double> x(static_cast<std::size_t>(d));
        std::size_t rem = p;
        for (int j = d - 1; j >= 0; --j) {
            x[static_cast<std::size_t>(j)] = static_cast<double>(rem % static_cast<std::size_t>(g)) / g;
            rem /= static_cast<std::size_t>(g);
        }
        auto rep = verify_equivalence(V, x, tol);
        if (rep.max_deviation >= worst) {
            worst = rep.max_deviation;
            worst_x = x;
        }
    }
    Outcome r;
    r.result = {{"points", total}, {"max_deviation", worst}, {"worst_x", worst_x}};
    if (worst > tol) r.fail("spectra of H0~(x) and D~(x) agree");
    return r;
}

using Handler = Outcome (*)(const RunConfig&, const Options&, json&);

json versions() {
    return {{"fermi", kVersion},
            {"gmp", gmp_version},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)}};
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and numeric checks on Fermi varieties of periodic discrete Schrodinger operators", "fermi"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--normalize", o.normalize, "Omit timings so reports are byte-comparable");
    app.add_option("--out", o.out_path, "Also write the JSON report to this file");
    app.fallthrough();

    std::vector<std::pair<CLI::App*, Handler>> subs;
    auto sub = [&](const char* name, const char* help, Handler h) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("config", o.config, "JSON config file")->required()->check(CLI::ExistingFile);
        subs.emplace_back(s, h);
        return s;
    };
    auto grid_opt = [&](CLI::App* s) { s->add_option("--grid", o.grid, "Points per axis (overrides the config)"); };

    auto* bands = sub("bands", "Band structure on a k-grid; CSV of the grid with --csv", cmd_bands);
    grid_opt(bands);
    bands->add_option("--csv", o.csv_path, "Write k1..kd, lambda1..lambdaQ rows");
    sub("charpoly", "Exact characteristic polynomial", cmd_charpoly);
    sub("facts", "Structural facts of the characteristic polynomial", cmd_facts);
    sub("lowest-components", "Lowest components of Phi and Psi against h1~ and h2~", cmd_lowest)
        ->add_option("--lambda", o.lambdas, "Exact levels (default 0, 1, [V])");
    sub("degree-bounds", "Total degree of Phi against its bound", cmd_degree)
        ->add_option("--lambda", o.lambdas, "Exact levels in addition to symbolic lambda");
    sub("irreducible", "Irreducibility certificate for P1(., lambda)", cmd_irreducible)
        ->add_option("--lambda", o.lambda, "Exact level")
        ->required();
    sub("factor-at-average", "Factorization identity at lambda = [V]", cmd_factor_average);
    sub("squarefree", "Square-freeness of P1(., lambda)", cmd_squarefree)
        ->add_option("--lambda", o.lambda, "Exact level")
        ->required();
    auto* sing = sub("singular", "Singular points of the level set on the torus (d = 2)", cmd_singular);
    sing->add_option("--lambda", o.lambda, "Exact level, or a decimal for the floating path")->required();
    sing->add_option("--tol", o.tol, "Torus tolerance");
    auto* ext = sub("extrema", "Refined extrema of a band function", cmd_extrema);
    ext->add_option("--band", o.band, "Band index 1..Q")->required();
    grid_opt(ext);
    auto* ls = sub("level-set", "Level set of an extremum value against grad_k P", cmd_level_set);
    ls->add_option("--band", o.band, "Band index 1..Q")->required();
    ls->add_option("--lambda", o.lambda, "Extremum value")->required();
    ls->add_option("--tol", o.tol, "Residual tolerance");
    grid_opt(ls);
    auto* fr = sub("free-checks", "Interior band membership for the free operator", cmd_free);
    grid_opt(fr);
    fr->add_option("--samples", o.samples, "Sampled levels in (-2d, 2d)");
    fr->add_option("--margin", o.margin, "Distance required from band edges");
    auto* emb = sub("embedded", "Finite-box scan for in-band localized eigenvectors", cmd_embedded);
    emb->add_option("--gamma", o.gamma, "Decay exponent of the perturbation");
    emb->add_option("--amp", o.amp, "Amplitude C");
    emb->add_flag("--bump", o.bump, "Use v = C 1{n = 0}");
    emb->add_option("--boxes", o.boxes, "Box half-widths N")->delimiter(',')->required();
    emb->add_option("--exclude", o.exclude, "Excluded windows lo,hi,...")->delimiter(',');
    emb->add_option("--ipr", o.ipr, "IPR threshold");
    emb->add_option("--delta", o.delta, "In-band margin");
    auto* vt = sub("verify-transform", "Spectra of H0~(x) and D~(x) on an x-grid", cmd_verify_transform);
    vt->add_option("--grid", o.grid, "Points per axis");
    vt->add_option("--tol", o.tol, "Allowed eigenvalue deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    CLI::App* chosen = nullptr;
    Handler handler = nullptr;
    for (auto& [s, h] : subs) {
        if (s->parsed()) {
            chosen = s;
            handler = h;
        }
    }
    auto t0 = std::chrono::steady_clock::now();
    json report;
    report["command"] = chosen->get_name();
    report["versions"] = versions();
    int code = 0;
    try {
        RunConfig cfg = load_config(o.config);
        report["config"] = cfg.raw;
        json params = json::object();
        Outcome res = handler(cfg, o, params);
        report["parameters"] = params;
        report["ok"] = res.ok;
        if (!res.ok) report["failed_check"] = res.failed_check;
        report["result"] = res.result;
        code = res.ok ? 0 : 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << chosen->help();
        return 2;
    } catch (const PreconditionError& e) {
        report["ok"] = false;
        report["failed_check"] = "precondition";
        report["error"] = e.what();
        code = 1;
    } catch (const std::exception& e) {
        report["ok"] = false;
        report["failed_check"] = "internal";
        report["error"] = e.what();
        code = 1;
    }
    if (!o.normalize) {
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        report["timings"] = {{"total_ms", ms}, {"threads", thread_count()}};
    }
    std::string text = report.dump(2) + "\n";
    out << text;
    if (!o.out_path.empty()) {
        std::ofstream f(o.out_path);
        if (!f) {
            err << "error: cannot write " << o.out_path << "\n";
            return 2;
        }
        f << text;
    }
    return code;
}

} // namespace fermi::cli
