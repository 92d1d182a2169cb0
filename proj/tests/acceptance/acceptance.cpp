// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.

#include "cli.hpp"
#include "fermi/charpoly.hpp"
#include "fermi/error.hpp"
#include "fermi/floquet.hpp"
#include "fermi/spectrum.hpp"
#include "fermi/variety.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace fermi;
using json = nlohmann::json;

namespace {

const std::string kData = FERMI_TEST_DATA;

PeriodicPotential random_potential(const LatticeSpec& l, std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 5);
    std::vector<GaussianRational> v;
    for (int i = 0; i < l.cell_size(); ++i) v.emplace_back(mpq_class(num(rng), den(rng)));
    return {l, v};
}

struct CliRun {
    int code = 0;
    std::string text;
    json report;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fermi");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.text = out.str();
    if (!r.text.empty()) r.report = json::parse(r.text);
    return r;
}

// Collects failure notes for one criterion.
struct Check {
    std::vector<std::string> notes;
    void expect(bool cond, const std::string& what) {
        if (!cond) notes.push_back(what);
    }
};

struct Fixture {
    std::string name;
    PeriodicPotential V;
};

std::vector<Fixture> real_fixtures() {
    std::mt19937 rng(2024);
    return {{"free (1,1)", zero_potential(LatticeSpec({1, 1}))},
            {"free (2,3)", zero_potential(LatticeSpec({2, 3}))},
            {"random (2,3)", random_potential(LatticeSpec({2, 3}), rng)},
            {"random (3,4)", random_potential(LatticeSpec({3, 4}), rng)},
            {"random (1,2,3)", random_potential(LatticeSpec({1, 2, 3}), rng)}};
}

void c1(Check& ck) {
    auto b11 = charpoly_exact(zero_potential(LatticeSpec({1, 1})));
    auto v = b11.vars;
    auto minus = [&](const char* s) { return parse_poly(v, s); };
    auto want11 = minus("0") - minus("lambda") - minus("z1") - minus("z1^-1") - minus("z2") - minus("z2^-1");
    ck.expect(b11.p.to_string() == want11.to_string(), "q=(1,1): " + b11.p.to_string());
    auto b21 = charpoly_exact(zero_potential(LatticeSpec({2, 1})));
    auto s = minus("z2") + minus("z2^-1") + minus("lambda");
    auto want21 = s * s - (minus("2") + minus("z1") + minus("z1^-1"));
    ck.expect(b21.p.to_string() == want21.to_string(), "q=(2,1): " + b21.p.to_string());
    auto c = GaussianRational::ratio(-5, 3);
    auto bc = charpoly_exact(constant_potential(LatticeSpec({1, 1}), c));
    ck.expect(bc.p.to_string() == (want11 + LaurentPoly::constant(v, c)).to_string(), "q=(1,1), V=-5/3");
}

void c2(Check& ck) {
    std::mt19937 rng(77);
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{3, 4}, std::vector<int>{1, 2, 3}}) {
        for (int i = 0; i < 10; ++i) {
            auto rep = check_facts(charpoly_exact(random_potential(LatticeSpec(q), rng)));
            for (const auto& f : rep.facts) {
                if (!f.informational) ck.expect(f.ok, f.name + " failed: " + f.detail);
            }
        }
    }
}

void c3(Check& ck) {
    std::mt19937 rng(303);
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{1, 2, 3}}) {
        auto V = random_potential(LatticeSpec(q), rng);
        auto b = charpoly_exact(V);
        for (const auto& lam : {GaussianRational(0), GaussianRational(1), V.average()}) {
            auto r = lowest_component_check(b, lam);
            ck.expect(r.h1_match, "Phi lowest != h1~ at lambda " + lam.to_string());
            ck.expect(r.h2_match, "Psi lowest != h2~ at lambda " + lam.to_string());
        }
    }
}

void c4(Check& ck) {
    std::mt19937 rng(404);
    std::vector<PeriodicPotential> all;
    for (const auto& f : real_fixtures()) all.push_back(f.V);
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{3, 4}, std::vector<int>{1, 2, 3}}) {
        all.push_back(random_potential(LatticeSpec(q), rng));
    }
    for (const auto& V : all) {
        try {
            auto r = degree_bound_check(V);
            ck.expect(r.ok, "bound violated");
            auto r1 = degree_bound_check(V, GaussianRational(1));
            ck.expect(r1.ok, "bound violated at lambda 1");
        } catch (const InternalCheckError& e) {
            ck.expect(false, e.what());
        }
    }
    auto r11 = degree_bound_check(zero_potential(LatticeSpec({1, 1})));
    ck.expect(r11.attained && r11.degree == 3, "free (1,1) does not attain 3");
}

void c5(Check& ck) {
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{3, 4}}) {
        for (auto kind : {RootsForm::H1, RootsForm::H2}) {
            auto h = htilde({LatticeSpec(q), kind}).pushdown;
            auto v = certify_irreducible(h).verdict;
            ck.expect(v == Verdict::Irreducible, std::string(kind == RootsForm::H1 ? "h1" : "h2") + " for (" +
                                                     std::to_string(q[0]) + "," + std::to_string(q[1]) + "): " +
                                                     to_string(v));
        }
    }
}

void c6(Check& ck) {
    const std::string free23 = kData + "/free_23.json";
    for (const char* lam : {"1", "-2", "1/3"}) {
        auto r = cli({"irreducible", "--lambda", lam, "--normalize", free23});
        ck.expect(r.code == 0 && r.report["result"]["verdict"] == "irreducible",
                  std::string("irreducible at ") + lam + ": " + r.report["result"].value("verdict", "?"));
    }
    auto fa = cli({"factor-at-average", "--normalize", free23});
    const auto& res = fa.report["result"];
    ck.expect(fa.code == 0, "factor-at-average exit " + std::to_string(fa.code));
    ck.expect(res["verdict"] == "reducible", "free (2,3) not reducible at [V]");
    ck.expect(res["lhs_factors"].size() == 2, "expected exactly two factors");
    for (const auto& c : res["factor_certificates"]) ck.expect(c["verdict"] == "irreducible", "factor not certified");
    // independent reproduction of the product from the emitted text
    auto b = charpoly_exact(zero_potential(LatticeSpec({2, 3})));
    if (res["lhs_factors"].size() == 2) {
        auto f0 = parse_poly(b.vars, res["lhs_factors"][0].get<std::string>());
        auto f1 = parse_poly(b.vars, res["lhs_factors"][1].get<std::string>());
        Exponents e{};
        e[0] = 6;
        e[1] = 6;
        auto lhs = b.ptilde.specialize(2, GaussianRational(0)).mul_monomial(e);  // (-1)^6 = 1
        ck.expect(f0 * f1 == lhs, "factor product does not reproduce (z1 z2)^Q P~");
    }
    auto nc = cli({"factor-at-average", "--normalize", kData + "/random_23.json"});
    ck.expect(nc.report["result"]["verdict"] == "irreducible-at-average", "nonconstant V not irreducible at [V]");

    // no reducible verdict away from the average, on a nonconstant potential too
    std::mt19937 rng(606);
    auto V = random_potential(LatticeSpec({2, 3}), rng);
    std::uniform_int_distribution<long> num(-30, 30), den(1, 9);
    for (int i = 0; i < 10; ++i) {
        GaussianRational lam(mpq_class(num(rng), den(rng)));
        if (lam == V.average()) continue;
        auto v = certify_fermi_irreducible(V, lam).verdict;
        ck.expect(v != Verdict::Reducible, "reducible at lambda " + lam.to_string());
        ck.expect(v == Verdict::Irreducible, "inconclusive at lambda " + lam.to_string());
    }
}

// Shared by criteria 7 and 9.
struct LevelRun {
    std::string fixture;
    int band;
    double lambda;
    LevelSetReport level;
    SingularPointReport singular;
    bool squarefree = false;
};

std::vector<LevelRun> level_runs() {
    static std::vector<LevelRun> cache;
    if (!cache.empty()) return cache;
    std::mt19937 rng(909);
    std::vector<Fixture> fx{{"free (2,3)", zero_potential(LatticeSpec({2, 3}))},
                            {"random (2,3)", random_potential(LatticeSpec({2, 3}), rng)}};
    for (const auto& f : fx) {
        auto b = charpoly_exact(f.V);
        auto cert = squarefree_all_lambda(b);
        auto bs = compute_bands(f.V, {48, 48});
        for (int m = 1; m <= bs.bands_count(); ++m) {
            std::vector<double> levels;
            for (const auto& e : find_extrema(f.V, m, bs)) {
                bool seen = false;
                for (double l : levels) seen |= std::fabs(l - e.value) < 1e-6;
                if (!seen) levels.push_back(e.value);
            }
            for (double lam : levels) {
                LevelRun r{f.name, m, lam, level_set_check(f.V, m, lam, bs), {}, squarefree_at_level(cert, lam)};
                r.singular = singular_points_d2_numeric(b, lam);
                cache.push_back(std::move(r));
            }
        }
    }
    return cache;
}

void c7(Check& ck) {
    int n = 0;
    for (const auto& r : level_runs()) {
        ++n;
        ck.expect(r.squarefree, r.fixture + " band " + std::to_string(r.band) + " level " + std::to_string(r.lambda));
    }
    ck.expect(n > 0, "no levels tested");
}

void c8(Check& ck) {
    std::mt19937 rng(808);
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{1, 2, 3}}) {
        auto V = random_potential(LatticeSpec(q), rng);
        const int d = static_cast<int>(q.size());
        std::size_t total = 1;
        for (int j = 0; j < d; ++j) total *= 10;
        double worst = 0.0;
        for (std::size_t p = 0; p < total; ++p) {
            std::vector<double> x(static_cast<std::size_t>(d));
            std::size_t rem = p;
            for (int j = d - 1; j >= 0; --j) {
                x[static_cast<std::size_t>(j)] = static_cast<double>(rem % 10) / 10.0;
                rem /= 10;
            }
            worst = std::max(worst, verify_equivalence(V, x, 1e-9).max_deviation);
        }
        ck.expect(worst < 1e-9, "deviation " + std::to_string(worst));
    }
}

void c9(Check& ck) {
    for (const auto& r : level_runs()) {
        std::string where = r.fixture + " band " + std::to_string(r.band) + " level " + std::to_string(r.lambda);
        ck.expect(!r.level.points.empty(), where + ": no level-set points");
        ck.expect(r.level.max_residual_p < 1e-7, where + ": |P| " + std::to_string(r.level.max_residual_p));
        ck.expect(r.level.max_residual_grad < 1e-7, where + ": |grad P| " + std::to_string(r.level.max_residual_grad));
        ck.expect(r.singular.count <= 100, where + ": singular count " + std::to_string(r.singular.count));
    }
    auto s = singular_points_d2(zero_potential(LatticeSpec({1, 1})), GaussianRational(-4));
    ck.expect(s.count == 1, "free (1,1) at -4: count " + std::to_string(s.count));
    if (s.count == 1) ck.expect(s.points[0].k == std::vector<double>{0.0, 0.0}, "free (1,1) point not at (0,0)");
}

void c10(Check& ck) {
    auto r = free_operator_checks({2, 3}, {400, 400}, 50, 1e-6);
    int interior = 0;
    for (const auto& s : r.samples) interior += s.interior;
    ck.expect(r.samples.size() == 50 && interior == 50, std::to_string(interior) + " of 50 interior");
    ck.expect(r.zero && r.zero->interior, "0 not interior");
}

void c11(Check& ck) {
    auto u = band_union(compute_bands(zero_potential(LatticeSpec({2, 3})), {200, 200}));
    ck.expect(u.size() == 1 && std::fabs(u[0].first + 4) < 2e-3 && std::fabs(u[0].second - 4) < 2e-3, "union != [-4,4]");
    for (const auto& f : real_fixtures()) {
        std::vector<int> grid(static_cast<std::size_t>(f.V.lattice().dim()), f.V.lattice().dim() == 2 ? 64 : 20);
        auto bs = compute_bands(f.V, grid);
        for (std::size_t m = 0; m < bs.bands.size(); ++m) {
            ck.expect(bs.bands[m].first < bs.bands[m].second, f.name + " band " + std::to_string(m + 1) + " degenerate");
        }
    }
}

void c12(Check& ck) {
    std::mt19937 rng(1212);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto q : {std::vector<int>{2, 3}, std::vector<int>{3, 4}}) {
        auto V = random_potential(LatticeSpec(q), rng);
        const int Q = V.lattice().cell_size();
        int done = 0;
        double worst = 0.0;
        while (done < 50) {
            std::vector<double> k{u(rng), u(rng)};
            int m = 1 + static_cast<int>(u(rng) * Q);
            std::vector<double> g;
            try {
                g = hf_gradient(V, k, m, 1e-3);
            } catch (const DegenerateError&) {
                continue;
            }
            for (int j = 0; j < 2; ++j) {
                auto kp = k, km = k;
                kp[static_cast<std::size_t>(j)] += 1e-5;
                km[static_cast<std::size_t>(j)] -= 1e-5;
                double fd = (band_values(V, kp)[static_cast<std::size_t>(m - 1)] -
                             band_values(V, km)[static_cast<std::size_t>(m - 1)]) / 2e-5;
                worst = std::max(worst, std::fabs(fd - g[static_cast<std::size_t>(j)]));
            }
            ++done;
        }
        ck.expect(worst < 1e-6, "max deviation " + std::to_string(worst));
    }
}

void c13(Check& ck) {
    auto V = zero_potential(LatticeSpec({1, 1}));
    ScanOptions so;
    so.exclusions = {{-0.1, 0.1}};
    auto rep = embedded_scan(V, Perturbation{5.0, 1.5}, {15, 25, 35}, so);
    ck.expect(rep.persistent.empty(), std::to_string(rep.persistent.size()) + " persistent flags");
    auto bump = embedded_scan(V, Perturbation{-8.0, 1.5, PerturbationProfile::Bump}, {15, 25}, so);
    for (const auto& b : bump.boxes) {
        ck.expect(b.lowest.lambda < -4.0, "bump bound state not below -4 at N=" + std::to_string(b.N));
        for (const auto& f : b.flagged) ck.expect(std::fabs(f.lambda - b.lowest.lambda) > 1e-9, "bound state flagged");
    }
    ck.expect(bump.persistent.empty(), "bump control has persistent flags");
}

void c14(Check& ck) {
    const std::string f23 = kData + "/free_23.json", r23 = kData + "/random_23.json", f11 = kData + "/free_11.json";
    const std::string r123 = kData + "/random_123.json";
    std::vector<std::vector<std::string>> runs{
        {"bands", "--grid", "32", r23},
        {"charpoly", r23},
        {"facts", r123},
        {"lowest-components", r23},
        {"degree-bounds", r123},
        {"irreducible", "--lambda", "1/3", r23},
        {"factor-at-average", f23},
        {"squarefree", "--lambda", "1", f23},
        {"singular", "--lambda", "-4", f11},
        {"extrema", "--band", "6", "--grid", "32", r23},
        {"level-set", "--band", "6", "--lambda", "4", "--grid", "32", f23},
        {"free-checks", "--grid", "64", f23},
        {"embedded", "--amp", "5", "--boxes", "6,8", f11},
        {"verify-transform", "--grid", "4", r123},
    };
    for (auto args : runs) {
        args.insert(args.begin() + 1, "--normalize");
        setenv("FERMI_THREADS", "1", 1);
        auto a = cli(args);
        setenv("FERMI_THREADS", "4", 1);
        auto b = cli(args);
        ck.expect(a.code == 0, args[0] + " exit " + std::to_string(a.code));
        ck.expect(!a.text.empty() && a.text == b.text, args[0] + " output differs between runs");
    }
    unsetenv("FERMI_THREADS");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> run;
    };
    std::vector<Criterion> all{
        {1, "charpoly exactness", c1},
        {2, "facts suite", c2},
        {3, "lowest-component identities", c3},
        {4, "degree bounds", c4},
        {5, "h1 and h2 irreducible", c5},
        {6, "irreducible except at the average", c6},
        {7, "square-free at extremum levels", c7},
        {8, "Floquet-Bloch equivalence", c8},
        {9, "extremum level sets and singular points", c9},
        {10, "free-operator band interiors", c10},
        {11, "band sanity", c11},
        {12, "Hellmann-Feynman gradient", c12},
        {13, "embedded-eigenvalue harness", c13},
        {14, "determinism", c14},
    };
    int failed = 0;
    for (const auto& c : all) {
        Check ck;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(ck);
        } catch (const std::exception& e) {
            ck.notes.push_back(std::string("exception: ") + e.what());
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = ck.notes.empty();
        failed += !ok;
        std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.name << " (" << std::fixed
                  << std::setprecision(1) << s << " s)\n";
        for (std::size_t i = 0; i < std::min<std::size_t>(ck.notes.size(), 10); ++i) {
            std::cout << "    " << ck.notes[i] << "\n";
        }
        std::cout.flush();
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
