// Acceptance gate: one line per criterion, tolerances pinned here.
// Exit status is the number of failed criteria.

#include "ellipt/heisenberg.hpp"
#include "ellipt/structure.hpp"
#include "ellipt/verifier.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

using namespace ellipt;
using C = Complex<double>;

namespace {

constexpr double kThetaTol = 1e-9;
constexpr double kBracketTol = 1e-12;
constexpr double kClosedFormTol = 1e-8;
constexpr double kExchangeTol = 1e-8;
constexpr double kCommutatorTol = 1e-8;
constexpr double kSerreTol = 1e-7;
constexpr double kStructureTol = 1e-10;
constexpr double kSerreCoefficientTol = 1e-9;

constexpr double kThetaSeconds = 1;
constexpr double kContractionSeconds = 10;
constexpr double kExchangeSeconds = 60;
constexpr double kCommutatorSeconds = 180;
constexpr double kSuiteSeconds = 300;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

SuiteConfig base_config(const std::string& algebra, std::vector<std::string> relations)
{
    SuiteConfig cfg;
    cfg.algebra = algebra;
    cfg.relations = std::move(relations);
    return cfg;
}

/// Max residual over the applicable checks of a run, and the names of the failures.
struct Summary {
    double worst = 0;
    int checks = 0;
    std::vector<std::string> failed;
};

Summary summarize(const VerificationReport& report, const std::function<bool(const CheckResult&)>& keep = nullptr)
{
    Summary s;
    for (const auto& c : report.checks) {
        if (!c.applicable || (keep && !keep(c)))
            continue;
        ++s.checks;
        s.worst = std::max(s.worst, c.max_residual);
        if (!c.pass)
            s.failed.push_back(c.relation);
    }
    return s;
}

std::string list(const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& n : names)
        out += (out.empty() ? "" : ", ") + n;
    return out;
}

double route_residual(const CheckResult& c, const std::string& route)
{
    for (const auto& [name, value] : c.route_residuals)
        if (name == route)
            return value;
    return std::numeric_limits<double>::infinity();
}

Outcome theta_toolkit()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> mod(0.01, 0.5), arg(-3.14159, 3.14159), xmod(0.2, 3.0);
    const C turn = std::polar(1.0, 2 * pi_v<double>);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const C a = std::polar(mod(rng), arg(rng)), x = std::polar(xmod(rng), arg(rng));
        worst = std::max(worst, relative_difference(theta(a * x, a, 80), -theta(x, a, 80) / x));
        worst = std::max(worst, relative_difference(theta(x * turn, a, 80), theta(x, a, 80)));
    }
    const double secs = seconds_since(t0);
    return {worst < kThetaTol && secs < kThetaSeconds,
            "100 points, max residual " + fmt("%.2e", worst) + fmt(" (tol %.0e)", kThetaTol) + fmt(", %.3f s", secs)};
}

Outcome heisenberg_layer()
{
    double worst = 0;
    bool zero_ok = true;
    for (const char* label : {"A2", "D4"}) {
        const auto cartan = parse_cartan(label);
        const auto params = make_params<double>(C(0.09), C(0.3));
        const ModeBracketTable<double> table(cartan, params, 30);
        for (int i = 0; i < cartan.rank; ++i)
            for (int j = 0; j < cartan.rank; ++j)
                for (long n = -30; n <= 30; ++n) {
                    if (n == 0)
                        continue;
                    const C b = table.bracket(i, j, n, -n);
                    // the printed formula, written out independently of bracket_formula
                    const double sp = 0.3, q = 0.3, p = 0.09;
                    const double half = std::pow(sp, double(cartan(i, j) * n));
                    const C direct = (1 - std::pow(q, double(n))) * (half - 1 / half) * (1 - std::pow(p / q, double(n))) /
                                     (double(n) * (1 - std::pow(p, double(n))));
                    const double scale = std::max(1.0, std::abs(direct));
                    worst = std::max(worst, std::abs(b - direct) / scale);
                    worst = std::max(worst, std::abs(b + table.bracket(j, i, -n, n)) / scale);
                    if (cartan(i, j) == 0)
                        zero_ok = zero_ok && b == C(0);
                }
    }
    return {worst < kBracketTol && zero_ok, "A2, D4, |n| <= 30: formula/antisymmetry residual " + fmt("%.2e", worst) +
                                                fmt(" (tol %.0e)", kBracketTol) +
                                                (zero_ok ? ", A_ij = 0 brackets vanish" : ", A_ij = 0 bracket nonzero")};
}

Outcome contraction_closed_forms()
{
    // A3 carries all three classes 2, -1, 0.
    auto cfg = base_config("A3", {"contraction"});
    cfg.tol.closed_form = kClosedFormTol;
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = summarize(run_suite(cfg));
    const double secs = seconds_since(t0);
    return {s.failed.empty() && s.checks == 12 && secs < kContractionSeconds,
            std::to_string(s.checks) + " (pair, A_ij) cases x 16 points, max residual " + fmt("%.2e", s.worst) +
                fmt(" (tol %.0e)", kClosedFormTol) + fmt(", %.2f s", secs) +
                (s.failed.empty() ? "" : "; failing: " + list(s.failed))};
}

Outcome exchange_relations()
{
    Summary all;
    double secs = 0;
    for (const char* algebra : {"A1", "A2"}) {
        auto cfg = base_config(algebra, {"exchange"});
        cfg.tol.series = kExchangeTol;
        const auto t0 = std::chrono::steady_clock::now();
        const auto s = summarize(run_suite(cfg));
        secs += seconds_since(t0);
        all.checks += s.checks;
        all.worst = std::max(all.worst, s.worst);
        for (const auto& f : s.failed)
            all.failed.push_back(std::string(algebra) + ":" + f);
    }
    return {all.failed.empty() && secs < kExchangeSeconds,
            std::to_string(all.checks) + " relations, max residual " + fmt("%.2e", all.worst) +
                fmt(" (tol %.0e)", kExchangeTol) + fmt(", %.2f s", secs) +
                (all.failed.empty() ? ""
                                    : "; failing: " + list(all.failed) +
                                          " (engine/printed = -1 at every sample: the prefactor is -1 for every A_ij)")};
}

Outcome delta_commutator()
{
    double series = 0, fock = 0, secs = 0, adjacent_series = 0;
    std::vector<std::string> failed;
    for (const char* algebra : {"A1", "A2"}) {
        auto cfg = base_config(algebra, {"e-f-commutator"});
        cfg.tol.series = cfg.tol.fock = kCommutatorTol;
        cfg.fock_degree = 3;
        cfg.window = 3;
        const auto t0 = std::chrono::steady_clock::now();
        const auto report = run_suite(cfg);
        secs += seconds_since(t0);
        for (const auto& c : report.checks) {
            const double sr = route_residual(c, "series"), fr = route_residual(c, "fock");
            // (a) is the same-node comb: supports and H+- weights
            if (c.relation == "e-f-commutator[A=2]")
                series = std::max(series, sr);
            else
                adjacent_series = std::max(adjacent_series, sr);
            fock = std::max(fock, fr);
            if (fr > kCommutatorTol)
                failed.push_back(std::string(algebra) + ":" + c.relation);
        }
    }
    const bool a = series < kCommutatorTol, b = fock < kCommutatorTol && secs < kCommutatorSeconds;
    return {a && b, std::string("(a) ") + (a ? "PASS" : "FAIL") + " same-node comb residual " + fmt("%.2e", series) +
                        "; (b) " + (b ? "PASS" : "FAIL") + " Fock D=3, |m|,|n|<=3, relative residual " + fmt("%.2e", fock) +
                        fmt(" (tol %.0e)", kCommutatorTol) + fmt(", %.2f s", secs) +
                        (failed.empty() ? ""
                                        : "; failing: " + list(failed) + " (adjacent E_i, F_j anticommute; series residual " +
                                              fmt("%.2e", adjacent_series) + ")")};
}

Outcome serre_relations()
{
    auto cfg = base_config("A2", {"serre"});
    cfg.tol.serre = kSerreTol;
    cfg.serre_samples = 8;
    const auto report = run_suite(cfg);
    const auto s = summarize(report);
    int used = 0;
    for (const auto& c : report.checks)
        used += c.n_samples - c.n_skipped;
    return {s.failed.empty() && s.checks == 2 && used >= 8,
            "E and F versions, " + std::to_string(used) + " triples used, max relative residual " + fmt("%.2e", s.worst) +
                fmt(" (tol %.0e)", kSerreTol)};
}

Outcome structure_functions()
{
    auto cfg = base_config("A2", {"psi-inversion", "phi-factorization", "serre-coefficients"});
    cfg.tol.structure = kStructureTol;
    cfg.tol.serre_coefficients = kSerreCoefficientTol;
    cfg.structure_samples = 100;
    const auto report = run_suite(cfg);
    double inversion = 0, factorization = 0, rebuilt = 0;
    for (const auto& c : report.checks) {
        if (c.relation.starts_with("psi-inversion"))
            inversion = std::max(inversion, c.max_residual);
        else if (c.relation.starts_with("phi-factorization"))
            factorization = std::max(factorization, c.max_residual);
        else
            rebuilt = std::max(rebuilt, c.max_residual);
    }
    const bool pass = inversion < kStructureTol && factorization < kStructureTol && rebuilt < kSerreCoefficientTol;
    return {pass, "psi inversion " + fmt("%.2e", inversion) + ", phi factorization " + fmt("%.2e", factorization) +
                      fmt(" (tol %.0e)", kStructureTol) + ", f/g rebuilt " + fmt("%.2e", rebuilt) +
                      fmt(" (tol %.0e)", kSerreCoefficientTol) +
                      (factorization < kStructureTol ? "" : "; psi = x^{-A} phi(x)/phi(1/x), the stated form lacks x^{-A}")};
}

Outcome full_suite()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_suite(SuiteConfig{});
    const double secs = seconds_since(t0);
    return {report.all_pass() && secs < kSuiteSeconds,
            "default A2 suite: " + std::to_string(report.checks.size()) + " checks, " +
                std::to_string(report.failures()) + " failed, " + fmt("%.2f s", secs) + fmt(" (limit %.0f s)", kSuiteSeconds)};
}

} // namespace

int main()
{
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"theta toolkit", theta_toolkit},
        {"Heisenberg layer", heisenberg_layer},
        {"contraction vs closed form", contraction_closed_forms},
        {"exchange relations", exchange_relations},
        {"delta commutator", delta_commutator},
        {"Serre relations", serre_relations},
        {"structure functions", structure_functions},
        {"full default suite", full_suite},
    };
    int failed = 0, k = 0;
    for (const auto& [name, run] : criteria) {
        ++k;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("aborted: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %d %s  %-28s %s\n", k, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    std::printf("%d of %d criteria pass\n", k - failed, k);
    return failed;
}
