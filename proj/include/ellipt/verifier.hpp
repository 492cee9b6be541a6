#pragma once

// Catalogue of relations and the suite runner.
//
// Every relation is checked numerically: exchange relations as ratios of fully summed
// contraction products at sampled (z, w), the commutator through both the two-sided
// expansion (delta_extract) and the Fock-space mode matrices, the Serre relations by
// reducing all six orderings to one normal-ordered form.
//
// Branch convention: samples are placed at z = R e^{-i t/2}, w = R r e^{+i t/2} with
// |t| < pi, so that Log(w/z) = Log w - Log z and the principal powers (w/z)^{beta...}
// agree with the split powers z^{beta...} w^{-beta...} produced by the zero modes.

#include "ellipt/algebra_config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ellipt {

inline constexpr int kReportSchemaVersion = 1;

struct Tolerances {
    double series = 1e-8;
    double fock = 1e-8;
    double closed_form = 1e-8;
    double serre = 1e-7;
    double structure = 1e-10;
    double serre_coefficients = 1e-9;
    double theta = 1e-9;
};

enum class Precision { Double, Long };

struct SuiteConfig {
    std::string algebra = "A2";
    Complex<double> p{0.09, 0.0};
    Complex<double> q{0.3, 0.0};
    Rational c{1};
    int order = 80;
    int fock_degree = 3;
    int window = 3;
    int samples = 16;
    int serre_samples = 8;
    int structure_samples = 100;
    double radius = 0.5;
    Tolerances tol;
    /// Relation names or group names; empty runs the whole catalogue.
    std::vector<std::string> relations;
    std::uint64_t seed = 20240611;
    int workers = 0; // 0: ELLIPT_WORKERS or hardware concurrency
    Precision precision = Precision::Double;
};

struct CheckResult {
    std::string relation; // catalogue name, with "[A=..]" for per-class instances
    std::string group;
    std::string anchor;   // the identity checked, as formula text
    std::string route;
    int n_samples = 0;
    int n_skipped = 0;
    double max_residual = 0;
    /// Per-route maxima when a check has more than one route; max_residual is their maximum.
    std::vector<std::pair<std::string, double>> route_residuals;
    double tolerance = 0;
    bool pass = false;
    bool applicable = true;
    std::vector<std::string> notes;
    double timing_ms = 0;
};

struct VerificationReport {
    SuiteConfig config;
    std::vector<CheckResult> checks;
    std::vector<std::string> errata;
    double total_ms = 0;

    bool all_pass() const;
    int failures() const;
};

struct CatalogueEntry {
    std::string name;
    std::string group;
    std::string anchor;
};

/// Static list of relation checks, in execution order.
const std::vector<CatalogueEntry>& catalogue();

/// Names selected by a filter of relation and group names; throws ConfigError for unknown names.
std::vector<std::string> select_relations(const std::vector<std::string>& filter);

template <class Real>
VerificationReport run_suite(const SuiteConfig& config);

extern template VerificationReport run_suite<double>(const SuiteConfig&);
extern template VerificationReport run_suite<long double>(const SuiteConfig&);

/// Dispatches on config.precision.
VerificationReport run_suite(const SuiteConfig& config);

/// JSON text (schema documented in docs/report-schema.md). Timing fields are omitted
/// when `with_timing` is false, which makes reruns byte-identical.
std::string report_json(const VerificationReport& report, bool with_timing = true);

/// Human-readable table.
std::string report_table(const VerificationReport& report);

/// 64-bit FNV-1a, used to derive per-check seeds that do not depend on the standard library.
std::uint64_t stable_hash(const std::string& text);

} // namespace ellipt
