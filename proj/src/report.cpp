#include "ellipt/verifier.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace ellipt {

namespace {

nlohmann::ordered_json complex_json(const Complex<double>& z)
{
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

// JSON has no infinities; non-finite residuals are written as null.
nlohmann::ordered_json number_or_null(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

} // namespace

std::string report_json(const VerificationReport& report, bool with_timing)
{
    using nlohmann::ordered_json;
    const auto& cfg = report.config;
    ordered_json config{
        {"algebra", cfg.algebra},
        {"p", complex_json(cfg.p)},
        {"q", complex_json(cfg.q)},
        {"c", cfg.c.to_string()},
        {"order", cfg.order},
        {"fock_degree", cfg.fock_degree},
        {"window", cfg.window},
        {"samples", cfg.samples},
        {"serre_samples", cfg.serre_samples},
        {"structure_samples", cfg.structure_samples},
        {"radius", cfg.radius},
        {"seed", cfg.seed},
        {"precision", cfg.precision == Precision::Long ? "long" : "double"},
        {"tolerances",
         {{"series", cfg.tol.series},
          {"fock", cfg.tol.fock},
          {"closed_form", cfg.tol.closed_form},
          {"serre", cfg.tol.serre},
          {"structure", cfg.tol.structure},
          {"serre_coefficients", cfg.tol.serre_coefficients},
          {"theta", cfg.tol.theta}}},
        {"relations", cfg.relations},
    };

    ordered_json checks = ordered_json::array();
    int passed = 0, failed = 0, not_applicable = 0;
    for (const auto& c : report.checks) {
        ordered_json j{
            {"relation", c.relation},
            {"group", c.group},
            {"anchor_quote", c.anchor},
            {"route", c.route},
            {"n_samples", c.n_samples},
            {"n_skipped", c.n_skipped},
            {"max_residual", number_or_null(c.max_residual)},
            {"route_residuals", ordered_json::object()},
            {"tolerance", c.tolerance},
            {"pass", c.pass},
            {"applicable", c.applicable},
            {"notes", c.notes},
        };
        for (const auto& [route, value] : c.route_residuals)
            j["route_residuals"][route] = number_or_null(value);
        if (with_timing)
            j["timing_ms"] = c.timing_ms;
        checks.push_back(std::move(j));
        if (!c.applicable)
            ++not_applicable;
        else if (c.pass)
            ++passed;
        else
            ++failed;
    }

    ordered_json summary{{"checks", report.checks.size()},
                         {"passed", passed},
                         {"failed", failed},
                         {"not_applicable", not_applicable},
                         {"all_pass", report.all_pass()}};
    if (with_timing)
        summary["total_ms"] = report.total_ms;

    ordered_json out{{"schema_version", kReportSchemaVersion},
                     {"config", std::move(config)},
                     {"checks", std::move(checks)},
                     {"errata", report.errata},
                     {"summary", std::move(summary)}};
    return out.dump(2) + "\n";
}

std::string report_table(const VerificationReport& report)
{
    std::size_t width = 8;
    for (const auto& c : report.checks)
        width = std::max(width, c.relation.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width)) << "relation" << "  " << std::setw(20) << "route" << std::right
       << std::setw(8) << "samples" << std::setw(12) << "residual" << std::setw(10) << "tol" << "  status\n";
    os << std::string(width + 66, '-') << "\n";
    for (const auto& c : report.checks) {
        os << std::left << std::setw(static_cast<int>(width)) << c.relation << "  " << std::setw(20) << c.route << std::right
           << std::setw(8) << c.n_samples - c.n_skipped << std::setw(12) << std::scientific << std::setprecision(2)
           << c.max_residual << std::setw(10) << c.tolerance << "  " << (!c.applicable ? "n/a" : c.pass ? "PASS" : "FAIL")
           << "\n"
           << std::defaultfloat;
        if (!c.pass)
            for (const auto& note : c.notes)
                os << "    " << note << "\n";
    }
    os << std::string(width + 66, '-') << "\n";
    os << report.checks.size() << " checks, " << report.failures() << " failed";
    os << std::fixed << std::setprecision(1) << ", " << report.total_ms / 1000.0 << " s\n";
    if (!report.errata.empty()) {
        os << "\nerrata:\n";
        for (const auto& e : report.errata)
            os << "  - " << e << "\n";
    }
    return os.str();
}

} // namespace ellipt
