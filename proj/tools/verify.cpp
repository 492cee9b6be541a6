// verify: run the relation catalogue and write a JSON report.
//
// Exit status: 0 all executed checks pass, 1 some check failed,
// 2 bad flags or config, 3 parameters outside the admissible domain.

#include "ellipt/run_config.hpp"
#include "ellipt/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

void write_atomically(const std::string& path, const std::string& text)
{
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out)
            throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string error_json(const std::string& kind, const std::string& message)
{
    nlohmann::ordered_json j{{"schema_version", ellipt::kReportSchemaVersion},
                             {"error", {{"kind", kind}, {"message", message}}},
                             {"summary", {{"all_pass", false}}}};
    return j.dump(2) + "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical verification of the screening-current relations"};
    app.set_version_flag("--version", "verify 1.0 (report schema " + std::to_string(ellipt::kReportSchemaVersion) + ")");

    // Everything is collected as text and funnelled through apply_setting, so the config file
    // and the command line share one parser and flags override the file.
    std::map<std::string, std::string> given;
    auto text_option = [&](const std::string& flag, const std::string& help) {
        return app.add_option_function<std::string>(
            "--" + flag, [&given, flag](const std::string& v) { given[flag] = v; }, help);
    };
    text_option("algebra", "Cartan type, e.g. A1, A2, D4 (default A2)");
    text_option("p", "elliptic nome p, real or complex, e.g. 0.09 or 0.09+0.01i");
    text_option("q", "deformation q, 0 < |p| < |q| < 1");
    text_option("c", "central charge for the function-level checks, integer or fraction");
    text_option("order", "truncation order of q-products and series (default 80)");
    text_option("fock-degree", "Fock-space degree cap D (default 3)");
    text_option("window", "mode window |m|, |n| <= W (default 3)");
    text_option("samples", "sample points per check (default 16)");
    text_option("serre-samples", "sample triples per Serre check (default 8)");
    text_option("structure-samples", "sample points per structure-function check (default 100)");
    text_option("radius", "|w/z| on the sampling circle (default 0.5)");
    text_option("tol-series", "tolerance, series and exchange routes");
    text_option("tol-fock", "tolerance, Fock route");
    text_option("tol-closed-form", "tolerance, closed-form contractions");
    text_option("tol-serre", "tolerance, Serre relations");
    text_option("tol-structure", "tolerance, structure functions");
    text_option("tol-serre-coefficients", "tolerance, f/g rebuilt from exchange ratios");
    text_option("tol-theta", "tolerance, theta quasi-periodicity");
    text_option("relations", "comma-separated relation or group names (default: all)");
    text_option("seed", "sampling seed");
    text_option("workers", "worker threads (default: ELLIPT_WORKERS or hardware threads)");
    text_option("precision", "double or long")->check(CLI::IsMember({"double", "long"}));

    std::string config_path, out_path;
    bool quiet = false, no_timing = false, list = false;
    app.add_option("--config", config_path, "key = value file; flags override it")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "JSON report path (written atomically)");
    app.add_flag("--no-timing", no_timing, "omit timing fields from the JSON report");
    app.add_flag("--quiet", quiet, "suppress the summary table");
    app.add_flag("--list", list, "print the relation catalogue and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& entry : ellipt::catalogue())
            std::cout << entry.group << "\t" << entry.name << "\t" << entry.anchor << "\n";
        return 0;
    }

    ellipt::SuiteConfig config;
    try {
        if (!config_path.empty())
            ellipt::apply_config_file(config, config_path);
        for (const auto& [key, value] : given)
            ellipt::apply_setting(config, key, value);
        ellipt::parse_cartan(config.algebra);
        ellipt::select_relations(config.relations);
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << "\n" << app.help();
        return 2;
    }

    ellipt::VerificationReport report;
    try {
        report = ellipt::run_suite(config);
    } catch (const ellipt::DomainError& e) {
        std::cerr << "verify: " << e.what() << "\n";
        if (!out_path.empty())
            write_atomically(out_path, error_json("domain", e.what()));
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << "\n";
        if (!out_path.empty())
            write_atomically(out_path, error_json("internal", e.what()));
        return 3;
    }

    if (!quiet)
        std::cout << ellipt::report_table(report);
    if (!out_path.empty()) {
        try {
            write_atomically(out_path, ellipt::report_json(report, !no_timing));
        } catch (const std::exception& e) {
            std::cerr << "verify: " << e.what() << "\n";
            return 2;
        }
    }
    return report.all_pass() ? 0 : 1;
}
