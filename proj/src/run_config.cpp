#include "ellipt/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ellipt {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view text, std::string_view what)
{
    std::string t = trim(text);
    if (!t.empty() && t.front() == '+')
        t.erase(0, 1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(std::string(what) + ": cannot parse '" + t + "' as a number");
    return v;
}

int parse_int(std::string_view text, std::string_view what)
{
    const std::string t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(std::string(what) + ": cannot parse '" + t + "' as an integer");
    return v;
}

std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

} // namespace

Complex<double> parse_complex(std::string_view text)
{
    std::string t = trim(text);
    t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
    if (t.empty())
        throw ConfigError("empty complex number");
    if (t.front() == '(') {
        if (t.back() != ')' || t.find(',') == std::string::npos)
            throw ConfigError("complex number '" + t + "': expected (re,im)");
        const auto comma = t.find(',');
        return {parse_real(t.substr(1, comma - 1), "real part"), parse_real(t.substr(comma + 1, t.size() - comma - 2), "imaginary part")};
    }
    if (t.back() != 'i' && t.back() != 'j')
        return {parse_real(t, "complex number"), 0.0};
    t.pop_back();
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;)
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    auto imag = [](const std::string& s) {
        if (s.empty() || s == "+")
            return 1.0;
        if (s == "-")
            return -1.0;
        return parse_real(s, "imaginary part");
    };
    if (split == std::string::npos)
        return {0.0, imag(t)};
    return {parse_real(t.substr(0, split), "real part"), imag(t.substr(split))};
}

void apply_setting(SuiteConfig& config, const std::string& raw_key, const std::string& raw_value)
{
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(raw_value);
    auto& tol = config.tol;
    if (key == "algebra")
        config.algebra = value;
    else if (key == "p")
        config.p = parse_complex(value);
    else if (key == "q")
        config.q = parse_complex(value);
    else if (key == "c")
        config.c = Rational::parse(value);
    else if (key == "order")
        config.order = parse_int(value, key);
    else if (key == "fock-degree")
        config.fock_degree = parse_int(value, key);
    else if (key == "window")
        config.window = parse_int(value, key);
    else if (key == "samples")
        config.samples = parse_int(value, key);
    else if (key == "serre-samples")
        config.serre_samples = parse_int(value, key);
    else if (key == "structure-samples")
        config.structure_samples = parse_int(value, key);
    else if (key == "radius")
        config.radius = parse_real(value, key);
    else if (key == "seed")
        config.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "workers")
        config.workers = parse_int(value, key);
    else if (key == "relations")
        config.relations = split_list(value);
    else if (key == "precision") {
        if (value == "double")
            config.precision = Precision::Double;
        else if (value == "long")
            config.precision = Precision::Long;
        else
            throw ConfigError("precision must be 'double' or 'long', got '" + value + "'");
    } else if (key == "tol-series")
        tol.series = parse_real(value, key);
    else if (key == "tol-fock")
        tol.fock = parse_real(value, key);
    else if (key == "tol-closed-form")
        tol.closed_form = parse_real(value, key);
    else if (key == "tol-serre")
        tol.serre = parse_real(value, key);
    else if (key == "tol-structure")
        tol.structure = parse_real(value, key);
    else if (key == "tol-serre-coefficients")
        tol.serre_coefficients = parse_real(value, key);
    else if (key == "tol-theta")
        tol.theta = parse_real(value, key);
    else
        throw ConfigError("unknown key '" + key + "'");
}

void apply_config_stream(SuiteConfig& config, std::istream& in)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_config_file(SuiteConfig& config, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    apply_config_stream(config, in);
}

} // namespace ellipt
