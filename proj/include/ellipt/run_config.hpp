#pragma once

// key = value run files and the textual forms of the parameters.

#include "ellipt/verifier.hpp"

#include <istream>
#include <string>
#include <string_view>

namespace ellipt {

/// "0.3", "-0.2i", "0.1+0.05i", "(0.1,0.05)". Throws ConfigError.
Complex<double> parse_complex(std::string_view text);

/// Applies one key to the config. Keys match the long CLI flags without the dashes,
/// with '-' and '_' interchangeable ("fock-degree", "tol-series", "relations", ...).
void apply_setting(SuiteConfig& config, const std::string& key, const std::string& value);

/// Reads '#' comments, blank lines and "key = value" lines. Throws ConfigError with the line number.
void apply_config_stream(SuiteConfig& config, std::istream& in);

void apply_config_file(SuiteConfig& config, const std::string& path);

} // namespace ellipt
