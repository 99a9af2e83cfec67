#pragma once

#include <json.hpp>

#include <string>

namespace sdllg {

/// Parses the TOML subset used by configuration files into a JSON tree:
/// tables, arrays of tables, dotted and quoted keys, basic and literal
/// strings, integers, floats (incl. inf/nan), booleans, arrays and inline
/// tables. Dates and multi-line strings are not supported. Errors throw
/// ConfigError with the line number.
nlohmann::json parse_toml(const std::string& text);

nlohmann::json parse_toml_file(const std::string& path);

}  // namespace sdllg
