#pragma once

#include <string>

#include "pomc/model.hpp"

namespace pomc {

/// Parses the line-oriented model format; errors carry "line:col: message".
PODTMC parse_model(const std::string& text);

/// Canonical text form; parse_model(write_model(m)) == m.
std::string write_model(const PODTMC& m);

PODTMC load_model(const std::string& path);
void store_model(const PODTMC& m, const std::string& path);

} // namespace pomc
