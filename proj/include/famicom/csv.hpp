#pragma once

#include <string>
#include <vector>

namespace famicom {

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

std::string csv_escape(const std::string& field);

/// Minimal RFC-4180 reader for the files this library writes.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace famicom
