#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hugetest/distribution.hpp"

namespace hugetest {

// Text format, one atom per line: `<mass><TAB><bits>`, where mass is a decimal
// or an exact rational p/q. Lines starting with '#' and blank lines are skipped.
ExplicitDistribution parse_distribution(std::istream& in, const std::string& source_name = "<stream>");
ExplicitDistribution read_distribution_file(const std::filesystem::path& path);

void write_distribution(std::ostream& out, const ExplicitDistribution& d);
void write_distribution_file(const std::filesystem::path& path, const ExplicitDistribution& d);

}  // namespace hugetest
