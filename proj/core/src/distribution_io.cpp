#include "hugetest/distribution_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "hugetest/error.hpp"

namespace hugetest {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_mass(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return value;
  }
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  auto r1 = std::from_chars(num.data(), num.data() + num.size(), p);
  auto r2 = std::from_chars(den.data(), den.data() + den.size(), q);
  if (r1.ec != std::errc() || r1.ptr != num.data() + num.size()) return std::nullopt;
  if (r2.ec != std::errc() || r2.ptr != den.data() + den.size() || q == 0) return std::nullopt;
  return static_cast<double>(static_cast<long double>(p) / static_cast<long double>(q));
}

}  // namespace

ExplicitDistribution parse_distribution(std::istream& in, const std::string& source_name) {
  std::vector<Atom> atoms;
  std::size_t dimension = 0;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw FormatError(source_name + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto sep = t.find_first_of(" \t");
    if (sep == std::string::npos) fail("expected '<mass><TAB><bits>'");
    const std::string mass_text = t.substr(0, sep);
    const std::string bits = trim(t.substr(sep + 1));
    const auto mass = parse_mass(mass_text);
    if (!mass) fail("cannot parse probability '" + mass_text + "'");
    if (!(*mass > 0.0)) fail("probability must be strictly positive");
    if (bits.empty() || bits.find_first_not_of("01") != std::string::npos) fail("bit string must be non-empty over {0,1}");
    if (dimension == 0) dimension = bits.size();
    if (bits.size() != dimension) {
      fail("bit string has length " + std::to_string(bits.size()) + ", expected " + std::to_string(dimension));
    }
    atoms.push_back({BitVector::from_string(bits), *mass});
  }
  if (atoms.empty()) throw FormatError(source_name + ": no distribution records");
  long double total = 0.0L;
  for (const auto& a : atoms) total += a.mass;
  if (std::fabs(static_cast<double>(total - 1.0L)) > kMassTolerance) {
    std::ostringstream msg;
    msg << source_name << ": probabilities sum to " << std::setprecision(17) << static_cast<double>(total)
        << ", expected 1 within " << kMassTolerance;
    throw FormatError(msg.str());
  }
  try {
    return ExplicitDistribution(dimension, std::move(atoms));
  } catch (const InvalidArgument& e) {
    throw FormatError(source_name + ": " + e.what());
  }
}

ExplicitDistribution read_distribution_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open distribution file " + path.string());
  return parse_distribution(in, path.string());
}

void write_distribution(std::ostream& out, const ExplicitDistribution& d) {
  const auto old_precision = out.precision(17);
  for (const auto& a : d.atoms()) out << a.mass << '\t' << a.point.to_string() << '\n';
  out.precision(old_precision);
}

void write_distribution_file(const std::filesystem::path& path, const ExplicitDistribution& d) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write distribution file " + path.string());
  out << "# dimension " << d.dimension() << ", support " << d.support_size() << '\n';
  write_distribution(out, d);
}

}  // namespace hugetest
