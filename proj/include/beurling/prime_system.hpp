#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beurling/error.hpp"

namespace beurling {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Where a prime system came from. `detail` holds the recipe description or
/// the file path; `seed` is set for random recipes.
struct Provenance {
  enum class Kind { catalog, file, random };
  Kind kind = Kind::catalog;
  std::string detail;
  std::optional<std::uint64_t> seed;
};

/// A nondecreasing sequence of generalized primes, all > 1.
///
/// The stored sequence is a prefix of a conceptually infinite one.
/// `complete_below()` is the value below which every prime of the system is
/// stored; it is +inf for finite systems (single prime, explicit lists).
class PrimeSystem {
 public:
  PrimeSystem() = default;

  PrimeSystem(std::vector<double> primes, std::string label, Provenance source = {},
              double complete_below = kInfinity)
      : primes_(std::move(primes)),
        label_(std::move(label)),
        source_(std::move(source)),
        complete_below_(complete_below) {
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const double p = primes_[i];
      if (!std::isfinite(p) || !(p > 1.0))
        throw InputError("prime at index " + std::to_string(i) + " is not a finite value > 1");
      if (i > 0 && p < primes_[i - 1])
        throw InputError("primes out of order at index " + std::to_string(i));
    }
    if (!(complete_below_ > 1.0))
      throw InputError("coverage bound must exceed 1");
    log_primes_.reserve(primes_.size());
    for (double p : primes_) log_primes_.push_back(std::log(p));
  }

  std::span<const double> primes() const { return primes_; }
  std::span<const double> log_primes() const { return log_primes_; }
  std::size_t size() const { return primes_.size(); }
  bool empty() const { return primes_.empty(); }
  const std::string& label() const { return label_; }
  const Provenance& source() const { return source_; }
  double complete_below() const { return complete_below_; }
  bool is_finite_system() const { return std::isinf(complete_below_); }

  /// Throws unless every prime below `x` is stored.
  void require_coverage(double x) const {
    if (x > complete_below_)
      throw ComputeError("cutoff " + std::to_string(x) + " exceeds stored prime prefix (complete below " +
                         std::to_string(complete_below_) + ")");
  }

 private:
  std::vector<double> primes_;
  std::vector<double> log_primes_;
  std::string label_ = "empty";
  Provenance source_;
  double complete_below_ = kInfinity;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses the prime-list format: one decimal literal per line, '#' comments,
/// blank lines ignored. The comment directive `# complete-below: X` records
/// the coverage bound; without it the list is taken as a finite system.
inline PrimeSystem parse_prime_list(std::istream& in, std::string label, Provenance source = {}) {
  constexpr std::string_view kDirective = "complete-below:";
  std::vector<double> primes;
  double complete_below = kInfinity;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string_view body = detail::trim(text.substr(1));
      if (body.starts_with(kDirective)) {
        const auto v = detail::parse_double(body.substr(kDirective.size()));
        if (!v || !(*v > 1.0))
          throw InputError("line " + std::to_string(line_no) + ": malformed complete-below directive");
        complete_below = *v;
      }
      continue;
    }
    const auto v = detail::parse_double(text);
    if (!v) throw InputError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(text) + "'");
    if (!std::isfinite(*v) || !(*v > 1.0))
      throw InputError("line " + std::to_string(line_no) + ": prime value must be > 1");
    if (!primes.empty() && *v < primes.back())
      throw InputError("line " + std::to_string(line_no) + ": primes out of order at index " +
                       std::to_string(primes.size()));
    primes.push_back(*v);
  }
  return PrimeSystem(std::move(primes), std::move(label), std::move(source), complete_below);
}

inline PrimeSystem load_prime_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open prime file '" + path + "'");
  std::string label = path;
  if (const auto slash = label.find_last_of('/'); slash != std::string::npos) label = label.substr(slash + 1);
  return parse_prime_list(in, label, Provenance{Provenance::Kind::file, path, std::nullopt});
}

/// Writes `system` in the prime-list format. Values use 17 significant
/// digits so the round trip through parse_prime_list is exact.
inline void write_prime_list(std::ostream& out, const PrimeSystem& system) {
  out << "# " << system.label() << '\n';
  char buf[64];
  if (!system.is_finite_system()) {
    std::snprintf(buf, sizeof buf, "%.17g", system.complete_below());
    out << "# complete-below: " << buf << '\n';
  }
  for (double p : system.primes()) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << buf << '\n';
  }
}

}  // namespace beurling
