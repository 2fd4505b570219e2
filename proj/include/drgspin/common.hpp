#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace drgspin {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using IMat = Eigen::MatrixXi;

inline constexpr double kDefaultTol = 1e-8;

// q^n for integer n, by repeated multiplication. Exponents in this code
// stay below ~4D+8, so this is both fast and accurate.
inline cx qpow(cx q, long n) {
  if (n < 0) return 1.0 / qpow(q, -n);
  cx r = 1.0, base = q;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

// Relative residual |x-y| / (1 + |x| + |y|).
inline double rel_residual(cx x, cx y) {
  return std::abs(x - y) / (1.0 + std::abs(x) + std::abs(y));
}

inline double rel_residual(double x, double y) {
  return std::abs(x - y) / (1.0 + std::abs(x) + std::abs(y));
}

// For identities whose sides are small differences of large terms: the
// conditioning is set by the term magnitudes, so they join the scale.
inline double rel_residual_scaled(cx x, cx y, double term_scale) {
  return std::abs(x - y) / (1.0 + std::abs(x) + std::abs(y) + term_scale);
}

// Frobenius-normalized residual between two matrices.
template <typename DerivedA, typename DerivedB>
double mat_residual(const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& y) {
  return (x - y).norm() / (1.0 + x.norm() + y.norm());
}

enum class ErrorCode {
  ParseError,
  NotConnected,
  NotDistanceRegular,
  DiameterTooSmall,
  EigCountMismatch,
  SingularP,
  NotQRacah,
  Degenerate,
  Inadmissible,
  ToleranceExceeded,
  AssumptionFails,
  ZeroSum,
  ConstancyViolation,
  EntryZero,
  UsageError,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::NotDistanceRegular: return "NotDistanceRegular";
    case ErrorCode::DiameterTooSmall: return "DiameterTooSmall";
    case ErrorCode::EigCountMismatch: return "EigCountMismatch";
    case ErrorCode::SingularP: return "SingularP";
    case ErrorCode::NotQRacah: return "NotQRacah";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::Inadmissible: return "Inadmissible";
    case ErrorCode::ToleranceExceeded: return "ToleranceExceeded";
    case ErrorCode::AssumptionFails: return "AssumptionFails";
    case ErrorCode::ZeroSum: return "ZeroSum";
    case ErrorCode::ConstancyViolation: return "ConstancyViolation";
    case ErrorCode::EntryZero: return "EntryZero";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_name(code)) + ": " + msg),
        code_(code), detail_(msg) {}
  Error(ErrorCode code, const std::string& msg, std::vector<long long> witness)
      : Error(code, msg) {
    witness_ = std::move(witness);
  }
  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }
  const std::vector<long long>& witness() const { return witness_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::vector<long long> witness_;
};

// One verification entry: either a numeric residual or a skip with reason.
struct Check {
  double value = 0.0;
  bool skipped = false;
  std::string reason;
};

// Named residuals in insertion order; names are stable dotted identifiers.
class ResidualMap {
 public:
  void set(const std::string& name, double value) {
    entries_.emplace_back(name, Check{value, false, {}});
  }
  // Keeps the larger value if the name already exists; a value always
  // supersedes a skip entry of the same name.
  void set_max(const std::string& name, double value) {
    for (auto& [n, c] : entries_)
      if (n == name) {
        if (c.skipped)
          c = Check{value, false, {}};
        else if (value > c.value)
          c.value = value;
        return;
      }
    set(name, value);
  }
  // No-op when the name already exists.
  void skip(const std::string& name, const std::string& reason) {
    for (auto& [n, c] : entries_)
      if (n == name) return;
    entries_.emplace_back(name, Check{0.0, true, reason});
  }
  void merge(const ResidualMap& other, const std::string& prefix = {}) {
    for (const auto& [n, c] : other.entries_)
      entries_.emplace_back(prefix.empty() ? n : prefix + "." + n, c);
  }
  const Check* find(const std::string& name) const {
    for (const auto& [n, c] : entries_)
      if (n == name) return &c;
    return nullptr;
  }
  double max_value() const {
    double m = 0.0;
    for (const auto& [n, c] : entries_)
      if (!c.skipped && c.value > m) m = c.value;
    return m;
  }
  bool all_below(double tol) const { return max_value() < tol; }
  const std::vector<std::pair<std::string, Check>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, Check>> entries_;
};

// SplitMix64: counter-based stream so sample t of seed s is the same
// regardless of execution order.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0,1).
  double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

inline SplitMix64 rng_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  mix.next();
  mix.next();
  return mix;
}

}  // namespace drgspin
