#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gphl {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Error taxonomy mirrored by the CLI exit codes: domain/config errors exit 2,
// memory refusals exit 3, numerical failures exit 4.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct MemoryBudgetError : std::runtime_error {
  std::uint64_t required_bytes;
  std::uint64_t budget_bytes;
  MemoryBudgetError(const std::string& msg, std::uint64_t required, std::uint64_t budget)
      : std::runtime_error(msg), required_bytes(required), budget_bytes(budget) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr std::uint64_t kDefaultMemoryBudgetBytes = 4ull << 30;

// Budget resolution order: env GPHL_MEM_BUDGET_BYTES, then the configured
// value, then the 4 GiB default.
inline std::uint64_t memory_budget_bytes(std::uint64_t configured = kDefaultMemoryBudgetBytes) {
  if (const char* env = std::getenv("GPHL_MEM_BUDGET_BYTES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return configured;
}

inline void require_within_budget(std::uint64_t required, std::uint64_t budget,
                                  const std::string& what) {
  if (required > budget) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s requires %llu bytes, budget is %llu bytes",
                  what.c_str(), static_cast<unsigned long long>(required),
                  static_cast<unsigned long long>(budget));
    throw MemoryBudgetError(buf, required, budget);
  }
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// Shortest-round-trip style formatting used by every CSV writer so reruns are
// byte-identical.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline int ilog2(std::uint64_t v) {
  int k = 0;
  while (v > 1) {
    v >>= 1;
    ++k;
  }
  return k;
}

}  // namespace gphl
