/**
 * @file coreset/common.hpp
 * @brief Shared small utilities: scan budgets, checked powers, digit helpers, FNV-1a digests.
 * @copyright Apache License 2.0
 */
#ifndef CORESET_COMMON_HPP
#define CORESET_COMMON_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coreset {

inline constexpr std::string_view kVersion = "0.1.0";

/// Default ceiling for exhaustive scans, counted in field-element visits.
inline constexpr std::uint64_t kDefaultScanBudget = 1ull << 22;

/// Thrown when an exhaustive operation would exceed its scan budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// q^e if it fits below `cap`, otherwise nullopt.  Never overflows.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t q, std::uint64_t e,
                                                std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (q != 0 && r > cap / q) return std::nullopt;
    r *= q;
    if (r > cap) return std::nullopt;
  }
  return r;
}

/// q^e with a budget check; throws BudgetError when the scan would be too large.
inline std::uint64_t scan_size_or_throw(std::uint64_t q, std::uint64_t e,
                                        std::uint64_t budget, std::string_view what) {
  auto r = checked_pow(q, e, budget);
  if (!r) {
    throw BudgetError(std::string(what) + ": scan of " + std::to_string(q) + "^" +
                      std::to_string(e) + " elements exceeds budget " +
                      std::to_string(budget));
  }
  return *r;
}

/// Base-q digits of `index`, little-endian, fixed width.
inline std::vector<std::uint32_t> base_q_digits(std::uint64_t index, std::uint32_t q,
                                                std::size_t width) {
  std::vector<std::uint32_t> d(width, 0);
  for (std::size_t i = 0; i < width; ++i) {
    d[i] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  return d;
}

/// FNV-1a 64-bit digest of a byte string; used for run manifests, not security.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace coreset

#endif  // CORESET_COMMON_HPP
