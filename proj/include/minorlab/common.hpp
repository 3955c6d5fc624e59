#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace minorlab {

using Element = std::uint8_t;
using Table = std::vector<Element>;

/// Failure categories surfaced by the library.  The CLI maps these to
/// process exit codes; library users can switch on `kind()`.
enum class ErrorKind {
  InvalidInput,     // malformed values, arity/shape violations, parse errors
  DomainMismatch,   // operations over different domains were combined
  BudgetExceeded,   // a search exceeded its node budget
  CapExceeded,      // an enumeration exceeded its configured cap
  ConstantFunction, // operation requested is undefined for constants
  Internal,         // a verified identity failed: implementation bug
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) raise(kind, what);
}

/// Iterates over the set bits of `mask`, calling `fn` with 0-based positions.
template <typename Fn>
void for_each_bit(std::uint32_t mask, Fn&& fn) {
  while (mask != 0) {
    fn(static_cast<std::uint32_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
}

/// Deterministic seed derivation (splitmix64), so that per-item streams do
/// not depend on scheduling order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt = 0) {
  return std::mt19937_64(mix_seed(seed, salt));
}

/// Runs fn(i) for i in [0, n).  Work items write to disjoint slots, so the
/// result is identical for every thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned count = std::min<std::size_t>(threads, n);
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

} // namespace minorlab
