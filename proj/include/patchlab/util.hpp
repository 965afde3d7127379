#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace patchlab {

// Error taxonomy shared by all modules.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

class SingularEvaluation : public std::domain_error {
 public:
  explicit SingularEvaluation(const std::string& what) : std::domain_error(what) {}
};

class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// Shortest decimal representation that round-trips through binary64.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double sq(double x) { return x * x; }

// Map [0,1] to [0,1] with two continuous derivatives vanishing at both ends.
inline double smoothstep5(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

inline double smoothstep5_d(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return u * u * (30.0 + u * (-60.0 + 30.0 * u));
}

// Chunked parallel map over [0, n). Order of writes is the caller's business;
// chunks are contiguous so results are deterministic for pure bodies.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                         unsigned max_threads = 0) {
  unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
  if (hw < 2 || n < 64) {
    body(0, n);
    return;
  }
  unsigned nthreads = std::min<std::size_t>(hw, (n + 63) / 64);
  std::vector<std::thread> pool;
  std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (unsigned k = 0; k < nthreads; ++k) {
    std::size_t lo = k * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace patchlab
