#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace ptk {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;

// Thrown when inputs violate a documented precondition or schema rule.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot proceed (vanishing denominator,
// infeasible packing, solver breakdown).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mt19937_64 plus the 53-bit mantissa mapping; both are pinned by the
// standard, so seeded streams are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  cplx in_disk(cplx center, double radius) {
    const double r = radius * std::sqrt(uniform());
    const double th = 2.0 * kPi * uniform();
    return center + std::polar(r, th);
  }

  // Area-uniform over the annulus r_in <= |x - center| <= r_out.
  cplx in_annulus(cplx center, double r_in, double r_out) {
    const double u = uniform();
    const double r = std::sqrt(r_in * r_in + u * (r_out * r_out - r_in * r_in));
    const double th = 2.0 * kPi * uniform();
    return center + std::polar(r, th);
  }

  cplx on_ring(cplx center, double r_lo, double r_hi) {
    const double r = uniform(r_lo, r_hi);
    const double th = 2.0 * kPi * uniform();
    return center + std::polar(r, th);
  }

 private:
  std::mt19937_64 gen_;
};

// Shortest text that round-trips binary64.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ptk
