#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crkfr {

/// Largest number of conserved variables among the shipped systems.
inline constexpr int kMaxVars = 6;

/// Point state. Entries past a system's n_vars are kept at zero.
using State = std::array<double, kMaxVars>;
using Jacobian = std::array<State, kMaxVars>;

inline State zero_state() { return State{}; }

inline State operator+(const State& a, const State& b) {
  State r;
  for (int i = 0; i < kMaxVars; ++i) r[i] = a[i] + b[i];
  return r;
}

inline State operator-(const State& a, const State& b) {
  State r;
  for (int i = 0; i < kMaxVars; ++i) r[i] = a[i] - b[i];
  return r;
}

inline State operator*(double s, const State& a) {
  State r;
  for (int i = 0; i < kMaxVars; ++i) r[i] = s * a[i];
  return r;
}

inline State& operator+=(State& a, const State& b) {
  for (int i = 0; i < kMaxVars; ++i) a[i] += b[i];
  return a;
}

inline double max_abs(const State& a) {
  double m = 0.0;
  for (double v : a) m = std::fmax(m, std::abs(v));
  return m;
}

inline bool all_finite(const State& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

/// theta * a + (1 - theta) * b
inline State convex(double theta, const State& a, const State& b) {
  State r;
  for (int i = 0; i < kMaxVars; ++i) r[i] = theta * a[i] + (1.0 - theta) * b[i];
  return r;
}

// Error types. The CLI maps SolverError to exit code 2 and ConfigError to 1.

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AdmissibilityError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Implicit source solve failed at a given element and solution point.
class StageSolveError : public SolverError {
 public:
  StageSolveError(const std::string& what, int element = -1, int point = -1, double residual = NAN)
      : SolverError(what), element_(element), point_(point), residual_(residual) {}
  int element() const { return element_; }
  int point() const { return point_; }
  double residual() const { return residual_; }

 private:
  int element_;
  int point_;
  double residual_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crkfr
