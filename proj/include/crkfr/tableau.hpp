#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace crkfr {

/// Paired explicit (A_exp, b_exp) and diagonally implicit (A_imp, b_imp)
/// Runge-Kutta tableaux sharing a stage count. Matrices are row-major s x s.
struct ButcherIMEX {
  std::string name;
  int s = 0;
  std::vector<double> A_exp;
  std::vector<double> A_imp;
  std::vector<double> b_exp;
  std::vector<double> b_imp;
  std::vector<double> c_exp;
  std::vector<double> c_imp;

  double a_exp(int i, int j) const { return A_exp[i * s + j]; }
  double a_imp(int i, int j) const { return A_imp[i * s + j]; }
};

ButcherIMEX ht112();
ButcherIMEX ssp3_imex_433();

/// Looks a tableau up by config name. Throws ConfigError for unknown names
/// and for registered names whose coefficients are not shipped.
ButcherIMEX tableau_by_name(std::string_view name);
std::vector<std::string> tableau_names();

struct TableauReport {
  bool triangular_ok = false;
  bool c_consistent = false;
  bool weights_sum_ok = false;
  bool gsa = false;
};

TableauReport validate(const ButcherIMEX& t);

/// R(z) = det(I - zA + z 1 b^T) / det(I - zA) of the implicit part. Throws
/// std::domain_error at a pole.
std::complex<double> stability_function(const ButcherIMEX& t, std::complex<double> z);

}  // namespace crkfr
