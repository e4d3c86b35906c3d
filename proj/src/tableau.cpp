#include "crkfr/tableau.hpp"

#include <cmath>
#include <stdexcept>

#include "crkfr/state.hpp"

namespace crkfr {

namespace {

void fill_nodes(ButcherIMEX& t) {
  t.c_exp.assign(t.s, 0.0);
  t.c_imp.assign(t.s, 0.0);
  for (int i = 0; i < t.s; ++i)
    for (int j = 0; j < t.s; ++j) {
      t.c_exp[i] += t.a_exp(i, j);
      t.c_imp[i] += t.a_imp(i, j);
    }
}

using cplx = std::complex<double>;

cplx determinant(std::vector<cplx> m, int n) {
  cplx det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (std::abs(m[piv * n + col]) == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
      det = -det;
    }
    det *= m[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const cplx f = m[r * n + col] / m[col * n + col];
      for (int c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return det;
}

}  // namespace

ButcherIMEX ht112() {
  ButcherIMEX t;
  t.name = "ht112";
  t.s = 2;
  t.A_exp = {0.0, 0.0,
             1.0, 0.0};
  t.A_imp = {0.0, 0.0,
             0.5, 0.5};
  t.b_exp = {0.5, 0.5};
  t.b_imp = {0.5, 0.5};
  fill_nodes(t);
  return t;
}

ButcherIMEX ssp3_imex_433() {
  constexpr double alpha = 0.241694260788;
  constexpr double beta = 0.0604235651970;
  constexpr double eta = 0.12915286960590;
  ButcherIMEX t;
  t.name = "ssp3_imex_433";
  t.s = 4;
  t.A_exp = {0.0, 0.0,  0.0,  0.0,
             0.0, 0.0,  0.0,  0.0,
             0.0, 1.0,  0.0,  0.0,
             0.0, 0.25, 0.25, 0.0};
  t.A_imp = {alpha,  0.0,           0.0,                         0.0,
             -alpha, alpha,         0.0,                         0.0,
             0.0,    1.0 - alpha,   alpha,                       0.0,
             beta,   eta,           0.5 - beta - eta - alpha,    alpha};
  t.b_exp = {0.0, 1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
  t.b_imp = t.b_exp;
  fill_nodes(t);
  return t;
}

std::vector<std::string> tableau_names() { return {"ht112", "ssp3_imex_433", "agsa342"}; }

ButcherIMEX tableau_by_name(std::string_view name) {
  if (name == "ht112") return ht112();
  if (name == "ssp3_imex_433") return ssp3_imex_433();
  if (name == "agsa342") throw ConfigError("agsa342 unavailable: coefficients in external reference");
  throw ConfigError("unknown time scheme '" + std::string(name) + "'");
}

TableauReport validate(const ButcherIMEX& t) {
  constexpr double tol = 1e-14;
  TableauReport r;
  const int s = t.s;
  r.triangular_ok = true;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      if (j >= i && t.a_exp(i, j) != 0.0) r.triangular_ok = false;
      if (j > i && t.a_imp(i, j) != 0.0) r.triangular_ok = false;
    }
  r.c_consistent = true;
  for (int i = 0; i < s; ++i) {
    double ce = 0.0, ci = 0.0;
    for (int j = 0; j < s; ++j) {
      ce += t.a_exp(i, j);
      ci += t.a_imp(i, j);
    }
    if (std::abs(ce - t.c_exp[i]) > tol || std::abs(ci - t.c_imp[i]) > tol) r.c_consistent = false;
  }
  double se = 0.0, si = 0.0;
  for (int j = 0; j < s; ++j) {
    se += t.b_exp[j];
    si += t.b_imp[j];
  }
  r.weights_sum_ok = std::abs(se - 1.0) <= tol && std::abs(si - 1.0) <= tol;
  r.gsa = true;
  for (int j = 0; j < s; ++j)
    if (std::abs(t.a_exp(s - 1, j) - t.b_exp[j]) > tol || std::abs(t.a_imp(s - 1, j) - t.b_imp[j]) > tol)
      r.gsa = false;
  return r;
}

std::complex<double> stability_function(const ButcherIMEX& t, std::complex<double> z) {
  const int s = t.s;
  std::vector<cplx> num(s * s), den(s * s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const double id = i == j ? 1.0 : 0.0;
      den[i * s + j] = id - z * t.a_imp(i, j);
      num[i * s + j] = den[i * s + j] + z * t.b_imp[j];
    }
  const cplx d = determinant(den, s);
  if (std::abs(d) == 0.0) throw std::domain_error("stability function pole");
  return determinant(num, s) / d;
}

}  // namespace crkfr
