#include "lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vending::detail {

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  std::size_t m = 0, n = 0;  // n includes artificials
  std::vector<double> t;     // (m + 1) x (n + 1); last row is the objective
  std::vector<std::size_t> basis;

  double& at(std::size_t r, std::size_t c) { return t[r * (n + 1) + c]; }
  double rhs(std::size_t r) const { return t[r * (n + 1) + n]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double pv = at(pr, pc);
    for (std::size_t c = 0; c <= n; ++c) at(pr, c) /= pv;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n; ++c) at(r, c) -= f * at(pr, c);
    }
    basis[pr] = pc;
  }

  // Runs simplex iterations on columns [0, allowed). Returns false if
  // unbounded.
  bool optimize(std::size_t allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      std::size_t enter = n;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (at(m, c) < -kPivotTol) {
          enter = c;
          break;
        }
      }
      if (enter == n) return true;
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r) {
        const double v = at(r, enter);
        if (v <= kPivotTol) continue;
        const double ratio = rhs(r) / v;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && leave < m && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("lp_minimize: iteration limit");
  }
};

}  // namespace

LpResult lp_minimize(std::vector<std::vector<double>> a, std::vector<double> b,
                     const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t nv = c.size();
  for (std::size_t r = 0; r < m; ++r) {
    if (a[r].size() != nv) throw std::invalid_argument("lp_minimize: ragged constraint matrix");
    if (b[r] < 0.0) {
      b[r] = -b[r];
      for (double& v : a[r]) v = -v;
    }
  }
  Tableau tab;
  tab.m = m;
  tab.n = nv + m;
  tab.t.assign((m + 1) * (tab.n + 1), 0.0);
  tab.basis.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < nv; ++j) tab.at(r, j) = a[r][j];
    tab.at(r, nv + r) = 1.0;
    tab.at(r, tab.n) = b[r];
    tab.basis[r] = nv + r;
  }
  // Phase I objective: sum of artificials, expressed in nonbasic terms.
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j <= tab.n; ++j)
      if (j < nv || j == tab.n) tab.at(m, j) -= tab.at(r, j);
  tab.optimize(tab.n);
  LpResult res;
  if (-tab.at(m, tab.n) > 1e-9) return res;

  // Drive remaining artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] < nv) continue;
    for (std::size_t j = 0; j < nv; ++j) {
      if (std::abs(tab.at(r, j)) > kPivotTol) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  // Phase II objective row.
  for (std::size_t j = 0; j <= tab.n; ++j) tab.at(m, j) = j < nv ? c[j] : 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t bc = tab.basis[r];
    const double cb = bc < nv ? c[bc] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= tab.n; ++j) tab.at(m, j) -= cb * tab.at(r, j);
  }
  if (!tab.optimize(nv)) throw std::runtime_error("lp_minimize: unbounded");

  res.feasible = true;
  res.x.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (tab.basis[r] < nv) res.x[tab.basis[r]] = tab.rhs(r);
  res.value = 0.0;
  for (std::size_t j = 0; j < nv; ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace vending::detail
