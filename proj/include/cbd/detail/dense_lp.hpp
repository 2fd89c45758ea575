#pragma once

// Small two-phase tableau simplex over exact rationals. It backs the brute
// force oracles only and shares no code with the revised simplex in lp.hpp.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cbd/error.hpp"
#include "cbd/rational.hpp"

namespace cbd::detail {

// A x = b, x >= 0.
struct EqualityLp {
  std::size_t variables = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;

  void add_row(std::vector<Rational> coefficients, Rational value) {
    rows.push_back(std::move(coefficients));
    rhs.push_back(std::move(value));
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> x;
};

class DenseTableau {
 public:
  // Columns [0, n) are structural, [n, n + m) artificial.
  DenseTableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs, std::size_t n)
      : m_(rows.size()), n_(n), t_(std::move(rows)), rhs_(std::move(rhs)), basis_(m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (rhs_[i] < 0) {
        for (auto& v : t_[i]) v = -v;
        rhs_[i] = -rhs_[i];
      }
      t_[i].resize(n_ + m_);
      t_[i][n_ + i] = 1;
      basis_[i] = n_ + i;
    }
  }

  // Maximizes cost·x over columns allowed to enter. Returns false if unbounded.
  bool maximize(const std::vector<Rational>& cost, bool allow_artificial) {
    std::vector<Rational> d(n_ + m_);
    for (;;) {
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        d[j] = cost[j];
        for (std::size_t i = 0; i < m_; ++i)
          if (t_[i][j] != 0) d[j] -= cost[basis_[i]] * t_[i][j];
      }
      std::size_t enter = n_ + m_;
      const std::size_t limit = allow_artificial ? n_ + m_ : n_;
      for (std::size_t j = 0; j < limit; ++j)
        if (d[j] > 0) {
          enter = j;
          break;
        }
      if (enter == n_ + m_) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = rhs_[i] / t_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  // Pivots basic artificials out wherever a structural column allows it.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (t_[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
  }

  Rational objective(const std::vector<Rational>& cost) const {
    Rational v = 0;
    for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * rhs_[i];
    return v;
  }

  std::vector<Rational> structural_values() const {
    std::vector<Rational> x(n_);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    return x;
  }

  std::size_t columns() const { return n_ + m_; }
  std::size_t structural() const { return n_; }

 private:
  void pivot(std::size_t row, std::size_t col) {
    const Rational p = t_[row][col];
    for (auto& v : t_[row]) v /= p;
    rhs_[row] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || t_[i][col] == 0) continue;
      const Rational f = t_[i][col];
      for (std::size_t j = 0; j < n_ + m_; ++j)
        if (t_[row][j] != 0) t_[i][j] -= f * t_[row][j];
      rhs_[i] -= f * rhs_[row];
    }
    basis_[row] = col;
  }

  std::size_t m_, n_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
};

// Drops variables forced to zero by a row with zero right-hand side and
// nonnegative coefficients, then rows left empty. Returns the surviving
// variable indices, or nullopt when an emptied row has nonzero right-hand side.
inline std::optional<std::vector<std::size_t>> presolve(const EqualityLp& lp,
                                                         std::vector<std::vector<Rational>>& rows,
                                                         std::vector<Rational>& rhs) {
  std::vector<bool> alive(lp.variables, true);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rhs[i] != 0) continue;
    bool nonnegative = true;
    for (const auto& a : lp.rows[i]) nonnegative = nonnegative && a >= 0;
    if (!nonnegative) continue;
    for (std::size_t j = 0; j < lp.variables; ++j)
      if (lp.rows[i][j] > 0) alive[j] = false;
  }
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < lp.variables; ++j)
    if (alive[j]) kept.push_back(j);
  rows.clear();
  rhs.clear();
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    std::vector<Rational> row;
    row.reserve(kept.size());
    bool empty = true;
    for (std::size_t j : kept) {
      row.push_back(lp.rows[i][j]);
      empty = empty && lp.rows[i][j] == 0;
    }
    if (empty) {
      if (lp.rhs[i] != 0) return std::nullopt;
      continue;
    }
    rows.push_back(std::move(row));
    rhs.push_back(lp.rhs[i]);
  }
  return kept;
}

// Optimizes objective·x (maximize or minimize) over {x : A x = b, x >= 0}.
inline LpSolution solve(const EqualityLp& lp, std::span<const Rational> objective, bool maximize) {
  LpSolution out;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  auto kept = presolve(lp, rows, rhs);
  if (!kept) return out;
  const std::size_t n = kept->size();
  const std::size_t m = rows.size();
  DenseTableau tab(std::move(rows), std::move(rhs), n);

  std::vector<Rational> phase1(n + m);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
  if (!tab.maximize(phase1, true)) throw internal_error("phase one reported unbounded");
  if (tab.objective(phase1) != 0) return out;
  tab.expel_artificials();

  std::vector<Rational> cost(n + m);
  for (std::size_t j = 0; j < n; ++j)
    cost[j] = maximize ? objective[(*kept)[j]] : Rational(-objective[(*kept)[j]]);
  if (!tab.maximize(cost, false)) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.value = maximize ? tab.objective(cost) : Rational(-tab.objective(cost));
  out.x.assign(lp.variables, Rational(0));
  const auto xs = tab.structural_values();
  for (std::size_t j = 0; j < n; ++j) out.x[(*kept)[j]] = xs[j];
  return out;
}

inline std::optional<std::vector<Rational>> feasible_point(const EqualityLp& lp) {
  std::vector<Rational> zero(lp.variables);
  auto sol = solve(lp, zero, true);
  if (sol.status != LpStatus::optimal) return std::nullopt;
  return sol.x;
}

}  // namespace cbd::detail
