#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbd/consistify.hpp"
#include "cbd/couplings.hpp"
#include "cbd/detail/dense_lp.hpp"
#include "cbd/error.hpp"
#include "cbd/outcome.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

namespace cbd {

// A global assignment of one value to every content. Content i sits at bit
// (n - 1 - i) and a set bit means +1, so increasing column numbers enumerate
// assignments lexicographically in content order with -1 < +1.
using Column = std::uint64_t;

inline constexpr Column default_max_columns = Column{1} << 20;

struct LpOptions {
  Column max_columns = default_max_columns;
};

struct IncidenceRow {
  std::size_t context;
  Outcome outcome;
};

// The Boolean matrix B and bound vector r of  Bs <= r, s >= 0, 1·s <= 1.
// B is implicit: entry(row, column) is computed from the column's bits.
struct IncidenceSystem {
  std::vector<ContentId> contents;
  std::vector<ContextId> contexts;
  std::vector<std::vector<std::size_t>> context_members;  // content indices per context
  std::vector<std::size_t> row_offset;                    // first row of each context
  std::vector<IncidenceRow> rows;
  std::vector<Rational> r;

  Column columns() const { return Column{1} << contents.size(); }

  bool plus_at(Column col, std::size_t content) const {
    return (col >> (contents.size() - 1 - content)) & 1u;
  }

  // The column's assignment restricted to a context's contents.
  Outcome restriction(std::size_t context, Column col) const {
    Outcome o = 0;
    for (std::size_t q : context_members[context]) o = (o << 1) | (plus_at(col, q) ? 1u : 0u);
    return o;
  }

  std::size_t row_of(std::size_t context, Column col) const {
    return row_offset[context] + restriction(context, col);
  }

  bool entry(std::size_t row, Column col) const {
    return restriction(rows[row].context, col) == rows[row].outcome;
  }

  std::string column_label(Column col) const {
    std::string s(contents.size(), '-');
    for (std::size_t i = 0; i < contents.size(); ++i)
      if (plus_at(col, i)) s[i] = '+';
    return s;
  }
};

inline IncidenceSystem build_incidence(const System& system, const LpOptions& options = {}) {
  const std::size_t n = system.content_count();
  if (n >= 63 || (Column{1} << n) > options.max_columns)
    throw resource_error("incidence matrix needs 2^" + std::to_string(n) + " columns, limit is " +
                         std::to_string(options.max_columns));
  IncidenceSystem inc;
  inc.contents = system.contents();
  for (std::size_t c = 0; c < system.context_count(); ++c) {
    const auto& b = system.bunches()[c];
    inc.contexts.push_back(b.context);
    inc.context_members.push_back(system.members(c));
    inc.row_offset.push_back(inc.rows.size());
    for (std::size_t o = 0; o < b.joint.size(); ++o) {
      inc.rows.push_back({c, static_cast<Outcome>(o)});
      inc.r.push_back(b.joint[static_cast<Outcome>(o)]);
    }
  }
  return inc;
}

// Sparse nonnegative mass over columns, sorted by column.
struct GlobalMassVector {
  std::vector<std::pair<Column, Rational>> entries;

  Rational total() const {
    Rational t = 0;
    for (const auto& e : entries) t += e.second;
    return t;
  }

  Rational at(Column col) const {
    for (const auto& [c, v] : entries)
      if (c == col) return v;
    return 0;
  }

  friend bool operator==(const GlobalMassVector&, const GlobalMassVector&) = default;
};

// Bs, computed row by row.
inline std::vector<Rational> apply_incidence(const IncidenceSystem& inc, const GlobalMassVector& s) {
  std::vector<Rational> out(inc.rows.size());
  for (const auto& [col, mass] : s.entries)
    for (std::size_t c = 0; c < inc.contexts.size(); ++c) out[inc.row_of(c, col)] += mass;
  return out;
}

struct SimplexResult {
  Rational optimum;
  GlobalMassVector vertex;
};

namespace detail {

// Revised simplex for  max c·s  s.t.  Bs + slack = r,  1·s + slack = 1.
// Columns hitting a row with r = 0 are fixed at zero and never priced. The
// basis inverse is kept explicitly; Bland's rule picks both the entering
// variable (lowest index with positive reduced cost, structural columns
// before slacks) and the leaving one (lowest basic index among ratio ties).
class RevisedSimplex {
 public:
  template <class Objective>
  RevisedSimplex(const IncidenceSystem& inc, Objective&& objective) {
    const std::size_t contexts = inc.contexts.size();
    m_ = inc.rows.size() + 1;
    std::vector<bool> zero_row(inc.rows.size());
    for (std::size_t i = 0; i < inc.rows.size(); ++i) zero_row[i] = inc.r[i] == 0;

    std::vector<std::uint32_t> rows(contexts);
    for (Column col = 0; col < inc.columns(); ++col) {
      bool keep = true;
      for (std::size_t c = 0; c < contexts && keep; ++c) {
        rows[c] = static_cast<std::uint32_t>(inc.row_of(c, col));
        keep = !zero_row[rows[c]];
      }
      if (!keep) continue;
      columns_.push_back(col);
      column_rows_.insert(column_rows_.end(), rows.begin(), rows.end());
      cost_.push_back(objective(col));
    }
    stride_ = contexts;
    structural_ = columns_.size();

    rhs_.assign(inc.r.begin(), inc.r.end());
    rhs_.emplace_back(1);
    binv_.assign(m_, std::vector<Rational>(m_));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      binv_[i][i] = 1;
      basis_[i] = structural_ + i;
    }
  }

  SimplexResult run() {
    std::vector<Rational> y(m_), u(m_);
    for (;;) {
      duals(y);
      const std::size_t enter = price(y);
      if (enter == npos) break;
      direction(enter, u);
      const std::size_t leave = ratio_test(u);
      if (leave == npos) throw internal_error("simplex: unbounded direction in a bounded polytope");
      pivot(leave, enter, u);
    }
    SimplexResult out;
    out.optimum = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= structural_ || rhs_[i] == 0) continue;
      out.optimum += cost_[basis_[i]] * rhs_[i];
      out.vertex.entries.emplace_back(columns_[basis_[i]], rhs_[i]);
    }
    std::sort(out.vertex.entries.begin(), out.vertex.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  const Rational& cost(std::size_t var) const {
    static const Rational zero = 0;
    return var < structural_ ? cost_[var] : zero;
  }

  // y = c_B^T B^{-1}
  void duals(std::vector<Rational>& y) const {
    for (auto& v : y) v = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = cost(basis_[i]);
      if (cb == 0) continue;
      for (std::size_t k = 0; k < m_; ++k)
        if (binv_[i][k] != 0) y[k] += cb * binv_[i][k];
    }
  }

  std::size_t price(const std::vector<Rational>& y) const {
    Rational reduced;
    for (std::size_t j = 0; j < structural_; ++j) {
      reduced = cost_[j] - y[m_ - 1];
      const std::uint32_t* rows = &column_rows_[j * stride_];
      for (std::size_t c = 0; c < stride_; ++c) reduced -= y[rows[c]];
      if (reduced > 0) return j;
    }
    for (std::size_t i = 0; i < m_; ++i)
      if (y[i] < 0) return structural_ + i;
    return npos;
  }

  void direction(std::size_t var, std::vector<Rational>& u) const {
    if (var >= structural_) {
      for (std::size_t i = 0; i < m_; ++i) u[i] = binv_[i][var - structural_];
      return;
    }
    const std::uint32_t* rows = &column_rows_[var * stride_];
    for (std::size_t i = 0; i < m_; ++i) {
      u[i] = binv_[i][m_ - 1];
      for (std::size_t c = 0; c < stride_; ++c) u[i] += binv_[i][rows[c]];
    }
  }

  std::size_t ratio_test(const std::vector<Rational>& u) const {
    std::size_t leave = npos;
    Rational best, ratio;
    for (std::size_t i = 0; i < m_; ++i) {
      if (u[i] <= 0) continue;
      ratio = rhs_[i] / u[i];
      if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
        leave = i;
        best = ratio;
      }
    }
    return leave;
  }

  void pivot(std::size_t row, std::size_t var, const std::vector<Rational>& u) {
    const Rational p = u[row];
    auto& pivot_row = binv_[row];
    for (auto& v : pivot_row)
      if (v != 0) v /= p;
    rhs_[row] /= p;
    std::vector<std::size_t> nonzero;
    for (std::size_t k = 0; k < m_; ++k)
      if (pivot_row[k] != 0) nonzero.push_back(k);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || u[i] == 0) continue;
      for (std::size_t k : nonzero) binv_[i][k] -= u[i] * pivot_row[k];
      rhs_[i] -= u[i] * rhs_[row];
    }
    basis_[row] = var;
  }

  std::size_t m_ = 0;
  std::size_t stride_ = 0;
  std::size_t structural_ = 0;
  std::vector<Column> columns_;
  std::vector<std::uint32_t> column_rows_;
  std::vector<Rational> cost_;
  std::vector<Rational> rhs_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// max objective·s over {s : Bs <= r, s >= 0, 1·s <= 1}. `objective` has one
// entry per column of B.
inline SimplexResult simplex_max(std::span<const Rational> objective, const IncidenceSystem& inc) {
  if (objective.size() != inc.columns())
    throw validation_error("objective has " + std::to_string(objective.size()) + " entries, B has " +
                           std::to_string(inc.columns()) + " columns");
  return detail::RevisedSimplex(inc, [&](Column col) { return objective[col]; }).run();
}

struct FractionResult {
  Rational alpha_max;
  Rational contextual_fraction;
  bool noncontextual = false;
  bool strongly_contextual = false;
  GlobalMassVector witness;
  std::vector<ContentId> witness_contents;  // coordinates of the witness columns

  friend bool operator==(const FractionResult&, const FractionResult&) = default;
};

// Largest total mass of an identically connected sub-probability coupling,
// for a (simply) consistently connected system.
inline FractionResult noncontextual_fraction(const System& system, const LpOptions& options = {}) {
  if (!is_simply_consistently_connected(system))
    throw precondition_error("system is inconsistently connected; use the generalized fraction");
  const auto inc = build_incidence(system, options);
  auto solved = detail::RevisedSimplex(inc, [](Column) { return Rational(1); }).run();

  const auto bs = apply_incidence(inc, solved.vertex);
  for (std::size_t i = 0; i < bs.size(); ++i)
    if (bs[i] > inc.r[i]) throw internal_error("simplex witness violates Bs <= r");
  if (solved.vertex.total() != solved.optimum) throw internal_error("simplex witness mass mismatch");

  FractionResult out;
  out.alpha_max = solved.optimum;
  out.contextual_fraction = 1 - solved.optimum;
  out.noncontextual = solved.optimum == 1;
  out.strongly_contextual = solved.optimum == 0;
  out.witness = std::move(solved.vertex);
  out.witness_contents = system.contents();
  return out;
}

// The fraction of the consistified system; defined for every system.
inline FractionResult generalized_fraction(const System& system, const LpOptions& options = {}) {
  return noncontextual_fraction(consistify(system).base, options);
}

struct CbdVerdict {
  bool noncontextual = false;
  FractionResult fraction;
};

inline CbdVerdict cbd_noncontextual(const System& system, const LpOptions& options = {}) {
  CbdVerdict v;
  v.fraction = generalized_fraction(system, options);
  v.noncontextual = v.fraction.noncontextual;
  return v;
}

inline constexpr std::size_t default_oracle_relation_limit = 12;

// Looks directly for a joint pmf over all |≺| variables that reproduces every
// bunch and attains the maximal equality probability for every pair of
// content-sharing variables. Uses neither consistification nor the revised
// simplex.
inline bool cbd_feasibility_oracle(const System& system,
                                   std::size_t relation_limit = default_oracle_relation_limit) {
  const auto relation = system.relation();
  const std::size_t n = relation.size();
  if (n > relation_limit)
    throw resource_error("feasibility oracle limited to " + std::to_string(relation_limit) +
                         " variables, system has " + std::to_string(n));
  const std::size_t cells = std::size_t{1} << n;
  auto bit = [n](std::size_t assignment, std::size_t var) { return (assignment >> (n - 1 - var)) & 1u; };

  // variable index of (content q, context c)
  std::vector<std::vector<std::size_t>> var_of(system.content_count(),
                                               std::vector<std::size_t>(system.context_count()));
  std::vector<std::vector<std::size_t>> context_vars(system.context_count());
  for (std::size_t v = 0; v < n; ++v) {
    var_of[relation[v].first][relation[v].second] = v;
    context_vars[relation[v].second].push_back(v);
  }

  detail::EqualityLp lp;
  lp.variables = cells;
  lp.add_row(std::vector<Rational>(cells, Rational(1)), 1);
  for (std::size_t c = 0; c < system.context_count(); ++c) {
    const auto& b = system.bunches()[c];
    const auto& vars = context_vars[c];
    std::vector<std::vector<Rational>> rows(b.joint.size(), std::vector<Rational>(cells));
    for (std::size_t a = 0; a < cells; ++a) {
      std::size_t o = 0;
      for (std::size_t v : vars) o = (o << 1) | bit(a, v);
      rows[o][a] = 1;
    }
    for (std::size_t o = 0; o < rows.size(); ++o)
      lp.add_row(std::move(rows[o]), b.joint[static_cast<Outcome>(o)]);
  }
  for (std::size_t q = 0; q < system.content_count(); ++q) {
    const auto& where = system.measured_in(q);
    for (std::size_t i = 0; i < where.size(); ++i)
      for (std::size_t j = i + 1; j < where.size(); ++j) {
        const std::size_t ci = where[i], cj = where[j];
        const Rational pi = system.bunches()[ci].joint.plus_probability(*system.position(q, ci));
        const Rational pj = system.bunches()[cj].joint.plus_probability(*system.position(q, cj));
        const std::size_t vi = var_of[q][ci], vj = var_of[q][cj];
        // stated as Pr[unequal] = 1 - max Pr[equal], so that a maximum of 1
        // becomes a zero row
        std::vector<Rational> row(cells);
        for (std::size_t a = 0; a < cells; ++a) row[a] = bit(a, vi) != bit(a, vj) ? 1 : 0;
        lp.add_row(std::move(row), 1 - pairwise_max_equality(pi, pj));
      }
  }
  return detail::feasible_point(lp).has_value();
}

}  // namespace cbd
