#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cbd/detail/dense_lp.hpp"
#include "cbd/error.hpp"
#include "cbd/outcome.hpp"
#include "cbd/pmf.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

namespace cbd {

struct CouplingReport {
  std::map<std::pair<std::size_t, std::size_t>, Rational> pairwise_equalities;  // i < j
  Rational chain_equality;
};

namespace detail {

inline void check_probability(const Rational& p) {
  if (p < 0 || p > 1) throw validation_error("probability " + to_string(p) + " outside [0, 1]");
}

}  // namespace detail

// Largest Pr[X = Y] over all couplings of two ±1 variables with Pr[X=+1] = p
// and Pr[Y=+1] = p2.
inline Rational pairwise_max_equality(const Rational& p, const Rational& p2) {
  detail::check_probability(p);
  detail::check_probability(p2);
  return Rational(1 - abs(Rational(p - p2)));
}

// Comonotone coupling: with U uniform on (0, 1], T_i = +1 iff U <= p_i.
// Each gap (a, b] between consecutive distinct thresholds in {0, p_i, 1}
// becomes one atom of mass b - a, so there are at most n + 1 atoms.
inline JointPmf multimaximal_coupling(const std::vector<Rational>& marginals,
                                      std::vector<std::string> labels) {
  if (marginals.empty()) throw validation_error("cannot couple an empty connection");
  if (labels.size() != marginals.size()) throw validation_error("label count mismatch");
  for (const auto& p : marginals) detail::check_probability(p);

  std::vector<Rational> thresholds = marginals;
  thresholds.emplace_back(0);
  thresholds.emplace_back(1);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  JointPmf out(std::move(labels));
  const std::size_t n = marginals.size();
  for (std::size_t t = 1; t < thresholds.size(); ++t) {
    const Rational& upper = thresholds[t];
    Outcome atom = 0;
    for (std::size_t i = 0; i < n; ++i) atom = with_value(atom, n, i, marginals[i] >= upper);
    out[atom] += upper - thresholds[t - 1];
  }
  return out;
}

inline JointPmf multimaximal_coupling(const Connection& conn) {
  std::vector<std::string> labels;
  for (const auto& m : conn.members) labels.push_back(m.context);
  return multimaximal_coupling(conn.marginals(), std::move(labels));
}

inline Rational max_chain_equality(const std::vector<Rational>& marginals) {
  if (marginals.empty()) throw validation_error("empty connection");
  for (const auto& p : marginals) detail::check_probability(p);
  const auto [lo, hi] = std::minmax_element(marginals.begin(), marginals.end());
  return Rational(*lo + (1 - *hi));
}

inline Rational max_chain_equality(const Connection& conn) {
  return max_chain_equality(conn.marginals());
}

inline CouplingReport coupling_report(const JointPmf& joint) {
  CouplingReport report;
  const std::size_t n = joint.arity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      report.pairwise_equalities[{i, j}] = joint.equality_probability(i, j);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  report.chain_equality = joint.chain_equality_probability(all);
  return report;
}

// True iff `joint` reproduces every member's marginal and attains the maximal
// equality probability for every pair of members.
inline bool verify_multimaximal(const JointPmf& joint, const Connection& conn) {
  const std::size_t n = conn.members.size();
  if (joint.arity() != n)
    throw validation_error("coupling has " + std::to_string(joint.arity()) + " variables, connection has " +
                           std::to_string(n));
  if (joint.total() != 1) return false;
  for (const auto& p : joint.probabilities)
    if (p < 0) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (joint.plus_probability(i) != conn.members[i].p) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (joint.equality_probability(i, j) != pairwise_max_equality(conn.members[i].p, conn.members[j].p))
        return false;
  return true;
}

// Brute force: describes every pmf on {-1,+1}^n with the connection's
// marginals and all pairwise maxima as a polytope, then minimizes and
// maximizes each coordinate. The polytope must collapse to a single point.
inline JointPmf oracle_unique_multimaximal(const Connection& conn) {
  const std::size_t n = conn.members.size();
  if (n == 0) throw validation_error("cannot couple an empty connection");
  if (n > 4) throw resource_error("coupling oracle supports at most 4 variables");
  for (const auto& m : conn.members) detail::check_probability(m.p);

  const std::size_t cells = outcome_count(n);
  detail::EqualityLp lp;
  lp.variables = cells;
  lp.add_row(std::vector<Rational>(cells, Rational(1)), 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> row(cells);
    for (std::size_t o = 0; o < cells; ++o) row[o] = is_plus(static_cast<Outcome>(o), n, i) ? 1 : 0;
    lp.add_row(std::move(row), conn.members[i].p);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<Rational> row(cells);
      for (std::size_t o = 0; o < cells; ++o) {
        const auto out = static_cast<Outcome>(o);
        row[o] = is_plus(out, n, i) == is_plus(out, n, j) ? 1 : 0;
      }
      lp.add_row(std::move(row), pairwise_max_equality(conn.members[i].p, conn.members[j].p));
    }

  std::vector<std::string> labels;
  for (const auto& m : conn.members) labels.push_back(m.context);
  JointPmf out(std::move(labels));
  for (std::size_t k = 0; k < cells; ++k) {
    std::vector<Rational> objective(cells);
    objective[k] = 1;
    const auto hi = detail::solve(lp, objective, true);
    const auto lo = detail::solve(lp, objective, false);
    if (hi.status != detail::LpStatus::optimal || lo.status != detail::LpStatus::optimal)
      throw internal_error("coupling oracle found no multimaximal coupling");
    if (hi.value != lo.value)
      throw internal_error("coupling oracle found more than one multimaximal coupling");
    out[static_cast<Outcome>(k)] = hi.value;
  }
  return out;
}

}  // namespace cbd
