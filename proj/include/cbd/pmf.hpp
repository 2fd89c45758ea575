#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbd/error.hpp"
#include "cbd/outcome.hpp"
#include "cbd/rational.hpp"

namespace cbd {

// A probability mass function over {-1,+1}^n, stored densely and indexed by
// Outcome. `variables` names the coordinates in outcome position order.
struct JointPmf {
  std::vector<std::string> variables;
  std::vector<Rational> probabilities;

  JointPmf() = default;

  explicit JointPmf(std::vector<std::string> vars)
      : variables(std::move(vars)), probabilities(outcome_count(variables.size())) {
    if (variables.size() > max_arity)
      throw resource_error("joint pmf over " + std::to_string(variables.size()) +
                           " variables exceeds the limit of " + std::to_string(max_arity));
  }

  std::size_t arity() const { return variables.size(); }
  std::size_t size() const { return probabilities.size(); }

  const Rational& operator[](Outcome o) const { return probabilities[o]; }
  Rational& operator[](Outcome o) { return probabilities[o]; }

  Rational total() const {
    Rational sum = 0;
    for (const auto& p : probabilities) sum += p;
    return sum;
  }

  // Nonzero entries in outcome order.
  std::vector<std::pair<Outcome, Rational>> atoms() const {
    std::vector<std::pair<Outcome, Rational>> out;
    for (std::size_t o = 0; o < probabilities.size(); ++o)
      if (probabilities[o] != 0) out.emplace_back(static_cast<Outcome>(o), probabilities[o]);
    return out;
  }

  // Pr[coordinate `pos` = +1].
  Rational plus_probability(std::size_t pos) const {
    Rational p = 0;
    for (std::size_t o = 0; o < probabilities.size(); ++o)
      if (is_plus(static_cast<Outcome>(o), arity(), pos)) p += probabilities[o];
    return p;
  }

  // Pr[coordinate i = coordinate j].
  Rational equality_probability(std::size_t i, std::size_t j) const {
    Rational p = 0;
    const auto n = arity();
    for (std::size_t o = 0; o < probabilities.size(); ++o) {
      const auto out = static_cast<Outcome>(o);
      if (is_plus(out, n, i) == is_plus(out, n, j)) p += probabilities[o];
    }
    return p;
  }

  // Pr[all coordinates in `positions` are equal].
  Rational chain_equality_probability(std::span<const std::size_t> positions) const {
    Rational p = 0;
    const auto n = arity();
    for (std::size_t o = 0; o < probabilities.size(); ++o) {
      const auto out = static_cast<Outcome>(o);
      bool all_equal = true;
      for (std::size_t pos : positions)
        all_equal = all_equal && is_plus(out, n, pos) == is_plus(out, n, positions.front());
      if (all_equal) p += probabilities[o];
    }
    return p;
  }

  // Marginal onto the given coordinate positions, in the order given.
  JointPmf marginal_positions(std::span<const std::size_t> positions) const {
    std::vector<std::string> vars;
    vars.reserve(positions.size());
    for (std::size_t pos : positions) {
      if (pos >= arity()) throw validation_error("marginal position out of range");
      vars.push_back(variables[pos]);
    }
    JointPmf out(std::move(vars));
    const auto n = arity();
    const auto k = positions.size();
    for (std::size_t o = 0; o < probabilities.size(); ++o) {
      if (probabilities[o] == 0) continue;
      Outcome target = 0;
      for (std::size_t i = 0; i < k; ++i)
        target = with_value(target, k, i, is_plus(static_cast<Outcome>(o), n, positions[i]));
      out.probabilities[target] += probabilities[o];
    }
    return out;
  }

  friend bool operator==(const JointPmf&, const JointPmf&) = default;
};

// Marginal onto named variables; every name must be present.
inline JointPmf marginal(const JointPmf& pmf, std::span<const std::string> subset) {
  std::vector<std::size_t> positions;
  positions.reserve(subset.size());
  for (const auto& name : subset) {
    std::size_t pos = 0;
    while (pos < pmf.arity() && pmf.variables[pos] != name) ++pos;
    if (pos == pmf.arity())
      throw validation_error("variable '" + name + "' is not part of the distribution");
    for (std::size_t earlier : positions)
      if (earlier == pos) throw validation_error("variable '" + name + "' requested twice");
    positions.push_back(pos);
  }
  return pmf.marginal_positions(positions);
}

}  // namespace cbd
