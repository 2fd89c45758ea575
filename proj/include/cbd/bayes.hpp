#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cbd/error.hpp"
#include "cbd/lp.hpp"
#include "cbd/outcome.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

namespace cbd {

struct ContextConstraint {
  ContextId id;
  std::vector<ContentId> contents;
  std::vector<Outcome> allowed;  // sorted, unique
};

// Deterministic systems given extensionally: for every context, the set of
// joint outcomes it may take.
class RealizationConstraints {
 public:
  RealizationConstraints() = default;
  explicit RealizationConstraints(std::vector<ContentId> contents) : contents_(std::move(contents)) {}

  const std::vector<ContentId>& contents() const { return contents_; }
  const std::vector<ContextConstraint>& contexts() const { return contexts_; }

  // Adding the same context twice keeps only outcomes allowed by both.
  void add(const ContextId& id, std::vector<ContentId> contents, std::vector<Outcome> allowed) {
    if (contents.empty()) throw validation_error("context '" + id + "' measures no content");
    if (contents.size() > max_arity)
      throw resource_error("context '" + id + "' has more than " + std::to_string(max_arity) + " contents");
    for (Outcome o : allowed)
      if (o >= outcome_count(contents.size()))
        throw validation_error("context '" + id + "': allowed outcome out of range");
    std::sort(allowed.begin(), allowed.end());
    allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
    for (auto& existing : contexts_) {
      if (existing.id != id) continue;
      if (existing.contents != contents)
        throw validation_error("context '" + id + "' constrained twice with different contents");
      std::vector<Outcome> both;
      std::set_intersection(existing.allowed.begin(), existing.allowed.end(), allowed.begin(),
                            allowed.end(), std::back_inserter(both));
      existing.allowed = std::move(both);
      return;
    }
    contexts_.push_back({id, std::move(contents), std::move(allowed)});
  }

 private:
  std::vector<ContentId> contents_;
  std::vector<ContextConstraint> contexts_;
};

struct RealizationFamily {
  std::vector<System> realizations;
  std::vector<Rational> prior;
  std::vector<ContextId> empty_contexts;  // contexts that allow nothing

  std::size_t size() const { return realizations.size(); }
  bool empty() const { return realizations.empty(); }
};

inline constexpr std::size_t default_max_realizations = std::size_t{1} << 16;

// Cartesian product of the allowed sets, in lexicographic order: the first
// context varies slowest, and each context runs through its outcomes in
// increasing order. The prior is uniform.
inline RealizationFamily enumerate_realizations(const RealizationConstraints& rc,
                                                std::size_t max_realizations = default_max_realizations) {
  RealizationFamily family;
  const auto& ctxs = rc.contexts();
  if (ctxs.empty()) throw validation_error("constraints list no contexts");
  std::size_t total = 1;
  for (const auto& c : ctxs) {
    if (c.allowed.empty()) {
      family.empty_contexts.push_back(c.id);
      continue;
    }
    if (total > max_realizations / c.allowed.size())
      throw resource_error("more than " + std::to_string(max_realizations) + " realizations");
    total *= c.allowed.size();
  }
  if (!family.empty_contexts.empty()) return family;

  std::vector<std::size_t> choice(ctxs.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<BunchDistribution> bunches;
    for (std::size_t c = 0; c < ctxs.size(); ++c) {
      BunchDistribution b{ctxs[c].id, JointPmf(ctxs[c].contents)};
      b.joint[ctxs[c].allowed[choice[c]]] = 1;
      bunches.push_back(std::move(b));
    }
    family.realizations.push_back(System::create(rc.contents(), std::move(bunches)));
    for (std::size_t c = ctxs.size(); c-- > 0;) {
      if (++choice[c] < ctxs[c].allowed.size()) break;
      choice[c] = 0;
    }
  }
  family.prior.assign(total, Rational(1, total));
  for (auto& p : family.prior) p.canonicalize();
  return family;
}

// Prior-weighted average of the realizations, context by context.
inline System epistemic_mixture(const RealizationFamily& family) {
  if (family.empty()) throw empty_family_error("no realization to mix");
  if (family.prior.size() != family.size())
    throw validation_error("prior has " + std::to_string(family.prior.size()) + " entries for " +
                           std::to_string(family.size()) + " realizations");
  Rational sum = 0;
  for (const auto& p : family.prior) {
    if (p < 0) throw validation_error("negative prior weight " + to_string(p));
    sum += p;
  }
  if (sum != 1) throw validation_error("prior sums to " + to_string(sum) + ", not 1");

  const System& first = family.realizations.front();
  std::vector<BunchDistribution> bunches;
  for (const auto& b : first.bunches()) bunches.push_back({b.context, JointPmf(b.contents())});
  for (std::size_t k = 0; k < family.size(); ++k) {
    const System& r = family.realizations[k];
    if (r.contents() != first.contents() || r.context_count() != first.context_count())
      throw validation_error("realizations do not share one format");
    for (std::size_t c = 0; c < bunches.size(); ++c) {
      const auto& b = r.bunches()[c];
      if (b.context != bunches[c].context || b.contents() != bunches[c].contents())
        throw validation_error("realizations do not share one format");
      for (std::size_t o = 0; o < b.joint.size(); ++o)
        bunches[c].joint.probabilities[o] += family.prior[k] * b.joint.probabilities[o];
    }
  }
  return System::create(first.contents(), std::move(bunches));
}

// n statements in a ring: q_i = "q_{i+1} is true" for i < n and
// q_n = "q_1 is false". Context c_i holds (q_i, q_{i+1 mod n}).
inline RealizationConstraints liar_system(std::size_t n) {
  if (n < 3) throw validation_error("liar ring needs at least 3 statements");
  std::vector<ContentId> contents;
  for (std::size_t i = 1; i <= n; ++i) contents.push_back("q" + std::to_string(i));
  RealizationConstraints rc(contents);
  const Outcome both_minus = 0b00, minus_plus = 0b01, plus_minus = 0b10, both_plus = 0b11;
  for (std::size_t i = 0; i < n; ++i) {
    const bool closing = i + 1 == n;
    rc.add("c" + std::to_string(i + 1), {contents[i], contents[(i + 1) % n]},
           closing ? std::vector<Outcome>{minus_plus, plus_minus} : std::vector<Outcome>{both_minus, both_plus});
  }
  return rc;
}

// The single overall coupling of a deterministic system: R_q^c's value for
// every (content, context) pair, context-major.
struct DeterministicVerdict {
  bool noncontextual = false;
  std::vector<std::pair<ContentOrigin, int>> coupling;
  CbdVerdict lp;
};

inline DeterministicVerdict assert_deterministic_noncontextual(const System& system,
                                                               const LpOptions& options = {}) {
  if (!is_deterministic(system)) throw precondition_error("system is not deterministic");
  DeterministicVerdict out;
  for (const auto& b : system.bunches()) {
    const Outcome o = point_outcome(b);
    for (std::size_t i = 0; i < b.arity(); ++i)
      out.coupling.push_back({{b.contents()[i], b.context}, sign_at(o, b.arity(), i)});
  }
  out.lp = cbd_noncontextual(system, options);
  out.noncontextual = out.lp.noncontextual;
  if (!out.noncontextual) throw internal_error("deterministic system reported contextual");
  // The consistified contents are the (q, c) pairs in the same order, so the
  // witness must be the one column that spells out the coupling.
  const auto& w = out.lp.fraction.witness;
  Column expected = 0;
  for (const auto& [origin, value] : out.coupling) expected = (expected << 1) | (value > 0 ? 1u : 0u);
  if (w.entries.size() != 1 || w.entries.front().first != expected || w.entries.front().second != 1)
    throw internal_error("deterministic witness is not the overall coupling");
  return out;
}

}  // namespace cbd
