#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cbd/error.hpp"
#include "cbd/outcome.hpp"
#include "cbd/pmf.hpp"
#include "cbd/rational.hpp"

namespace cbd {

using ContentId = std::string;
using ContextId = std::string;

// The joint distribution of all variables recorded in one context.
struct BunchDistribution {
  ContextId context;
  JointPmf joint;  // joint.variables are the context's contents, in declared order

  const std::vector<ContentId>& contents() const { return joint.variables; }
  std::size_t arity() const { return joint.arity(); }
  const Rational& probability(Outcome o) const { return joint[o]; }

  friend bool operator==(const BunchDistribution&, const BunchDistribution&) = default;
};

struct ConnectionMember {
  ContextId context;
  Rational p;  // Pr[R_q^c = +1]
};

// All variables sharing a content, one member per context that measures it.
struct Connection {
  ContentId content;
  std::vector<ConnectionMember> members;

  std::vector<Rational> marginals() const {
    std::vector<Rational> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.p);
    return out;
  }
};

// Unvalidated input as it comes out of a parser. Outcomes have already been
// decoded against the context's arity.
struct RawContext {
  ContextId id;
  std::vector<ContentId> contents;
  std::vector<std::pair<Outcome, Rational>> pmf;  // absent outcomes are 0
};

struct RawSystem {
  std::vector<ContentId> contents;
  std::vector<RawContext> contexts;
};

// A finite system of dichotomous random variables R_q^c. Immutable once built;
// the only way to get one is through validation.
class System {
 public:
  static System create(std::vector<ContentId> contents, std::vector<BunchDistribution> bunches);

  const std::vector<ContentId>& contents() const { return contents_; }
  const std::vector<BunchDistribution>& bunches() const { return bunches_; }
  std::size_t content_count() const { return contents_.size(); }
  std::size_t context_count() const { return bunches_.size(); }

  std::vector<ContextId> contexts() const {
    std::vector<ContextId> out;
    out.reserve(bunches_.size());
    for (const auto& b : bunches_) out.push_back(b.context);
    return out;
  }

  std::optional<std::size_t> find_content(const ContentId& q) const {
    auto it = content_pos_.find(q);
    if (it == content_pos_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find_context(const ContextId& c) const {
    auto it = context_pos_.find(c);
    if (it == context_pos_.end()) return std::nullopt;
    return it->second;
  }

  // Content indices of context c, in the bunch's declared order.
  const std::vector<std::size_t>& members(std::size_t c) const { return members_[c]; }

  // Context indices that measure content q, in context order.
  const std::vector<std::size_t>& measured_in(std::size_t q) const { return measured_in_[q]; }

  // Position of content q inside the bunch of context c, if q is measured there.
  std::optional<std::size_t> position(std::size_t q, std::size_t c) const {
    const auto& m = members_[c];
    auto it = std::find(m.begin(), m.end(), q);
    if (it == m.end()) return std::nullopt;
    return static_cast<std::size_t>(it - m.begin());
  }

  // |≺|: number of (content, context) pairs.
  std::size_t relation_size() const {
    std::size_t n = 0;
    for (const auto& m : members_) n += m.size();
    return n;
  }

  // The relation as (content index, context index) pairs, context-major.
  std::vector<std::pair<std::size_t, std::size_t>> relation() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t c = 0; c < members_.size(); ++c)
      for (std::size_t q : members_[c]) out.emplace_back(q, c);
    return out;
  }

  friend bool operator==(const System& a, const System& b) {
    return a.contents_ == b.contents_ && a.bunches_ == b.bunches_;
  }

 private:
  System() = default;

  std::vector<ContentId> contents_;
  std::vector<BunchDistribution> bunches_;
  std::unordered_map<ContentId, std::size_t> content_pos_;
  std::unordered_map<ContextId, std::size_t> context_pos_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::vector<std::size_t>> measured_in_;
};

inline System System::create(std::vector<ContentId> contents,
                             std::vector<BunchDistribution> bunches) {
  System s;
  if (bunches.empty()) throw validation_error("system has no contexts (empty relation)");
  for (std::size_t i = 0; i < contents.size(); ++i) {
    if (contents[i].empty()) throw validation_error("empty content id");
    if (!s.content_pos_.emplace(contents[i], i).second)
      throw validation_error("duplicate content id '" + contents[i] + "'");
  }
  s.measured_in_.resize(contents.size());
  for (std::size_t c = 0; c < bunches.size(); ++c) {
    const auto& b = bunches[c];
    const std::string where = "context '" + b.context + "'";
    if (b.context.empty()) throw validation_error("empty context id");
    if (!s.context_pos_.emplace(b.context, c).second)
      throw validation_error("duplicate context id '" + b.context + "'");
    if (b.contents().empty()) throw validation_error(where + " measures no content");
    if (b.joint.size() != outcome_count(b.arity()))
      throw validation_error(where + ": pmf has the wrong number of entries");
    std::vector<std::size_t> idx;
    for (const auto& q : b.contents()) {
      auto it = s.content_pos_.find(q);
      if (it == s.content_pos_.end())
        throw validation_error(where + " measures undeclared content '" + q + "'");
      if (std::find(idx.begin(), idx.end(), it->second) != idx.end())
        throw validation_error(where + " lists content '" + q + "' twice");
      idx.push_back(it->second);
      s.measured_in_[it->second].push_back(c);
    }
    Rational sum = 0;
    for (const auto& p : b.joint.probabilities) {
      if (p < 0) throw validation_error(where + ": negative probability " + to_string(p));
      sum += p;
    }
    if (sum != 1) throw validation_error(where + ": probabilities sum to " + to_string(sum) + ", not 1");
    s.members_.push_back(std::move(idx));
  }
  for (std::size_t q = 0; q < contents.size(); ++q)
    if (s.measured_in_[q].empty())
      throw validation_error("content '" + contents[q] + "' is not measured in any context");
  s.contents_ = std::move(contents);
  s.bunches_ = std::move(bunches);
  return s;
}

inline System validate_system(const RawSystem& raw) {
  std::vector<BunchDistribution> bunches;
  bunches.reserve(raw.contexts.size());
  for (const auto& ctx : raw.contexts) {
    if (ctx.contents.size() > max_arity)
      throw resource_error("context '" + ctx.id + "' has more than " + std::to_string(max_arity) +
                           " contents");
    BunchDistribution b{ctx.id, JointPmf(ctx.contents)};
    std::vector<bool> seen(b.joint.size(), false);
    for (const auto& [o, p] : ctx.pmf) {
      if (o >= b.joint.size())
        throw validation_error("context '" + ctx.id + "': outcome out of range");
      if (seen[o])
        throw validation_error("context '" + ctx.id + "': outcome '" +
                               outcome_to_string(o, b.arity()) + "' listed twice");
      seen[o] = true;
      b.joint[o] = p;
    }
    bunches.push_back(std::move(b));
  }
  return System::create(raw.contents, std::move(bunches));
}

inline const BunchDistribution& bunch(const System& system, const ContextId& c) {
  auto idx = system.find_context(c);
  if (!idx) throw validation_error("unknown context '" + c + "'");
  return system.bunches()[*idx];
}

inline JointPmf marginal(const BunchDistribution& b, std::span<const ContentId> subset) {
  return marginal(b.joint, subset);
}

inline Connection connection(const System& system, std::size_t q) {
  Connection out{system.contents()[q], {}};
  for (std::size_t c : system.measured_in(q)) {
    const auto& b = system.bunches()[c];
    out.members.push_back({b.context, b.joint.plus_probability(*system.position(q, c))});
  }
  return out;
}

inline Connection connection(const System& system, const ContentId& q) {
  auto idx = system.find_content(q);
  if (!idx) throw validation_error("unknown content '" + q + "'");
  return connection(system, *idx);
}

// Contents whose distributions disagree between two contexts.
struct ConnectednessViolation {
  std::vector<ContentId> contents;
  ContextId first;
  ContextId second;
};

struct ConnectednessReport {
  bool holds = true;
  std::vector<ConnectednessViolation> violations;
  explicit operator bool() const { return holds; }
};

inline ConnectednessReport is_simply_consistently_connected(const System& system) {
  ConnectednessReport report;
  for (std::size_t q = 0; q < system.content_count(); ++q) {
    const auto conn = connection(system, q);
    for (std::size_t i = 0; i < conn.members.size(); ++i)
      for (std::size_t j = i + 1; j < conn.members.size(); ++j)
        if (conn.members[i].p != conn.members[j].p) {
          report.holds = false;
          report.violations.push_back({{conn.content}, conn.members[i].context, conn.members[j].context});
        }
  }
  return report;
}

// Shared contents are compared in the system's content order, so the two
// marginals are aligned coordinate by coordinate.
inline ConnectednessReport is_strongly_consistently_connected(const System& system) {
  ConnectednessReport report;
  const auto& bunches = system.bunches();
  for (std::size_t a = 0; a < bunches.size(); ++a)
    for (std::size_t b = a + 1; b < bunches.size(); ++b) {
      std::vector<std::size_t> pos_a, pos_b;
      std::vector<ContentId> shared;
      for (std::size_t q = 0; q < system.content_count(); ++q) {
        auto pa = system.position(q, a);
        auto pb = system.position(q, b);
        if (pa && pb) {
          pos_a.push_back(*pa);
          pos_b.push_back(*pb);
          shared.push_back(system.contents()[q]);
        }
      }
      if (shared.empty()) continue;
      if (bunches[a].joint.marginal_positions(pos_a).probabilities !=
          bunches[b].joint.marginal_positions(pos_b).probabilities) {
        report.holds = false;
        report.violations.push_back({std::move(shared), bunches[a].context, bunches[b].context});
      }
    }
  return report;
}

inline bool is_point_mass(const JointPmf& pmf) {
  return std::count(pmf.probabilities.begin(), pmf.probabilities.end(), Rational(1)) == 1;
}

inline bool is_deterministic(const System& system) {
  return std::all_of(system.bunches().begin(), system.bunches().end(),
                     [](const BunchDistribution& b) { return is_point_mass(b.joint); });
}

// The single outcome of a point-mass bunch.
inline Outcome point_outcome(const BunchDistribution& b) {
  for (std::size_t o = 0; o < b.joint.size(); ++o)
    if (b.joint[static_cast<Outcome>(o)] == 1) return static_cast<Outcome>(o);
  throw precondition_error("bunch of context '" + b.context + "' is not a point mass");
}

}  // namespace cbd
