#pragma once

#include <cstddef>
#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cbd/couplings.hpp"
#include "cbd/error.hpp"
#include "cbd/system.hpp"

namespace cbd {

enum class ContextKind { old_context, old_content };

inline const char* to_string(ContextKind kind) {
  return kind == ContextKind::old_context ? "context" : "content";
}

// Where a new content q_j^i came from: the old variable R_j^i.
struct ContentOrigin {
  ContentId content;
  ContextId context;
  friend bool operator==(const ContentOrigin&, const ContentOrigin&) = default;
};

struct ContextOrigin {
  ContextKind kind;
  std::string old_id;  // the old context or old content it stands for
  friend bool operator==(const ContextOrigin&, const ContextOrigin&) = default;
};

// R‡ together with the provenance of every new content and context. The
// vectors are aligned with base.contents() and base.bunches().
struct ConsistifiedSystem {
  System base;
  std::vector<ContentOrigin> origin;
  std::vector<ContextOrigin> context_origin;
};

inline std::string new_content_id(const ContentId& q, const ContextId& c) { return q + "@" + c; }
inline std::string old_context_tag(const ContextId& c) { return "ctx:" + c; }
inline std::string old_content_tag(const ContentId& q) { return "cnt:" + q; }

// New contents: one per (q, c) pair, context-major. New contexts: the old
// contexts with their bunches unchanged, then one per old content whose bunch
// is the multimaximal coupling of that content's connection.
inline ConsistifiedSystem consistify(const System& system) {
  const auto& old_bunches = system.bunches();
  std::vector<ContentId> contents;
  std::vector<ContentOrigin> origin;
  for (std::size_t c = 0; c < old_bunches.size(); ++c)
    for (std::size_t q : system.members(c)) {
      contents.push_back(new_content_id(system.contents()[q], old_bunches[c].context));
      origin.push_back({system.contents()[q], old_bunches[c].context});
    }

  std::vector<BunchDistribution> bunches;
  std::vector<ContextOrigin> context_origin;
  for (const auto& b : old_bunches) {
    BunchDistribution nb{old_context_tag(b.context), b.joint};
    for (auto& v : nb.joint.variables) v = new_content_id(v, b.context);
    bunches.push_back(std::move(nb));
    context_origin.push_back({ContextKind::old_context, b.context});
  }
  for (std::size_t q = 0; q < system.content_count(); ++q) {
    const auto conn = connection(system, q);
    std::vector<std::string> vars;
    for (const auto& m : conn.members) vars.push_back(new_content_id(conn.content, m.context));
    bunches.push_back({old_content_tag(conn.content), multimaximal_coupling(conn.marginals(), std::move(vars))});
    context_origin.push_back({ContextKind::old_content, conn.content});
  }
  return {System::create(std::move(contents), std::move(bunches)), std::move(origin),
          std::move(context_origin)};
}

struct ConsistificationCheck {
  bool context_bunches_disjoint = true;   // property 1
  bool content_bunches_disjoint = true;   // property 2
  bool cross_overlap_at_most_one = true;  // property 3
  bool connections_are_equal_pairs = true;  // property 4
  std::vector<std::string> problems;

  bool ok() const {
    return context_bunches_disjoint && content_bunches_disjoint && cross_overlap_at_most_one &&
           connections_are_equal_pairs;
  }
};

inline ConsistificationCheck check_consistified_properties(const ConsistifiedSystem& cs) {
  ConsistificationCheck out;
  const auto& sys = cs.base;
  if (cs.context_origin.size() != sys.context_count() || cs.origin.size() != sys.content_count()) {
    out.connections_are_equal_pairs = false;
    out.problems.push_back("provenance tables do not match the system");
    return out;
  }
  for (std::size_t a = 0; a < sys.context_count(); ++a)
    for (std::size_t b = a + 1; b < sys.context_count(); ++b) {
      const auto& ma = sys.members(a);
      const auto& mb = sys.members(b);
      std::size_t shared = 0;
      for (std::size_t q : ma) shared += std::count(mb.begin(), mb.end(), q);
      const auto ka = cs.context_origin[a].kind;
      const auto kb = cs.context_origin[b].kind;
      const std::string pair = "'" + sys.bunches()[a].context + "' and '" + sys.bunches()[b].context + "'";
      if (ka == kb && shared > 0) {
        (ka == ContextKind::old_context ? out.context_bunches_disjoint : out.content_bunches_disjoint) = false;
        out.problems.push_back("bunches " + pair + " share contents");
      } else if (ka != kb && shared > 1) {
        out.cross_overlap_at_most_one = false;
        out.problems.push_back("bunches " + pair + " share more than one content");
      }
    }
  for (std::size_t q = 0; q < sys.content_count(); ++q) {
    const auto conn = connection(sys, q);
    const auto& where = sys.measured_in(q);
    const bool two_kinds = where.size() == 2 && cs.context_origin[where[0]].kind != cs.context_origin[where[1]].kind;
    if (!two_kinds || conn.members[0].p != conn.members[1].p) {
      out.connections_are_equal_pairs = false;
      out.problems.push_back("connection of '" + conn.content + "' is not a pair of equally distributed variables");
    }
  }
  return out;
}

}  // namespace cbd
