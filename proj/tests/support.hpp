#pragma once

// Fixtures, random generators and brute-force helpers shared by the tests.
// Nothing here calls into the LP or coupling code paths it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cbd/cbd.hpp"

namespace cbd::testing {

struct ContextSpec {
  std::string id;
  std::vector<std::string> contents;
  std::map<std::string, std::string> pmf;  // outcome string -> rational string
};

inline System make_system(std::vector<std::string> contents, const std::vector<ContextSpec>& contexts) {
  RawSystem raw{std::move(contents), {}};
  for (const auto& c : contexts) {
    RawContext rc{c.id, c.contents, {}};
    for (const auto& [o, p] : c.pmf) rc.pmf.emplace_back(parse_outcome(o, c.contents.size()), parse_rational(p));
    raw.contexts.push_back(std::move(rc));
  }
  return validate_system(raw);
}

struct Format {
  std::vector<std::string> contents;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> contexts;  // id, content indices
};

// Bunches obtained by marginalizing one global pmf over all contents.
inline System from_global(const Format& f, const JointPmf& global) {
  std::vector<BunchDistribution> bunches;
  for (const auto& [id, members] : f.contexts) bunches.push_back({id, global.marginal_positions(members)});
  return System::create(f.contents, std::move(bunches));
}

inline Rational random_probability(std::mt19937_64& rng, int max_den = 12) {
  const int den = std::uniform_int_distribution<int>(1, max_den)(rng);
  const int num = std::uniform_int_distribution<int>(0, den)(rng);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Random pmf with small integer weights, normalized exactly.
inline JointPmf random_pmf(std::mt19937_64& rng, std::vector<std::string> vars, int max_weight = 4,
                           double zero_chance = 0.3) {
  JointPmf pmf(std::move(vars));
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::bernoulli_distribution zero(zero_chance);
  std::vector<int> w(pmf.size());
  int total = 0;
  for (auto& x : w) {
    x = zero(rng) ? 0 : weight(rng);
    total += x;
  }
  if (total == 0) {
    w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)] = 1;
    total = 1;
  }
  for (std::size_t o = 0; o < w.size(); ++o) {
    pmf.probabilities[o] = Rational(w[o], total);
    pmf.probabilities[o].canonicalize();
  }
  return pmf;
}

inline std::vector<std::string> names(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Random format: up to max_contents contents, up to max_contexts contexts,
// each context a random nonempty subset. Unmeasured contents are dropped.
inline Format random_format(std::mt19937_64& rng, std::size_t max_contents, std::size_t max_contexts,
                            std::size_t max_relation = 64) {
  for (;;) {
    const std::size_t nq = std::uniform_int_distribution<std::size_t>(1, max_contents)(rng);
    const std::size_t nc = std::uniform_int_distribution<std::size_t>(1, max_contexts)(rng);
    std::vector<std::vector<std::size_t>> members(nc);
    std::vector<bool> used(nq, false);
    std::size_t relation = 0;
    for (auto& m : members) {
      while (m.empty())
        for (std::size_t q = 0; q < nq; ++q)
          if (std::bernoulli_distribution(0.5)(rng)) m.push_back(q);
      std::shuffle(m.begin(), m.end(), rng);
      for (std::size_t q : m) used[q] = true;
      relation += m.size();
    }
    if (relation > max_relation) continue;
    std::vector<std::size_t> remap(nq);
    Format f;
    for (std::size_t q = 0; q < nq; ++q)
      if (used[q]) {
        remap[q] = f.contents.size();
        f.contents.push_back("q" + std::to_string(q + 1));
      }
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<std::size_t> m;
      for (std::size_t q : members[c]) m.push_back(remap[q]);
      f.contexts.emplace_back("c" + std::to_string(c + 1), std::move(m));
    }
    return f;
  }
}

inline System random_deterministic(std::mt19937_64& rng, const Format& f) {
  std::vector<BunchDistribution> bunches;
  for (const auto& [id, members] : f.contexts) {
    std::vector<std::string> vars;
    for (std::size_t q : members) vars.push_back(f.contents[q]);
    BunchDistribution b{id, JointPmf(std::move(vars))};
    b.joint[std::uniform_int_distribution<Outcome>(0, static_cast<Outcome>(b.joint.size() - 1))(rng)] = 1;
    bunches.push_back(std::move(b));
  }
  return System::create(f.contents, std::move(bunches));
}

// Independent random bunches: generally inconsistently connected.
inline System random_system(std::mt19937_64& rng, const Format& f) {
  std::vector<BunchDistribution> bunches;
  for (const auto& [id, members] : f.contexts) {
    std::vector<std::string> vars;
    for (std::size_t q : members) vars.push_back(f.contents[q]);
    bunches.push_back({id, random_pmf(rng, std::move(vars))});
  }
  return System::create(f.contents, std::move(bunches));
}

// The rank-2 system whose two contexts force R1 = R2 and R1 = -R2 with
// uniform marginals.
inline System pr_rank2() {
  return make_system({"q1", "q2"}, {{"c1", {"q1", "q2"}, {{"++", "1/2"}, {"--", "1/2"}}},
                                    {"c2", {"q1", "q2"}, {{"+-", "1/2"}, {"-+", "1/2"}}}});
}

inline System c2_1() {
  return make_system({"q1", "q2"}, {{"c1", {"q1", "q2"}, {{"+-", "1"}}}, {"c2", {"q1", "q2"}, {{"+-", "1"}}}});
}

inline System c2_2() {
  return make_system({"q1", "q2"}, {{"c1", {"q1", "q2"}, {{"+-", "1"}}}, {"c2", {"q1", "q2"}, {{"++", "1"}}}});
}

inline Format example1_format() {
  return {{"q1", "q2", "q3", "q4"},
          {{"c1", {0, 1}}, {"c2", {1, 2, 3}}, {"c3", {0, 2}}, {"c4", {0, 3}}, {"c5", {0, 1, 2}}}};
}

// A fixed non-uniform global pmf over q1..q4 (weights 1..16 over 136).
inline JointPmf example1_global() {
  JointPmf g({"q1", "q2", "q3", "q4"});
  for (std::size_t o = 0; o < g.size(); ++o) {
    g.probabilities[o] = Rational(static_cast<long>(o + 1), 136);
    g.probabilities[o].canonicalize();
  }
  return g;
}

inline System example1() { return from_global(example1_format(), example1_global()); }

// λ·(marginals of a random global pmf) + (1-λ)·(rank-2 PR pair on c1, c2 over
// q1, q2, uniform elsewhere). Consistently connected by construction.
struct MixtureCase {
  System system;
  Rational lambda;
};

inline MixtureCase random_pr_mixture(std::mt19937_64& rng, std::size_t max_relation = 12) {
  for (;;) {
    const std::size_t nq = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    Format f;
    f.contents = names("q", nq);
    f.contexts.emplace_back("c1", std::vector<std::size_t>{0, 1});
    f.contexts.emplace_back("c2", std::vector<std::size_t>{0, 1});
    std::vector<bool> used(nq, false);
    used[0] = used[1] = true;
    const std::size_t extra = std::uniform_int_distribution<std::size_t>(nq > 2 ? 1 : 0, 2)(rng);
    for (std::size_t e = 0; e < extra; ++e) {
      std::vector<std::size_t> m;
      while (m.empty())
        for (std::size_t q = 0; q < nq; ++q)
          if (std::bernoulli_distribution(0.5)(rng)) m.push_back(q);
      for (std::size_t q : m) used[q] = true;
      f.contexts.emplace_back("c" + std::to_string(3 + e), std::move(m));
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) continue;
    std::size_t relation = 0;
    for (const auto& c : f.contexts) relation += c.second.size();
    if (relation > max_relation) continue;

    const Rational lambda(std::uniform_int_distribution<int>(0, 12)(rng), 12);
    Rational lam = lambda;
    lam.canonicalize();
    const JointPmf global = random_pmf(rng, f.contents);
    std::vector<BunchDistribution> bunches;
    for (std::size_t c = 0; c < f.contexts.size(); ++c) {
      const auto& members = f.contexts[c].second;
      JointPmf part = global.marginal_positions(members);
      JointPmf pr(part.variables);
      if (c < 2) {
        pr[c == 0 ? 0b00 : 0b01] = Rational(1, 2);
        pr[c == 0 ? 0b11 : 0b10] = Rational(1, 2);
      } else {
        for (auto& p : pr.probabilities) p = Rational(1, static_cast<long>(pr.size()));
      }
      for (std::size_t o = 0; o < part.size(); ++o) {
        part.probabilities[o] = lam * part.probabilities[o] + (1 - lam) * pr.probabilities[o];
        part.probabilities[o].canonicalize();
      }
      bunches.push_back({f.contexts[c].first, std::move(part)});
    }
    return {System::create(f.contents, std::move(bunches)), lam};
  }
}

// Two contexts over (q1, q2[, q3]) whose (q1, q2) joints share marginals but
// differ in correlation, plus an optional third context over q3.
inline System random_simply_not_strongly(std::mt19937_64& rng) {
  for (;;) {
    const Rational a = random_probability(rng), b = random_probability(rng);
    const Rational lo = a + b - 1 > 0 ? Rational(a + b - 1) : Rational(0);
    const Rational hi = a < b ? a : b;
    if (lo == hi) continue;
    // two distinct values of Pr[q1 = +, q2 = +] inside [lo, hi]
    const int steps = 12;
    const int i = std::uniform_int_distribution<int>(0, steps)(rng);
    int j = std::uniform_int_distribution<int>(0, steps)(rng);
    if (i == j) j = (i + 1) % (steps + 1);
    auto joint = [&](int k) {
      Rational t = lo + (hi - lo) * Rational(k, steps);
      t.canonicalize();
      JointPmf p({"q1", "q2"});
      p[0b11] = t;
      p[0b10] = a - t;
      p[0b01] = b - t;
      p[0b00] = 1 - a - b + t;
      for (auto& x : p.probabilities) x.canonicalize();
      return p;
    };
    const bool third = std::bernoulli_distribution(0.5)(rng);
    std::vector<std::string> contents{"q1", "q2"};
    std::vector<BunchDistribution> bunches{{"c1", joint(i)}, {"c2", joint(j)}};
    if (third) {
      contents.push_back("q3");
      // extend c1 by an independent q3 and measure q3 alone in c3 with the same marginal
      const Rational r = random_probability(rng);
      JointPmf ext({"q1", "q2", "q3"});
      for (std::size_t o = 0; o < 4; ++o) {
        ext[static_cast<Outcome>(o << 1 | 1)] = bunches[0].joint[static_cast<Outcome>(o)] * r;
        ext[static_cast<Outcome>(o << 1)] = bunches[0].joint[static_cast<Outcome>(o)] * (1 - r);
      }
      for (auto& x : ext.probabilities) x.canonicalize();
      bunches[0].joint = std::move(ext);
      JointPmf single({"q3"});
      single[1] = r;
      single[0] = 1 - r;
      bunches.push_back({"c3", std::move(single)});
    }
    return System::create(contents, std::move(bunches));
  }
}

// Brute force: does any global assignment avoid every zero-probability row?
// (α_max = 0 iff none does, since any column with positive mass must.)
inline bool some_column_avoids_zero_rows(const System& s) {
  const std::size_t n = s.content_count();
  for (std::uint64_t col = 0; col < (std::uint64_t{1} << n); ++col) {
    bool avoids = true;
    for (std::size_t c = 0; c < s.context_count() && avoids; ++c) {
      Outcome o = 0;
      for (std::size_t q : s.members(c)) o = (o << 1) | static_cast<Outcome>((col >> (n - 1 - q)) & 1u);
      avoids = s.bunches()[c].joint[o] != 0;
    }
    if (avoids) return true;
  }
  return false;
}

}  // namespace cbd::testing
