#pragma once

// JSON system files, constraint files and reports.
//
// System file:
//   {"contents": ["q1", "q2"],
//    "contexts": [{"id": "c1", "contents": ["q1", "q2"],
//                  "pmf": {"++": "1/2", "--": "1/2"}}, ...]}
// Outcome keys use '+' for +1 and '-' for -1, aligned with the context's
// contents. Probabilities are strings "a/b" or integers; missing outcomes
// are 0. A constraint file replaces "pmf" by "allowed": ["++", "--"] and may
// carry "prior": "uniform" or an array of rationals, one per realization.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cbd/bayes.hpp"
#include "cbd/consistify.hpp"
#include "cbd/couplings.hpp"
#include "cbd/error.hpp"
#include "cbd/lp.hpp"
#include "cbd/system.hpp"
#include "json.hpp"

namespace cbd::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw validation_error((path.empty() ? std::string("/") : path) + ": " + what);
}

inline const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing \"" + key + "\"");
  return *it;
}

inline std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

inline std::vector<std::string> strings_at(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(string_at(v[i], path + "/" + std::to_string(i)));
  return out;
}

inline Rational rational_at(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return Rational(v.dump());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const validation_error& e) {
    fail(path, e.what());
  }
  fail(path, "expected a rational string such as \"1/2\"");
}

inline Outcome outcome_at(const std::string& text, std::size_t arity, const std::string& path) {
  try {
    return parse_outcome(text, arity);
  } catch (const validation_error& e) {
    fail(path, e.what());
  }
}

// JSON pointer escaping for keys such as "+-".
inline std::string key_path(const std::string& base, const std::string& key) {
  std::string k;
  for (char ch : key) {
    if (ch == '~') k += "~0";
    else if (ch == '/') k += "~1";
    else k += ch;
  }
  return base + "/" + k;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

// Parses JSON text; syntax errors are reported with line and column.
inline json parse_json_text(const std::string& text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw validation_error(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                           ": JSON syntax error");
  }
}

// "-" reads standard input.
inline std::string read_text_file(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error(path + ": cannot open file");
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error(path + ": cannot write file");
  out << text;
}

inline RawSystem raw_system_from_json(const json& doc) {
  RawSystem raw;
  raw.contents = detail::strings_at(detail::member(doc, "contents", ""), "/contents");
  const json& ctxs = detail::member(doc, "contexts", "");
  if (!ctxs.is_array()) detail::fail("/contexts", "expected an array");
  for (std::size_t i = 0; i < ctxs.size(); ++i) {
    const std::string path = "/contexts/" + std::to_string(i);
    RawContext ctx;
    ctx.id = detail::string_at(detail::member(ctxs[i], "id", path), path + "/id");
    ctx.contents = detail::strings_at(detail::member(ctxs[i], "contents", path), path + "/contents");
    if (ctxs[i].contains("allowed"))
      detail::fail(path, "\"allowed\" belongs in constraint files; a system needs \"pmf\"");
    const json& pmf = detail::member(ctxs[i], "pmf", path);
    if (!pmf.is_object()) detail::fail(path + "/pmf", "expected an object");
    if (ctx.contents.size() > max_arity) detail::fail(path + "/contents", "too many contents");
    for (const auto& [key, value] : pmf.items()) {
      const std::string vpath = detail::key_path(path + "/pmf", key);
      ctx.pmf.emplace_back(detail::outcome_at(key, ctx.contents.size(), vpath), detail::rational_at(value, vpath));
    }
    raw.contexts.push_back(std::move(ctx));
  }
  return raw;
}

inline System system_from_json(const json& doc) {
  const RawSystem raw = raw_system_from_json(doc);
  try {
    return validate_system(raw);
  } catch (const validation_error& e) {
    throw validation_error(std::string("/: ") + e.what());
  }
}

inline System read_system_file(const std::string& path) {
  const json doc = parse_json_text(read_text_file(path), path);
  try {
    return system_from_json(doc);
  } catch (const validation_error& e) {
    throw validation_error(path + ":" + e.what());
  }
}

struct ConstraintFile {
  RealizationConstraints constraints;
  std::optional<std::vector<Rational>> prior;  // nullopt: uniform
};

inline ConstraintFile constraints_from_json(const json& doc) {
  ConstraintFile out;
  out.constraints = RealizationConstraints(detail::strings_at(detail::member(doc, "contents", ""), "/contents"));
  const json& ctxs = detail::member(doc, "contexts", "");
  if (!ctxs.is_array()) detail::fail("/contexts", "expected an array");
  for (std::size_t i = 0; i < ctxs.size(); ++i) {
    const std::string path = "/contexts/" + std::to_string(i);
    const auto id = detail::string_at(detail::member(ctxs[i], "id", path), path + "/id");
    auto contents = detail::strings_at(detail::member(ctxs[i], "contents", path), path + "/contents");
    if (contents.size() > max_arity) detail::fail(path + "/contents", "too many contents");
    const auto allowed_text = detail::strings_at(detail::member(ctxs[i], "allowed", path), path + "/allowed");
    std::vector<Outcome> allowed;
    for (std::size_t k = 0; k < allowed_text.size(); ++k)
      allowed.push_back(detail::outcome_at(allowed_text[k], contents.size(), path + "/allowed/" + std::to_string(k)));
    try {
      out.constraints.add(id, std::move(contents), std::move(allowed));
    } catch (const validation_error& e) {
      detail::fail(path, e.what());
    }
  }
  if (doc.contains("prior")) {
    const json& prior = doc["prior"];
    if (prior.is_string() && prior.get<std::string>() == "uniform") {
      // default
    } else if (prior.is_array()) {
      std::vector<Rational> weights;
      for (std::size_t k = 0; k < prior.size(); ++k)
        weights.push_back(detail::rational_at(prior[k], "/prior/" + std::to_string(k)));
      out.prior = std::move(weights);
    } else {
      detail::fail("/prior", "expected \"uniform\" or an array of rationals");
    }
  }
  return out;
}

inline ConstraintFile read_constraint_file(const std::string& path) {
  const json doc = parse_json_text(read_text_file(path), path);
  try {
    return constraints_from_json(doc);
  } catch (const validation_error& e) {
    throw validation_error(path + ":" + e.what());
  }
}

inline ordered_json pmf_to_json(const JointPmf& pmf) {
  ordered_json out = ordered_json::object();
  for (const auto& [o, p] : pmf.atoms()) out[outcome_to_string(o, pmf.arity())] = to_string(p);
  return out;
}

// Canonical form: input order for contents and contexts, outcomes in
// increasing order (- before +), zero entries omitted, lowest terms.
inline ordered_json to_json(const System& system) {
  ordered_json doc;
  doc["contents"] = system.contents();
  doc["contexts"] = ordered_json::array();
  for (const auto& b : system.bunches()) {
    ordered_json ctx;
    ctx["id"] = b.context;
    ctx["contents"] = b.contents();
    ctx["pmf"] = pmf_to_json(b.joint);
    doc["contexts"].push_back(std::move(ctx));
  }
  return doc;
}

inline ordered_json to_json(const ConsistifiedSystem& cs) {
  ordered_json doc = to_json(cs.base);
  ordered_json contents = ordered_json::object();
  for (std::size_t i = 0; i < cs.origin.size(); ++i)
    contents[cs.base.contents()[i]] = {{"content", cs.origin[i].content}, {"context", cs.origin[i].context}};
  ordered_json contexts = ordered_json::object();
  for (std::size_t i = 0; i < cs.context_origin.size(); ++i)
    contexts[cs.base.bunches()[i].context] = {{"kind", to_string(cs.context_origin[i].kind)},
                                              {"id", cs.context_origin[i].old_id}};
  doc["origin"] = {{"contents", std::move(contents)}, {"contexts", std::move(contexts)}};
  return doc;
}

inline std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

inline ordered_json violations_to_json(const ConnectednessReport& report) {
  ordered_json out = ordered_json::array();
  for (const auto& v : report.violations)
    out.push_back({{"contents", v.contents}, {"contexts", {v.first, v.second}}});
  return out;
}

inline ordered_json connectedness_to_json(const System& system) {
  const auto simple = is_simply_consistently_connected(system);
  const auto strong = is_strongly_consistently_connected(system);
  ordered_json out;
  out["simple"] = simple.holds;
  out["strong"] = strong.holds;
  out["violations"] = {{"simple", violations_to_json(simple)}, {"strong", violations_to_json(strong)}};
  return out;
}

inline ordered_json fraction_to_json(const FractionResult& r) {
  ordered_json out;
  out["alpha_max"] = to_string(r.alpha_max);
  out["contextual_fraction"] = to_string(r.contextual_fraction);
  out["noncontextual"] = r.noncontextual;
  out["strongly_contextual"] = r.strongly_contextual;
  return out;
}

inline ordered_json witness_to_json(const FractionResult& r) {
  ordered_json columns = ordered_json::object();
  const std::size_t n = r.witness_contents.size();
  for (const auto& [col, mass] : r.witness.entries) {
    std::string label(n, '-');
    for (std::size_t i = 0; i < n; ++i)
      if ((col >> (n - 1 - i)) & 1u) label[i] = '+';
    columns[label] = to_string(mass);
  }
  return {{"contents", r.witness_contents}, {"columns", std::move(columns)}};
}

struct ReportOptions {
  std::string method;  // "consistify" or "direct"
  std::optional<double> timing_ms;
};

inline ordered_json report_to_json(const System& system, const FractionResult& r, const ReportOptions& options) {
  ordered_json out;
  out["method"] = options.method;
  out["connectedness"] = connectedness_to_json(system);
  out["deterministic"] = is_deterministic(system);
  out["fraction"] = fraction_to_json(r);
  out["witness"] = witness_to_json(r);
  if (options.timing_ms) out["timing_ms"] = *options.timing_ms;
  return out;
}

inline ordered_json coupling_to_json(const Connection& conn, const JointPmf& joint) {
  ordered_json out;
  out["content"] = conn.content;
  ordered_json members = ordered_json::array();
  for (const auto& m : conn.members) members.push_back({{"context", m.context}, {"p", to_string(m.p)}});
  out["members"] = std::move(members);
  out["atoms"] = pmf_to_json(joint);
  const auto report = coupling_report(joint);
  ordered_json pairs = ordered_json::array();
  for (const auto& [ij, p] : report.pairwise_equalities)
    pairs.push_back({{"contexts", {conn.members[ij.first].context, conn.members[ij.second].context}},
                     {"equal", to_string(p)}});
  out["pairwise_equalities"] = std::move(pairs);
  out["chain_equality"] = to_string(report.chain_equality);
  return out;
}

}  // namespace cbd::io
