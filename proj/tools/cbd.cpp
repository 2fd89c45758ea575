// cbd: command-line front end for contextuality analysis.
//
// Exit codes: 0 ok, 2 invalid input, 3 size limit, 4 precondition failed,
// 5 no deterministic realization.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cbd/cbd.hpp"
#include "cbd/io.hpp"

namespace {

enum Exit { ok = 0, invalid = 2, resource = 3, precondition = 4, empty_family = 5, internal = 70 };

void print_violations(const cbd::ConnectednessReport& report) {
  for (const auto& v : report.violations) {
    std::cout << "    {";
    for (std::size_t i = 0; i < v.contents.size(); ++i) std::cout << (i ? ", " : "") << v.contents[i];
    std::cout << "} differs between " << v.first << " and " << v.second << "\n";
  }
}

int cmd_check(const std::string& file, bool as_json) {
  const auto system = cbd::io::read_system_file(file);
  if (as_json) {
    cbd::io::ordered_json out;
    out["connectedness"] = cbd::io::connectedness_to_json(system);
    out["deterministic"] = cbd::is_deterministic(system);
    std::cout << cbd::io::dump(out);
    return ok;
  }
  const auto simple = cbd::is_simply_consistently_connected(system);
  const auto strong = cbd::is_strongly_consistently_connected(system);
  std::cout << "contents: " << system.content_count() << ", contexts: " << system.context_count()
            << ", |relation|: " << system.relation_size() << "\n";
  std::cout << "simple: " << std::boolalpha << simple.holds << "\n";
  print_violations(simple);
  std::cout << "strong: " << strong.holds << "\n";
  print_violations(strong);
  std::cout << "deterministic: " << cbd::is_deterministic(system) << "\n";
  return ok;
}

struct FractionFlags {
  bool direct = false;
  bool json = false;
  bool timing = false;
  std::uint64_t max_columns = cbd::default_max_columns;
};

int cmd_fraction(const std::string& file, const FractionFlags& flags, bool witness_only) {
  const auto system = cbd::io::read_system_file(file);
  const cbd::LpOptions options{flags.max_columns};
  const auto start = std::chrono::steady_clock::now();
  const auto result = flags.direct ? cbd::noncontextual_fraction(system, options)
                                   : cbd::generalized_fraction(system, options);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (witness_only) {
    if (flags.json)
      std::cout << cbd::io::dump(cbd::io::witness_to_json(result));
    else
      for (const auto& [label, mass] : cbd::io::witness_to_json(result)["columns"].items())
        std::cout << label << " " << mass.get<std::string>() << "\n";
    return ok;
  }
  if (flags.json) {
    cbd::io::ReportOptions ro{flags.direct ? "direct" : "consistify", std::nullopt};
    if (flags.timing) ro.timing_ms = ms;
    std::cout << cbd::io::dump(cbd::io::report_to_json(system, result, ro));
    return ok;
  }
  std::cout << "method: " << (flags.direct ? "direct" : "consistify") << "\n"
            << "alpha_max: " << cbd::to_string(result.alpha_max) << "\n"
            << "contextual_fraction: " << cbd::to_string(result.contextual_fraction) << "\n"
            << "noncontextual: " << std::boolalpha << result.noncontextual << "\n"
            << "strongly_contextual: " << result.strongly_contextual << "\n"
            << "witness columns: " << result.witness.entries.size() << "\n"
            << "time: " << ms << " ms\n";
  return ok;
}

int cmd_consistify(const std::string& file, const std::string& out) {
  const auto system = cbd::io::read_system_file(file);
  const auto cs = cbd::consistify(system);
  const auto check = cbd::check_consistified_properties(cs);
  if (!check.ok()) {
    for (const auto& p : check.problems) std::cerr << "internal: " << p << "\n";
    return internal;
  }
  const auto text = cbd::io::dump(cbd::io::to_json(cs));
  if (out.empty() || out == "-")
    std::cout << text;
  else
    cbd::io::write_text_file(out, text);
  std::cerr << "consistified: " << cs.base.content_count() << " contents, " << cs.base.context_count()
            << " contexts\n";
  return ok;
}

int cmd_couple(const std::string& file, const std::string& content, bool as_json) {
  const auto system = cbd::io::read_system_file(file);
  const auto conn = cbd::connection(system, content);
  const auto joint = cbd::multimaximal_coupling(conn);
  const auto doc = cbd::io::coupling_to_json(conn, joint);
  if (as_json) {
    std::cout << cbd::io::dump(doc);
    return ok;
  }
  std::cout << "content " << conn.content << ":";
  for (const auto& m : conn.members) std::cout << " " << m.context;
  std::cout << "\n";
  for (const auto& [o, p] : joint.atoms())
    std::cout << "  " << cbd::outcome_to_string(o, joint.arity()) << " " << cbd::to_string(p) << "\n";
  for (const auto& pair : doc["pairwise_equalities"])
    std::cout << "  Pr[" << pair["contexts"][0].get<std::string>() << " = " << pair["contexts"][1].get<std::string>()
              << "] = " << pair["equal"].get<std::string>() << "\n";
  std::cout << "  Pr[all equal] = " << doc["chain_equality"].get<std::string>() << "\n";
  return ok;
}

int cmd_bayes(const std::string& file, const std::string& out) {
  const auto cf = cbd::io::read_constraint_file(file);
  auto family = cbd::enumerate_realizations(cf.constraints);
  const bool to_stdout = out.empty() || out == "-";
  // keep stdout pure JSON when the mixture goes there
  (to_stdout && !family.empty() ? std::cerr : std::cout) << "realizations: " << family.size() << "\n";
  if (family.empty()) {
    for (const auto& c : family.empty_contexts) std::cerr << "context '" << c << "' allows no outcome\n";
    return empty_family;
  }
  if (cf.prior) family.prior = *cf.prior;
  const auto mixture = cbd::epistemic_mixture(family);
  (to_stdout ? std::cerr : std::cout) << "consistently connected: " << std::boolalpha
                                      << cbd::is_simply_consistently_connected(mixture).holds << "\n";
  const auto text = cbd::io::dump(cbd::io::to_json(mixture));
  if (to_stdout)
    std::cout << text;
  else
    cbd::io::write_text_file(out, text);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextuality analysis of systems of dichotomous random variables"};
  app.require_subcommand(1);

  std::string file, out, content;
  bool as_json = false;
  FractionFlags flags;

  auto* check = app.add_subcommand("check", "Consistent connectedness and determinism");
  check->add_option("file", file, "System file (- for stdin)")->required();
  check->add_flag("--json", as_json, "Machine-readable output");

  auto add_fraction_options = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "System file (- for stdin)")->required();
    auto* direct = cmd->add_flag("--direct", flags.direct, "LP on the system itself (needs consistent connectedness)");
    cmd->add_flag("--consistify", "LP on the consistified system (default)")->excludes(direct);
    cmd->add_flag("--json", flags.json, "Machine-readable output");
    cmd->add_option("--max-columns", flags.max_columns, "Largest incidence matrix width to attempt");
  };
  auto* fraction = app.add_subcommand("fraction", "Noncontextual fraction alpha_max");
  add_fraction_options(fraction);
  fraction->add_flag("--timing", flags.timing, "Include timing_ms in --json output");
  auto* witness = app.add_subcommand("witness", "Optimal sub-probability coupling (sparse)");
  add_fraction_options(witness);

  auto* cons = app.add_subcommand("consistify", "Write the consistified system");
  cons->add_option("file", file, "System file (- for stdin)")->required();
  cons->add_option("-o,--output", out, "Output file (default stdout)");

  auto* couple = app.add_subcommand("couple", "Multimaximal coupling of one connection");
  couple->add_option("file", file, "System file (- for stdin)")->required();
  couple->add_option("--content", content, "Content whose connection is coupled")->required();
  couple->add_flag("--json", as_json, "Machine-readable output");

  auto* bayes = app.add_subcommand("bayes", "Epistemic mixture of a constraint file's realizations");
  bayes->add_option("file", file, "Constraint file")->required();
  bayes->add_option("-o,--output", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return invalid;
  }

  try {
    if (*check) return cmd_check(file, as_json);
    if (*fraction) return cmd_fraction(file, flags, false);
    if (*witness) return cmd_fraction(file, flags, true);
    if (*cons) return cmd_consistify(file, out);
    if (*couple) return cmd_couple(file, content, as_json);
    if (*bayes) return cmd_bayes(file, out);
  } catch (const cbd::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invalid;
  } catch (const cbd::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return resource;
  } catch (const cbd::precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return precondition;
  } catch (const cbd::empty_family_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return empty_family;
  } catch (const cbd::error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
  return ok;
}
