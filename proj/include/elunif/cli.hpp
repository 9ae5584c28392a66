#pragma once

// Command-line driver. run_cli is the whole program minus process setup so
// tests can call it with string streams.
//
// Exit codes: 0 solvable/true, 1 unsolvable/false, 2 usage or input error,
// 3 budget or size limit exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elunif/analysis.hpp"
#include "elunif/dag_solved.hpp"
#include "elunif/problem.hpp"
#include "elunif/semantics.hpp"
#include "elunif/slmo.hpp"
#include "elunif/solver_goal.hpp"
#include "elunif/solver_guess.hpp"
#include "elunif/subsumption.hpp"
#include "elunif/syntax.hpp"
#include "elunif/tbox.hpp"

namespace elunif {

enum ExitCode : int { kExitTrue = 0, kExitFalse = 1, kExitUsage = 2, kExitBudget = 3 };

namespace cli {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Bindings to print for a dag unifier: the requested variables plus every
/// variable their bindings reach.
inline std::vector<ConceptName> dag_projection(const Substitution& sigma, const std::set<ConceptName>& wanted) {
  auto by_text = [](ConceptName a, ConceptName b) { return a.text() < b.text(); };
  std::vector<ConceptName> head(wanted.begin(), wanted.end());
  std::sort(head.begin(), head.end(), by_text);
  std::set<ConceptName> seen(wanted.begin(), wanted.end());
  std::vector<ConceptName> stack(head.begin(), head.end());
  std::vector<ConceptName> extra;
  while (!stack.empty()) {
    const ConceptName x = stack.back();
    stack.pop_back();
    const Term* b = sigma.binding(x);
    if (!b) continue;
    for (const auto& y : variables_of(*b)) {
      if (seen.insert(y).second && sigma.binding(y)) {
        extra.push_back(y);
        stack.push_back(y);
      }
    }
  }
  std::sort(extra.begin(), extra.end(), by_text);
  head.insert(head.end(), extra.begin(), extra.end());
  return head;
}

inline void print_unifier(std::ostream& out, const Substitution& sigma, const std::set<ConceptName>& wanted,
                          bool expand_images, std::uint64_t max_size) {
  if (expand_images) {
    const TBox t = sigma.as_tbox();
    std::vector<ConceptName> vars(wanted.begin(), wanted.end());
    std::sort(vars.begin(), vars.end(), [](ConceptName a, ConceptName b) { return a.text() < b.text(); });
    for (const auto& x : vars) {
      out << "(define " << x.text() << ' ' << reduce(expand(Term::name(x), t, max_size)) << ")\n";
    }
    return;
  }
  for (const auto& x : dag_projection(sigma, wanted)) {
    const Term* b = sigma.binding(x);
    out << "(define " << x.text() << ' ' << (b ? *b : Term::top()) << ")\n";
  }
}

struct SolveOptions {
  std::string file;
  std::string algorithm = "guess";
  bool all = false;
  bool expand = false;
  bool trace = false;
  std::optional<std::uint64_t> max_nodes;
  std::uint64_t max_size = 100000;
  unsigned jobs = 1;
};

inline int run_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const ProblemFile f = parse_problem(read_file(o.file));
  const UnificationProblem g = reduce_problem_mod_tbox(f.problem(), f.tbox());
  const FlattenResult flat = flatten(g);
  std::set<ConceptName> wanted;
  for (const auto& v : f.variables) wanted.insert(ConceptName::variable(v));

  std::vector<Substitution> found;
  Verdict verdict = Verdict::Unsat;
  if (o.algorithm == "guess") {
    GuessConfig cfg;
    cfg.max_assignments = o.max_nodes;
    cfg.jobs = o.jobs;
    if (o.all) {
      EnumerationResult r = enumerate_unifiers(flat.problem, cfg);
      found = std::move(r.unifiers);
      verdict = !r.complete ? Verdict::BudgetExceeded : found.empty() ? Verdict::Unsat : Verdict::Sat;
      if (o.trace) err << "nodes " << r.stats.nodes << '\n';
    } else {
      GuessResult r = solve_guess(flat.problem, cfg);
      verdict = r.verdict;
      if (r.unifier) found.push_back(std::move(*r.unifier));
      if (o.trace) err << "nodes " << r.stats.nodes << ", equation checks " << r.stats.equation_checks << '\n';
    }
  } else if (o.algorithm == "goal") {
    GoalConfig cfg;
    cfg.max_nodes = o.max_nodes;
    cfg.trace = o.trace ? &err : nullptr;
    cfg.enumerate_all = o.all;
    GoalResult r = solve_goal(flat.problem, cfg);
    verdict = r.verdict;
    if (o.all) {
      found = std::move(r.all);
    } else if (r.unifier) {
      found.push_back(std::move(*r.unifier));
    }
  } else {
    err << "error: unknown algorithm '" << o.algorithm << "'\n";
    return kExitUsage;
  }

  out << to_string(verdict) << '\n';
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (o.all) out << "; unifier " << i + 1 << '\n';
    print_unifier(out, found[i], wanted, o.expand, o.max_size);
  }
  if (verdict == Verdict::BudgetExceeded) return kExitBudget;
  return found.empty() ? kExitFalse : kExitTrue;
}

inline const UnificationEquation& single_query(const ProblemFile& f) {
  if (f.equations.size() != 1) throw Error("expected exactly one (unify C D) query");
  return f.equations.front();
}

inline int run_subsume(const std::string& file, bool both_ways, std::ostream& out) {
  const ProblemFile f = parse_problem(read_file(file));
  const UnificationEquation& q = single_query(f);
  TBoxReasoner reasoner(f.tbox());
  const bool yes = both_ways ? reasoner.equivalent(q.lhs, q.rhs) : reasoner.subsumes(q.lhs, q.rhs);
  out << (yes ? "true" : "false") << '\n';
  return yes ? kExitTrue : kExitFalse;
}

inline int run_reduce(const std::string& file, std::ostream& out) {
  const ProblemFile f = parse_problem(read_file(file));
  const UnificationProblem g = reduce_problem_mod_tbox(f.problem(), f.tbox());
  ProblemFile r;
  for (const auto& v : g.variables()) r.variables.insert(v.text());
  for (const auto& e : g.equations()) r.equations.push_back({reduce(e.lhs), reduce(e.rhs)});
  write_problem(out, r);
  return kExitTrue;
}

inline int run_translate(const std::string& file, bool reverse, std::ostream& out) {
  const std::string text = read_file(file);
  if (reverse) {
    ProblemFile r;
    for (const auto& s : read_sexprs(text)) {
      if (s.is_atom || s.items.size() != 3 || !s.items[0].is_atom || s.items[0].atom != "unify") {
        throw error_at(s, "expected (unify s t) over SLmO terms");
      }
      const SLTerm a = read_slmo(s.items[1]);
      const SLTerm b = read_slmo(s.items[2]);
      const IndexRole roles = default_roles(b, default_roles(a));
      const Term l = from_slmo(a, roles);
      const Term rr = from_slmo(b, roles);
      for (const Term* t : {&l, &rr}) {
        for (const auto& v : variables_of(*t)) r.variables.insert(v.text());
      }
      r.equations.push_back({l, rr});
    }
    write_problem(out, r);
    return kExitTrue;
  }
  const ProblemFile f = parse_problem(text);
  std::set<RoleName> roles;
  for (const auto& e : f.equations) {
    for (const Term* t : {&e.lhs, &e.rhs}) {
      for (const auto& r : role_names(*t)) roles.insert(r);
    }
  }
  for (const auto& d : f.definitions) {
    for (const auto& r : role_names(d.rhs)) roles.insert(r);
  }
  const RoleIndex index = index_roles(roles);
  std::vector<std::pair<unsigned, RoleName>> listed;
  for (const auto& [r, i] : index) listed.emplace_back(i, r);
  std::sort(listed.begin(), listed.end());
  for (const auto& [i, r] : listed) out << "; f " << i << " = " << r.text() << '\n';
  for (const auto& d : f.definitions) out << "(define " << d.lhs.text() << ' ' << to_slmo(d.rhs, index) << ")\n";
  for (const auto& e : f.equations) out << "(unify " << to_slmo(e.lhs, index) << ' ' << to_slmo(e.rhs, index) << ")\n";
  return kExitTrue;
}

inline int run_type_zero(unsigned steps, bool kv, std::ostream& out) {
  const UnifierChain chain = type_zero_chain(steps);
  const ChainReport report = verify_chain(chain);
  if (kv) {
    write_report_kv(out, report);
  } else {
    const auto& e = chain.problem.equations().front();
    out << "problem: (unify " << e.lhs << ' ' << e.rhs << ")\n";
    write_chain(out, chain);
    write_report(out, report);
  }
  switch (report.overall()) {
    case CheckOutcome::Pass: return kExitTrue;
    case CheckOutcome::Fail: return kExitFalse;
    case CheckOutcome::Inconclusive: return kExitBudget;
  }
  return kExitFalse;
}

inline int run_eval(const std::string& file, unsigned samples, std::size_t domain, std::uint64_t seed,
                    std::ostream& out) {
  const ProblemFile f = parse_problem(read_file(file));
  const TBox t = f.tbox();
  t.require_acyclic();
  Signature sig;
  for (const auto& e : f.equations) {
    sig.add(e.lhs);
    sig.add(e.rhs);
  }
  for (const auto& d : f.definitions) {
    sig.add(Term::name(d.lhs));
    sig.add(d.rhs);
  }
  bool all_agree = true;
  for (std::size_t k = 0; k < f.equations.size(); ++k) {
    const auto& e = f.equations[k];
    std::optional<std::uint64_t> witness;
    for (unsigned s = 0; s < samples && !witness; ++s) {
      const Interpretation i = complete_model(random_interpretation(sig, domain, seed + s), t);
      if (evaluate(e.lhs, i) != evaluate(e.rhs, i)) witness = seed + s;
    }
    if (witness) {
      all_agree = false;
      out << "equation " << k << ": counterexample (seed " << *witness << ")\n";
    } else {
      out << "equation " << k << ": no counterexample in " << samples << " interpretations\n";
    }
  }
  return all_agree ? kExitTrue : kExitFalse;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unification, matching and subsumption in the description logic EL"};
  app.require_subcommand(1);

  cli::SolveOptions solve;
  std::uint64_t max_nodes = 0;
  auto* s = app.add_subcommand("solve", "decide solvability and print a unifier");
  s->add_option("file", solve.file, "problem file")->required();
  s->add_option("--algorithm", solve.algorithm, "guess or goal")->check(CLI::IsMember({"guess", "goal"}));
  s->add_flag("--all", solve.all, "print every unifier found");
  s->add_flag("--expand", solve.expand, "print expanded images instead of the dag");
  auto* nodes_opt = s->add_option("--max-nodes", max_nodes, "search budget")->check(CLI::PositiveNumber);
  s->add_option("--max-size", solve.max_size, "size limit for --expand")->check(CLI::PositiveNumber);
  s->add_flag("--trace", solve.trace, "trace rule applications on stderr");
  s->add_option("--jobs", solve.jobs, "worker threads (guess)")->check(CLI::Range(1u, 256u));

  std::string file;
  auto* sub = app.add_subcommand("subsume", "decide C ⊑ D for the single (unify C D)");
  sub->add_option("file", file, "problem file")->required();
  auto* eq = app.add_subcommand("equiv", "decide C ≡ D for the single (unify C D)");
  eq->add_option("file", file, "problem file")->required();
  auto* red = app.add_subcommand("reduce", "print the problem without TBox, terms reduced");
  red->add_option("file", file, "problem file")->required();

  bool from_slmo = false;
  auto* tr = app.add_subcommand("translate-slmo", "translate between EL and SLmO terms");
  tr->add_option("file", file, "problem file")->required();
  tr->add_flag("--from-slmo", from_slmo, "input holds (unify s t) over SLmO terms");

  unsigned steps = 3;
  bool kv = false;
  auto* tz = app.add_subcommand("demo-type-zero", "build and verify a descending unifier chain");
  tz->add_option("--steps", steps, "chain length")->check(CLI::Range(0u, 16u));
  tz->add_flag("--kv", kv, "key=value report");

  unsigned samples = 20;
  std::size_t domain = 4;
  std::uint64_t seed = 1;
  auto* ev = app.add_subcommand("eval", "look for finite counterexamples to each (unify C D)");
  ev->add_option("file", file, "problem file")->required();
  ev->add_option("--samples", samples, "interpretations per equation");
  ev->add_option("--domain", domain, "maximum domain size")->check(CLI::PositiveNumber);
  ev->add_option("--seed", seed, "first seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitTrue : kExitUsage;
  }

  try {
    if (*s) {
      if (*nodes_opt) solve.max_nodes = max_nodes;
      return cli::run_solve(solve, out, err);
    }
    if (*sub) return cli::run_subsume(file, false, out);
    if (*eq) return cli::run_subsume(file, true, out);
    if (*red) return cli::run_reduce(file, out);
    if (*tr) return cli::run_translate(file, from_slmo, out);
    if (*tz) return cli::run_type_zero(steps, kv, out);
    if (*ev) return cli::run_eval(file, samples, domain, seed, out);
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const BudgetExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace elunif
