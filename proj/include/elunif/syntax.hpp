#pragma once

// S-expression reader and the problem-file format:
//
//   term := top | NAME | (and term+) | (some NAME term)
//   stmt := (variables NAME+) | (constants NAME+) | (define NAME term)
//         | (unify term term)
//
// ';' starts a comment that runs to the end of the line. Names that are not
// declared as variables are constants.

#include <cctype>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "elunif/error.hpp"
#include "elunif/problem.hpp"
#include "elunif/tbox.hpp"
#include "elunif/term.hpp"

namespace elunif {

struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::vector<SExpr> read_sexprs(std::string_view text) {
  std::size_t pos = 0, line = 1, column = 1;
  auto advance = [&] {
    if (text[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  };
  auto skip_blank = [&] {
    while (pos < text.size()) {
      if (text[pos] == ';') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        advance();
      } else {
        break;
      }
    }
  };

  std::vector<SExpr> top;
  std::vector<SExpr> open;
  while (true) {
    skip_blank();
    if (pos >= text.size()) break;
    const char ch = text[pos];
    if (ch == '(') {
      SExpr e;
      e.line = line;
      e.column = column;
      open.push_back(std::move(e));
      advance();
    } else if (ch == ')') {
      if (open.empty()) throw ParseError("unexpected ')'", line, column);
      advance();
      SExpr done = std::move(open.back());
      open.pop_back();
      (open.empty() ? top : open.back().items).push_back(std::move(done));
    } else {
      SExpr e;
      e.is_atom = true;
      e.line = line;
      e.column = column;
      while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ';' &&
             !std::isspace(static_cast<unsigned char>(text[pos]))) {
        e.atom += text[pos];
        advance();
      }
      (open.empty() ? top : open.back().items).push_back(std::move(e));
    }
  }
  if (!open.empty()) throw ParseError("unclosed '('", open.back().line, open.back().column);
  return top;
}

inline ParseError error_at(const SExpr& e, const std::string& message) {
  return ParseError(message, e.line, e.column);
}

namespace detail {

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"top", "and", "some", "variables", "constants", "define", "unify"};
  return k;
}

inline bool valid_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

}  // namespace detail

/// Validates a NAME token and returns its text.
inline const std::string& read_name(const SExpr& e, const char* what = "name") {
  if (!e.is_atom) throw error_at(e, std::string("expected a ") + what);
  if (is_reserved_name(e.atom)) throw error_at(e, "names starting with '_v' are reserved: " + e.atom);
  if (!detail::valid_name(e.atom)) throw error_at(e, "invalid " + std::string(what) + " '" + e.atom + "'");
  if (detail::keywords().count(e.atom)) throw error_at(e, "keyword '" + e.atom + "' cannot be used as a name");
  return e.atom;
}

/// Parses a concept term; `variables` decides the kind of each name.
inline Term read_term(const SExpr& e, const std::set<std::string>& variables) {
  if (e.is_atom) {
    if (e.atom == "top") return Term::top();
    const std::string& n = read_name(e);
    return Term::name(variables.count(n) ? ConceptName::variable(n) : ConceptName::constant(n));
  }
  if (e.items.empty() || !e.items[0].is_atom) throw error_at(e, "expected 'and' or 'some'");
  const std::string& head = e.items[0].atom;
  if (head == "and") {
    if (e.items.size() < 2) throw error_at(e, "'and' needs at least one argument");
    std::vector<Term> parts;
    for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(read_term(e.items[i], variables));
    return Term::conj(std::move(parts));
  }
  if (head == "some") {
    if (e.items.size() != 3) throw error_at(e, "'some' takes a role and a term");
    return Term::exists(RoleName::of(read_name(e.items[1], "role name")), read_term(e.items[2], variables));
  }
  throw error_at(e.items[0], "unknown term constructor '" + head + "'");
}

struct ProblemFile {
  std::set<std::string> variables;
  std::set<std::string> constants;  // explicitly declared
  std::vector<ConceptDefinition> definitions;
  std::vector<UnificationEquation> equations;

  TBox tbox() const { return TBox(definitions); }

  UnificationProblem problem() const {
    std::set<ConceptName> declared;
    for (const auto& v : variables) declared.insert(ConceptName::variable(v));
    for (const auto& c : constants) declared.insert(ConceptName::constant(c));
    return UnificationProblem(equations, declared);
  }
};

/// Throws ParseError (with line and column) on syntax errors, duplicate or
/// cyclic definitions, and variables used as defined concepts.
inline ProblemFile parse_problem(std::string_view text) {
  const std::vector<SExpr> stmts = read_sexprs(text);
  ProblemFile f;
  auto head_of = [](const SExpr& s) -> std::string {
    if (s.is_atom || s.items.empty() || !s.items[0].is_atom) throw error_at(s, "expected a statement");
    return s.items[0].atom;
  };

  // Declarations first, so names may be used before they are declared.
  for (const auto& s : stmts) {
    const std::string head = head_of(s);
    if (head != "variables" && head != "constants") continue;
    if (s.items.size() < 2) throw error_at(s, "'" + head + "' needs at least one name");
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      const std::string& n = read_name(s.items[i]);
      auto& mine = head == "variables" ? f.variables : f.constants;
      const auto& theirs = head == "variables" ? f.constants : f.variables;
      if (theirs.count(n)) throw error_at(s.items[i], "'" + n + "' declared both as variable and constant");
      mine.insert(n);
    }
  }

  std::map<ConceptName, const SExpr*> defined_at;
  for (const auto& s : stmts) {
    const std::string head = head_of(s);
    if (head == "variables" || head == "constants") continue;
    if (head == "define") {
      if (s.items.size() != 3) throw error_at(s, "'define' takes a name and a term");
      const std::string& n = read_name(s.items[1]);
      if (f.variables.count(n)) throw error_at(s.items[1], "variable '" + n + "' cannot be a defined concept");
      const ConceptName a = ConceptName::constant(n);
      if (!defined_at.emplace(a, &s.items[1]).second) {
        throw error_at(s.items[1], "concept '" + n + "' is defined more than once");
      }
      f.definitions.push_back({a, read_term(s.items[2], f.variables)});
    } else if (head == "unify") {
      if (s.items.size() != 3) throw error_at(s, "'unify' takes two terms");
      f.equations.push_back({read_term(s.items[1], f.variables), read_term(s.items[2], f.variables)});
    } else {
      throw error_at(s.items[0], "unknown statement '" + head + "'");
    }
  }

  const TBox t = f.tbox();
  if (!t.is_acyclic()) {
    const auto deps = depends_on(t);
    for (const auto& d : t.definitions()) {
      if (deps.at(d.lhs).count(d.lhs)) {
        throw error_at(*defined_at.at(d.lhs), "definition of '" + d.lhs.text() + "' is cyclic");
      }
    }
  }
  return f;
}

inline void write_problem(std::ostream& os, const ProblemFile& f) {
  if (!f.variables.empty()) {
    os << "(variables";
    for (const auto& v : f.variables) os << ' ' << v;
    os << ")\n";
  }
  if (!f.constants.empty()) {
    os << "(constants";
    for (const auto& c : f.constants) os << ' ' << c;
    os << ")\n";
  }
  for (const auto& d : f.definitions) os << "(define " << d.lhs.text() << ' ' << d.rhs << ")\n";
  for (const auto& e : f.equations) os << "(unify " << e.lhs << ' ' << e.rhs << ")\n";
}

inline std::string print_problem(const ProblemFile& f) {
  std::ostringstream os;
  write_problem(os, f);
  return os.str();
}

}  // namespace elunif
