#pragma once

// Goal-oriented solver for flat problems. Equations are kept as four sets
// (LVar, LAto, RVar, RAto) expanded w.r.t. the current assignment; the rules
// Eager-Assignment, Decomposition and Extension solve unsolved atoms, and
// don't-know choices are explored depth first with trail-based undo.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>
#include <boost/dynamic_bitset.hpp>

#include "elunif/flat_index.hpp"
#include "elunif/problem.hpp"
#include "elunif/subsumption.hpp"

namespace elunif {

enum class Side { Left, Right };
enum class RuleOutcome { Applied, Fail, NotApplicable };

inline const char* to_string(RuleOutcome o) {
  switch (o) {
    case RuleOutcome::Applied: return "applied";
    case RuleOutcome::Fail: return "fail";
    case RuleOutcome::NotApplicable: return "not applicable";
  }
  return "?";
}

/// Search node of the goal-oriented solver. Rules mutate it in place and
/// log every mutation so undo(mark) restores any earlier state. A rule that
/// returns Fail or NotApplicable leaves the state unchanged.
class GoalState {
 public:
  using Bits = boost::dynamic_bitset<>;

  explicit GoalState(const UnificationProblem& g) : p_(g) {
    nv_ = p_.variables().size();
    na_ = p_.atoms().size();
    assignment_.assign(nv_, Bits(na_));
    finished_.assign(nv_, 0);
    for (const auto& ie : p_.equations()) {
      Eq e{Bits(nv_), Bits(na_), Bits(nv_), Bits(na_), false};
      for (int v : ie.lvar) e.lvar.set(static_cast<std::size_t>(v));
      for (int v : ie.rvar) e.rvar.set(static_cast<std::size_t>(v));
      for (int a : ie.lato) e.lato.set(static_cast<std::size_t>(a));
      for (int a : ie.rato) e.rato.set(static_cast<std::size_t>(a));
      eqs_.push_back(std::move(e));
    }
    original_equations_ = eqs_.size();
  }

  const IndexedProblem& indexed() const { return p_; }
  std::size_t equation_count() const { return eqs_.size(); }
  std::size_t original_equation_count() const { return original_equations_; }
  bool is_d_equation(std::size_t e) const { return eqs_[e].generated; }

  FlatEquation equation(std::size_t e) const {
    FlatEquation f;
    const Eq& q = eqs_[e];
    for (std::size_t v = 0; v < nv_; ++v) {
      if (q.lvar.test(v)) f.lvar.insert(p_.variables()[v]);
      if (q.rvar.test(v)) f.rvar.insert(p_.variables()[v]);
    }
    for (std::size_t a = 0; a < na_; ++a) {
      if (q.lato.test(a)) f.lato.insert(p_.atoms()[a]);
      if (q.rato.test(a)) f.rato.insert(p_.atoms()[a]);
    }
    return f;
  }

  bool solved(std::size_t e) const { return eqs_[e].lato == eqs_[e].rato; }

  bool all_solved() const {
    for (std::size_t e = 0; e < eqs_.size(); ++e) {
      if (!solved(e)) return false;
    }
    return true;
  }

  bool finished(ConceptName x) const { return finished_[var(x)] != 0; }

  Assignment assignment() const {
    Assignment out;
    for (std::size_t v = 0; v < nv_; ++v) {
      std::set<Term> s;
      for (std::size_t a = 0; a < na_; ++a) {
        if (assignment_[v].test(a)) s.insert(p_.atoms()[a]);
      }
      out.assign(p_.variables()[v], std::move(s));
    }
    return out;
  }

  Substitution substitution() const { return substitution_of_assignment(assignment()); }

  std::size_t eager_applications() const { return eager_count_; }
  std::size_t other_applications() const { return other_count_; }
  std::size_t eager_bound() const { return nv_; }
  std::size_t other_bound() const { return eqs_.size() * na_; }

  void set_trace(std::ostream* trace) { trace_ = trace; }

  std::size_t mark() const { return trail_.size(); }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const Undo u = trail_.back();
      trail_.pop_back();
      switch (u.kind) {
        case Undo::EqAtom:
          side_atoms(static_cast<std::size_t>(u.a), u.b).reset(static_cast<std::size_t>(u.c));
          break;
        case Undo::Assign:
          assignment_[static_cast<std::size_t>(u.a)].reset(static_cast<std::size_t>(u.c));
          break;
        case Undo::Finish:
          finished_[static_cast<std::size_t>(u.a)] = 0;
          break;
        case Undo::PushEq:
          eqs_.pop_back();
          break;
        case Undo::Memo:
          memo_.erase(memo_log_.back());
          memo_log_.pop_back();
          break;
        case Undo::CountEager:
          --eager_count_;
          break;
        case Undo::CountOther:
          --other_count_;
          break;
      }
    }
  }

  // -- rules, by term ------------------------------------------------------

  RuleOutcome eager_assignment(std::size_t e, Side side) { return eager_at(e, side); }

  RuleOutcome decomposition(std::size_t e, const Term& atom, const Term& choice) {
    return decompose_at(e, find_atom(atom), find_atom(choice));
  }

  RuleOutcome extension(std::size_t e, const Term& atom, ConceptName x) {
    return extend_at(e, find_atom(atom), static_cast<int>(var(x)));
  }

  // -- rules, by index -----------------------------------------------------

  /// Eager-Assignment: X is the only unfinished variable of e, it occurs on `side`,
  /// and that side has no atoms; S_X becomes the other side's atoms.
  RuleOutcome eager_at(std::size_t e, Side side) {
    const Eq& q = eqs_[e];
    const Bits& vars = side == Side::Left ? q.lvar : q.rvar;
    const Bits& other_vars = side == Side::Left ? q.rvar : q.lvar;
    const Bits& atoms = side == Side::Left ? q.lato : q.rato;
    const Bits& other_atoms = side == Side::Left ? q.rato : q.lato;
    if (atoms.any()) return RuleOutcome::NotApplicable;
    int x = -1;
    for (std::size_t v = 0; v < nv_; ++v) {
      if (finished_[v] || !(vars.test(v) || other_vars.test(v))) continue;
      if (x >= 0 || !vars.test(v) || other_vars.test(v)) return RuleOutcome::NotApplicable;
      x = static_cast<int>(v);
    }
    if (x < 0) return RuleOutcome::NotApplicable;
    const Bits target = other_atoms;
    for (auto a = target.find_first(); a != Bits::npos; a = target.find_next(a)) {
      const int y = p_.atom_variable(static_cast<int>(a));
      if (y >= 0 && reaches(y, x)) {
        trace_line("eager", side, e, "fail: " + p_.variables()[static_cast<std::size_t>(x)].text() +
                                         " would depend on itself");
        return RuleOutcome::Fail;
      }
    }
    log(Undo{Undo::CountEager});
    ++eager_count_;
    for (auto a = target.find_first(); a != Bits::npos; a = target.find_next(a)) {
      assign(static_cast<std::size_t>(x), a);
    }
    finished_[static_cast<std::size_t>(x)] = 1;
    log(Undo{Undo::Finish, x});
    check_bounds();
    trace_line("eager", side, e,
               p_.variables()[static_cast<std::size_t>(x)].text() + " := " + atom_list(target));
    return RuleOutcome::Applied;
  }

  /// Decomposition: atom = ∃r.C is unsolved on one side, choice = ∃r.B is on the
  /// other; ∃r.C is added there and C ⊓ B ≡? B is generated once.
  RuleOutcome decompose_at(std::size_t e, int atom, int choice) {
    const auto side = unsolved_side(e, atom);
    if (!side) return RuleOutcome::NotApplicable;
    const AtomInfo& ai = info(atom);
    const AtomInfo& bi = info(choice);
    if (!ai.is_exists || !bi.is_exists || ai.role != bi.role) return RuleOutcome::NotApplicable;
    const int other = *side == Side::Left ? 1 : 0;
    if (!side_atoms(e, other).test(static_cast<std::size_t>(choice))) return RuleOutcome::NotApplicable;

    count_other();
    add_eq_atom(e, other, static_cast<std::size_t>(atom));
    const Term& c = p_.atoms()[static_cast<std::size_t>(atom)].filler();
    const Term& b = p_.atoms()[static_cast<std::size_t>(choice)].filler();
    std::string note = to_string(p_.atoms()[static_cast<std::size_t>(atom)]) + " by " +
                       to_string(p_.atoms()[static_cast<std::size_t>(choice)]);
    auto key = std::make_pair(c, b);
    if (memo_.insert(key).second) {
      memo_log_.push_back(key);
      log(Undo{Undo::Memo});
      Eq q{Bits(nv_), Bits(na_), Bits(nv_), Bits(na_), true};
      add_filler(ai, q.lvar, q.lato);
      add_filler(bi, q.lvar, q.lato);
      add_filler(bi, q.rvar, q.rato);
      eqs_.push_back(std::move(q));
      log(Undo{Undo::PushEq});
      expand(eqs_.size() - 1);
      note += ", new e" + std::to_string(eqs_.size() - 1);
    }
    trace_line("decompose", *side, e, note);
    check_bounds();
    return RuleOutcome::Applied;
  }

  /// Extension: atom is unsolved on one side; it is added to S_X for an
  /// unfinished X among the other side's variables.
  RuleOutcome extend_at(std::size_t e, int atom, int x) {
    const auto side = unsolved_side(e, atom);
    if (!side) return RuleOutcome::NotApplicable;
    const Eq& q = eqs_[e];
    const Bits& other_vars = *side == Side::Left ? q.rvar : q.lvar;
    if (x < 0 || !other_vars.test(static_cast<std::size_t>(x)) || finished_[static_cast<std::size_t>(x)]) {
      return RuleOutcome::NotApplicable;
    }
    const int y = p_.atom_variable(atom);
    const std::string what = to_string(p_.atoms()[static_cast<std::size_t>(atom)]) + " into " +
                             p_.variables()[static_cast<std::size_t>(x)].text();
    if (y >= 0 && reaches(y, x)) {
      trace_line("extend", *side, e, what + ": fail, cycle");
      return RuleOutcome::Fail;
    }
    count_other();
    assign(static_cast<std::size_t>(x), static_cast<std::size_t>(atom));
    trace_line("extend", *side, e, what);
    check_bounds();
    return RuleOutcome::Applied;
  }

  /// Index of the equation picked by the don't-care strategy: fewest
  /// unsolved atoms, ties to the lower index. Returns npos when all solved.
  std::size_t pick_equation() const {
    std::size_t best = npos;
    std::size_t best_count = 0;
    for (std::size_t e = 0; e < eqs_.size(); ++e) {
      const std::size_t n = (eqs_[e].lato ^ eqs_[e].rato).count();
      if (n > 0 && (best == npos || n < best_count)) {
        best = e;
        best_count = n;
      }
    }
    return best;
  }

  /// Term-order-least unsolved atom of e, or -1.
  int pick_atom(std::size_t e) const {
    const Bits diff = eqs_[e].lato ^ eqs_[e].rato;
    const auto a = diff.find_first();
    return a == Bits::npos ? -1 : static_cast<int>(a);
  }

  /// Don't-know alternatives for an unsolved atom: Decomposition choices in
  /// term order, then Extension variables in term order.
  struct Choice {
    bool decomposition;
    int target;  // atom index for Decomposition, variable index for Extension
  };

  std::vector<Choice> choices(std::size_t e, int atom) const {
    std::vector<Choice> out;
    const auto side = unsolved_side(e, atom);
    if (!side) return out;
    const int other = *side == Side::Left ? 1 : 0;
    const AtomInfo& ai = info(atom);
    const Eq& q = eqs_[e];
    if (ai.is_exists) {
      const Bits& atoms = other == 1 ? q.rato : q.lato;
      for (auto b = atoms.find_first(); b != Bits::npos; b = atoms.find_next(b)) {
        const AtomInfo& bi = info(static_cast<int>(b));
        if (bi.is_exists && bi.role == ai.role) out.push_back({true, static_cast<int>(b)});
      }
    }
    const Bits& vars = other == 1 ? q.rvar : q.lvar;
    for (auto v = vars.find_first(); v != Bits::npos; v = vars.find_next(v)) {
      if (!finished_[v]) out.push_back({false, static_cast<int>(v)});
    }
    return out;
  }

  /// Some equation has an unsolved atom without any Decomposition or
  /// Extension choice. The other side can only gain an ∃r-atom by
  /// decomposing against one it already has, and unfinished variables never
  /// come back, so such an atom stays unsolvable on this branch.
  bool has_dead_atom() const {
    for (std::size_t e = 0; e < eqs_.size(); ++e) {
      const Bits diff = eqs_[e].lato ^ eqs_[e].rato;
      for (auto a = diff.find_first(); a != Bits::npos; a = diff.find_next(a)) {
        if (choices(e, static_cast<int>(a)).empty()) return true;
      }
    }
    return false;
  }

  /// Applies the first applicable Eager-Assignment (equation order, L before
  /// R). Returns NotApplicable when none applies.
  RuleOutcome apply_some_eager() {
    for (std::size_t e = 0; e < eqs_.size(); ++e) {
      for (Side s : {Side::Left, Side::Right}) {
        const RuleOutcome o = eager_at(e, s);
        if (o != RuleOutcome::NotApplicable) return o;
      }
    }
    return RuleOutcome::NotApplicable;
  }

  /// Acyclic assignment, expanded equations, and counters within bounds.
  bool invariants_hold() const {
    if (!assignment().is_acyclic()) return false;
    for (const Eq& q : eqs_) {
      for (std::size_t v = 0; v < nv_; ++v) {
        if (q.lvar.test(v) && !assignment_[v].is_subset_of(q.lato)) return false;
        if (q.rvar.test(v) && !assignment_[v].is_subset_of(q.rato)) return false;
      }
    }
    return true;
  }

  std::uint64_t bound_violations() const { return bound_violations_; }

  /// Everything the search from here depends on: equations, assignment,
  /// finished labels and generated D-equation keys. Counters are left out.
  std::vector<std::uint64_t> state_key() const {
    std::vector<std::uint64_t> key{eqs_.size()};
    auto put = [&key](const Bits& b) { boost::to_block_range(b, std::back_inserter(key)); };
    for (const Eq& q : eqs_) {
      put(q.lvar);
      put(q.lato);
      put(q.rvar);
      put(q.rato);
    }
    for (const Bits& s : assignment_) put(s);
    for (std::size_t v = 0; v < nv_; v += 64) {
      std::uint64_t word = 0;
      for (std::size_t i = v; i < std::min(nv_, v + 64); ++i) word |= std::uint64_t{finished_[i] != 0} << (i - v);
      key.push_back(word);
    }
    for (const auto& [c, b] : memo_) key.push_back(filler_code(c) << 32 | filler_code(b));
    return key;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  struct Eq {
    Bits lvar;
    Bits lato;
    Bits rvar;
    Bits rato;
    bool generated;
  };

  struct Undo {
    enum Kind { EqAtom, Assign, Finish, PushEq, Memo, CountEager, CountOther } kind;
    int a = 0;
    int b = 0;
    int c = 0;
  };

  std::size_t var(ConceptName x) const { return static_cast<std::size_t>(p_.var_index(x)); }

  int find_atom(const Term& t) const {
    for (std::size_t i = 0; i < na_; ++i) {
      if (p_.atoms()[i] == t) return static_cast<int>(i);
    }
    throw Error("'" + to_string(t) + "' is not an atom of the problem");
  }

  std::uint64_t filler_code(const Term& t) const {
    if (t.is_top()) return 0;
    if (t.is_variable()) return 1 + var(t.concept_name());
    return 1 + nv_ + static_cast<std::uint64_t>(p_.atom_index(t));
  }

  const AtomInfo& info(int atom) const { return p_.info()[static_cast<std::size_t>(atom)]; }

  Bits& side_atoms(std::size_t e, int side) { return side == 0 ? eqs_[e].lato : eqs_[e].rato; }
  const Bits& side_atoms(std::size_t e, int side) const { return side == 0 ? eqs_[e].lato : eqs_[e].rato; }

  std::optional<Side> unsolved_side(std::size_t e, int atom) const {
    if (atom < 0 || e >= eqs_.size()) return std::nullopt;
    const auto a = static_cast<std::size_t>(atom);
    const bool l = eqs_[e].lato.test(a);
    const bool r = eqs_[e].rato.test(a);
    if (l && !r) return Side::Left;
    if (r && !l) return Side::Right;
    return std::nullopt;
  }

  void log(Undo u) { trail_.push_back(u); }

  void add_eq_atom(std::size_t e, int side, std::size_t a) {
    Bits& bits = side_atoms(e, side);
    if (bits.test(a)) return;
    bits.set(a);
    log(Undo{Undo::EqAtom, static_cast<int>(e), side, static_cast<int>(a)});
  }

  /// Adds atom a to S_x and expands every equation containing x.
  void assign(std::size_t x, std::size_t a) {
    if (!assignment_[x].test(a)) {
      assignment_[x].set(a);
      log(Undo{Undo::Assign, static_cast<int>(x), 0, static_cast<int>(a)});
    }
    for (std::size_t e = 0; e < eqs_.size(); ++e) {
      if (eqs_[e].lvar.test(x)) add_eq_atom(e, 0, a);
      if (eqs_[e].rvar.test(x)) add_eq_atom(e, 1, a);
    }
  }

  void expand(std::size_t e) {
    for (std::size_t v = 0; v < nv_; ++v) {
      const Bits& s = assignment_[v];
      for (int side = 0; side < 2; ++side) {
        const Bits& vars = side == 0 ? eqs_[e].lvar : eqs_[e].rvar;
        if (!vars.test(v)) continue;
        for (auto a = s.find_first(); a != Bits::npos; a = s.find_next(a)) add_eq_atom(e, side, a);
      }
    }
  }

  void add_filler(const AtomInfo& ai, Bits& vars, Bits& atoms) const {
    if (ai.filler == AtomInfo::Filler::Variable) vars.set(static_cast<std::size_t>(ai.filler_index));
    if (ai.filler == AtomInfo::Filler::Constant) atoms.set(static_cast<std::size_t>(ai.filler_index));
  }

  /// Whether variable `from` equals `target` or depends on it.
  bool reaches(int from, int target) const {
    std::vector<char> seen(nv_, 0);
    std::vector<int> stack{from};
    while (!stack.empty()) {
      const int y = stack.back();
      stack.pop_back();
      if (y == target) return true;
      if (seen[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = 1;
      const Bits& s = assignment_[static_cast<std::size_t>(y)];
      for (auto a = s.find_first(); a != Bits::npos; a = s.find_next(a)) {
        const int z = p_.atom_variable(static_cast<int>(a));
        if (z >= 0) stack.push_back(z);
      }
    }
    return false;
  }

  void count_other() {
    log(Undo{Undo::CountOther});
    ++other_count_;
  }

  void check_bounds() {
    if (other_count_ > other_bound() || eager_count_ > eager_bound()) ++bound_violations_;
  }

  std::string atom_list(const Bits& bits) const {
    std::string s = "{";
    for (auto a = bits.find_first(); a != Bits::npos; a = bits.find_next(a)) {
      if (s.size() > 1) s += ", ";
      s += to_string(p_.atoms()[a]);
    }
    return s + "}";
  }

  void trace_line(const char* rule, Side side, std::size_t e, const std::string& what) const {
    if (!trace_) return;
    *trace_ << rule << (side == Side::Left ? "-L" : "-R") << " e" << e << ": " << what << '\n';
  }

  IndexedProblem p_;
  std::size_t nv_ = 0;
  std::size_t na_ = 0;
  std::vector<Eq> eqs_;
  std::size_t original_equations_ = 0;
  std::vector<Bits> assignment_;
  std::vector<char> finished_;
  std::set<std::pair<Term, Term>> memo_;
  std::vector<std::pair<Term, Term>> memo_log_;
  std::vector<Undo> trail_;
  std::size_t eager_count_ = 0;
  std::size_t other_count_ = 0;
  std::uint64_t bound_violations_ = 0;
  std::ostream* trace_ = nullptr;
};

struct GoalConfig {
  /// Upper bound on rule applications over the whole search.
  std::optional<std::uint64_t> max_nodes;
  std::ostream* trace = nullptr;
  /// Re-check the state invariants after every rule application.
  bool check_invariants = false;
  /// Experimental: keep searching after a success and collect every
  /// unifier reached, one per per-variable equivalence class. No
  /// completeness claim is made for the collected set.
  bool enumerate_all = false;
};

struct GoalStats {
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
  std::size_t max_eager = 0;
  std::size_t max_other = 0;
  /// Applications beyond #variables (Eager-Assignment) or
  /// #equations × #atoms (Decomposition and Extension) on one branch.
  std::uint64_t bound_violations = 0;
  std::size_t max_equations = 0;
  /// Search states skipped because the same state was already exhausted.
  std::uint64_t cache_hits = 0;
};

struct GoalResult {
  Verdict verdict = Verdict::Unsat;
  std::optional<Substitution> unifier;  // dag form
  Assignment assignment;
  std::vector<Substitution> all;  // enumerate_all only
  GoalStats stats;
};

namespace detail {

class GoalSearch {
 public:
  GoalSearch(const UnificationProblem& g, const GoalConfig& cfg) : g_(g), cfg_(cfg), st_(g) {
    st_.set_trace(cfg.trace);
  }

  GoalResult run() {
    const bool found = search();
    if (found) {
      result_.verdict = Verdict::Sat;
    } else if (budget_hit_) {
      result_.verdict = Verdict::BudgetExceeded;
    } else {
      result_.verdict = result_.all.empty() ? Verdict::Unsat : Verdict::Sat;
      if (!result_.all.empty()) result_.unifier = result_.all.front();
    }
    result_.stats.bound_violations = st_.bound_violations();
    return std::move(result_);
  }

 private:
  bool tick() {
    ++result_.stats.nodes;
    if (cfg_.max_nodes && result_.stats.nodes > *cfg_.max_nodes) {
      budget_hit_ = true;
      return false;
    }
    return true;
  }

  void observe() {
    auto& s = result_.stats;
    s.max_eager = std::max(s.max_eager, st_.eager_applications());
    s.max_other = std::max(s.max_other, st_.other_applications());
    s.max_equations = std::max(s.max_equations, st_.equation_count());
    if (cfg_.check_invariants && !st_.invariants_hold()) {
      throw std::logic_error("goal solver state invariant violated");
    }
  }

  /// Failed states are remembered: the search from a state depends on the
  /// state alone, so reaching it again by another order of choices cannot
  /// succeed either.
  bool search() {
    std::vector<std::uint64_t> key = st_.state_key();
    if (exhausted_.count(key)) {
      ++result_.stats.cache_hits;
      return false;
    }
    const bool found = expand_node();
    if (!found && !budget_hit_ && exhausted_.size() < kMaxCachedStates) exhausted_.insert(std::move(key));
    return found;
  }

  bool expand_node() {
    while (!st_.all_solved()) {
      const RuleOutcome o = st_.apply_some_eager();
      if (o == RuleOutcome::NotApplicable) break;
      if (!tick()) return false;
      if (o == RuleOutcome::Fail) {
        ++result_.stats.failures;
        return false;
      }
      observe();
    }
    const std::size_t e = st_.pick_equation();
    if (e == GoalState::npos) return accept();
    if (st_.has_dead_atom()) {
      ++result_.stats.failures;
      if (cfg_.trace) *cfg_.trace << "fail: an unsolved atom has no rule left\n";
      return false;
    }
    const int atom = st_.pick_atom(e);
    const auto options = st_.choices(e, atom);
    if (options.empty()) {
      ++result_.stats.failures;
      if (cfg_.trace) *cfg_.trace << "fail e" << e << ": no rule for " << to_string(g_atom(atom)) << '\n';
    }
    for (const auto& c : options) {
      if (budget_hit_ || !tick()) return false;
      const std::size_t mark = st_.mark();
      const RuleOutcome o = c.decomposition ? st_.decompose_at(e, atom, c.target) : st_.extend_at(e, atom, c.target);
      if (o == RuleOutcome::Applied) {
        observe();
        if (search()) return true;
      } else {
        ++result_.stats.failures;
      }
      st_.undo(mark);
      if (cfg_.trace) *cfg_.trace << "backtrack e" << e << '\n';
    }
    return false;
  }

  const Term& g_atom(int atom) const { return st_.indexed().atoms()[static_cast<std::size_t>(atom)]; }

  bool accept() {
    Substitution sigma = st_.substitution();
    if (!is_unifier(sigma, g_)) {
      throw std::logic_error("goal solver produced a substitution that is not a unifier");
    }
    if (!cfg_.enumerate_all) {
      result_.assignment = st_.assignment();
      result_.unifier = std::move(sigma);
      return true;
    }
    std::vector<Term> key;
    for (const auto& x : st_.indexed().variables()) key.push_back(reduce(sigma.image(x)));
    if (seen_.insert(std::move(key)).second) result_.all.push_back(std::move(sigma));
    return false;
  }

  const UnificationProblem& g_;
  const GoalConfig& cfg_;
  GoalState st_;
  GoalResult result_;
  bool budget_hit_ = false;
  std::set<std::vector<Term>> seen_;

  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const noexcept {
      return boost::hash_range(k.begin(), k.end());
    }
  };
  static constexpr std::size_t kMaxCachedStates = 1u << 20;
  std::unordered_set<std::vector<std::uint64_t>, KeyHash> exhausted_;
};

}  // namespace detail

inline GoalResult solve_goal(const UnificationProblem& g, const GoalConfig& cfg = {}) {
  return detail::GoalSearch(g, cfg).run();
}

}  // namespace elunif
