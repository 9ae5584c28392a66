#pragma once

// Guess-and-test decision procedure for flat problems: search over the
// assignments S_X ⊆ non-variable atoms of Γ, keep those whose dependency
// relation is acyclic, and test the induced substitution on T_σ.
//
// The search is deterministic. Variables are fixed in term order; for each
// variable the subsets are tried by increasing cardinality and then
// lexicographically in atom order. Branches are cut only when they cannot
// lead to a unifier:
//   - a variable on a side whose opposite side has no top-level variable only
//     takes atoms whose names and roles occur there;
//   - the partial assignment is cyclic;
//   - a side of an equation has no unfixed top-level variable left, and a
//     top-level concept name or existential role of the other side does not
//     occur on it;
//   - an equation whose variables are all (transitively) fixed is not
//     solved by the partial T_σ.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "elunif/flat_index.hpp"
#include "elunif/problem.hpp"
#include "elunif/subsumption.hpp"
#include "elunif/tbox.hpp"

namespace elunif {

struct GuessConfig {
  /// Upper bound on the number of per-variable subset choices tried.
  std::optional<std::uint64_t> max_assignments;
  /// Worker threads for solve_guess. The result does not depend on it.
  unsigned jobs = 1;
};

struct GuessStats {
  std::uint64_t nodes = 0;
  std::uint64_t equation_checks = 0;
  std::uint64_t unifier_checks = 0;
  /// Largest one-level unfolding the T_σ reasoner built, and the linear bound
  /// it must stay within (|T_σ| + |Γ|).
  std::size_t max_unfolding = 0;
  std::uint64_t unfolding_bound = 0;
};

struct GuessResult {
  Verdict verdict = Verdict::Unsat;
  std::optional<Substitution> unifier;  // dag form
  Assignment assignment;
  GuessStats stats;
};

struct EnumerationResult {
  /// False when the budget ran out before the search space was exhausted.
  bool complete = true;
  std::vector<Substitution> unifiers;  // dag form, one per equivalence class
  GuessStats stats;
};

namespace detail {

using Bits = boost::dynamic_bitset<>;
using Choice = std::vector<std::vector<int>>;

/// Calls fn on every subset of {0..m-1}, smaller subsets first, each size in
/// lexicographic order. Stops early when fn returns true.
template <class Fn>
bool for_each_subset(int m, Fn&& fn) {
  std::vector<int> pos;
  for (int k = 0; k <= m; ++k) {
    pos.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(i)] = i;
    while (true) {
      if (fn(pos)) return true;
      int i = k - 1;
      while (i >= 0 && pos[static_cast<std::size_t>(i)] == m - k + i) --i;
      if (i < 0) break;
      ++pos[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return false;
}

class GuessSearch {
 public:
  using OnSolution = std::function<bool(const Choice&)>;

  GuessSearch(const IndexedProblem& p, std::optional<std::uint64_t> budget,
              std::atomic<std::uint64_t>& nodes)
      : p_(p), budget_(budget), nodes_(nodes) {
    const int n = static_cast<int>(p_.variables().size());
    const int a = static_cast<int>(p_.atoms().size());
    std::map<RoleName, int> role_ids;
    for (const auto& ai : p_.info()) {
      if (ai.is_exists) role_ids.try_emplace(ai.role, static_cast<int>(role_ids.size()));
    }
    role_count_ = role_ids.size();
    role_of_.assign(static_cast<std::size_t>(a), -1);
    for (int i = 0; i < a; ++i) {
      const auto& ai = p_.info()[static_cast<std::size_t>(i)];
      if (ai.is_exists) role_of_[static_cast<std::size_t>(i)] = role_ids.at(ai.role);
    }
    // A variable on a side whose opposite side has no top-level variable
    // can only take atoms whose names and roles occur on that opposite side.
    std::vector<Bits> allowed(static_cast<std::size_t>(n), Bits(static_cast<std::size_t>(a)).set());
    for (const auto& e : p_.equations()) {
      for (int side = 0; side < 2; ++side) {
        const auto& vars = side == 0 ? e.lvar : e.rvar;
        const auto& other_vars = side == 0 ? e.rvar : e.lvar;
        const auto& other_atoms = side == 0 ? e.rato : e.lato;
        if (vars.empty() || !other_vars.empty()) continue;
        Bits ok(static_cast<std::size_t>(a));
        for (int i = 0; i < a; ++i) {
          for (int b : other_atoms) {
            const int rb = role_of_[static_cast<std::size_t>(b)];
            const int ri = role_of_[static_cast<std::size_t>(i)];
            if (ri < 0 ? b == i : rb == ri) ok.set(static_cast<std::size_t>(i));
          }
        }
        for (int v : vars) allowed[static_cast<std::size_t>(v)] &= ok;
      }
    }
    candidates_.resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
      for (int i = 0; i < a; ++i) {
        if (p_.atom_variable(i) != x && allowed[static_cast<std::size_t>(x)].test(static_cast<std::size_t>(i))) {
          candidates_[static_cast<std::size_t>(x)].push_back(i);
        }
      }
    }
    chosen_.assign(static_cast<std::size_t>(n), {});
    fixed_.assign(static_cast<std::size_t>(n), 0);
    const std::size_t m = p_.equations().size();
    full_checked_at_.assign(m, kUnchecked);
  }

  /// Runs the search; on_solution returns true to stop. first_subset, when
  /// given, pins the choice for the first variable.
  void run(const OnSolution& on_solution, const std::vector<int>* first_subset = nullptr) {
    on_solution_ = &on_solution;
    first_subset_ = first_subset;
    // Equations without variables are decided before any choice is made.
    if (consistent(-1)) dfs(0);
  }

  bool budget_exceeded() const { return budget_exceeded_; }
  std::uint64_t equation_checks() const { return equation_checks_; }
  const std::vector<int>& candidates(int x) const { return candidates_[static_cast<std::size_t>(x)]; }

 private:
  bool dfs(int depth) {
    const int n = static_cast<int>(p_.variables().size());
    if (depth == n) return (*on_solution_)(chosen_);
    const auto& cand = candidates_[static_cast<std::size_t>(depth)];
    auto try_subset = [&](const std::vector<int>& subset) {
      const std::uint64_t count = ++nodes_;
      if (budget_ && count > *budget_) {
        budget_exceeded_ = true;
        return true;
      }
      chosen_[static_cast<std::size_t>(depth)] = subset;
      fixed_[static_cast<std::size_t>(depth)] = 1;
      reasoner_.reset();
      bool stop = consistent(depth) && dfs(depth + 1);
      fixed_[static_cast<std::size_t>(depth)] = 0;
      chosen_[static_cast<std::size_t>(depth)].clear();
      reasoner_.reset();
      for (auto& c : full_checked_at_) {
        if (c >= depth) c = kUnchecked;
      }
      return stop;
    };
    if (depth == 0 && first_subset_) return try_subset(*first_subset_);
    std::vector<int> subset;
    return for_each_subset(static_cast<int>(cand.size()), [&](const std::vector<int>& pos) {
      subset.clear();
      for (int i : pos) subset.push_back(cand[static_cast<std::size_t>(i)]);
      return try_subset(subset);
    });
  }

  bool reaches(int from, int target, std::vector<char>& seen) const {
    if (from == target) return true;
    if (seen[static_cast<std::size_t>(from)] || !fixed_[static_cast<std::size_t>(from)]) return false;
    seen[static_cast<std::size_t>(from)] = 1;
    for (int atom : chosen_[static_cast<std::size_t>(from)]) {
      const int y = p_.atom_variable(atom);
      if (y >= 0 && reaches(y, target, seen)) return true;
    }
    return false;
  }

  bool closure_fixed(const IndexedEquation& e) const {
    std::vector<char> seen(p_.variables().size(), 0);
    std::vector<int> stack;
    auto push_atoms = [&](const std::vector<int>& atoms) {
      for (int a : atoms) {
        const int y = p_.atom_variable(a);
        if (y >= 0) stack.push_back(y);
      }
    };
    stack.insert(stack.end(), e.lvar.begin(), e.lvar.end());
    stack.insert(stack.end(), e.rvar.begin(), e.rvar.end());
    push_atoms(e.lato);
    push_atoms(e.rato);
    while (!stack.empty()) {
      const int y = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = 1;
      if (!fixed_[static_cast<std::size_t>(y)]) return false;
      push_atoms(chosen_[static_cast<std::size_t>(y)]);
    }
    return true;
  }

  bool has_unfixed(const std::vector<int>& vars) const {
    for (int v : vars) {
      if (!fixed_[static_cast<std::size_t>(v)]) return true;
    }
    return false;
  }

  void side_signature(const std::vector<int>& vars, const std::vector<int>& atoms, Bits& names,
                      Bits& roles) const {
    auto add = [&](int a) {
      const int r = role_of_[static_cast<std::size_t>(a)];
      if (r < 0) {
        names.set(static_cast<std::size_t>(a));
      } else {
        roles.set(static_cast<std::size_t>(r));
      }
    };
    for (int a : atoms) add(a);
    for (int v : vars) {
      if (!fixed_[static_cast<std::size_t>(v)]) continue;
      for (int a : chosen_[static_cast<std::size_t>(v)]) add(a);
    }
  }

  TBoxReasoner& reasoner() {
    if (!reasoner_) {
      std::vector<ConceptDefinition> defs;
      for (std::size_t x = 0; x < chosen_.size(); ++x) {
        if (!fixed_[x]) continue;
        std::vector<Term> parts;
        for (int a : chosen_[x]) parts.push_back(p_.atoms()[static_cast<std::size_t>(a)]);
        defs.push_back({p_.variables()[x], Term::conj(std::move(parts))});
      }
      reasoner_.emplace(TBox(std::move(defs)));
    }
    return *reasoner_;
  }

  /// Checks the state after fixing variable `depth`; -1 checks the root.
  bool consistent(int depth) {
    if (depth >= 0) {
      std::vector<char> seen(p_.variables().size(), 0);
      for (int atom : chosen_[static_cast<std::size_t>(depth)]) {
        const int y = p_.atom_variable(atom);
        if (y >= 0 && reaches(y, depth, seen)) return false;
      }
    }
    const auto& eqs = p_.equations();
    const std::size_t a = p_.atoms().size();
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      const auto& e = eqs[i];
      // Once one side has no unfixed top-level variable, its top-level
      // constants and roles are final and must cover the other side's.
      const bool open_l = has_unfixed(e.lvar);
      const bool open_r = has_unfixed(e.rvar);
      if (!open_l || !open_r) {
        Bits ln(a), rn(a), lr(role_count_), rr(role_count_);
        side_signature(e.lvar, e.lato, ln, lr);
        side_signature(e.rvar, e.rato, rn, rr);
        if (!open_r && (!ln.is_subset_of(rn) || !lr.is_subset_of(rr))) return false;
        if (!open_l && (!rn.is_subset_of(ln) || !rr.is_subset_of(lr))) return false;
      }
      if (full_checked_at_[i] == kUnchecked && closure_fixed(e)) {
        ++equation_checks_;
        const auto& eq = p_.problem().equations()[i];
        if (!reasoner().equivalent(eq.lhs, eq.rhs)) return false;
        full_checked_at_[i] = depth;
      }
    }
    return true;
  }

  const IndexedProblem& p_;
  std::optional<std::uint64_t> budget_;
  std::atomic<std::uint64_t>& nodes_;
  const OnSolution* on_solution_ = nullptr;
  const std::vector<int>* first_subset_ = nullptr;
  std::size_t role_count_ = 0;
  std::vector<int> role_of_;
  std::vector<std::vector<int>> candidates_;
  Choice chosen_;
  std::vector<char> fixed_;
  static constexpr int kUnchecked = -2;
  std::vector<int> full_checked_at_;
  std::optional<TBoxReasoner> reasoner_;
  bool budget_exceeded_ = false;
  std::uint64_t equation_checks_ = 0;
};

inline Assignment assignment_of(const IndexedProblem& p, const Choice& chosen) {
  Assignment a;
  for (std::size_t x = 0; x < chosen.size(); ++x) {
    std::set<Term> s;
    for (int i : chosen[x]) s.insert(p.atoms()[static_cast<std::size_t>(i)]);
    a.assign(p.variables()[x], std::move(s));
  }
  return a;
}

/// Verifies a candidate on T_σ and records the unfolding instrumentation.
/// Throws std::logic_error if it is not a unifier; the search only reports
/// candidates that passed every equation check.
inline Substitution certify(const IndexedProblem& p, const Assignment& a, GuessStats& stats) {
  Substitution sigma = substitution_of_assignment(a);
  TBoxReasoner reasoner(sigma.as_tbox());
  ++stats.unifier_checks;
  for (const auto& e : p.problem().equations()) {
    if (!reasoner.equivalent(e.lhs, e.rhs)) {
      throw std::logic_error("guess solver produced a substitution that is not a unifier");
    }
  }
  const std::uint64_t bound = reasoner.tbox().total_size() + p.problem().size();
  stats.max_unfolding = std::max(stats.max_unfolding, reasoner.max_unfolding());
  stats.unfolding_bound = std::max<std::uint64_t>(stats.unfolding_bound, bound);
  if (reasoner.max_unfolding() > bound) {
    throw std::logic_error("T_σ unfolding exceeded the linear bound");
  }
  return sigma;
}

}  // namespace detail

inline GuessResult solve_guess(const UnificationProblem& g, const GuessConfig& cfg = {}) {
  const IndexedProblem p(g);
  GuessResult result;
  std::atomic<std::uint64_t> nodes{0};

  if (cfg.jobs <= 1 || p.variables().empty()) {
    detail::GuessSearch search(p, cfg.max_assignments, nodes);
    std::optional<detail::Choice> found;
    search.run([&](const detail::Choice& c) {
      found = c;
      return true;
    });
    result.stats.equation_checks = search.equation_checks();
    result.stats.nodes = nodes.load();
    if (found) {
      result.assignment = detail::assignment_of(p, *found);
      result.unifier = detail::certify(p, result.assignment, result.stats);
      result.verdict = Verdict::Sat;
    } else {
      result.verdict = search.budget_exceeded() ? Verdict::BudgetExceeded : Verdict::Unsat;
    }
    return result;
  }

  // Parallel: split on the subsets of the first variable and keep the
  // solution with the smallest subset index, which is the one the sequential
  // search would find first.
  std::vector<std::vector<int>> firsts;
  {
    detail::GuessSearch probe(p, std::nullopt, nodes);
    const auto& cand = probe.candidates(0);
    detail::for_each_subset(static_cast<int>(cand.size()), [&](const std::vector<int>& pos) {
      std::vector<int> s;
      for (int i : pos) s.push_back(cand[static_cast<std::size_t>(i)]);
      firsts.push_back(std::move(s));
      return false;
    });
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{firsts.size()};
  std::atomic<bool> budget_hit{false};
  std::atomic<std::uint64_t> checks{0};
  std::mutex mutex;
  std::optional<detail::Choice> found;
  auto worker = [&] {
    while (true) {
      const std::size_t k = next++;
      if (k >= firsts.size() || k >= best.load()) return;
      detail::GuessSearch search(p, cfg.max_assignments, nodes);
      std::optional<detail::Choice> local;
      search.run(
          [&](const detail::Choice& c) {
            local = c;
            return true;
          },
          &firsts[k]);
      checks += search.equation_checks();
      if (search.budget_exceeded()) budget_hit = true;
      if (local) {
        std::lock_guard lock(mutex);
        if (k < best.load()) {
          best = k;
          found = std::move(local);
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned i = 0; i < cfg.jobs; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  result.stats.nodes = nodes.load();
  result.stats.equation_checks = checks.load();
  if (found) {
    result.assignment = detail::assignment_of(p, *found);
    result.unifier = detail::certify(p, result.assignment, result.stats);
    result.verdict = Verdict::Sat;
  } else {
    result.verdict = budget_hit ? Verdict::BudgetExceeded : Verdict::Unsat;
  }
  return result;
}

/// All unifiers induced by acyclic assignments, one representative per
/// class of per-variable equivalence. Exponential; meant for small problems.
inline EnumerationResult enumerate_unifiers(const UnificationProblem& g, const GuessConfig& cfg = {}) {
  const IndexedProblem p(g);
  EnumerationResult result;
  std::atomic<std::uint64_t> nodes{0};
  detail::GuessSearch search(p, cfg.max_assignments, nodes);
  std::set<std::vector<Term>> classes;
  search.run([&](const detail::Choice& c) {
    const Assignment a = detail::assignment_of(p, c);
    Substitution sigma = detail::certify(p, a, result.stats);
    std::vector<Term> key;
    for (const auto& x : p.variables()) key.push_back(reduce(sigma.image(x)));
    if (classes.insert(std::move(key)).second) result.unifiers.push_back(std::move(sigma));
    return false;
  });
  result.complete = !search.budget_exceeded();
  result.stats.nodes = nodes.load();
  result.stats.equation_checks = search.equation_checks();
  return result;
}

}  // namespace elunif
