#include "pomc/wmlo_eval.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "pomc/error.hpp"
#include "pomc/matrix.hpp"
#include "pomc/translate.hpp"

namespace pomc {

namespace {

using Env = std::map<std::string, unsigned long>;
using Prefix = std::vector<StateIndex>;
using Tri = std::optional<bool>;

unsigned long time_of(const TimeTerm& t, const Env& env) {
  if (!t.is_variable()) return t.value;
  auto it = env.find(t.var);
  if (it == env.end())
    throw Error(ErrorCode::unbound_variable, "unbound time variable " + t.var);
  return it->second;
}

bool contains_quantifier(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::ForallT> || std::is_same_v<T, F::ExistsT>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Not> || std::is_same_v<T, F::KnowAt> ||
                             std::is_same_v<T, F::ForallSet>) {
          return contains_quantifier(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return contains_quantifier(x.a) || contains_quantifier(x.b);
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          for (const ProbTermW& t : x.terms) {
            if (contains_quantifier(t.body)) return true;
            if (t.given && contains_quantifier(t.given)) return true;
          }
          return false;
        } else {
          return false;
        }
      },
      f->node);
}

/// Largest time the formula can mention, with `bound` standing in for every
/// variable. Every evaluation is settled by run prefixes one longer.
unsigned long deepest_time(const FormulaWPtr& f, unsigned long bound) {
  using F = FormulaW;
  auto of_time = [&](const TimeTerm& t) { return t.is_variable() ? bound : t.value; };
  return std::visit(
      [&](const auto& x) -> unsigned long {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::PropAt> || std::is_same_v<T, F::SetAt>) {
          return of_time(x.at);
        } else if constexpr (std::is_same_v<T, F::Less>) {
          return std::max(of_time(x.a), of_time(x.b));
        } else if constexpr (std::is_same_v<T, F::Not> || std::is_same_v<T, F::ForallT> ||
                             std::is_same_v<T, F::ExistsT> || std::is_same_v<T, F::ForallSet>) {
          return deepest_time(x.a, bound);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return std::max(deepest_time(x.a, bound), deepest_time(x.b, bound));
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return std::max(of_time(x.at), deepest_time(x.a, bound));
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          unsigned long deep = 0;
          for (const ProbTermW& t : x.terms) {
            deep = std::max(deep, deepest_time(t.body, bound));
            if (t.kind == ProbTermW::Kind::agent_at) deep = std::max(deep, of_time(t.at));
            if (t.given) deep = std::max(deep, deepest_time(t.given, bound));
          }
          return deep;
        } else {
          return 0;
        }
      },
      f->node);
}

/// True when no atom outside a global probability operator reads the run:
/// such a formula has the same truth value on every run.
bool run_independent(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::PropAt> || std::is_same_v<T, F::SetAt> ||
                      std::is_same_v<T, F::KnowAt>) {
          return false;
        } else if constexpr (std::is_same_v<T, F::Not> || std::is_same_v<T, F::ForallT> ||
                             std::is_same_v<T, F::ExistsT> || std::is_same_v<T, F::ForallSet>) {
          return run_independent(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return run_independent(x.a) && run_independent(x.b);
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          for (const ProbTermW& t : x.terms)
            if (t.kind == ProbTermW::Kind::agent_at) return false;
          return true;
        } else {
          return true;
        }
      },
      f->node);
}

/// Fragment whose truth is a function of the run's states at fixed times:
/// global probabilities of such bodies reduce to joint marginals.
bool marginal_friendly(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True> || std::is_same_v<T, F::PropAt> ||
                      std::is_same_v<T, F::Less>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return marginal_friendly(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return marginal_friendly(x.a) && marginal_friendly(x.b);
        } else {
          return false;
        }
      },
      f->node);
}

void collect_atom_times(const FormulaWPtr& f, const Env& env, std::set<unsigned long>& out) {
  using F = FormulaW;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::PropAt>) {
          out.insert(time_of(x.at, env));
        } else if constexpr (std::is_same_v<T, F::Not>) {
          collect_atom_times(x.a, env, out);
        } else if constexpr (std::is_same_v<T, F::And>) {
          collect_atom_times(x.a, env, out);
          collect_atom_times(x.b, env, out);
        }
      },
      f->node);
}

bool sat_at_states(const PODTMC& m, const FormulaWPtr& f, const Env& env,
                   const std::map<unsigned long, StateIndex>& at) {
  using F = FormulaW;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True>) {
          return true;
        } else if constexpr (std::is_same_v<T, F::PropAt>) {
          return m.state_satisfies(at.at(time_of(x.at, env)), x.name);
        } else if constexpr (std::is_same_v<T, F::Less>) {
          return time_of(x.a, env) < time_of(x.b, env);
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return !sat_at_states(m, x.a, env, at);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return sat_at_states(m, x.a, env, at) && sat_at_states(m, x.b, env, at);
        } else {
          throw std::logic_error("state tuples cover only the propositional fragment");
        }
      },
      f->node);
}

/// Evaluation against a finite run prefix returns nullopt when the prefix is
/// too short to settle the answer; the caller then branches over one-step
/// extensions. Every query settles once the prefix covers the deepest
/// mentioned time, so the recursion is bounded by `cap` states.
class Evaluator {
public:
  Evaluator(const PODTMC& m, Semantics sem, unsigned long bound, std::size_t cap)
      : m_(m), sem_(sem), bound_(bound), cap_(cap) {}

  bool forall_extensions(Prefix& base, const FormulaWPtr& f, Env& env) {
    Tri r = eval3(f, env, base);
    if (r) return *r;
    if (base.size() >= cap_) throw std::logic_error("run prefix did not settle the formula");
    for (StateIndex s = 0; s < m_.num_states(); ++s) {
      if (m_.trans.at(base.back(), s).is_zero()) continue;
      base.push_back(s);
      bool ok = forall_extensions(base, f, env);
      base.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  Tri eval3(const FormulaWPtr& f, Env& env, const Prefix& run) {
    using F = FormulaW;
    return std::visit(
        [&](const auto& x) -> Tri {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, F::True>) {
            return true;
          } else if constexpr (std::is_same_v<T, F::PropAt>) {
            std::size_t n = time_of(x.at, env);
            if (n >= run.size()) return std::nullopt;
            return m_.state_satisfies(run[n], x.name);
          } else if constexpr (std::is_same_v<T, F::Less>) {
            return time_of(x.a, env) < time_of(x.b, env);
          } else if constexpr (std::is_same_v<T, F::Not>) {
            Tri r = eval3(x.a, env, run);
            if (!r) return r;
            return !*r;
          } else if constexpr (std::is_same_v<T, F::And>) {
            Tri a = eval3(x.a, env, run);
            if (a && !*a) return false;
            Tri b = eval3(x.b, env, run);
            if (b && !*b) return false;
            if (a && b) return true;
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, F::KnowAt>) {
            std::size_t n = time_of(x.at, env);
            if (n >= run.size()) return std::nullopt;
            for (auto& [p, w] : matching(x.agent, run, n))
              if (!forall_extensions(p, x.a, env)) return false;
            return true;
          } else if constexpr (std::is_same_v<T, F::ForallT>) {
            return quantify(x.var, x.a, env, run, false);
          } else if constexpr (std::is_same_v<T, F::ExistsT>) {
            return quantify(x.var, x.a, env, run, true);
          } else if constexpr (std::is_same_v<T, F::Compare>) {
            std::vector<Rational> values;
            values.reserve(x.terms.size());
            for (const ProbTermW& t : x.terms) {
              auto v = term3(t, env, run);
              if (!v) return std::nullopt;
              values.push_back(*v);
            }
            return rel_holds(x.poly.eval(values), x.rel, x.rhs);
          } else {
            throw Error(ErrorCode::unsupported_second_order,
                        "set variables cannot be evaluated: " + to_string(f));
          }
        },
        f->node);
  }

private:
  const PODTMC& m_;
  Semantics sem_;
  unsigned long bound_;
  std::size_t cap_;
  std::map<unsigned long, RationalMatrix> powers_;
  std::map<unsigned long, Distribution> marginals_;

  const RationalMatrix& power(unsigned long k) {
    auto it = powers_.find(k);
    if (it != powers_.end()) return it->second;
    return powers_.emplace(k, matrix_power(m_.trans, k)).first->second;
  }

  const Distribution& marginal(unsigned long t) {
    auto it = marginals_.find(t);
    if (it != marginals_.end()) return it->second;
    return marginals_.emplace(t, distribution_at(m_, t)).first->second;
  }

  Tri quantify(const std::string& var, const FormulaWPtr& body, Env& env, const Prefix& run,
               bool existential) {
    auto shadowed = env.find(var);
    std::optional<unsigned long> saved;
    if (shadowed != env.end()) saved = shadowed->second;
    bool unknown = false;
    Tri out;
    for (unsigned long v = 0; v <= bound_ && !out; ++v) {
      env[var] = v;
      Tri r = eval3(body, env, run);
      if (!r)
        unknown = true;
      else if (*r == existential)
        out = existential;
    }
    if (saved)
      env[var] = *saved;
    else
      env.erase(var);
    if (out) return out;
    if (unknown) return std::nullopt;
    return !existential;
  }

  /// Positive prefixes of length n+1 sharing the run's local state at n, with
  /// their cylinder weights.
  std::vector<std::pair<Prefix, Rational>> matching(const std::string& agent, const Prefix& run,
                                                    std::size_t n) {
    AgentRef ref = m_.resolve_agent(agent);
    std::vector<std::string> want(n + 1);
    if (sem_ == Semantics::spr)
      for (std::size_t j = 0; j <= n; ++j) want[j] = m_.observation(ref, run[j]);
    else
      want[n] = m_.observation(ref, run[n]);
    std::vector<std::pair<Prefix, Rational>> out;
    Prefix cur;
    auto walk = [&](auto&& self, const Rational& w) -> void {
      std::size_t j = cur.size();
      if (j == want.size()) {
        out.emplace_back(cur, w);
        return;
      }
      for (StateIndex s = 0; s < m_.num_states(); ++s) {
        const Rational& step = j == 0 ? m_.init[s] : m_.trans.at(cur.back(), s);
        if (step.is_zero()) continue;
        if (!want[j].empty() && m_.observation(ref, s) != want[j]) continue;
        cur.push_back(s);
        self(self, w * step);
        cur.pop_back();
      }
    };
    walk(walk, Rational(1));
    return out;
  }

  /// Measure of the runs that extend `base` and satisfy the formula; `w` is
  /// the cylinder weight of `base`.
  Rational mass_sat(Prefix& base, const Rational& w, const FormulaWPtr& f, Env& env) {
    Tri r = eval3(f, env, base);
    if (r) return *r ? w : Rational(0);
    if (base.size() >= cap_) throw std::logic_error("run prefix did not settle the formula");
    Rational total;
    for (StateIndex s = 0; s < m_.num_states(); ++s) {
      const Rational& step = m_.trans.at(base.back(), s);
      if (step.is_zero()) continue;
      base.push_back(s);
      total += mass_sat(base, w * step, f, env);
      base.pop_back();
    }
    return total;
  }

  Rational prob_global(const FormulaWPtr& f, Env& env) {
    if (marginal_friendly(f)) {
      std::set<unsigned long> time_set;
      collect_atom_times(f, env, time_set);
      std::map<unsigned long, StateIndex> at;
      if (time_set.empty()) return sat_at_states(m_, f, env, at) ? Rational(1) : Rational(0);
      std::vector<unsigned long> times(time_set.begin(), time_set.end());
      Rational total;
      auto tuples = [&](auto&& self, std::size_t j, const Rational& w) -> void {
        if (j == times.size()) {
          if (sat_at_states(m_, f, env, at)) total += w;
          return;
        }
        for (StateIndex s = 0; s < m_.num_states(); ++s) {
          Rational step = j == 0 ? marginal(times[0])[s]
                                 : power(times[j] - times[j - 1]).at(at.at(times[j - 1]), s);
          if (step.is_zero()) continue;
          at[times[j]] = s;
          self(self, j + 1, w * step);
        }
        at.erase(times[j]);
      };
      tuples(tuples, 0, Rational(1));
      return total;
    }
    Rational total;
    Prefix base;
    for (StateIndex s = 0; s < m_.num_states(); ++s) {
      if (m_.init[s].is_zero()) continue;
      base.assign(1, s);
      total += mass_sat(base, m_.init[s], f, env);
    }
    return total;
  }

  std::optional<Rational> term3(const ProbTermW& t, Env& env, const Prefix& run) {
    if (t.kind == ProbTermW::Kind::global) return prob_global(t.body, env);
    if (t.kind == ProbTermW::Kind::conditional)
      throw Error(ErrorCode::invalid_argument,
                  "conditional probability terms must be cleared before evaluation");
    std::size_t n = time_of(t.at, env);
    if (n >= run.size()) return std::nullopt;
    Rational num, den;
    for (auto& [p, w] : matching(t.agent, run, n)) {
      den += w;
      num += mass_sat(p, w, t.body, env);
    }
    return num / den;
  }
};

FormulaWPtr prepared(const FormulaWPtr& f) {
  if (contains_second_order(f))
    throw Error(ErrorCode::unsupported_second_order,
                "set variables cannot be evaluated: " + to_string(f));
  auto free = free_time_variables(f);
  if (!free.empty())
    throw Error(ErrorCode::unbound_variable, "free time variable " + *free.begin());
  return normalize_conditionals(f);
}

void require_run(const PODTMC& m, const PathPrefix& run) {
  if (run.states.empty())
    throw Error(ErrorCode::invalid_prefix, "a run prefix needs at least the time-0 state");
  for (StateIndex s : run.states)
    if (s >= m.num_states())
      throw Error(ErrorCode::unknown_state, "state index " + std::to_string(s) + " out of range");
  if (cylinder_probability(m, run).is_zero())
    throw Error(ErrorCode::invalid_prefix, "prefix has probability 0");
}

} // namespace

bool eval_wmlo_at(const PODTMC& m, Semantics sem, const FormulaWPtr& f, const PathPrefix& run,
                  unsigned long bound) {
  require_run(m, run);
  FormulaWPtr g = prepared(f);
  Evaluator ev(m, sem, bound, deepest_time(g, bound) + 1);
  Env env;
  Prefix base = run.states;
  return ev.forall_extensions(base, g, env);
}

Verdict eval_wmlo(const PODTMC& m, Semantics sem, const FormulaWPtr& f,
                  std::optional<unsigned long> bound) {
  FormulaWPtr g = prepared(f);
  if (!bound && contains_quantifier(g))
    throw Error(ErrorCode::unbounded_quantifier,
                "time quantifiers need an explicit range bound");
  unsigned long T = bound.value_or(0);
  Evaluator ev(m, sem, T, deepest_time(g, T) + 1);

  std::vector<std::string> chain;
  FormulaWPtr body = g;
  while (auto* ex = std::get_if<FormulaW::ExistsT>(&body->node)) {
    if (std::find(chain.begin(), chain.end(), ex->var) != chain.end()) break;
    chain.push_back(ex->var);
    body = ex->a;
  }
  if (!chain.empty() && run_independent(body)) {
    std::vector<unsigned long> assign(chain.size(), 0);
    Env env;
    Prefix none;
    for (;;) {
      for (std::size_t j = 0; j < chain.size(); ++j) env[chain[j]] = assign[j];
      Tri r = ev.eval3(body, env, none);
      if (!r) throw std::logic_error("run-independent formula left undetermined");
      if (*r) {
        std::vector<std::pair<std::string, unsigned long>> witness;
        for (std::size_t j = 0; j < chain.size(); ++j) witness.emplace_back(chain[j], assign[j]);
        return Verdict::witness(std::move(witness));
      }
      std::size_t j = chain.size();
      while (j > 0 && assign[j - 1] == T) assign[--j] = 0;
      if (j == 0) break;
      ++assign[j - 1];
    }
    return Verdict::no_witness_up_to(T);
  }

  Env env;
  Prefix base;
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    if (m.init[s].is_zero()) continue;
    base.assign(1, s);
    if (!ev.forall_extensions(base, g, env)) return Verdict::fails();
  }
  return Verdict::holds();
}

} // namespace pomc
