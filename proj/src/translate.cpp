#include "pomc/translate.hpp"

#include <map>
#include <utility>

#include "pomc/error.hpp"

namespace pomc {

namespace {

FormulaWPtr conj(const std::vector<FormulaWPtr>& parts) {
  if (parts.empty()) return w_true();
  FormulaWPtr acc = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) acc = w_and(acc, parts[k]);
  return acc;
}

struct Prop2Translator {
  const PODTMC& model;
  Semantics sem;
  unsigned long next_exists = 0;
  unsigned long next_forall = 0;

  FormulaWPtr at_successor(const TimeTerm& t, const FormulaWPtr& rest_of_u, const TimeTerm& u,
                           const std::string& u_name) {
    // u = t+1 spelled with < alone: t < u and every v > t satisfies u <= v.
    std::string v_name = "v" + std::to_string(++next_forall);
    TimeTerm v = TimeTerm::variable(v_name);
    FormulaWPtr unique_least = w_forall(v_name, w_implies(w_less(t, v), w_time_le(u, v)));
    return w_exists(u_name, w_and(w_and(w_less(t, u), unique_least), rest_of_u));
  }

  ProbTermW term(const ProbTermK& p, const TimeTerm& t) {
    if (p.kind == ProbKind::prior)
      return agent_prob_at(p.agent, TimeTerm::constant(0), tr(p.body, TimeTerm::constant(0)));
    return agent_prob_at(p.agent, t, tr(p.body, t));
  }

  FormulaWPtr bounded(const FormulaK::BoundedUntil& x, const TimeTerm& t, unsigned long left) {
    FormulaWPtr now = tr(x.b, t);
    if (left == 0) return now;
    std::string u_name = "u" + std::to_string(++next_exists);
    TimeTerm u = TimeTerm::variable(u_name);
    FormulaWPtr later = at_successor(t, bounded(x, u, left - 1), u, u_name);
    return w_or(now, w_and(tr(x.a, t), later));
  }

  FormulaWPtr tr(const FormulaKPtr& f, const TimeTerm& t) {
    using F = FormulaK;
    return std::visit(
        [&](const auto& x) -> FormulaWPtr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, F::True>) {
            return w_true();
          } else if constexpr (std::is_same_v<T, F::Prop>) {
            return w_prop_at(x.name, t);
          } else if constexpr (std::is_same_v<T, F::Not>) {
            return w_not(tr(x.a, t));
          } else if constexpr (std::is_same_v<T, F::And>) {
            return w_and(tr(x.a, t), tr(x.b, t));
          } else if constexpr (std::is_same_v<T, F::AllRuns>) {
            if (sem == Semantics::spr) return w_know_at(kTopAgent, t, tr(x.a, t));
            // The clock local state forgets the run's past; pinning the
            // initial state with per-state propositions restores it.
            FormulaWPtr body = tr(x.a, t);
            std::vector<FormulaWPtr> parts;
            for (const std::string& name : model.states) {
              FormulaWPtr pin = w_prop_at(state_proposition(name), TimeTerm::constant(0));
              parts.push_back(w_implies(pin, w_know_at(kTopAgent, t, w_implies(pin, body))));
            }
            return conj(parts);
          } else if constexpr (std::is_same_v<T, F::Next>) {
            std::string u_name = "u" + std::to_string(++next_exists);
            TimeTerm u = TimeTerm::variable(u_name);
            return at_successor(t, tr(x.a, u), u, u_name);
          } else if constexpr (std::is_same_v<T, F::Until>) {
            std::string u_name = "u" + std::to_string(++next_exists);
            std::string v_name = "v" + std::to_string(++next_forall);
            TimeTerm u = TimeTerm::variable(u_name);
            TimeTerm v = TimeTerm::variable(v_name);
            FormulaWPtr before =
                w_forall(v_name, w_implies(w_and(w_time_le(t, v), w_less(v, u)), tr(x.a, v)));
            return w_exists(u_name, w_and(w_and(w_time_le(t, u), tr(x.b, u)), before));
          } else if constexpr (std::is_same_v<T, F::BoundedUntil>) {
            return bounded(x, t, x.bound);
          } else if constexpr (std::is_same_v<T, F::Know>) {
            return w_know_at(x.agent, t, tr(x.a, t));
          } else {
            static_assert(std::is_same_v<T, F::Compare>);
            std::vector<ProbTermW> terms;
            for (const ProbTermK& p : x.terms) terms.push_back(term(p, t));
            return w_compare(terms, x.poly, x.rel, x.rhs);
          }
        },
        f->node);
  }
};

/// Either a term kept as-is or a quotient of two run probabilities whose
/// denominator must be cleared.
struct TermImage {
  ProbTermW plain;             // valid when !is_ratio
  ProbTermW num, den;          // valid when is_ratio
  bool is_ratio = false;
};

/// Rebuilds `poly rel rhs` over the images, multiplying every monomial by
/// enough denominator powers to remove all quotients. Sound because the
/// denominators are probabilities of conditioning events, assumed positive.
FormulaWPtr clear_ratios(const std::vector<TermImage>& images, const Polynomial& poly, Rel rel,
                         const Rational& rhs) {
  Polynomial shifted = poly - Polynomial::constant(rhs);
  std::vector<unsigned> den_power(images.size(), 0);
  for (std::size_t v = 0; v < images.size(); ++v)
    if (images[v].is_ratio) den_power[v] = shifted.degree_in(v);

  // Final term list: plain image of v, or (numerator, denominator) pair.
  std::vector<ProbTermW> terms;
  std::vector<std::size_t> plain_var(images.size()), num_var(images.size()),
      den_var(images.size());
  for (std::size_t v = 0; v < images.size(); ++v) {
    if (images[v].is_ratio) {
      num_var[v] = terms.size();
      terms.push_back(images[v].num);
      den_var[v] = terms.size();
      terms.push_back(images[v].den);
    } else {
      plain_var[v] = terms.size();
      terms.push_back(images[v].plain);
    }
  }

  Polynomial cleared;
  for (const auto& [mono, coef] : shifted.terms()) {
    Polynomial product = Polynomial::constant(coef);
    std::vector<unsigned> used(images.size(), 0);
    for (const auto& [var, exp] : mono) {
      if (var >= images.size()) continue;
      used[var] = exp;
      if (images[var].is_ratio)
        product = product * Polynomial::variable(num_var[var]).pow(exp);
      else
        product = product * Polynomial::variable(plain_var[var]).pow(exp);
    }
    for (std::size_t v = 0; v < images.size(); ++v)
      if (den_power[v] > used[v])
        product = product * Polynomial::variable(den_var[v]).pow(den_power[v] - used[v]);
    cleared = cleared + product;
  }
  return w_compare(terms, cleared, rel, Rational(0));
}

struct ClockEliminator {
  const PODTMC& model;

  std::vector<std::string> guard_props(const std::string& agent) const {
    AgentRef ref = model.resolve_agent(agent);
    if (ref.kind == AgentRef::Kind::bot) return {};
    std::vector<std::string> props;
    if (ref.kind == AgentRef::Kind::top) {
      for (const std::string& name : model.states) props.push_back(state_proposition(name));
      return props;
    }
    for (const std::string& symbol : model.observation_range(ref))
      props.push_back(observation_proposition(model.agents[ref.index], symbol));
    return props;
  }

  ProbTermW elim_term(const ProbTermW& t) {
    ProbTermW out = t;
    out.body = elim(t.body);
    if (t.kind == ProbTermW::Kind::conditional) out.given = elim(t.given);
    return out;
  }

  FormulaWPtr elim_compare(const FormulaW::Compare& x) {
    std::vector<ProbTermW> terms;
    bool any_agent = false;
    for (const ProbTermW& t : x.terms) {
      terms.push_back(elim_term(t));
      any_agent = any_agent || t.kind == ProbTermW::Kind::agent_at;
    }
    if (!any_agent) return w_compare(terms, x.poly, x.rel, x.rhs);

    // Group agent terms by (agent, time): each group shares one observation
    // choice, and the comparison is asserted under every guard combination.
    struct Context {
      std::string agent;
      TimeTerm at;
      std::vector<std::string> guards;
    };
    std::vector<Context> contexts;
    std::vector<std::size_t> context_of(terms.size(), 0);
    for (std::size_t v = 0; v < terms.size(); ++v) {
      if (terms[v].kind != ProbTermW::Kind::agent_at) continue;
      std::size_t at = contexts.size();
      for (std::size_t c = 0; c < contexts.size(); ++c)
        if (contexts[c].agent == terms[v].agent && contexts[c].at == terms[v].at) {
          at = c;
          break;
        }
      if (at == contexts.size())
        contexts.push_back({terms[v].agent, terms[v].at, guard_props(terms[v].agent)});
      context_of[v] = at;
    }

    std::vector<FormulaWPtr> cases;
    std::vector<std::size_t> choice(contexts.size(), 0);
    while (true) {
      std::vector<FormulaWPtr> guards;
      for (std::size_t c = 0; c < contexts.size(); ++c)
        if (!contexts[c].guards.empty())
          guards.push_back(w_prop_at(contexts[c].guards[choice[c]], contexts[c].at));

      std::vector<TermImage> images(terms.size());
      for (std::size_t v = 0; v < terms.size(); ++v) {
        const ProbTermW& t = terms[v];
        if (t.kind != ProbTermW::Kind::agent_at) {
          images[v] = {t, {}, {}, false};
          continue;
        }
        const Context& ctx = contexts[context_of[v]];
        if (ctx.guards.empty()) { // blind agent: conditioning is vacuous
          images[v] = {global_prob(t.body), {}, {}, false};
          continue;
        }
        FormulaWPtr seen = w_prop_at(ctx.guards[choice[context_of[v]]], ctx.at);
        images[v] = {{}, global_prob(w_and(seen, t.body)), global_prob(seen), true};
      }
      FormulaWPtr atom = clear_ratios(images, x.poly, x.rel, x.rhs);
      cases.push_back(guards.empty() ? atom : w_implies(conj(guards), atom));

      std::size_t c = 0;
      for (; c < contexts.size(); ++c) {
        if (contexts[c].guards.empty()) continue;
        if (++choice[c] < contexts[c].guards.size()) break;
        choice[c] = 0;
      }
      if (c == contexts.size()) break;
    }
    return conj(cases);
  }

  FormulaWPtr elim(const FormulaWPtr& f) {
    using F = FormulaW;
    return std::visit(
        [&](const auto& x) -> FormulaWPtr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, F::True> || std::is_same_v<T, F::PropAt> ||
                        std::is_same_v<T, F::SetAt> || std::is_same_v<T, F::Less>) {
            return f;
          } else if constexpr (std::is_same_v<T, F::Not>) {
            return w_not(elim(x.a));
          } else if constexpr (std::is_same_v<T, F::And>) {
            return w_and(elim(x.a), elim(x.b));
          } else if constexpr (std::is_same_v<T, F::KnowAt>) {
            FormulaWPtr body = elim(x.a);
            AgentRef ref = model.resolve_agent(x.agent);
            if (ref.kind == AgentRef::Kind::bot) return w_know_at(x.agent, x.at, body);
            std::vector<FormulaWPtr> parts;
            for (const std::string& prop : guard_props(x.agent)) {
              FormulaWPtr seen = w_prop_at(prop, x.at);
              parts.push_back(
                  w_implies(seen, w_know_at(kBotAgent, x.at, w_implies(seen, body))));
            }
            return conj(parts);
          } else if constexpr (std::is_same_v<T, F::ForallT>) {
            return w_forall(x.var, elim(x.a));
          } else if constexpr (std::is_same_v<T, F::ExistsT>) {
            return w_exists(x.var, elim(x.a));
          } else if constexpr (std::is_same_v<T, F::ForallSet>) {
            return w_forall_set(x.set, elim(x.a));
          } else {
            static_assert(std::is_same_v<T, F::Compare>);
            return elim_compare(x);
          }
        },
        f->node);
  }
};

} // namespace

FormulaWPtr translate_prop2(const FormulaKPtr& f, Semantics sem, const PODTMC& model,
                            const std::string& time_var) {
  Prop2Translator tr{model, sem};
  return tr.tr(f, TimeTerm::variable(time_var));
}

FormulaWPtr eliminate_clock(const FormulaWPtr& f, const PODTMC& model) {
  ClockEliminator elim{model};
  return elim.elim(f);
}

FormulaWPtr normalize_conditional(const FormulaWPtr& atom) {
  const auto* cmp = std::get_if<FormulaW::Compare>(&atom->node);
  if (!cmp) throw Error(ErrorCode::invalid_argument, "expected a comparison atom");
  bool any_ratio = false;
  std::vector<TermImage> images(cmp->terms.size());
  for (std::size_t v = 0; v < cmp->terms.size(); ++v) {
    const ProbTermW& t = cmp->terms[v];
    if (t.kind != ProbTermW::Kind::conditional) {
      images[v] = {t, {}, {}, false};
    } else if (std::holds_alternative<FormulaW::True>(t.given->node)) {
      images[v] = {global_prob(t.body), {}, {}, false};
    } else {
      images[v] = {{}, global_prob(w_and(t.body, t.given)), global_prob(t.given), true};
      any_ratio = true;
    }
  }
  if (!any_ratio) {
    std::vector<ProbTermW> terms;
    for (const TermImage& im : images) terms.push_back(im.plain);
    return w_compare(terms, cmp->poly, cmp->rel, cmp->rhs);
  }
  return clear_ratios(images, cmp->poly, cmp->rel, cmp->rhs);
}

FormulaWPtr normalize_conditionals(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [&](const auto& x) -> FormulaWPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::True> || std::is_same_v<T, F::PropAt> ||
                      std::is_same_v<T, F::SetAt> || std::is_same_v<T, F::Less>) {
          return f;
        } else if constexpr (std::is_same_v<T, F::Not>) {
          return w_not(normalize_conditionals(x.a));
        } else if constexpr (std::is_same_v<T, F::And>) {
          return w_and(normalize_conditionals(x.a), normalize_conditionals(x.b));
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return w_know_at(x.agent, x.at, normalize_conditionals(x.a));
        } else if constexpr (std::is_same_v<T, F::ForallT>) {
          return w_forall(x.var, normalize_conditionals(x.a));
        } else if constexpr (std::is_same_v<T, F::ExistsT>) {
          return w_exists(x.var, normalize_conditionals(x.a));
        } else if constexpr (std::is_same_v<T, F::ForallSet>) {
          return w_forall_set(x.set, normalize_conditionals(x.a));
        } else {
          static_assert(std::is_same_v<T, F::Compare>);
          std::vector<ProbTermW> terms;
          for (const ProbTermW& t : x.terms) {
            ProbTermW out = t;
            out.body = normalize_conditionals(t.body);
            if (t.kind == ProbTermW::Kind::conditional)
              out.given = normalize_conditionals(t.given);
            terms.push_back(std::move(out));
          }
          return normalize_conditional(w_compare(std::move(terms), x.poly, x.rel, x.rhs));
        }
      },
      f->node);
}

} // namespace pomc
