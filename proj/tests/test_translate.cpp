#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gen.hpp"
#include "pomc/error.hpp"
#include "pomc/parse_formula.hpp"
#include "pomc/translate.hpp"

using namespace pomc;

TEST_SUITE_BEGIN("semantics");

namespace {

const WmloParseOptions kOpenSentence{true};

bool any_agent_prob(const FormulaWPtr& f);

bool any_agent_prob_term(const ProbTermW& t) {
  if (t.kind == ProbTermW::Kind::agent_at) return true;
  if (any_agent_prob(t.body)) return true;
  return t.kind == ProbTermW::Kind::conditional && any_agent_prob(t.given);
}

bool any_agent_prob(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::Not>) {
          return any_agent_prob(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return any_agent_prob(x.a) || any_agent_prob(x.b);
        } else if constexpr (std::is_same_v<T, F::KnowAt> || std::is_same_v<T, F::ForallT> ||
                             std::is_same_v<T, F::ExistsT> || std::is_same_v<T, F::ForallSet>) {
          return any_agent_prob(x.a);
        } else if constexpr (std::is_same_v<T, F::Compare>) {
          for (const ProbTermW& t : x.terms)
            if (any_agent_prob_term(t)) return true;
          return false;
        } else {
          return false;
        }
      },
      f->node);
}

bool only_blind_knowledge(const FormulaWPtr& f) {
  using F = FormulaW;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, F::Not>) {
          return only_blind_knowledge(x.a);
        } else if constexpr (std::is_same_v<T, F::And>) {
          return only_blind_knowledge(x.a) && only_blind_knowledge(x.b);
        } else if constexpr (std::is_same_v<T, F::KnowAt>) {
          return x.agent == kBotAgent && only_blind_knowledge(x.a);
        } else if constexpr (std::is_same_v<T, F::ForallT> || std::is_same_v<T, F::ExistsT> ||
                             std::is_same_v<T, F::ForallSet>) {
          return only_blind_knowledge(x.a);
        } else {
          return true;
        }
      },
      f->node);
}

} // namespace

TEST_CASE("time translation of the core connectives") {
  PODTMC m = fixtures::load(fixtures::kDrainChain);
  TimeTerm t = TimeTerm::variable("t");
  TimeTerm u = TimeTerm::variable("u1");
  TimeTerm v = TimeTerm::variable("v1");

  CHECK(equal(translate_prop2(parse_ctlkp("p"), Semantics::spr, m), w_prop_at("p", t)));
  CHECK(equal(translate_prop2(parse_ctlkp("!p & q"), Semantics::spr, m),
              w_and(w_not(w_prop_at("p", t)), w_prop_at("q", t))));

  // The successor is pinned by order alone: t < u and nothing between.
  FormulaWPtr next_p = w_exists(
      "u1", w_and(w_and(w_less(t, u),
                        w_forall("v1", w_implies(w_less(t, v), w_time_le(u, v)))),
                  w_prop_at("p", u)));
  CHECK(equal(translate_prop2(parse_ctlkp("X p"), Semantics::spr, m), next_p));

  FormulaWPtr until_pq = w_exists(
      "u1", w_and(w_and(w_time_le(t, u), w_prop_at("q", u)),
                  w_forall("v1", w_implies(w_and(w_time_le(t, v), w_less(v, u)),
                                           w_prop_at("p", v)))));
  CHECK(equal(translate_prop2(parse_ctlkp("p U q"), Semantics::spr, m), until_pq));

  CHECK(equal(translate_prop2(parse_ctlkp("K[i] p"), Semantics::spr, m),
              w_know_at("i", t, w_prop_at("p", t))));
  CHECK(equal(translate_prop2(parse_ctlkp("K[i] p"), Semantics::clk, m),
              w_know_at("i", t, w_prop_at("p", t))));
}

TEST_CASE("probability terms keep their time, priors reset to zero") {
  PODTMC m = fixtures::load(fixtures::kDrainChain);
  TimeTerm t = TimeTerm::variable("t");

  CHECK(equal(translate_prop2(parse_ctlkp("Pr[i](p) > 1/2"), Semantics::spr, m),
              w_compare({agent_prob_at("i", t, w_prop_at("p", t))}, Polynomial::variable(0),
                        Rel::gt, Rational(1, 2))));
  CHECK(equal(translate_prop2(parse_ctlkp("Prior[i](p) > 0"), Semantics::spr, m),
              parse_wmlo("Pr[i]@0(p@0) > 0")));
  // Current and prior terms of the same body stay distinct variables.
  FormulaWPtr f = translate_prop2(parse_ctlkp("Pr[i](p) - Prior[i](p) = 0"), Semantics::spr, m);
  const auto* cmp = std::get_if<FormulaW::Compare>(&f->node);
  REQUIRE(cmp != nullptr);
  CHECK(cmp->terms.size() == 2);
}

TEST_CASE("run quantifier becomes full-information knowledge") {
  PODTMC m = fixtures::load(fixtures::kDrainChain);
  TimeTerm t = TimeTerm::variable("t");
  TimeTerm zero = TimeTerm::constant(0);

  CHECK(equal(translate_prop2(parse_ctlkp("A p"), Semantics::spr, m),
              w_know_at(kTopAgent, t, w_prop_at("p", t))));

  // Under clk the agent forgets its run, so the initial state is pinned.
  FormulaWPtr pin_g = w_prop_at("@state_g", zero);
  FormulaWPtr pin_h = w_prop_at("@state_h", zero);
  FormulaWPtr body = w_prop_at("p", t);
  FormulaWPtr expected =
      w_and(w_implies(pin_g, w_know_at(kTopAgent, t, w_implies(pin_g, body))),
            w_implies(pin_h, w_know_at(kTopAgent, t, w_implies(pin_h, body))));
  CHECK(equal(translate_prop2(parse_ctlkp("A p"), Semantics::clk, m), expected));
}

TEST_CASE("bounded until unrolls through successors") {
  PODTMC m = fixtures::load(fixtures::kDrainChain);
  TimeTerm t = TimeTerm::variable("t");
  TimeTerm u = TimeTerm::variable("u1");
  TimeTerm v = TimeTerm::variable("v1");

  CHECK(equal(translate_prop2(parse_ctlkp("p U<=0 q"), Semantics::spr, m), w_prop_at("q", t)));

  FormulaWPtr tail = w_exists(
      "u1", w_and(w_and(w_less(t, u),
                        w_forall("v1", w_implies(w_less(t, v), w_time_le(u, v)))),
                  w_prop_at("q", u)));
  CHECK(equal(translate_prop2(parse_ctlkp("p U<=1 q"), Semantics::spr, m),
              w_or(w_prop_at("q", t), w_and(w_prop_at("p", t), tail))));
}

TEST_CASE("translation always leaves exactly one free variable") {
  std::mt19937_64 rng(91);
  PODTMC m = fixtures::load(fixtures::kClockExample);
  gen::KFormulaOptions opt;
  for (int k = 0; k < 60; ++k) {
    FormulaKPtr f = gen::random_ctlkp(rng, gen::pick(rng, 0, 3), opt);
    for (Semantics sem : {Semantics::spr, Semantics::clk}) {
      FormulaWPtr w = translate_prop2(f, sem, m);
      // Nothing escapes but the input time (prior terms may drop it entirely).
      std::set<std::string> free = free_time_variables(w);
      free.erase("t");
      CHECK(free.empty());
      // Translator output stays inside the printable grammar.
      CHECK(equal(parse_wmlo(to_string(w), kOpenSentence), w));
    }
  }
}

TEST_CASE("clock elimination guards knowledge by observation") {
  PODTMC m = fixtures::load(fixtures::kClockExample);
  TimeTerm t = TimeTerm::variable("t");

  FormulaWPtr in = parse_wmlo("K[i]@t(p@t)", kOpenSentence);
  FormulaWPtr seen_a = w_prop_at("obs_i_a", t);
  FormulaWPtr seen_b = w_prop_at("obs_i_b", t);
  FormulaWPtr body = w_prop_at("p", t);
  FormulaWPtr expected =
      w_and(w_implies(seen_a, w_know_at(kBotAgent, t, w_implies(seen_a, body))),
            w_implies(seen_b, w_know_at(kBotAgent, t, w_implies(seen_b, body))));
  CHECK(equal(eliminate_clock(in, m), expected));

  // Blind knowledge is already the universal modality; agent-free formulas
  // pass through untouched.
  FormulaWPtr blind = parse_wmlo("K[@bot]@2(p@2)");
  CHECK(equal(eliminate_clock(blind, m), blind));
  FormulaWPtr plain = parse_wmlo("forall t . P(p@t) > 0 -> exists s . t < s");
  CHECK(equal(eliminate_clock(plain, m), plain));

  // Full information guards by the state itself.
  PODTMC two = fixtures::load(fixtures::kDrainChain);
  FormulaWPtr pin_g = w_prop_at("@state_g", TimeTerm::constant(1));
  FormulaWPtr pin_h = w_prop_at("@state_h", TimeTerm::constant(1));
  FormulaWPtr at1 = w_prop_at("p", TimeTerm::constant(1));
  CHECK(equal(eliminate_clock(parse_wmlo("K[@top]@1(p@1)"), two),
              w_and(w_implies(pin_g, w_know_at(kBotAgent, TimeTerm::constant(1),
                                               w_implies(pin_g, at1))),
                    w_implies(pin_h, w_know_at(kBotAgent, TimeTerm::constant(1),
                                               w_implies(pin_h, at1))))));

  CHECK_THROWS_AS(eliminate_clock(parse_wmlo("K[nobody]@1(p@1)"), m), Error);
}

TEST_CASE("clock elimination rewrites simple probability atoms linearly") {
  PODTMC m = fixtures::load(fixtures::kDrainChain); // agent i has one symbol c
  FormulaWPtr in = parse_wmlo("Pr[i]@t(p@t) = 1/2", kOpenSentence);
  FormulaWPtr expected =
      w_implies(parse_wmlo("obs_i_c@t", kOpenSentence),
                parse_wmlo("P(obs_i_c@t & p@t) - 1/2 * P(obs_i_c@t) = 0", kOpenSentence));
  CHECK(equal(eliminate_clock(in, m), expected));

  // A blind agent's subjective probability is the run distribution itself.
  CHECK(equal(eliminate_clock(parse_wmlo("Pr[@bot]@3(p@3) >= 1/4"), m),
              parse_wmlo("P(p@3) >= 1/4")));
}

TEST_CASE("clock elimination leaves no agent probability behind") {
  std::mt19937_64 rng(92);
  PODTMC m = fixtures::load(fixtures::kClockExample);
  gen::WFormulaOptions opt;
  opt.agents = {"i", "@top", "@bot"};
  opt.allow_agent_prob = true;
  opt.allow_know = true;
  for (int k = 0; k < 60; ++k) {
    FormulaWPtr f = gen::random_wmlo(rng, gen::pick(rng, 0, 4), opt, {});
    FormulaWPtr out = eliminate_clock(f, m);
    CAPTURE(to_string(f));
    CAPTURE(to_string(out));
    CHECK(!any_agent_prob(out));
    CHECK(only_blind_knowledge(out));
    CHECK(free_time_variables(out) == free_time_variables(f));
    CHECK(equal(parse_wmlo(to_string(out), kOpenSentence), out));
  }
}

TEST_CASE("conditional atoms multiply out their denominators") {
  auto var = [](std::size_t v) { return Polynomial::variable(v); };

  // Two conditionals compared to a constant.
  FormulaWPtr in = parse_wmlo("P(f1@0 | s1@0) + P(f2@0 | s2@0) <= 1/3");
  ProbTermW n1 = global_prob(w_and(w_prop_at("f1", TimeTerm::constant(0)),
                                   w_prop_at("s1", TimeTerm::constant(0))));
  ProbTermW d1 = global_prob(w_prop_at("s1", TimeTerm::constant(0)));
  ProbTermW n2 = global_prob(w_and(w_prop_at("f2", TimeTerm::constant(0)),
                                   w_prop_at("s2", TimeTerm::constant(0))));
  ProbTermW d2 = global_prob(w_prop_at("s2", TimeTerm::constant(0)));
  FormulaWPtr expected =
      w_compare({n1, d1, n2, d2},
                var(0) * var(3) + var(1) * var(2) -
                    Polynomial::constant(Rational(1, 3)) * var(1) * var(3),
                Rel::le, Rational(0));
  CHECK(equal(normalize_conditional(in), expected));

  // Single conditional; conditioning on truth disappears entirely.
  CHECK(equal(normalize_conditional(parse_wmlo("P(p@0 | q@0) = 1/3")),
              parse_wmlo("P(p@0 & q@0) - 1/3 * P(q@0) = 0")));
  CHECK(equal(normalize_conditional(parse_wmlo("P(p@0 | true) <= 1/2")),
              parse_wmlo("P(p@0) <= 1/2")));
  CHECK(equal(normalize_conditional(parse_wmlo("P(p@0 | q@0) > 0")),
              parse_wmlo("P(p@0 & q@0) > 0")));

  // Recursing through quantifiers and guards.
  CHECK(equal(normalize_conditionals(parse_wmlo("exists t . P(p@t | q@t) = 1/3")),
              parse_wmlo("exists t . P(p@t & q@t) - 1/3 * P(q@t) = 0")));
  FormulaWPtr untouched = parse_wmlo("exists t . P(p@t) = 1/4");
  CHECK(equal(normalize_conditionals(untouched), untouched));

  CHECK_THROWS_AS(normalize_conditional(parse_wmlo("p@0")), Error);
}

TEST_SUITE_END();
