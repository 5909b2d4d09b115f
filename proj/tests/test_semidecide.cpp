#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "pomc/checker.hpp"
#include "pomc/parse_formula.hpp"
#include "pomc/semidecide.hpp"

using namespace pomc;

namespace {

bool verdict_true(const Verdict& v) {
  return v.kind == Verdict::Kind::holds || v.kind == Verdict::Kind::witness;
}

Verdict from_scan(const std::optional<unsigned long>& hit, unsigned long T) {
  if (hit) return Verdict::witness({{"t", *hit}});
  return Verdict::no_witness_up_to(T);
}

MixedTimeFormula random_mixed(std::mt19937_64& rng, std::size_t nvars) {
  MixedTimeFormula f;
  for (std::size_t j = 0; j < nvars; ++j) f.vars.push_back("t" + std::to_string(j + 1));
  std::size_t natoms = gen::pick(rng, 1, 2);
  Polynomial poly;
  for (std::size_t k = 0; k < natoms; ++k) {
    f.atoms.push_back({gen::pick(rng, 0, 1) ? "p" : "q", gen::pick(rng, 0, nvars - 1)});
    Rational coef = gen::pick(rng, 0, 3) == 0 ? Rational(-1)
                                              : Rational(static_cast<long>(gen::pick(rng, 1, 2)));
    unsigned exp = gen::pick(rng, 0, 3) == 0 ? 2 : 1;
    poly = poly + Polynomial::constant(coef) * Polynomial::variable(k).pow(exp);
  }
  f.poly = poly;
  f.rel = gen::random_rel(rng);
  f.rhs = gen::random_probability(rng);
  return f;
}

} // namespace

TEST_SUITE_BEGIN("semidecide");

TEST_CASE("grid search finds the first zero of a known comparison") {
  PODTMC m = fixtures::load(fixtures::kHalvingChain);

  CHECK(check_mixed_time(m, parse_mixed_time("exists t . P(p@t) = 1/8"), 10) ==
        Verdict::witness({{"t", 3}}));
  CHECK(check_mixed_time(m, parse_mixed_time("exists t . P(p@t) = 1/3"), 10) ==
        Verdict::no_witness_up_to(10));
  CHECK(check_mixed_time(m, parse_mixed_time("exists t u . P(p@t) - P(p@u) = 1/4"), 10) ==
        Verdict::witness({{"t", 1}, {"u", 2}}));

  // Many satisfying pairs (t + u = 3); both modes must report the least.
  MixedTimeFormula pair = parse_mixed_time("exists t u . P(p@t) * P(p@u) = 1/8");
  Verdict least = Verdict::witness({{"t", 0}, {"u", 3}});
  CHECK(check_mixed_time(m, pair, 15, RunMode::serial) == least);
  CHECK(check_mixed_time(m, pair, 15, RunMode::parallel) == least);

  // Two copies of the same atom cancel, so the search succeeds immediately.
  MixedTimeFormula twin;
  twin.vars = {"t"};
  twin.atoms = {{"p", 0}, {"p", 0}};
  twin.poly = Polynomial::variable(0) - Polynomial::variable(1);
  twin.rel = Rel::eq;
  twin.rhs = Rational(0);
  CHECK(check_mixed_time(m, twin, 10) == Verdict::witness({{"t", 0}}));
}

TEST_CASE("time scans hit frozen marginal values") {
  PODTMC half = fixtures::load(fixtures::kHalvingChain);
  for (RunMode mode : {RunMode::serial, RunMode::parallel}) {
    CHECK(check_skolem_form(half, "p", Rel::eq, Rational(1, 8), 10, mode) ==
          Verdict::witness({{"t", 3}}));
    CHECK(check_skolem_form(half, "p", Rel::eq, Rational(1, 3), 30, mode) ==
          Verdict::no_witness_up_to(30));
    CHECK(check_skolem_form(half, "p", Rel::ge, Rational(1), 5, mode) ==
          Verdict::witness({{"t", 0}}));
    CHECK(check_skolem_form(half, "p", Rel::lt, Rational(1, 100), 10, mode) ==
          Verdict::witness({{"t", 7}}));
  }

  PODTMC lin = fixtures::load(fixtures::kLinearChain);
  CHECK(check_skolem_form(lin, "p", Rel::eq, Rational(3, 8), 10) == Verdict::witness({{"t", 3}}));
  CHECK(check_skolem_form(lin, "p", Rel::eq, Rational(1, 2), 10) == Verdict::witness({{"t", 1}}));
}

TEST_CASE("zero comparisons are decided without a bound") {
  PODTMC half = fixtures::load(fixtures::kHalvingChain);
  CHECK(check_skolem_form(half, "p", Rel::gt, Rational(0), 0) == Verdict::holds());
  CHECK(check_skolem_form(half, "p", Rel::eq, Rational(0), 0) == Verdict::fails());
  CHECK(check_skolem_form(half, "p", Rel::le, Rational(0), 0) == Verdict::fails());
  CHECK(check_skolem_form(half, "p", Rel::lt, Rational(0), 0) == Verdict::fails());
  CHECK(check_skolem_form(half, "p", Rel::ge, Rational(0), 0) == Verdict::holds());

  // p starts empty here, so "mass 0 at some time" holds at t = 0.
  PODTMC lin = fixtures::load(fixtures::kLinearChain);
  CHECK(check_skolem_form(lin, "p", Rel::eq, Rational(0), 0) == Verdict::holds());
  CHECK(check_skolem_form(lin, "p", Rel::gt, Rational(0), 0) == Verdict::holds());

  PODTMC isolated = fixtures::load(R"(
states: g h
init: g 1
trans: g -> g 1
trans: h -> h 1
agent i obs: g o, h o
label: h {p}
)");
  CHECK(check_skolem_form(isolated, "p", Rel::gt, Rational(0), 0) == Verdict::fails());
  CHECK(check_skolem_form(isolated, "p", Rel::eq, Rational(0), 0) == Verdict::holds());
}

TEST_CASE("zero comparisons agree with a long transient scan") {
  std::mt19937_64 rng(711);
  gen::ModelOptions mopt;
  for (int it = 0; it < 30; ++it) {
    PODTMC m = gen::random_model(rng, mopt);
    auto table = transient_table(m, 64);
    for (Rel rel : {Rel::lt, Rel::le, Rel::eq, Rel::ge, Rel::gt}) {
      Verdict got = check_skolem_form(m, "p", rel, Rational(0), 3);
      bool decided = got.kind == Verdict::Kind::holds || got.kind == Verdict::Kind::fails;
      CHECK(decided);
      bool want = false;
      for (unsigned long t = 0; t <= 64 && !want; ++t) {
        Rational mass;
        for (StateIndex s = 0; s < m.num_states(); ++s)
          if (m.state_satisfies(s, "p")) mass += table[t][s];
        want = rel_holds(mass, rel, Rational(0));
      }
      CHECK(verdict_true(got) == want);
    }
  }
}

TEST_CASE("bounded scans match the enumeration oracle") {
  std::mt19937_64 rng(712);
  gen::ModelOptions mopt;
  mopt.max_states = 3;
  const unsigned long T = 6;
  int done = 0;
  while (done < 30) {
    PODTMC m = gen::random_model(rng, mopt);
    std::string prop = gen::pick(rng, 0, 1) ? "p" : "q";
    Rel rel = gen::random_rel(rng);
    Rational c = gen::random_probability(rng);
    if (c.is_zero()) continue;
    Verdict want = from_scan(oracle::skolem_bruteforce(m, prop, rel, c, T), T);
    CHECK(check_skolem_form(m, prop, rel, c, T, RunMode::serial) == want);
    CHECK(check_skolem_form(m, prop, rel, c, T, RunMode::parallel) == want);
    ++done;
  }
}

TEST_CASE("grid search matches the nested-loop oracle") {
  std::mt19937_64 rng(713);
  gen::ModelOptions mopt;
  mopt.max_states = 3;
  const unsigned long T = 4;
  for (int it = 0; it < 30; ++it) {
    PODTMC m = gen::random_model(rng, mopt);
    MixedTimeFormula f = random_mixed(rng, gen::pick(rng, 1, 2));
    auto hit = oracle::mixed_time_bruteforce(m, f, T);
    Verdict want = Verdict::no_witness_up_to(T);
    if (hit) {
      std::vector<std::pair<std::string, unsigned long>> a;
      for (std::size_t j = 0; j < f.vars.size(); ++j) a.emplace_back(f.vars[j], (*hit)[j]);
      want = Verdict::witness(std::move(a));
    }
    CAPTURE(to_string(f));
    CHECK(check_mixed_time(m, f, T, RunMode::serial) == want);
    CHECK(check_mixed_time(m, f, T, RunMode::parallel) == want);
  }
}

TEST_CASE("witnesses persist as the bound grows") {
  std::mt19937_64 rng(714);
  gen::ModelOptions mopt;
  mopt.max_states = 3;
  int done = 0;
  while (done < 25) {
    PODTMC m = gen::random_model(rng, mopt);
    Rel rel = gen::random_rel(rng);
    Rational c = gen::random_probability(rng);
    if (c.is_zero()) continue;
    Verdict v = check_skolem_form(m, "p", rel, c, 4);
    if (v.kind == Verdict::Kind::witness) {
      CHECK(check_skolem_form(m, "p", rel, c, 9) == v);
      CHECK(check_skolem_form(m, "p", rel, c, v.assignment[0].second) == v);
    } else {
      Verdict longer = check_skolem_form(m, "p", rel, c, 9);
      if (longer.kind == Verdict::Kind::witness) CHECK(longer.assignment[0].second > 4);
    }
    ++done;
  }
}

TEST_CASE("blind-agent reachability questions agree with the branching checker") {
  std::mt19937_64 rng(715);
  gen::ModelOptions mopt;
  mopt.max_states = 3;
  mopt.max_symbols = 1;
  const unsigned long T = 4;
  static const Rational levels[] = {{1, 4}, {1, 3}, {1, 2}, {2, 3}, {1, 1}};
  for (int it = 0; it < 20; ++it) {
    PODTMC m = gen::random_model(rng, mopt);
    Rel rel = gen::random_rel(rng);
    Rational c = levels[gen::pick(rng, 0, 4)];
    Semantics sem = it % 2 ? Semantics::spr : Semantics::clk;

    FormulaKPtr cond =
        k_compare({{ProbKind::current, "i", k_prop("p")}}, Polynomial::variable(0), rel, c);
    FormulaKPtr f = k_all(k_bounded_until(k_true(), cond, T));
    Verdict branching = model_check(m, sem, f);
    Verdict scan = check_skolem_form(m, "p", rel, c, T);
    CAPTURE(to_string(f));
    CHECK(verdict_true(branching) == verdict_true(scan));
  }
}

TEST_SUITE_END();
