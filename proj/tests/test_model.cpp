#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "oracle.hpp"
#include "pomc/error.hpp"
#include "pomc/model.hpp"
#include "pomc/model_io.hpp"

using pomc::Error;
using pomc::ErrorCode;
using pomc::PathPrefix;
using pomc::PODTMC;
using pomc::Rational;
using pomc::StateIndex;

TEST_SUITE_BEGIN("model");

namespace {

// Two states: s loops with 1/2 and falls through to absorbing u with 1/2.
// Kept in sync with the escape-chain fixture used by the checker tests.
const char* kEscapeChain = R"(
states: s u
init: s 1
trans: s -> s 1/2, s -> u 1/2
trans: u -> u 1
agent i obs: s o, u o
label: s {q}
label: u {not_q}
)";

// Three states under identity dynamics; agent sees a on u,v and b on w.
const char* kClockExample = R"(
states: u v w
init: u 1/3, v 1/3, w 1/3
trans: u -> u 1, v -> v 1, w -> w 1
agent i obs: u a, v a, w b
label: u {p}
)";

} // namespace

TEST_CASE("model parsing round trip") {
  PODTMC m = pomc::parse_model(kEscapeChain);
  CHECK(pomc::validate(m).empty());
  CHECK(m.states == std::vector<std::string>{"s", "u"});
  CHECK(m.init[0] == Rational(1));
  CHECK(m.trans.at(0, 0) == Rational(1, 2));
  CHECK(m.trans.at(1, 1) == Rational(1));
  CHECK(m.agents == std::vector<std::string>{"i"});
  CHECK(m.labels[0].count("q") == 1);

  PODTMC again = pomc::parse_model(pomc::write_model(m));
  CHECK(again == m);
  // Canonical text is a fixed point of the round trip.
  CHECK(pomc::write_model(again) == pomc::write_model(m));
}

TEST_CASE("random models survive the io round trip") {
  std::mt19937_64 rng(4242);
  for (int k = 0; k < 50; ++k) {
    gen::ModelOptions opt;
    opt.num_agents = 2;
    PODTMC m = gen::random_model(rng, opt);
    REQUIRE(pomc::validate(m).empty());
    CHECK(pomc::parse_model(pomc::write_model(m)) == m);
  }
}

TEST_CASE("parse errors carry line and column") {
  auto message_of = [](const char* text) {
    try {
      pomc::parse_model(text);
      return std::string("no error");
    } catch (const Error& e) {
      return std::string(e.what());
    }
  };
  CHECK(message_of("states: s s\n") == "parse_error: 1:11: duplicate state name 's'");
  CHECK(message_of("states: s\ninit: t 1\n") == "parse_error: 2:7: unknown state 't'");
  CHECK(message_of("states: s\nbogus: s\n") == "parse_error: 2:1: unknown directive 'bogus:'");
  CHECK(message_of("init: s 1\n") == "parse_error: 1:7: state referenced before 'states:' line");
  CHECK(message_of("states: s\ntrans: s -> s 1,\n") == "parse_error: 2:1: trailing comma");
  CHECK(message_of("states: s\ntrans: s s 1\n") == "parse_error: 2:10: expected '->', found 's'");
  CHECK(message_of("states: s\ninit: s 1/x\n") == "parse_error: 2:9: malformed probability '1/x'");
}

TEST_CASE("validate flags structural problems") {
  PODTMC m = pomc::parse_model(kEscapeChain);
  SUBCASE("well formed model passes") { CHECK(pomc::validate(m).empty()); }
  SUBCASE("init must sum to one") {
    m.init[0] = Rational(1, 2);
    auto bad = pomc::validate(m);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == "initial weights are not a probability distribution");
  }
  SUBCASE("rows must sum to one") {
    m.trans.at(0, 0) = Rational(1, 3);
    CHECK(pomc::validate(m) ==
          std::vector<std::string>{"transition matrix is not row-stochastic"});
  }
  SUBCASE("derived observation labels must agree") {
    m.labels[0].insert("obs_i_x");
    auto bad = pomc::validate(m);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("contradicts agent 'i'") != std::string::npos);
  }
  SUBCASE("agreeing derived labels are fine") {
    m.labels[0].insert("obs_i_o");
    m.labels[1].insert("@state_u");
    CHECK(pomc::validate(m).empty());
  }
  SUBCASE("reserved prefix") {
    m.states[0] = "@s";
    auto bad = pomc::validate(m);
    CHECK(!bad.empty());
  }
}

TEST_CASE("cylinder probabilities multiply along the prefix") {
  PODTMC m = pomc::parse_model(kEscapeChain);
  CHECK(pomc::cylinder_probability(m, PathPrefix{{0}}) == Rational(1));
  CHECK(pomc::cylinder_probability(m, PathPrefix{{0, 0, 1}}) == Rational(1, 4));
  CHECK(pomc::cylinder_probability(m, PathPrefix{{0, 0, 0, 1, 1}}) == Rational(1, 8));
  CHECK_THROWS_AS(pomc::cylinder_probability(m, PathPrefix{{}}), Error);
  CHECK_THROWS_AS(pomc::cylinder_probability(m, PathPrefix{{1}}), Error);     // init mass 0
  CHECK_THROWS_AS(pomc::cylinder_probability(m, PathPrefix{{0, 1, 0}}), Error); // no edge u->s
}

TEST_CASE("transient distributions match brute-force enumeration") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 25; ++k) {
    PODTMC m = gen::random_model(rng);
    auto table = pomc::transient_table(m, 5);
    for (std::size_t t = 0; t <= 5; ++t) {
      CHECK(pomc::distribution_at(m, t).w == table[t].w);
      CHECK(table[t].w == oracle::marginal(m, t));
      CHECK(table[t].is_distribution());
    }
  }
}

TEST_CASE("escape chain transients") {
  PODTMC m = pomc::parse_model(kEscapeChain);
  auto d2 = pomc::distribution_at(m, 2);
  CHECK(d2[0] == Rational(1, 4));
  CHECK(d2[1] == Rational(3, 4));
}

TEST_CASE("derived propositions") {
  PODTMC m = pomc::parse_model(kClockExample);
  StateIndex u = m.require_state("u");
  StateIndex w = m.require_state("w");
  CHECK(m.state_satisfies(u, "p"));
  CHECK(!m.state_satisfies(w, "p"));
  CHECK(m.state_satisfies(u, "@state_u"));
  CHECK(!m.state_satisfies(u, "@state_v"));
  CHECK(m.state_satisfies(u, "obs_i_a"));
  CHECK(!m.state_satisfies(u, "obs_i_b"));
  CHECK(m.state_satisfies(w, "obs_i_b"));
  CHECK(!m.state_satisfies(w, "obs_i_nope"));
  PODTMC tagged = pomc::with_state_propositions(m);
  CHECK(tagged.labels[u].count("@state_u") == 1);
  CHECK(pomc::validate(tagged).empty());
}

TEST_CASE("agent resolution") {
  PODTMC m = pomc::parse_model(kClockExample);
  CHECK(m.resolve_agent("i").kind == pomc::AgentRef::Kind::model);
  CHECK(m.resolve_agent("@top").kind == pomc::AgentRef::Kind::top);
  CHECK(m.resolve_agent("@bot").kind == pomc::AgentRef::Kind::bot);
  CHECK_THROWS_AS(m.resolve_agent("nobody"), Error);
  auto top = m.resolve_agent("@top");
  CHECK(m.observation(top, m.require_state("v")) == "v");
  auto bot = m.resolve_agent("@bot");
  CHECK(m.observation(bot, 0) == m.observation(bot, 2));
  CHECK(m.observation_range(top).size() == 3);
  CHECK(m.observation_range(bot).size() == 1);
  CHECK(m.observation_range(m.resolve_agent("i")) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("missing observation entries default to underscore") {
  PODTMC m = pomc::parse_model("states: a b\ninit: a 1\ntrans: a -> b 1, b -> b 1\nagent i obs: a x\n");
  CHECK(m.obs[0][1] == "_");
  CHECK(pomc::validate(m).empty());
}

TEST_SUITE_END();
