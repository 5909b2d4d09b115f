#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "pomc/error.hpp"
#include "pomc/graph.hpp"
#include "pomc/model_io.hpp"

using namespace pomc;

TEST_SUITE_BEGIN("semantics");

TEST_CASE("a run can stay at s forever even though almost no run does") {
  PODTMC m = fixtures::load(fixtures::kEscapeChain);

  CHECK(exists_path_globally(m, std::vector<StateIndex>{0}, "q"));
  CHECK(!exists_path_globally(m, std::vector<StateIndex>{1}, "q"));
  CHECK(exists_path_globally(m, std::vector<StateIndex>{1}, "not_q"));

  CHECK(!prob_globally_positive(m, m.init, "q"));
  CHECK(prob_globally_positive(m, distribution_at(m, 1), "not_q"));

  // Everywhere-true propositions trivially admit both.
  std::vector<char> all(m.num_states(), 1);
  CHECK(exists_path_globally(m, all, all));
  CHECK(prob_globally_positive(m, m.init, all));

  CHECK_THROWS_AS(proposition_mask(m, "mystery"), Error);
  CHECK_THROWS_AS(exists_path_globally(m, std::vector<StateIndex>{7}, "q"), Error);
  CHECK(proposition_mask(m, "@state_u") == std::vector<char>{0, 1});
  CHECK(proposition_mask(m, "obs_i_o") == std::vector<char>{1, 1});
}

TEST_CASE("reachability and closure on the drain chain") {
  PODTMC m = fixtures::load(fixtures::kDrainChain);
  CHECK(reachable_states(m, {0, 1}) == std::vector<char>{1, 1}); // h keeps looping
  CHECK(reachable_states(m, {1, 0}) == std::vector<char>{1, 0}); // g absorbs

  CHECK(closed_subset(m, proposition_mask(m, "p")) == std::vector<char>{1, 0});
  CHECK(prob_globally_positive(m, m.init, "p"));
  CHECK(exists_path_globally(m, std::vector<StateIndex>{1}, "@state_h"));
  CHECK(!prob_globally_positive(m, m.init, "@state_h"));
}

TEST_CASE("graph answers match exhaustive search on random models") {
  std::mt19937_64 rng(81);
  gen::ModelOptions opt;
  opt.max_states = 4;
  for (int k = 0; k < 60; ++k) {
    PODTMC m = gen::random_model(rng, opt);
    std::size_t n = m.num_states();
    // Random masks cover propositions of every shape.
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<char> in_p(n);
      std::vector<bool> in_p_bits(n);
      for (std::size_t s = 0; s < n; ++s) {
        in_p[s] = gen::pick(rng, 0, 2) > 0;
        in_p_bits[s] = in_p[s];
      }
      std::vector<char> start(n);
      std::vector<bool> start_bits(n);
      for (std::size_t s = 0; s < n; ++s) {
        start[s] = gen::pick(rng, 0, 1) == 1;
        start_bits[s] = start[s];
      }
      CHECK(exists_path_globally(m, start, in_p) ==
            oracle::exists_globally_bruteforce(m, start_bits, in_p_bits));
      CHECK(prob_globally_positive(m, m.init, in_p) ==
            oracle::positive_globally_bruteforce(m, in_p_bits));

      // The closed core never drains: its 64-step staying mass, started
      // uniformly inside, is 1.
      std::vector<char> core = closed_subset(m, in_p);
      std::size_t size = 0;
      for (char c : core) size += c;
      if (size > 0) {
        PODTMC pinned = m;
        for (std::size_t s = 0; s < n; ++s)
          pinned.init[s] = core[s] ? Rational(1, static_cast<long>(size)) : Rational(0);
        std::vector<bool> inside(n);
        for (std::size_t s = 0; s < n; ++s) inside[s] = in_p[s];
        CHECK(oracle::stay_mass(pinned, inside, 6) == Rational(1));
      }
    }
  }
}

TEST_SUITE_END();
