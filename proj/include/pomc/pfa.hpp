#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pomc/matrix.hpp"
#include "pomc/model.hpp"

namespace pomc {

/// Finite automaton whose letters act as stochastic matrices. A word is
/// accepted when its value lands strictly above `threshold`.
struct PFA {
  std::vector<std::string> states;
  std::vector<std::string> letters;
  Distribution init;
  std::vector<RationalMatrix> step; // step[a] is the action of letters[a]
  std::vector<char> accepting;      // indexed by state
  Rational threshold;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_letters() const { return letters.size(); }
  std::optional<std::size_t> letter_index(const std::string& name) const;
};

/// Empty result means the automaton is well formed.
std::vector<std::string> validate_pfa(const PFA& p);

/// init * step(a1) * ... * step(am), summed over accepting states.
Rational pfa_value(const PFA& p, const std::vector<std::string>& word);

/// The chain whose states are (automaton state, letter) pairs: the letter is
/// redrawn uniformly at every step and shown to agent i as its observation,
/// and the proposition p marks pairs built from accepting states.
PODTMC pfa_to_podtmc(const PFA& p);

/// Checks, for every word w with 1 <= |w| <= maxlen on pfa_to_podtmc(p), that
/// the recall posterior after observing w aggregates per automaton state to
/// init * step(w), that the forward-filter weights summed over initial
/// letters scale to the same vector, and that the agent's probability of p at
/// a point whose observations spell w equals pfa_value(p, w). All comparisons
/// exact.
bool pfa_correspondence_check(const PFA& p, unsigned long maxlen);

// Text form; mirrors the model format with "letter <name> trans:" lines in
// place of agent observations, plus "accept:" and "threshold:".
PFA parse_pfa(const std::string& text);
std::string write_pfa(const PFA& p);

} // namespace pomc
