#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pomc/model.hpp"

namespace pomc {

/// Observation symbols an agent collects at times 0..m. Always nonempty, so
/// beliefs conditioned on two sequences of different lengths never coincide.
struct ObservationSequence {
  AgentRef agent;
  std::vector<std::string> symbols;

  unsigned long time() const {
    return symbols.empty() ? 0 : static_cast<unsigned long>(symbols.size()) - 1;
  }
  bool operator==(const ObservationSequence& o) const {
    return agent.kind == o.agent.kind && agent.index == o.agent.index && symbols == o.symbols;
  }
};

/// Exact posterior over current states at `time`. Exactly one of clock_obs,
/// history is set and records what the posterior conditions on.
struct BeliefState {
  AgentRef agent;
  unsigned long time = 0;
  std::optional<std::string> clock_obs;
  std::optional<ObservationSequence> history;
  Distribution posterior;
};

/// Posterior given only the time and the current observation.
BeliefState clock_belief(const PODTMC& m, const AgentRef& agent, unsigned long t,
                         const std::string& obs);

/// Unnormalized forward-filter weights: entry s carries the probability of
/// emitting `history` and being in s at its final time.
std::vector<Rational> filter_weights(const PODTMC& m, const ObservationSequence& history);

/// Posterior given the full observation sequence since time 0.
BeliefState spr_belief(const PODTMC& m, const ObservationSequence& history);

/// Prior probability of observing the sequence; 0 when unreachable.
Rational history_probability(const PODTMC& m, const ObservationSequence& history);

/// All positive-probability observation sequences of length horizon+1, in
/// lexicographic symbol order, each with its prior probability.
std::vector<std::pair<ObservationSequence, Rational>> enumerate_histories(const PODTMC& m,
                                                                          const AgentRef& agent,
                                                                          unsigned long horizon);

/// States the agent considers possible under the conditioning.
std::vector<StateIndex> knowledge_support(const BeliefState& b);
std::vector<StateIndex> knowledge_support(const PODTMC& m, const AgentRef& agent, unsigned long t,
                                          const std::string& obs);
std::vector<StateIndex> knowledge_support(const PODTMC& m, const ObservationSequence& history);

} // namespace pomc
