#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pomc/matrix.hpp"
#include "pomc/rational.hpp"

namespace pomc {

using StateIndex = std::size_t;

/// Probability vector indexed by state; invariant (checked by is_distribution):
/// entries nonnegative and summing to 1.
struct Distribution {
  std::vector<Rational> w;

  Distribution() = default;
  explicit Distribution(std::size_t n) : w(n) {}

  std::size_t size() const { return w.size(); }
  Rational& operator[](std::size_t i) { return w[i]; }
  const Rational& operator[](std::size_t i) const { return w[i]; }

  Rational sum() const;
  bool is_distribution() const;

  bool operator==(const Distribution& o) const { return w == o.w; }
};

/// Finite path prefix r(0..m), stored as state indices.
struct PathPrefix {
  std::vector<StateIndex> states;

  std::size_t time() const { return states.empty() ? 0 : states.size() - 1; }
  bool operator==(const PathPrefix& o) const { return states == o.states; }
  bool operator<(const PathPrefix& o) const { return states < o.states; }
};

// Agent references in formulas: a model agent by name, or one of two built-ins.
// "@top" observes the full state (observation = state name),
// "@bot" observes nothing (constant observation).
struct AgentRef {
  enum class Kind { model, top, bot };
  Kind kind = Kind::model;
  std::size_t index = 0;
};

inline const char* kTopAgent = "@top";
inline const char* kBotAgent = "@bot";
inline const char* kBotSymbol = "*";

/// Epistemic reading of a model: an agent's local state is (time, current
/// observation) under clk, the whole observation sequence under spr.
enum class Semantics { clk, spr };

/// Partially observed DTMC: states, initial distribution, transition matrix,
/// per-agent observation maps, propositional labeling.
struct PODTMC {
  std::vector<std::string> states;
  Distribution init;
  RationalMatrix trans;
  std::vector<std::string> agents;
  std::vector<std::vector<std::string>> obs; // obs[agent][state]
  std::vector<std::set<std::string>> labels; // labels[state]

  std::size_t num_states() const { return states.size(); }

  std::optional<StateIndex> state_index(const std::string& name) const;
  StateIndex require_state(const std::string& name) const;
  AgentRef resolve_agent(const std::string& name) const;

  const std::string& observation(const AgentRef& agent, StateIndex s) const;
  std::vector<std::string> observation_range(const AgentRef& agent) const;

  // Labels plus the derived propositions "@state_<name>" and "obs_<agent>_<symbol>".
  bool state_satisfies(StateIndex s, const std::string& prop) const;

  bool operator==(const PODTMC& o) const;
};

std::string state_proposition(const std::string& state_name);
std::string observation_proposition(const std::string& agent_name, const std::string& symbol);

/// Empty result means the model is well formed.
std::vector<std::string> validate(const PODTMC& m);

Rational cylinder_probability(const PODTMC& m, const PathPrefix& prefix);

/// Marginal state distribution at time t: init * trans^t.
Distribution distribution_at(const PODTMC& m, unsigned long t);

/// Marginals for t = 0..horizon in one pass.
std::vector<Distribution> transient_table(const PODTMC& m, unsigned long horizon);

/// Copy of m with "@state_<name>" added to each state's labels.
PODTMC with_state_propositions(const PODTMC& m);

/// Copy of m with "obs_<agent>_<symbol>" added to each state's labels.
PODTMC with_observation_propositions(const PODTMC& m);

} // namespace pomc
