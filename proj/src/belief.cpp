#include "pomc/belief.hpp"

#include <algorithm>

#include "pomc/error.hpp"

namespace pomc {

namespace {

void require_known_symbol(const PODTMC& m, const AgentRef& agent, const std::string& symbol) {
  for (StateIndex s = 0; s < m.num_states(); ++s)
    if (m.observation(agent, s) == symbol) return;
  throw Error(ErrorCode::unknown_observation, "no state produces observation '" + symbol + "'");
}

Distribution normalized(std::vector<Rational> weights, const Rational& total) {
  Distribution d(weights.size());
  for (std::size_t s = 0; s < weights.size(); ++s) d[s] = weights[s] / total;
  return d;
}

} // namespace

BeliefState clock_belief(const PODTMC& m, const AgentRef& agent, unsigned long t,
                         const std::string& obs) {
  require_known_symbol(m, agent, obs);
  Distribution prior = distribution_at(m, t);
  std::vector<Rational> weights(m.num_states());
  Rational total;
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    if (m.observation(agent, s) != obs) continue;
    weights[s] = prior[s];
    total += prior[s];
  }
  if (total == Rational(0))
    throw Error(ErrorCode::zero_mass_observation,
                "observation '" + obs + "' has probability 0 at time " + std::to_string(t));
  BeliefState b;
  b.agent = agent;
  b.time = t;
  b.clock_obs = obs;
  b.posterior = normalized(std::move(weights), total);
  return b;
}

std::vector<Rational> filter_weights(const PODTMC& m, const ObservationSequence& history) {
  if (history.symbols.empty())
    throw Error(ErrorCode::invalid_argument, "observation sequence must be nonempty");
  for (const std::string& symbol : history.symbols)
    require_known_symbol(m, history.agent, symbol);

  std::vector<Rational> alpha(m.num_states());
  for (StateIndex s = 0; s < m.num_states(); ++s)
    if (m.observation(history.agent, s) == history.symbols[0]) alpha[s] = m.init[s];

  for (std::size_t step = 1; step < history.symbols.size(); ++step) {
    std::vector<Rational> next(m.num_states());
    for (StateIndex to = 0; to < m.num_states(); ++to) {
      if (m.observation(history.agent, to) != history.symbols[step]) continue;
      Rational mass;
      for (StateIndex from = 0; from < m.num_states(); ++from)
        mass += alpha[from] * m.trans.at(from, to);
      next[to] = mass;
    }
    alpha = std::move(next);
  }
  return alpha;
}

BeliefState spr_belief(const PODTMC& m, const ObservationSequence& history) {
  std::vector<Rational> alpha = filter_weights(m, history);
  Rational total;
  for (const Rational& w : alpha) total += w;
  if (total == Rational(0))
    throw Error(ErrorCode::zero_mass_history, "observation sequence has probability 0");
  BeliefState b;
  b.agent = history.agent;
  b.time = history.time();
  b.history = history;
  b.posterior = normalized(std::move(alpha), total);
  return b;
}

Rational history_probability(const PODTMC& m, const ObservationSequence& history) {
  std::vector<Rational> alpha = filter_weights(m, history);
  Rational total;
  for (const Rational& w : alpha) total += w;
  return total;
}

namespace {

void extend_histories(const PODTMC& m, const AgentRef& agent,
                      const std::vector<std::string>& range, unsigned long horizon,
                      ObservationSequence& prefix, const std::vector<Rational>& alpha,
                      std::vector<std::pair<ObservationSequence, Rational>>& out) {
  if (prefix.symbols.size() == horizon + 1) {
    Rational total;
    for (const Rational& w : alpha) total += w;
    out.emplace_back(prefix, total);
    return;
  }
  bool first = prefix.symbols.empty();
  for (const std::string& symbol : range) {
    std::vector<Rational> next(m.num_states());
    bool positive = false;
    for (StateIndex to = 0; to < m.num_states(); ++to) {
      if (m.observation(agent, to) != symbol) continue;
      Rational mass;
      if (first) {
        mass = m.init[to];
      } else {
        for (StateIndex from = 0; from < m.num_states(); ++from)
          mass += alpha[from] * m.trans.at(from, to);
      }
      if (!(mass == Rational(0))) positive = true;
      next[to] = mass;
    }
    if (!positive) continue;
    prefix.symbols.push_back(symbol);
    extend_histories(m, agent, range, horizon, prefix, next, out);
    prefix.symbols.pop_back();
  }
}

} // namespace

std::vector<std::pair<ObservationSequence, Rational>> enumerate_histories(const PODTMC& m,
                                                                          const AgentRef& agent,
                                                                          unsigned long horizon) {
  std::vector<std::pair<ObservationSequence, Rational>> out;
  ObservationSequence prefix{agent, {}};
  extend_histories(m, agent, m.observation_range(agent), horizon, prefix, {}, out);
  return out;
}

std::vector<StateIndex> knowledge_support(const BeliefState& b) {
  std::vector<StateIndex> support;
  for (StateIndex s = 0; s < b.posterior.size(); ++s)
    if (!(b.posterior[s] == Rational(0))) support.push_back(s);
  return support;
}

std::vector<StateIndex> knowledge_support(const PODTMC& m, const AgentRef& agent, unsigned long t,
                                          const std::string& obs) {
  return knowledge_support(clock_belief(m, agent, t, obs));
}

std::vector<StateIndex> knowledge_support(const PODTMC& m, const ObservationSequence& history) {
  return knowledge_support(spr_belief(m, history));
}

} // namespace pomc
