#include "pomc/model.hpp"

#include <algorithm>
#include <map>

#include "pomc/error.hpp"

namespace pomc {

Rational Distribution::sum() const {
  Rational s;
  for (const auto& x : w) s += x;
  return s;
}

bool Distribution::is_distribution() const {
  for (const auto& x : w)
    if (x.sign() < 0) return false;
  return sum().is_one();
}

std::optional<StateIndex> PODTMC::state_index(const std::string& name) const {
  for (StateIndex i = 0; i < states.size(); ++i)
    if (states[i] == name) return i;
  return std::nullopt;
}

StateIndex PODTMC::require_state(const std::string& name) const {
  auto idx = state_index(name);
  if (!idx) throw Error(ErrorCode::unknown_state, "no state named '" + name + "'");
  return *idx;
}

AgentRef PODTMC::resolve_agent(const std::string& name) const {
  if (name == kTopAgent) return {AgentRef::Kind::top, 0};
  if (name == kBotAgent) return {AgentRef::Kind::bot, 0};
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i] == name) return {AgentRef::Kind::model, i};
  throw Error(ErrorCode::unknown_agent, "no agent named '" + name + "'");
}

const std::string& PODTMC::observation(const AgentRef& agent, StateIndex s) const {
  switch (agent.kind) {
    case AgentRef::Kind::top: return states[s];
    case AgentRef::Kind::bot: {
      static const std::string bot = kBotSymbol;
      return bot;
    }
    case AgentRef::Kind::model: return obs[agent.index][s];
  }
  throw Error(ErrorCode::unknown_agent, "bad agent reference");
}

std::vector<std::string> PODTMC::observation_range(const AgentRef& agent) const {
  std::set<std::string> range;
  for (StateIndex s = 0; s < states.size(); ++s) range.insert(observation(agent, s));
  return {range.begin(), range.end()};
}

bool PODTMC::state_satisfies(StateIndex s, const std::string& prop) const {
  if (labels[s].count(prop)) return true;
  constexpr const char* state_prefix = "@state_";
  if (prop.rfind(state_prefix, 0) == 0) return prop.substr(7) == states[s];
  constexpr const char* obs_prefix = "obs_";
  if (prop.rfind(obs_prefix, 0) == 0) {
    std::string rest = prop.substr(4);
    for (std::size_t a = 0; a < agents.size(); ++a) {
      const std::string& name = agents[a];
      if (rest.size() > name.size() + 1 && rest.compare(0, name.size(), name) == 0 &&
          rest[name.size()] == '_') {
        return obs[a][s] == rest.substr(name.size() + 1);
      }
    }
  }
  return false;
}

bool PODTMC::operator==(const PODTMC& o) const {
  return states == o.states && init == o.init && trans == o.trans && agents == o.agents &&
         obs == o.obs && labels == o.labels;
}

std::string state_proposition(const std::string& state_name) { return "@state_" + state_name; }

std::string observation_proposition(const std::string& agent_name, const std::string& symbol) {
  return "obs_" + agent_name + "_" + symbol;
}

std::vector<std::string> validate(const PODTMC& m) {
  std::vector<std::string> bad;
  const std::size_t n = m.states.size();
  if (n == 0) {
    bad.push_back("model has no states");
    return bad;
  }
  {
    std::set<std::string> seen;
    for (const auto& s : m.states) {
      if (!seen.insert(s).second) bad.push_back("duplicate state name '" + s + "'");
      if (!s.empty() && s[0] == '@') bad.push_back("state name '" + s + "' uses reserved prefix '@'");
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& a : m.agents) {
      if (!seen.insert(a).second) bad.push_back("duplicate agent name '" + a + "'");
      if (!a.empty() && a[0] == '@') bad.push_back("agent name '" + a + "' uses reserved prefix '@'");
    }
  }
  if (m.init.size() != n) {
    bad.push_back("initial distribution size differs from state count");
  } else if (!m.init.is_distribution()) {
    bad.push_back("initial weights are not a probability distribution");
  }
  if (m.trans.rows() != n || m.trans.cols() != n) {
    bad.push_back("transition matrix shape differs from state count");
  } else if (!m.trans.is_stochastic()) {
    bad.push_back("transition matrix is not row-stochastic");
  }
  if (m.obs.size() != m.agents.size()) {
    bad.push_back("observation map count differs from agent count");
  } else {
    for (std::size_t a = 0; a < m.obs.size(); ++a) {
      if (m.obs[a].size() != n) {
        bad.push_back("observation map for agent '" + m.agents[a] + "' is not total");
        continue;
      }
      for (StateIndex s = 0; s < n; ++s) {
        if (m.obs[a][s].empty())
          bad.push_back("empty observation symbol for agent '" + m.agents[a] + "'");
      }
    }
  }
  if (m.labels.size() != n) {
    bad.push_back("label map size differs from state count");
  } else {
    // A user label spelled like a derived proposition must agree with it.
    for (StateIndex s = 0; s < n; ++s) {
      for (const auto& p : m.labels[s]) {
        if (p.rfind("@state_", 0) == 0 && p.substr(7) != m.states[s])
          bad.push_back("label '" + p + "' on state '" + m.states[s] +
                        "' contradicts its derived meaning");
        if (p.rfind("obs_", 0) != 0 || m.obs.size() != m.agents.size()) continue;
        std::string rest = p.substr(4);
        for (std::size_t a = 0; a < m.agents.size(); ++a) {
          const std::string& name = m.agents[a];
          if (rest.size() > name.size() + 1 && rest.compare(0, name.size(), name) == 0 &&
              rest[name.size()] == '_' && m.obs[a].size() == n &&
              m.obs[a][s] != rest.substr(name.size() + 1)) {
            bad.push_back("label '" + p + "' on state '" + m.states[s] +
                          "' contradicts agent '" + name + "' observing '" + m.obs[a][s] + "'");
          }
        }
      }
    }
  }
  return bad;
}

Rational cylinder_probability(const PODTMC& m, const PathPrefix& prefix) {
  if (prefix.states.empty()) throw Error(ErrorCode::invalid_prefix, "empty path prefix");
  for (StateIndex s : prefix.states) {
    if (s >= m.num_states()) throw Error(ErrorCode::invalid_prefix, "state index out of range");
  }
  Rational p = m.init[prefix.states[0]];
  if (p.is_zero())
    throw Error(ErrorCode::invalid_prefix, "prefix starts in a zero-probability state");
  for (std::size_t i = 0; i + 1 < prefix.states.size(); ++i) {
    const Rational& step = m.trans.at(prefix.states[i], prefix.states[i + 1]);
    if (step.is_zero()) throw Error(ErrorCode::invalid_prefix, "prefix uses a zero-probability transition");
    p *= step;
  }
  return p;
}

Distribution distribution_at(const PODTMC& m, unsigned long t) {
  Distribution d;
  d.w = m.init.w;
  for (unsigned long i = 0; i < t; ++i) d.w = row_times_matrix(d.w, m.trans);
  return d;
}

std::vector<Distribution> transient_table(const PODTMC& m, unsigned long horizon) {
  std::vector<Distribution> out;
  out.reserve(horizon + 1);
  Distribution d;
  d.w = m.init.w;
  out.push_back(d);
  for (unsigned long t = 1; t <= horizon; ++t) {
    d.w = row_times_matrix(d.w, m.trans);
    out.push_back(d);
  }
  return out;
}

PODTMC with_state_propositions(const PODTMC& m) {
  PODTMC out = m;
  for (StateIndex s = 0; s < out.num_states(); ++s)
    out.labels[s].insert(state_proposition(out.states[s]));
  return out;
}

PODTMC with_observation_propositions(const PODTMC& m) {
  PODTMC out = m;
  for (std::size_t a = 0; a < out.agents.size(); ++a)
    for (StateIndex s = 0; s < out.num_states(); ++s)
      out.labels[s].insert(observation_proposition(out.agents[a], out.obs[a][s]));
  return out;
}

} // namespace pomc
