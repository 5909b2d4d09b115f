#include "pomc/graph.hpp"

#include <deque>

#include "pomc/error.hpp"

namespace pomc {

namespace {

bool positive(const Rational& r) { return !(r == Rational(0)); }

} // namespace

std::vector<char> reachable_states(const PODTMC& m, const std::vector<char>& start) {
  std::vector<char> seen(m.num_states(), 0);
  std::deque<StateIndex> queue;
  for (StateIndex s = 0; s < m.num_states(); ++s)
    if (start[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateIndex s = queue.front();
    queue.pop_front();
    for (StateIndex t = 0; t < m.num_states(); ++t)
      if (!seen[t] && positive(m.trans.at(s, t))) {
        seen[t] = 1;
        queue.push_back(t);
      }
  }
  return seen;
}

std::vector<char> closed_subset(const PODTMC& m, const std::vector<char>& in_p) {
  // Complement of the backward closure of the non-p states.
  std::vector<char> escapes(m.num_states(), 0);
  std::deque<StateIndex> queue;
  for (StateIndex s = 0; s < m.num_states(); ++s)
    if (!in_p[s]) {
      escapes[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateIndex t = queue.front();
    queue.pop_front();
    for (StateIndex s = 0; s < m.num_states(); ++s)
      if (!escapes[s] && positive(m.trans.at(s, t))) {
        escapes[s] = 1;
        queue.push_back(s);
      }
  }
  std::vector<char> closed(m.num_states(), 0);
  for (StateIndex s = 0; s < m.num_states(); ++s) closed[s] = !escapes[s];
  return closed;
}

bool exists_path_globally(const PODTMC& m, const std::vector<char>& start,
                          const std::vector<char>& in_p) {
  // Prune p-states with no successor inside the set; the fixed point is
  // exactly the set of states admitting an infinite p-internal path.
  std::vector<char> live = in_p;
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      if (!live[s]) continue;
      bool has_successor = false;
      for (StateIndex t = 0; t < m.num_states(); ++t)
        if (live[t] && positive(m.trans.at(s, t))) {
          has_successor = true;
          break;
        }
      if (!has_successor) {
        live[s] = 0;
        changed = true;
      }
    }
  }
  for (StateIndex s = 0; s < m.num_states(); ++s)
    if (start[s] && live[s]) return true;
  return false;
}

bool prob_globally_positive(const PODTMC& m, const Distribution& start,
                            const std::vector<char>& in_p) {
  std::vector<char> closed = closed_subset(m, in_p);
  // Search for a p-internal path from a positive-mass start state into the
  // closed core; from there the run stays in p with probability 1.
  std::vector<char> seen(m.num_states(), 0);
  std::deque<StateIndex> queue;
  for (StateIndex s = 0; s < m.num_states(); ++s)
    if (positive(start[s]) && in_p[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateIndex s = queue.front();
    queue.pop_front();
    if (closed[s]) return true;
    for (StateIndex t = 0; t < m.num_states(); ++t)
      if (!seen[t] && in_p[t] && positive(m.trans.at(s, t))) {
        seen[t] = 1;
        queue.push_back(t);
      }
  }
  return false;
}

std::vector<char> proposition_mask(const PODTMC& m, const std::string& prop) {
  std::vector<char> mask(m.num_states(), 0);
  bool any = false;
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    mask[s] = m.state_satisfies(s, prop);
    any = any || mask[s];
  }
  // Labels and the derived forms are the only proposition sources, so a name
  // no state satisfies was never introduced anywhere.
  if (!any) throw Error(ErrorCode::unknown_proposition, "proposition '" + prop + "' labels no state");
  return mask;
}

bool exists_path_globally(const PODTMC& m, const std::vector<StateIndex>& start,
                          const std::string& prop) {
  std::vector<char> start_mask(m.num_states(), 0);
  for (StateIndex s : start) {
    if (s >= m.num_states())
      throw Error(ErrorCode::unknown_state, "state index out of range");
    start_mask[s] = 1;
  }
  return exists_path_globally(m, start_mask, proposition_mask(m, prop));
}

bool prob_globally_positive(const PODTMC& m, const Distribution& start, const std::string& prop) {
  return prob_globally_positive(m, start, proposition_mask(m, prop));
}

} // namespace pomc
