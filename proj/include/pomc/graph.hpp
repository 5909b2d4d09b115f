#pragma once

#include <string>
#include <vector>

#include "pomc/model.hpp"

namespace pomc {

/// Masks mark state sets: mask[s] != 0 means s is in the set. All traversal
/// below follows positive-probability transitions only, so the answers depend
/// on the support of the model, not the specific probabilities.

/// Forward closure of `start` (includes the start states themselves).
std::vector<char> reachable_states(const PODTMC& m, const std::vector<char>& start);

/// Largest subset of in_p closed under transitions: once inside, every run
/// stays in p forever.
std::vector<char> closed_subset(const PODTMC& m, const std::vector<char>& in_p);

/// Some infinite path from a start state stays in p forever.
bool exists_path_globally(const PODTMC& m, const std::vector<char>& start,
                          const std::vector<char>& in_p);

/// Pr(G p) > 0 from the start distribution.
bool prob_globally_positive(const PODTMC& m, const Distribution& start,
                            const std::vector<char>& in_p);

/// Mask of states satisfying a named proposition; rejects names no state could
/// ever satisfy.
std::vector<char> proposition_mask(const PODTMC& m, const std::string& prop);

bool exists_path_globally(const PODTMC& m, const std::vector<StateIndex>& start,
                          const std::string& prop);
bool prob_globally_positive(const PODTMC& m, const Distribution& start, const std::string& prop);

} // namespace pomc
