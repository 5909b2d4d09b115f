#pragma once

#include <stdexcept>

#include "pomc/model.hpp"
#include "pomc/model_io.hpp"

// Small models shared across test files.

namespace fixtures {

inline pomc::PODTMC load(const char* text) {
  pomc::PODTMC m = pomc::parse_model(text);
  if (!pomc::validate(m).empty()) throw std::logic_error("fixture model is malformed");
  return m;
}

// Two states: s loops with 1/2 and falls through to absorbing u with 1/2.
// The agent cannot distinguish them, yet almost every run reaches u.
inline const char* kEscapeChain = R"(
states: s u
init: s 1
trans: s -> s 1/2, s -> u 1/2
trans: u -> u 1
agent i obs: s o, u o
label: s {q}
label: u {not_q}
)";

// Three states under identity dynamics; agent sees a on u,v and b on w.
inline const char* kClockExample = R"(
states: u v w
init: u 1/3, v 1/3, w 1/3
trans: u -> u 1, v -> v 1, w -> w 1
agent i obs: u a, v a, w b
label: u {p}
)";

// g absorbs; h drains into g at rate 1/2. The declared agent is blind.
inline const char* kDrainChain = R"(
states: g h
init: g 1/2, h 1/2
trans: g -> g 1
trans: h -> g 1/2, h -> h 1/2
agent i obs: g c, h c
label: g {p}
)";

// Both initial states reach indistinguishable successors: the time-1
// observation oc is shared, but the time-0 observation reveals the branch.
inline const char* kHistorySplit = R"(
states: a0 b0 c d
init: a0 1/2, b0 1/2
trans: a0 -> c 1, b0 -> d 1
trans: c -> c 1
trans: d -> d 1
agent i obs: a0 oa, b0 ob, c oc, d oc
label: c {p}
)";

// p-mass halves every step: a keeps p and leaks into absorbing b.
inline const char* kHalvingChain = R"(
states: a b
init: a 1
trans: a -> a 1/2, a -> b 1/2
trans: b -> b 1
agent i obs: a o, b o
label: a {p}
)";

// p-mass at time t is t/2^t: the middle state is fed by a at the same rate
// it drains into absorbing d.
inline const char* kLinearChain = R"(
states: a b d
init: a 1
trans: a -> a 1/2, a -> b 1/2
trans: b -> b 1/2, b -> d 1/2
trans: d -> d 1
agent i obs: a o, b o, d o
label: b {p}
)";

} // namespace fixtures
