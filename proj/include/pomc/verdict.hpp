#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pomc {

/// Outcome of a check or a bounded semidecision search.
struct Verdict {
  enum class Kind { holds, fails, witness, no_witness_up_to };

  Kind kind = Kind::fails;
  std::vector<std::pair<std::string, unsigned long>> assignment; // witness only
  unsigned long bound = 0;                                       // no_witness_up_to only

  static Verdict holds() { return {Kind::holds, {}, 0}; }
  static Verdict fails() { return {Kind::fails, {}, 0}; }
  static Verdict witness(std::vector<std::pair<std::string, unsigned long>> a) {
    return {Kind::witness, std::move(a), 0};
  }
  static Verdict no_witness_up_to(unsigned long t) { return {Kind::no_witness_up_to, {}, t}; }

  bool operator==(const Verdict& o) const {
    return kind == o.kind && assignment == o.assignment && bound == o.bound;
  }
};

std::string to_string(const Verdict& v);

} // namespace pomc
