#include "pomc/semidecide.hpp"

#include <set>
#include <utility>
#include <vector>

#include "pomc/error.hpp"
#include "pomc/graph.hpp"

namespace pomc {

namespace {

std::vector<char> prop_states(const PODTMC& m, const std::string& prop) {
  std::vector<char> mask(m.num_states(), 0);
  for (StateIndex s = 0; s < m.num_states(); ++s) mask[s] = m.state_satisfies(s, prop);
  return mask;
}

Rational masked_mass(const Distribution& d, const std::vector<char>& mask) {
  Rational v;
  for (std::size_t s = 0; s < d.size(); ++s)
    if (mask[s]) v += d[s];
  return v;
}

/// table[k][t] = mass of atoms[k].prop at time t.
std::vector<std::vector<Rational>> atom_masses(const PODTMC& m, const MixedTimeFormula& f,
                                               unsigned long T) {
  auto dist = transient_table(m, T);
  std::vector<std::vector<Rational>> table;
  table.reserve(f.atoms.size());
  for (const MixedAtom& a : f.atoms) {
    auto mask = prop_states(m, a.prop);
    std::vector<Rational> row(T + 1);
    for (unsigned long t = 0; t <= T; ++t) row[t] = masked_mass(dist[t], mask);
    table.push_back(std::move(row));
  }
  return table;
}

/// Tuple at flattened index i; numeric index order is lexicographic tuple
/// order with the first variable most significant.
std::vector<unsigned long> decode(unsigned long long i, std::size_t n, unsigned long long base) {
  std::vector<unsigned long> assign(n);
  for (std::size_t j = n; j-- > 0;) {
    assign[j] = static_cast<unsigned long>(i % base);
    i /= base;
  }
  return assign;
}

bool grid_point_sat(const MixedTimeFormula& f, const std::vector<std::vector<Rational>>& table,
                    const std::vector<unsigned long>& assign) {
  std::vector<Rational> values;
  values.reserve(f.atoms.size());
  for (std::size_t k = 0; k < f.atoms.size(); ++k)
    values.push_back(table[k][assign[f.atoms[k].var]]);
  return rel_holds(f.poly.eval(values), f.rel, f.rhs);
}

Verdict named_witness(const std::vector<std::string>& vars,
                      const std::vector<unsigned long>& assign) {
  std::vector<std::pair<std::string, unsigned long>> out;
  out.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) out.emplace_back(vars[j], assign[j]);
  return Verdict::witness(std::move(out));
}

std::vector<char> initial_support(const PODTMC& m) {
  std::vector<char> cur(m.num_states(), 0);
  for (StateIndex s = 0; s < m.num_states(); ++s) cur[s] = !m.init[s].is_zero();
  return cur;
}

std::vector<char> post_support(const PODTMC& m, const std::vector<char>& cur) {
  std::vector<char> next(m.num_states(), 0);
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    if (!cur[s]) continue;
    for (StateIndex u = 0; u < m.num_states(); ++u)
      if (!m.trans.at(s, u).is_zero()) next[u] = 1;
  }
  return next;
}

/// The c = 0 comparisons depend only on the support sequence, which is a
/// deterministic walk over subsets and therefore eventually periodic.
Verdict zero_case(const PODTMC& m, const std::vector<char>& pmask, Rel rel) {
  switch (rel) {
    case Rel::lt:
      return Verdict::fails(); // masses are never negative
    case Rel::ge:
      return Verdict::holds(); // t = 0 already qualifies
    case Rel::gt: {
      auto reach = reachable_states(m, initial_support(m));
      for (std::size_t s = 0; s < reach.size(); ++s)
        if (reach[s] && pmask[s]) return Verdict::holds();
      return Verdict::fails();
    }
    default: { // le, eq: some support must avoid the proposition entirely
      std::set<std::vector<char>> seen;
      std::vector<char> cur = initial_support(m);
      for (;;) {
        bool hit = false;
        for (std::size_t s = 0; s < cur.size(); ++s)
          if (cur[s] && pmask[s]) hit = true;
        if (!hit) return Verdict::holds();
        if (!seen.insert(cur).second) return Verdict::fails();
        cur = post_support(m, cur);
      }
    }
  }
}

} // namespace

Verdict check_mixed_time(const PODTMC& m, const MixedTimeFormula& f, unsigned long T,
                         RunMode mode) {
  auto table = atom_masses(m, f, T);
  std::size_t n = f.vars.size();
  unsigned long long base = static_cast<unsigned long long>(T) + 1;
  unsigned long long total = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (total > (1ULL << 62) / base)
      throw Error(ErrorCode::invalid_argument, "time grid (T+1)^n is too large to search");
    total *= base;
  }

  unsigned long long found = total;
  if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(static) reduction(min : found)
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
      unsigned long long u = static_cast<unsigned long long>(i);
      if (u >= found) continue;
      if (grid_point_sat(f, table, decode(u, n, base))) found = u;
    }
  } else {
    for (unsigned long long i = 0; i < total; ++i)
      if (grid_point_sat(f, table, decode(i, n, base))) {
        found = i;
        break;
      }
  }
  if (found == total) return Verdict::no_witness_up_to(T);
  return named_witness(f.vars, decode(found, n, base));
}

Verdict check_skolem_form(const PODTMC& m, const std::string& prop, Rel rel, const Rational& c,
                          unsigned long T, RunMode mode) {
  auto pmask = prop_states(m, prop);
  if (c.is_zero()) return zero_case(m, pmask, rel);

  auto dist = transient_table(m, T);
  unsigned long long found = static_cast<unsigned long long>(T) + 1;
  if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(static) reduction(min : found)
    for (long long i = 0; i <= static_cast<long long>(T); ++i) {
      unsigned long long u = static_cast<unsigned long long>(i);
      if (u >= found) continue;
      if (rel_holds(masked_mass(dist[u], pmask), rel, c)) found = u;
    }
  } else {
    for (unsigned long long t = 0; t <= T; ++t)
      if (rel_holds(masked_mass(dist[t], pmask), rel, c)) {
        found = t;
        break;
      }
  }
  if (found > T) return Verdict::no_witness_up_to(T);
  return Verdict::witness({{"t", static_cast<unsigned long>(found)}});
}

} // namespace pomc
