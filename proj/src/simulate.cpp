#include "pomc/simulate.hpp"

#include <random>

namespace pomc {

namespace {

/// splitmix64 finalizer over (seed, path index); decorrelates neighboring
/// paths without sharing generator state across threads.
std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Cumulative weights as 64-bit fixed-point cutoffs: a raw draw r selects the
/// first index whose cutoff exceeds r. Zero-weight entries get an empty
/// interval and are never selected.
std::vector<mpz_class> cutoffs(const std::vector<Rational>& w) {
  std::vector<mpz_class> out;
  out.reserve(w.size());
  Rational cum;
  for (const Rational& x : w) {
    cum += x;
    out.push_back((mpz_class(cum.numerator()) << 64) / cum.denominator());
  }
  return out;
}

StateIndex draw(const std::vector<mpz_class>& cut, std::mt19937_64& rng) {
  unsigned long r = rng();
  for (std::size_t k = 0; k < cut.size(); ++k)
    if (mpz_cmp_ui(cut[k].get_mpz_t(), r) > 0) return static_cast<StateIndex>(k);
  return static_cast<StateIndex>(cut.size() - 1);
}

} // namespace

FrequencyTable simulate_runs(const PODTMC& m, unsigned long horizon, unsigned long n,
                             std::uint64_t seed, RunMode mode) {
  FrequencyTable out;
  out.runs = n;
  if (n == 0) return out;
  std::size_t ns = m.num_states();
  out.counts.assign(horizon + 1, std::vector<unsigned long>(ns, 0));

  auto init_cut = cutoffs(m.init.w);
  std::vector<std::vector<mpz_class>> row_cut(ns);
  for (StateIndex s = 0; s < ns; ++s) {
    std::vector<Rational> row(ns);
    for (StateIndex u = 0; u < ns; ++u) row[u] = m.trans.at(s, u);
    row_cut[s] = cutoffs(row);
  }

  auto sample_into = [&](std::uint64_t i, std::vector<std::vector<unsigned long>>& counts) {
    std::mt19937_64 rng(mix(seed, i));
    StateIndex s = draw(init_cut, rng);
    ++counts[0][s];
    for (unsigned long t = 1; t <= horizon; ++t) {
      s = draw(row_cut[s], rng);
      ++counts[t][s];
    }
  };

  if (mode == RunMode::parallel) {
#pragma omp parallel
    {
      std::vector<std::vector<unsigned long>> local(horizon + 1,
                                                    std::vector<unsigned long>(ns, 0));
#pragma omp for schedule(static) nowait
      for (long long i = 0; i < static_cast<long long>(n); ++i)
        sample_into(static_cast<std::uint64_t>(i), local);
#pragma omp critical
      for (unsigned long t = 0; t <= horizon; ++t)
        for (StateIndex s = 0; s < ns; ++s) out.counts[t][s] += local[t][s];
    }
  } else {
    for (std::uint64_t i = 0; i < n; ++i) sample_into(i, out.counts);
  }
  return out;
}

} // namespace pomc
