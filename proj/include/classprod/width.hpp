#pragma once

#include <cstdint>

#include "classprod/groups.hpp"

namespace classprod {

inline constexpr size_t kDefaultMemCap = 64u * 1000 * 1000;
size_t mem_cap_from_env();  // CLASSPROD_MEM_CAP overrides the default

// {a * b : a in A, b in B}, deduplicated. Throws overflow past cap.
ElementSet product_set(const Realization& R, const ElementSet& A, const ElementSet& B,
                       size_t cap, int threads = 1);

struct CoverageReport {
  bool covered = false;
  int achieved_m = 0;              // first m with equality, 0 if never
  std::vector<size_t> growth;      // product set sizes after each step
};

// Left-to-right products H^{g_1} H^{g_2} ... until the set equals G or the
// conjugators run out. Pieces act as g * H * g^{-1}.
CoverageReport coverage_width(const Realization& R, const ElementSet& G,
                              const ElementSet& H, const std::vector<Elem>& conjugators,
                              size_t cap, int threads = 1);

struct GreedyReport {
  bool covered = false;
  int achieved_m = 0;
  std::vector<size_t> growth;
  std::vector<int> chosen;  // indices into the pool
};

// Greedily picks the pool conjugator maximizing growth at each step.
// Deterministic given the pool order; budget bounds the number of steps.
GreedyReport greedy_width_search(const Realization& R, const ElementSet& G,
                                 const ElementSet& H, const std::vector<Elem>& pool,
                                 int budget, size_t cap);

// Seeded conjugator pool: random words in the root elements.
std::vector<Elem> random_conjugators(const Realization& R, int count, uint64_t seed);

}  // namespace classprod
