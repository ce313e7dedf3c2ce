#include "classprod/width.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <thread>

namespace classprod {

size_t mem_cap_from_env() {
  if (const char* v = std::getenv("CLASSPROD_MEM_CAP")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && n > 0) return static_cast<size_t>(n);
  }
  return kDefaultMemCap;
}

namespace {

// Worker partition over a sorted key snapshot; the merged result equals the
// single-threaded set, so reports do not depend on the thread count.
ElementSet product_against(const Realization& R, const std::vector<std::string>& akeys,
                           const std::vector<Elem>& belems, size_t cap, int threads,
                           const std::string& source) {
  ElementSet out;
  out.spec = R.groupspec;
  out.source = source;
  threads = std::max(1, threads);
  if (threads == 1 || akeys.size() < 64) {
    for (const auto& ak : akeys) {
      Elem a = decode_canon(R, ak);
      for (const Elem& b : belems) {
        out.keys.insert(canon(emul(a, b)));
        require(out.keys.size() <= cap, Errc::overflow, "product set exceeded cap");
      }
    }
    return out;
  }
  std::vector<std::unordered_set<std::string>> parts(threads);
  std::vector<std::thread> pool;
  size_t chunk = (akeys.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      size_t lo = t * chunk, hi = std::min(akeys.size(), lo + chunk);
      for (size_t i = lo; i < hi; ++i) {
        Elem a = decode_canon(R, akeys[i]);
        for (const Elem& b : belems) parts[t].insert(canon(emul(a, b)));
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& p : parts)
    for (auto& k : p) {
      out.keys.insert(std::move(k));
      require(out.keys.size() <= cap, Errc::overflow, "product set exceeded cap");
    }
  return out;
}

std::vector<std::string> sorted_keys(const ElementSet& s) {
  std::vector<std::string> k(s.keys.begin(), s.keys.end());
  std::sort(k.begin(), k.end());
  return k;
}

std::vector<Elem> decoded(const Realization& R, const ElementSet& s) {
  std::vector<Elem> out;
  for (const auto& k : sorted_keys(s)) out.push_back(decode_canon(R, k));
  return out;
}

}  // namespace

ElementSet product_set(const Realization& R, const ElementSet& A, const ElementSet& B,
                       size_t cap, int threads) {
  require(A.spec == R.groupspec && B.spec == R.groupspec, Errc::realization_mismatch,
          "product of sets from different realizations");
  return product_against(R, sorted_keys(A), decoded(R, B), cap, threads,
                         A.source + "*" + B.source);
}

CoverageReport coverage_width(const Realization& R, const ElementSet& G,
                              const ElementSet& H, const std::vector<Elem>& conjugators,
                              size_t cap, int threads) {
  require(G.spec == R.groupspec && H.spec == R.groupspec, Errc::realization_mismatch,
          "sets from a different realization");
  for (const auto& k : H.keys)
    require(G.contains(k), Errc::realization_mismatch, "H is not a subset of G");
  CoverageReport rep;
  ElementSet cur;
  cur.spec = R.groupspec;
  cur.source = "coverage";
  cur.keys.insert(canon(R.identity()));
  std::vector<Elem> helems = decoded(R, H);
  for (size_t m = 0; m < conjugators.size(); ++m) {
    const Elem& c = conjugators[m];
    std::vector<Elem> piece;
    piece.reserve(helems.size());
    for (const Elem& h : helems) piece.push_back(emul(emul(c, h), einv(c)));
    cur = product_against(R, sorted_keys(cur), piece, cap, threads, "coverage");
    rep.growth.push_back(cur.size());
    if (cur.size() == G.size()) {
      bool equal = true;
      for (const auto& k : cur.keys)
        if (!G.contains(k)) { equal = false; break; }
      if (equal) {
        rep.covered = true;
        rep.achieved_m = static_cast<int>(m + 1);
        return rep;
      }
    }
  }
  return rep;
}

GreedyReport greedy_width_search(const Realization& R, const ElementSet& G,
                                 const ElementSet& H, const std::vector<Elem>& pool,
                                 int budget, size_t cap) {
  GreedyReport rep;
  ElementSet cur;
  cur.spec = R.groupspec;
  cur.source = "greedy";
  cur.keys.insert(canon(R.identity()));
  std::vector<Elem> helems = decoded(R, H);
  std::vector<std::vector<Elem>> pieces;
  for (const Elem& c : pool) {
    std::vector<Elem> piece;
    for (const Elem& h : helems) piece.push_back(emul(emul(c, h), einv(c)));
    pieces.push_back(std::move(piece));
  }
  for (int step = 0; step < budget; ++step) {
    size_t best = 0;
    int besti = -1;
    ElementSet bestset;
    auto keys = sorted_keys(cur);
    for (size_t i = 0; i < pieces.size(); ++i) {
      ElementSet cand = product_against(R, keys, pieces[i], cap, 1, "greedy");
      if (cand.size() > best) {
        best = cand.size();
        besti = static_cast<int>(i);
        bestset = std::move(cand);
      }
    }
    require(besti >= 0, Errc::budget_exhausted, "empty conjugator pool");
    cur = std::move(bestset);
    rep.chosen.push_back(besti);
    rep.growth.push_back(cur.size());
    if (cur.size() == G.size()) {
      rep.covered = true;
      rep.achieved_m = step + 1;
      return rep;
    }
  }
  fail(Errc::budget_exhausted,
       "greedy search did not cover within " + std::to_string(budget) + " steps");
}

std::vector<Elem> random_conjugators(const Realization& R, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto gens = all_root_elements(R);
  std::vector<Elem> out;
  for (int i = 0; i < count; ++i) {
    Elem g = R.identity();
    for (int j = 0; j < 20; ++j) g = emul(g, gens[rng() % gens.size()]);
    out.push_back(g);
  }
  return out;
}

}  // namespace classprod
