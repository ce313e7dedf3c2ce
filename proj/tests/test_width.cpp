#include "doctest.h"

#include <cmath>
#include "classprod/decomp.hpp"
#include "classprod/width.hpp"

using namespace classprod;

namespace {
ElementSet singleton(const Realization& R) {
  ElementSet s;
  s.spec = R.groupspec;
  s.source = "1";
  s.keys.insert(canon(R.identity()));
  return s;
}
}  // namespace

TEST_CASE("product_set basics") {
  auto R = build_realization("C2@F3");
  auto uplus = bfs_generate(*R, subgroup_generators(*R, R->rs.positive), 1000, "U+");
  auto one = singleton(*R);
  auto p = product_set(*R, one, uplus, 1000);
  CHECK(p.size() == uplus.size());
  // subgroup closure: U+ * U+ = U+
  auto sq = product_set(*R, uplus, uplus, 1000);
  CHECK(sq.size() == 81);
  for (const auto& k : sq.keys) CHECK(uplus.contains(k));
  // bounds
  CHECK(sq.size() <= uplus.size() * uplus.size());
  CHECK(sq.size() >= uplus.size());
  // overflow
  auto all = all_root_elements(*R);
  ElementSet roots;
  roots.spec = R->groupspec;
  roots.source = "roots";
  for (const Elem& g : all) roots.keys.insert(canon(g));
  CHECK_THROWS_AS(product_set(*R, roots, roots, 10), Error);
  // realization mismatch
  auto R2 = build_realization("B2@F3");
  auto other = singleton(*R2);
  CHECK_THROWS_AS(product_set(*R, one, other, 100), Error);
}

TEST_CASE("thread count does not change product sets") {
  auto R = build_realization("2A3@F2^2");
  auto uplus = bfs_generate(*R, subgroup_generators(*R, R->rs.positive), 1000, "U+");
  std::vector<Root> neg;
  for (const Root& w : R->rs.positive) neg.push_back(-w);
  auto uminus = bfs_generate(*R, subgroup_generators(*R, neg), 1000, "U-");
  auto p1 = product_set(*R, uplus, uminus, 100000, 1);
  auto p2 = product_set(*R, uplus, uminus, 100000, 4);
  CHECK(p1.size() == p2.size());
  for (const auto& k : p1.keys) CHECK(p2.contains(k));
}

TEST_CASE("Liebeck-Pyber set identity on Sp4(3)") {
  auto R = build_realization("C2@F3");
  auto uplus = bfs_generate(*R, subgroup_generators(*R, R->rs.positive), 1000, "U+");
  std::vector<Root> neg;
  for (const Root& w : R->rs.positive) neg.push_back(-w);
  auto uminus = bfs_generate(*R, subgroup_generators(*R, neg), 1000, "U-");
  auto S = bfs_generate(*R, all_root_elements(*R), 100000, "S");
  CHECK(S.size() == 51840);
  ElementSet cur = singleton(*R);
  std::vector<size_t> sizes;
  for (int i = 0; i < 6; ++i) {
    cur = product_set(*R, cur, uplus, 100000);
    cur = product_set(*R, cur, uminus, 100000);
    sizes.push_back(cur.size());
    // monotone growth
    if (sizes.size() > 1) CHECK(sizes[sizes.size() - 1] >= sizes[sizes.size() - 2]);
  }
  cur = product_set(*R, cur, uplus, 100000);
  CHECK(cur.size() == S.size());
  for (const auto& k : cur.keys) CHECK(S.contains(k));
}

TEST_CASE("coverage_width trivial and plan lists") {
  auto R = build_realization("C2@F3");
  auto S = bfs_generate(*R, all_root_elements(*R), 100000, "S");
  auto rep = coverage_width(*R, S, S, {R->identity()}, 200000);
  CHECK(rep.covered);
  CHECK(rep.achieved_m == 1);
  // H not inside G is rejected
  ElementSet one = singleton(*R);
  CHECK_THROWS_AS(coverage_width(*R, one, S, {R->identity()}, 200000), Error);
}

TEST_CASE("five stabilizer factors cover SL4(2)") {
  auto R = build_realization("A3@F2");
  const Field& f = *R->F;
  auto S = bfs_generate(*R, all_root_elements(*R), 30000, "S");
  CHECK(S.size() == 20160);
  // H = S(1) = {g : g v1 = v1, g V1 = V1}; generators: transvections away from 0
  std::vector<Elem> gens;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == b || a == 0 || b == 0) continue;
      Mat m = mat_identity(f, 4);
      m.at(a, b) = 1;
      gens.push_back(R->elem(m));
    }
  auto H = bfs_generate(*R, gens, 1000, "S1");
  CHECK(H.size() == 168);  // SL3(2)
  auto swap_conj = [&](int i0) {
    Mat m = mat_identity(f, 4);
    if (i0 != 0) {
      m.at(0, 0) = 0;
      m.at(i0, i0) = 0;
      m.at(0, i0) = 1;
      m.at(i0, 0) = f.neg(1);
    }
    return R->elem(m);
  };
  std::vector<Elem> conj = {swap_conj(2), swap_conj(1), swap_conj(0), swap_conj(1),
                            swap_conj(2)};
  auto rep = coverage_width(*R, S, H, conj, 100000);
  CHECK(rep.covered);
  CHECK(rep.achieved_m <= 5);
  CHECK(rep.growth.back() == 20160);
}

TEST_CASE("greedy width search is deterministic and respects the floor") {
  auto R = build_realization("C2@F3");
  auto S = bfs_generate(*R, all_root_elements(*R), 100000, "S");
  std::vector<Root> pm1;
  for (const Root& v : R->rs.pi1) {
    pm1.push_back(v);
    pm1.push_back(-v);
  }
  auto H = bfs_generate(*R, subgroup_generators(*R, pm1), 1000, "S1");
  CHECK(H.size() == 24);  // SL2(3)
  auto pool = random_conjugators(*R, 64, 0);
  auto rep = greedy_width_search(*R, S, H, pool, 182, 200000);
  CHECK(rep.covered);
  // information floor: |H|^m >= |G|
  int floor = static_cast<int>(std::ceil(std::log(51840.0) / std::log(24.0) - 1e-9));
  CHECK(rep.achieved_m >= floor);
  auto rep2 = greedy_width_search(*R, S, H, random_conjugators(*R, 64, 0), 182, 200000);
  CHECK(rep2.achieved_m == rep.achieved_m);
  CHECK(rep2.chosen == rep.chosen);
  CHECK(rep2.growth == rep.growth);
}
