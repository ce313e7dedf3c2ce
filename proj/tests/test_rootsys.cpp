#include "doctest.h"

#include <algorithm>
#include <set>

#include "classprod/rootsys.hpp"

using namespace classprod;

namespace {
Root rt(std::vector<int> v) { return Root(std::move(v)); }
}

TEST_CASE("B2 realization") {
  auto s = build_root_system(LieType::B, 2);
  CHECK(s.positive.size() == 4);
  std::set<Root> pos(s.positive.begin(), s.positive.end());
  CHECK(pos.count(rt({-1, 1})));
  CHECK(pos.count(rt({1, 0})));
  CHECK(pos.count(rt({0, 1})));
  CHECK(pos.count(rt({1, 1})));
  CHECK(s.r0 == rt({1, 0}));
  CHECK(s.fundamental.size() == 2);
  // heights: e2 = e1 + (e2-e1) has height 2, e1+e2 height 3
  CHECK(s.ht(rt({0, 1})) == 2);
  CHECK(s.ht(rt({1, 1})) == 3);
  CHECK(s.ht(rt({1, 0})) == 1);
  // Delta = {e2, e1+e2}
  CHECK(s.delta == std::vector<Root>{rt({0, 1}), rt({1, 1})});
  auto lv = delta_and_filtration(s);
  CHECK(lv[2] == std::vector<Root>{rt({0, 1})});
  CHECK(lv[3] == std::vector<Root>{rt({1, 1})});
}

TEST_CASE("C2 realization") {
  auto s = build_root_system(LieType::C, 2);
  CHECK(s.r0 == rt({2, 0}));
  CHECK(s.theta == std::vector<Root>{rt({2, 0}), rt({0, 2})});
  CHECK(s.positive.size() == 4);
  // in C2: e1+e2 has height 2 and 2e2 has height 3
  CHECK(s.ht(rt({1, 1})) == 2);
  CHECK(s.ht(rt({0, 2})) == 3);
}

TEST_CASE("positive root counts by type") {
  for (int n = 2; n <= 6; ++n) {
    CHECK(build_root_system(LieType::B, n).positive.size() == size_t(n) * n);
    CHECK(build_root_system(LieType::C, n).positive.size() == size_t(n) * n);
    CHECK(build_root_system(LieType::BC, n).positive.size() == size_t(n) * n + n);
    if (n >= 4)
      CHECK(build_root_system(LieType::D, n).positive.size() == size_t(n) * (n - 1));
  }
}

TEST_CASE("unsupported ranks") {
  CHECK_THROWS_AS(build_root_system(LieType::D, 3), Error);
  CHECK_THROWS_AS(build_root_system(LieType::B, 1), Error);
}

TEST_CASE("root_sum") {
  auto b2 = build_root_system(LieType::B, 2);
  auto r = root_sum(b2, rt({-1, 1}), rt({1, 0}));
  REQUIRE(r.sum.has_value());
  CHECK(*r.sum == rt({0, 1}));
  CHECK_FALSE(r.doubled_sum);
  auto r2 = root_sum(b2, rt({1, 0}), rt({0, 1}));
  REQUIRE(r2.sum.has_value());
  CHECK(*r2.sum == rt({1, 1}));

  auto c2 = build_root_system(LieType::C, 2);
  auto r3 = root_sum(c2, rt({2, 0}), rt({0, 2}));
  CHECK_FALSE(r3.sum.has_value());
  CHECK_THROWS_AS(root_sum(c2, rt({1, 0}), rt({0, 2})), Error);

  auto bc2 = build_root_system(LieType::BC, 2);
  auto r4 = root_sum(bc2, rt({-1, 1}), rt({1, 0}));
  REQUIRE(r4.sum.has_value());
  CHECK(r4.doubled_sum);  // 2e2 is a root in BC2
}

TEST_CASE("Sigma1 is a type-A subsystem") {
  for (auto [ty, n] : {std::pair{LieType::B, 3}, {LieType::C, 3}, {LieType::D, 4},
                       {LieType::BC, 3}}) {
    auto s = build_root_system(ty, n);
    CHECK(s.sigma1_plus.size() == size_t(n) * (n - 1) / 2);
    // closed under root_sum
    for (const Root& u : s.sigma1_plus)
      for (const Root& v : s.sigma1_plus) {
        Root w = u + v;
        if (s.is_root(w)) CHECK(s.in_sigma1(w));
      }
    for (const Root& r : s.delta) CHECK(s.ht(r) >= 2);
  }
}

TEST_CASE("D excludes r0 from Delta") {
  auto d4 = build_root_system(LieType::D, 4);
  Root e12 = rt({1, 1, 0, 0});
  CHECK(d4.r0 == e12);
  CHECK(std::find(d4.delta.begin(), d4.delta.end(), e12) == d4.delta.end());
  CHECK(d4.delta.size() == d4.positive.size() - d4.sigma1_plus.size() - 1);
}

TEST_CASE("BC2 Delta contains e2 and 2e2") {
  auto s = build_root_system(LieType::BC, 2);
  std::set<Root> delta(s.delta.begin(), s.delta.end());
  CHECK(delta.count(rt({0, 1})));
  CHECK(delta.count(rt({0, 2})));
  CHECK_FALSE(delta.count(rt({1, 0})));   // r0
  CHECK_FALSE(delta.count(rt({2, 0})));   // 2 r0
  CHECK(delta.count(rt({1, 1})));
  auto lv = delta_and_filtration(s);
  CHECK(lv[2] == std::vector<Root>{rt({0, 1})});
  CHECK(lv[4] == std::vector<Root>{rt({0, 2})});
}

TEST_CASE("reflection") {
  auto b2 = build_root_system(LieType::B, 2);
  // reflecting e1-e2 in e2-e1 fixes nothing interesting; check s_{e1}: e1+e2 -> e2-e1
  Root e1 = rt({1, 0});
  CHECK(reflect(e1, rt({1, 1})) == rt({-1, 1}));
  CHECK(reflect(rt({-1, 1}), rt({1, 0})) == rt({0, 1}));
}
