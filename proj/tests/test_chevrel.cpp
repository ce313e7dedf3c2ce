#include "doctest.h"

#include <set>

#include "classprod/chevrel.hpp"

using namespace classprod;

namespace {
Root rt(std::vector<int> v) { return Root(std::move(v)); }
}

TEST_CASE("z_window examples") {
  auto d4 = build_root_system(LieType::D, 4);
  CHECK(z_window(d4, rt({-1, 1, 0, 0}), rt({1, 0, 1, 0})).empty());

  auto b2 = build_root_system(LieType::B, 2);
  CHECK(z_window(b2, rt({-1, 1}), rt({1, 0})) == std::vector<Root>{rt({1, 1})});

  auto bc2 = build_root_system(LieType::BC, 2);
  auto w = z_window(bc2, rt({-1, 1}), rt({1, 0}));
  CHECK(w == std::vector<Root>{rt({1, 1}), rt({0, 2})});

  CHECK_THROWS_AS(z_window(b2, rt({0, 1}), rt({1, 1})), Error);  // e2 + (e1+e2) not a root
  CHECK_THROWS_AS(z_window(b2, rt({3, 0}), rt({0, 1})), Error);  // 3e1 not a root
}

TEST_CASE("probe_shape matches commutators exactly") {
  auto sp4 = build_realization("C2@F3");
  auto sh = probe_shape(*sp4, rt({-1, 1}), rt({2, 0}));
  CHECK(sh.support == std::vector<Root>{rt({1, 1}), rt({0, 2})});
  // re-evaluation reproduces every commutator
  size_t cu = sp4->param_count(sh.u), cv = sp4->param_count(sh.v);
  bool nonzero_11 = false, nonzero_02 = false;
  for (size_t i = 0; i < cu; ++i)
    for (size_t j = 0; j < cv; ++j) {
      Elem c = ecomm(root_element(*sp4, sh.u, sp4->param_at(sh.u, i)),
                     root_element(*sp4, sh.v, sp4->param_at(sh.v, j)));
      CHECK(assemble(*sp4, sh.table[i * cv + j]) == c);
      if (sh.table[i * cv + j][0].p.t != 0) nonzero_11 = true;
      if (sh.table[i * cv + j][1].p.t != 0) nonzero_02 = true;
    }
  CHECK(nonzero_11);
  CHECK(nonzero_02);

  auto b2 = build_realization("B2@F3");
  auto sh2 = probe_shape(*b2, rt({-1, 1}), rt({1, 0}));
  CHECK(sh2.support == std::vector<Root>{rt({0, 1}), rt({1, 1})});

  // commuting subgroups probe to an empty shape
  auto d4 = build_realization("D4@F2");
  auto sh3 = probe_shape(*d4, rt({-1, 1, 0, 0}), rt({0, 0, 1, 1}));
  CHECK(sh3.commuting());
}

TEST_CASE("solve_comrel single witness") {
  auto b2 = build_realization("B2@F3");
  Root u = rt({-1, 1}), v = rt({1, 0}), s = rt({0, 1});
  Witness a = make_witness(*b2, v, RootParams{1, 0});
  // trivial target
  auto z = solve_comrel(*b2, u, a, 0);
  CHECK(z.achieved.is_identity());
  // target 2: commutator lands in X_{e2}(2) modulo X_{e1+e2}
  auto sol = solve_comrel(*b2, u, a, 2);
  Elem c = ecomm(root_element(*b2, u, sol.xparams[0]), a.elems[0]);
  CHECK(leading_coord(*b2, s, c) == 2);
  std::vector<PeeledFactor> fs;
  CHECK(peel(*b2, c, {s, rt({1, 1})}, fs));

  // the leading map is a bijection for every proper witness
  for (size_t wi = 1; wi < b2->param_count(v); ++wi) {
    Witness aw = make_witness(*b2, v, b2->param_at(v, wi));
    std::set<scalar_t> hit;
    for (uint32_t t = 0; t < 3; ++t) {
      Elem cc = ecomm(root_element(*b2, u, static_cast<scalar_t>(t)), aw.elems[0]);
      hit.insert(leading_coord(*b2, s, cc));
    }
    CHECK(hit.size() == 3);
  }
}

TEST_CASE("solve_comrel proper pair in the star configuration") {
  auto om6 = build_realization("2D3@F2^2");
  Root u = rt({-1, 1}), v = rt({1, 0}), s = rt({0, 1});
  CHECK(star_case(*om6, u, v));
  scalar_t omega = 2;
  Witness pair = make_witness_pair(*om6, v, 1, omega);
  for (uint32_t t = 0; t < om6->F->q(); ++t) {
    auto sol = solve_comrel(*om6, u, pair, static_cast<scalar_t>(t));
    CHECK(leading_coord(*om6, s, sol.achieved) == t);
  }
  // a single witness is rejected outright under (*)
  Witness single = make_witness(*om6, v, RootParams{1, 0});
  CHECK_THROWS_AS(solve_comrel(*om6, u, single, 1), Error);
  // a pair that fails the span condition leaves targets unreachable
  Witness badpair;
  badpair.v = v;
  badpair.params = {{1, 0}, {1, 0}};
  badpair.elems = {root_element(*om6, v, scalar_t(1)), root_element(*om6, v, scalar_t(1))};
  int misses = 0;
  for (uint32_t t = 0; t < om6->F->q(); ++t) {
    try {
      solve_comrel(*om6, u, badpair, static_cast<scalar_t>(t));
    } catch (const Error& e) {
      CHECK(e.code == Errc::no_solution);
      ++misses;
    }
  }
  CHECK(misses == 2);
  CHECK_THROWS_AS(make_witness_pair(*om6, v, 1, 1), Error);
  CHECK_THROWS_AS(make_witness(*om6, v, RootParams{0, 0}), Error);
}

TEST_CASE("improper witness leaves unreachable targets") {
  auto b2 = build_realization("B2@F3");
  Root u = rt({-1, 1}), v = rt({1, 0});
  Witness zero;
  zero.v = v;
  zero.params = {{0, 0}};
  zero.elems = {root_element(*b2, v, scalar_t(0))};
  int misses = 0;
  for (uint32_t t = 1; t < 3; ++t) {
    try {
      solve_comrel(*b2, u, zero, static_cast<scalar_t>(t));
    } catch (const Error& e) {
      CHECK(e.code == Errc::no_solution);
      ++misses;
    }
  }
  CHECK(misses == 2);
}

TEST_CASE("characteristic-2 excluded pairs") {
  auto spb = build_realization("B2@F2");
  Root u = rt({1, 0}), v = rt({0, 1});
  CHECK(excluded_pair(*spb, u, v));
  Witness a = make_witness(*spb, v, RootParams{1, 0});
  CHECK_THROWS_AS(solve_comrel(*spb, u, a, 1), Error);
  // long + short pairs stay admissible; squaring makes the map bijective
  Root ul = rt({-1, 1});
  CHECK_FALSE(excluded_pair(*spb, ul, u));
  Witness b = make_witness(*spb, u, RootParams{1, 0});  // witness in X_{e1}
  for (uint32_t t = 0; t < 2; ++t) {
    auto sol = solve_comrel(*spb, ul, b, static_cast<scalar_t>(t));
    CHECK(leading_coord(*spb, rt({0, 1}), sol.achieved) == t);  // ul + e1 = e2
  }
}

TEST_CASE("probed relations in the BC realization") {
  auto su5 = build_realization("BC2@F2^2");
  // [X_{e2-e1}, Y_{2e1}] reaches X_{e1+e2}
  Root u = rt({-1, 1}), vY = rt({2, 0});
  Witness dY = make_witness(*su5, vY, RootParams{1, 0});
  for (uint32_t t = 0; t < su5->F->q(); ++t) {
    auto sol = solve_comrel(*su5, u, dY, static_cast<scalar_t>(t));
    CHECK(leading_coord(*su5, rt({1, 1}), sol.achieved) == t);
  }
  // [X_{e2-e1}, X_{e1}(2-param witness)] reaches the t-part of X_{e2}
  Root vS = rt({1, 0});
  Witness dS = make_witness(*su5, vS, RootParams{1, su5->section(1)});
  for (uint32_t t = 0; t < su5->F->q(); ++t) {
    auto sol = solve_comrel(*su5, u, dS, static_cast<scalar_t>(t));
    CHECK(leading_coord(*su5, rt({0, 1}), sol.achieved) == t);
  }
  // [X_{e2-e1}, X_{e1+e2}] reaches Y_{2e2} (an F'-target)
  Root vA = rt({1, 1});
  Witness dA = make_witness(*su5, vA, RootParams{1, 0});
  for (scalar_t t : su5->F->fprime_elements()) {
    auto sol = solve_comrel(*su5, u, dA, t);
    CHECK(leading_coord(*su5, rt({0, 2}), sol.achieved) == t);
  }
}
