#include "doctest.h"

#include <random>
#include <set>

#include "classprod/decomp.hpp"

using namespace classprod;

namespace {
Root rt(std::vector<int> v) { return Root(std::move(v)); }

Elem random_element(const Realization& R, std::mt19937_64& rng, int len = 25) {
  auto gens = all_root_elements(R);
  Elem g = R.identity();
  for (int i = 0; i < len; ++i) g = emul(g, gens[rng() % gens.size()]);
  return g;
}

Elem random_unipotent(const LeviPlan& P, std::mt19937_64& rng) {
  const Realization& R = *P.R;
  std::vector<Root> roots = {P.r0};
  if (P.r0_doubled) roots.push_back(P.r0_twice);
  for (const Root& v : P.sigma1) roots.push_back(v);
  for (const Root& v : P.delta) roots.push_back(v);
  Elem g = R.identity();
  for (const Root& w : roots) {
    size_t c = R.param_count(w);
    g = emul(g, root_element(R, w, R.param_at(w, rng() % c)));
  }
  return g;
}

std::vector<Elem> d_subgroup_elements(const LeviPlan& P, size_t cap = 5000) {
  auto set = bfs_generate(*P.R, subgroup_generators(*P.R, P.delta), cap, "D");
  std::vector<Elem> out;
  std::vector<std::string> keys(set.keys.begin(), set.keys.end());
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys) out.push_back(decode_canon(*P.R, k));
  return out;
}
}  // namespace

TEST_CASE("plan witnesses follow the type") {
  auto d4 = make_decomposer(build_realization("D4@F2"));
  CHECK(d4.plus.wj[2].is_identity());  // w3 = w4 = 1
  CHECK(d4.plus.wj[3].is_identity());
  CHECK_FALSE(d4.plus.has_W);

  auto b2 = build_plan(build_realization("B2@F3"), +1);
  CHECK(b2.has_W);
  CHECK(b2.w_root == rt({1, 1}));
  CHECK(b2.constituents[2].size() == 2);  // w3 = b1 b2
  CHECK(b2.constituents[2][0].alpha == rt({1, 0}));
  CHECK(b2.wj[3].is_identity());
  CHECK(b2.r0_case == 'b');

  auto om6 = build_plan(build_realization("2D3@F2^2"), +1);
  CHECK(om6.constituents[2].size() == 2);  // w3 = c1 c2, w4 = c1' c2'
  CHECK(om6.constituents[3].size() == 2);
  CHECK_FALSE(om6.wj[3].is_identity());
  // the (c_i, c_i') pairs span F over F'
  for (size_t i = 0; i < 2; ++i)
    CHECK(fprime_span_full(*om6.R->F, om6.constituents[2][i].witness.params[0].t,
                           om6.constituents[3][i].witness.params[0].t));

  auto c2 = build_plan(build_realization("C2@F3"), +1);
  CHECK(c2.r0_case == 'c');
  CHECK_FALSE(c2.has_W);
  CHECK(c2.constituents[2][0].alpha == rt({2, 0}));

  auto su5 = build_plan(build_realization("BC2@F2^2"), +1);
  CHECK(su5.r0_case == 'd');

  CHECK_THROWS_AS(build_plan(build_realization("A3@F2"), +1), Error);
}

TEST_CASE("plan coverage invariants") {
  for (const char* spec : {"C2@F3", "B2@F3", "B3@F3", "D4@F2", "D5@F2", "B2@F2",
                           "2A3@F2^2", "2D3@F2^2", "2D4@F2^2", "BC2@F2^2", "BC3@F2^2",
                           "C3@F5", "2A5@F2^2"}) {
    auto R = build_realization(spec);
    for (int sign : {+1, -1}) {
      LeviPlan P = build_plan(R, sign);
      // every Delta root is reached
      for (const Root& r : P.delta) {
        REQUIRE(P.route_kind.count(r));
        if (P.route_kind.at(r) == 'W') {
          CHECK(P.has_W);
          CHECK(r == P.w_root);
        } else {
          for (const PlanRoute& rt_ : P.routes.at(r)) {
            CHECK(P.rjv.at({rt_.j, rt_.v}) == r);
            CHECK(P.tj.at({rt_.j, rt_.v}) == R->rs.ht_abs(r));
          }
        }
      }
      // (*) short roots carry both a w3 and a w4 route
      if (R->family == Family::SOminus) {
        for (const Root& r : P.delta) {
          Root pr = sign > 0 ? r : -r;
          int nz = 0, sum = 0;
          for (int v : pr.c) { if (v) ++nz; sum += v; }
          if (nz == 1 && sum == 1) {  // a short e_l
            REQUIRE(P.routes.at(r).size() == 2);
            CHECK(P.routes.at(r)[0].j == 2);
            CHECK(P.routes.at(r)[1].j == 3);
          }
        }
      }
      // slots stay within the fourteen
      CHECK(P.slots.size() <= 14);
    }
  }
}

TEST_CASE("factor_d on B2@F3") {
  auto R = build_realization("B2@F3");
  LeviPlan P = build_plan(R, +1);
  // identity
  Certificate c0 = factor_d(P, R->identity());
  CHECK(c0.factors.empty());
  CHECK(verify_certificate(*R, c0, R->identity()));
  // d = X_{e2}(1): x3 supported on e2-e1 only (plus the W correction)
  Elem d = root_element(*R, rt({0, 1}), scalar_t(1));
  Certificate c1 = factor_d(P, d);
  CHECK(verify_certificate(*R, c1, d));
  for (const CertFactor& f : c1.factors) {
    if (f.tag == "W") continue;
    std::vector<PeeledFactor> fs;
    CHECK(peel(*R, R->elem(f.payload), {rt({-1, 1})}, fs));
  }
  // exhaustive over |D| = 9
  auto delems = d_subgroup_elements(P);
  CHECK(delems.size() == 9);
  for (const Elem& e : delems) {
    Certificate c = factor_d(P, e);
    CHECK(verify_certificate(*R, c, e));
  }
  CHECK_THROWS_AS(factor_d(P, root_element(*R, rt({1, 0}), scalar_t(1))), Error);
}

TEST_CASE("factor_d exhaustive on small instances, both signs") {
  for (const char* spec : {"C2@F3", "2D3@F2^2", "BC2@F2^2"}) {
    auto R = build_realization(spec);
    for (int sign : {+1, -1}) {
      LeviPlan P = build_plan(R, sign);
      auto delems = d_subgroup_elements(P);
      for (const Elem& e : delems) {
        Certificate c = factor_d(P, e);
        CHECK(verify_certificate(*R, c, e));
        CHECK(c.achieved_length <= 9);
      }
    }
  }
}

TEST_CASE("product identity D = W prod [U1,wj] via BFS") {
  for (const char* spec : {"B2@F3", "2D3@F2^2", "BC2@F2^2"}) {
    auto R = build_realization(spec);
    LeviPlan P = build_plan(R, +1);
    auto dset = bfs_generate(*R, subgroup_generators(*R, P.delta), 5000, "D");
    // build W * [U1,w1] * ... * [U1,w4] as a product set
    auto u1set = bfs_generate(*R, subgroup_generators(*R, P.sigma1), 5000, "U1");
    std::set<std::string> cur;
    if (P.has_W) {
      for (size_t i = 0; i < R->param_count(P.w_root); ++i)
        cur.insert(canon(root_element(*R, P.w_root, R->param_at(P.w_root, i))));
    } else {
      cur.insert(canon(R->identity()));
    }
    for (int j = 0; j < 4; ++j) {
      std::set<std::string> next;
      for (const auto& ck : cur) {
        Elem a = decode_canon(*R, ck);
        for (const auto& uk : u1set.keys) {
          Elem u = decode_canon(*R, uk);
          next.insert(canon(emul(a, ecomm(u, P.wj[j]))));
        }
      }
      cur = std::move(next);
    }
    CHECK(cur.size() == dset.size());
    for (const auto& k : cur) CHECK(dset.keys.count(k));
  }
}

TEST_CASE("factor_r0 cases") {
  // case (c): Sp4(3), g = X_{2e1}(1)
  auto sp4 = build_realization("C2@F3");
  LeviPlan pc = build_plan(sp4, +1);
  Elem g = root_element(*sp4, rt({2, 0}), scalar_t(1));
  Certificate c = factor_r0(pc, g);
  CHECK(verify_certificate(*sp4, c, g));
  CHECK(c.factors.size() == 2);
  Certificate cid = factor_r0(pc, sp4->identity());
  CHECK(cid.factors.empty());

  // case (b) with a proper pair: Omega6-(2)
  auto om6 = build_realization("2D3@F2^2");
  LeviPlan pb = build_plan(om6, +1);
  for (size_t i = 0; i < om6->param_count(rt({1, 0})); ++i) {
    Elem h = root_element(*om6, rt({1, 0}), om6->param_at(rt({1, 0}), i));
    Certificate cb = factor_r0(pb, h);
    CHECK(verify_certificate(*om6, cb, h));
  }

  // case (d): SU5(2), g in Y_{2e1} and the full 2-parameter X_{e1}
  auto su5 = build_realization("BC2@F2^2");
  LeviPlan pd = build_plan(su5, +1);
  for (size_t i = 0; i < su5->param_count(rt({2, 0})); ++i) {
    Elem y = root_element(*su5, rt({2, 0}), su5->param_at(rt({2, 0}), i));
    Certificate cd = factor_r0(pd, y);
    CHECK(verify_certificate(*su5, cd, y));
  }
  for (size_t i = 0; i < su5->param_count(rt({1, 0})); ++i) {
    Elem z = root_element(*su5, rt({1, 0}), su5->param_at(rt({1, 0}), i));
    Certificate cd = factor_r0(pd, z);
    CHECK(verify_certificate(*su5, cd, z));
  }

  // case (a): D4@F2
  auto d4 = build_realization("D4@F2");
  LeviPlan pa = build_plan(d4, +1);
  Elem a = root_element(*d4, rt({1, 1, 0, 0}), scalar_t(1));
  Certificate ca = factor_r0(pa, a);
  CHECK(ca.factors.size() == 1);
  CHECK(verify_certificate(*d4, ca, a));

  CHECK_THROWS_AS(factor_r0(pc, root_element(*sp4, rt({1, 1}), scalar_t(1))), Error);
}

TEST_CASE("factor_u_plus exhaustive on Sp4(3)") {
  auto R = build_realization("C2@F3");
  LeviPlan P = build_plan(R, +1);
  auto uset = bfs_generate(*R, subgroup_generators(*R, R->rs.positive), 1000, "U+");
  CHECK(uset.size() == 81);
  std::vector<std::string> keys(uset.keys.begin(), uset.keys.end());
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys) {
    Elem g = decode_canon(*R, k);
    Certificate c = factor_u_plus(P, g);
    CHECK(c.achieved_length <= 14);
    CHECK(verify_certificate(*R, c, g));
  }
  // a negative root element is rejected
  CHECK_THROWS_AS(factor_u_plus(P, root_element(*R, rt({-2, 0}), scalar_t(1))), Error);
}

TEST_CASE("factor_u_plus both signs on twisted groups") {
  for (const char* spec : {"2D3@F2^2", "BC2@F2^2", "B2@F3"}) {
    auto R = build_realization(spec);
    std::mt19937_64 rng(5);
    for (int sign : {+1, -1}) {
      LeviPlan P = build_plan(R, sign);
      for (int trial = 0; trial < 30; ++trial) {
        Elem g = random_unipotent(P, rng);
        Certificate c = factor_u_plus(P, g);
        CHECK(verify_certificate(*R, c, g));
      }
    }
  }
}

TEST_CASE("lp_factor produces verified alternating words") {
  auto R = build_realization("C2@F3");
  LpContext ctx = make_lp_context(R);
  // identity
  LpWord w0 = lp_factor(ctx, R->identity());
  CHECK(w0.blocks.size() == 1);
  // a monomial n_w(1) for a fundamental root
  Elem n = weyl_monomial(*R, rt({-1, 1}), 1);
  LpWord wn = lp_factor(ctx, n);
  Elem prod = R->identity();
  for (auto& [s, e] : wn.blocks) prod = emul(prod, e);
  CHECK(prod == n);
  CHECK(wn.blocks.size() <= 5);
  // random elements
  std::mt19937_64 rng(17);
  int histo[40] = {0};
  for (int i = 0; i < 300; ++i) {
    Elem g = random_element(*R, rng);
    LpWord w = lp_factor(ctx, g);
    Elem p = R->identity();
    for (auto& [s, e] : w.blocks) p = emul(p, e);
    CHECK(p == g);
    CHECK(w.blocks.size() < 40);
    ++histo[w.blocks.size()];
  }
  // merged words should be short almost always at this scale
  int shortw = 0;
  for (int b = 0; b <= 13; ++b) shortw += histo[b];
  CHECK(shortw >= 290);
}

TEST_CASE("factor_group end to end") {
  for (const char* spec : {"C2@F3", "2A3@F2^2", "2D3@F2^2", "B2@F3"}) {
    auto dec = make_decomposer(build_realization(spec));
    std::mt19937_64 rng(23);
    int met = 0;
    for (int i = 0; i < 40; ++i) {
      Elem g = random_element(*dec.R, rng);
      Certificate c = factor_group(dec, g);
      CHECK(verify_certificate(*dec.R, c, g));
      CHECK(c.achieved_length <= 14L * c.blocks);
      if (c.paper_bound_met) {
        ++met;
        CHECK(c.achieved_length <= 182);
      }
    }
    CHECK(met >= 35);  // nearly every desk element meets the 13-block bound
    // identity
    Certificate cid = factor_group(dec, dec.R->identity());
    CHECK(cid.paper_bound_met);
    CHECK(verify_certificate(*dec.R, cid, dec.R->identity()));
  }
}

TEST_CASE("tampered certificates fail verification") {
  auto dec = make_decomposer(build_realization("C2@F3"));
  std::mt19937_64 rng(29);
  Elem g = random_element(*dec.R, rng);
  Certificate c = factor_group(dec, g);
  REQUIRE(verify_certificate(*dec.R, c, g));
  Certificate bad = c;
  REQUIRE(!bad.factors.empty());
  bad.factors[0].payload.at(0, 1) = bad.factors[0].payload.at(0, 1) == 0 ? 1 : 0;
  CHECK_FALSE(verify_certificate(*dec.R, bad, g));
  // wrong group string is malformed
  Certificate wrong = c;
  wrong.group = "B2@F3";
  CHECK_THROWS_AS(verify_certificate(*dec.R, wrong, g), Error);
}

TEST_CASE("sl_factor on SL4(2)") {
  auto R = build_realization("A3@F2");
  Certificate cid = sl_factor(*R, R->identity());
  CHECK(cid.factors.size() == 5);
  CHECK(verify_certificate(*R, cid, R->identity()));
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    Elem g = random_element(*R, rng);
    Certificate c = sl_factor(*R, g);
    CHECK(c.factors.size() == 5);
    CHECK(c.factors[0].tag == "S3");
    CHECK(c.factors[1].tag == "S2");
    CHECK(c.factors[2].tag == "S1");
    CHECK(c.factors[3].tag == "S2");
    CHECK(c.factors[4].tag == "S3");
    CHECK(verify_certificate(*R, c, g));
  }
  // an element already fixing v1 leaves a2 = a3 = 1
  Elem fix = root_element(*R, rt({0, -1, 1, 0}), scalar_t(1));
  Certificate cf = sl_factor(*R, fix);
  CHECK(verify_certificate(*R, cf, fix));
  CHECK(mat_is_identity(cf.factors[0].payload));
  CHECK(mat_is_identity(cf.factors[1].payload));
  // rank bound
  auto a2r = build_realization("A2@F2");
  CHECK_THROWS_AS(sl_factor(*a2r, a2r->identity()), Error);
}

TEST_CASE("sbar_factor on D4@F2") {
  auto dec = make_decomposer(build_realization("D4@F2"));
  std::mt19937_64 rng(37);
  for (int i = 0; i < 8; ++i) {
    Elem g = random_element(*dec.R, rng);
    Certificate main = factor_group(dec, g);
    Certificate sb = sbar_factor(dec, g);
    CHECK(verify_certificate(*dec.R, sb, g));
    CHECK(sb.achieved_length <= 5 * main.achieved_length);
    CHECK(sb.achieved_length < 1000);
  }
  auto spdec = make_decomposer(build_realization("C2@F3"));
  CHECK_THROWS_AS(sbar_factor(spdec, spdec.R->identity()), Error);
}

TEST_CASE("generality sweep beyond the smallest fields") {
  // odd-characteristic twisted forms, higher ranks, larger prime fields
  for (const char* spec : {"2D3@F3^2", "2A3@F3^2", "C3@F5", "D5@F2", "2A5@F2^2",
                           "BC3@F2^2", "B4@F2", "C2@F7"}) {
    auto dec = make_decomposer(build_realization(spec));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 3; ++i) {
      Elem g = random_element(*dec.R, rng, 30);
      Certificate c = factor_group(dec, g);
      CHECK(verify_certificate(*dec.R, c, g));
    }
  }
  auto d5 = make_decomposer(build_realization("D5@F2"));
  std::mt19937_64 rng(2);
  Elem g = random_element(*d5.R, rng, 30);
  CHECK(verify_certificate(*d5.R, sbar_factor(d5, g), g));
}

TEST_CASE("theorem conjugator list is fixed and bounded") {
  auto dec = make_decomposer(build_realization("C2@F3"));
  auto list = theorem_conjugators(dec);
  CHECK(list.size() <= 182);
  CHECK(list.size() == 7 * dec.plus.slots.size() + 6 * dec.minus.slots.size());
  for (const Elem& c : list) CHECK(preserves_structure(*dec.R, c));
}
