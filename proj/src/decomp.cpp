#include "classprod/decomp.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace classprod {

namespace {

Root oriented(const Root& r, int sign) { return sign > 0 ? r : -r; }

struct ShapeLite {
  int kind;  // 0 diff, 1 sum, 2 single, 3 doubled
  int a, b;  // 1-based indices; diff: +1 at b, -1 at a; sum: a < b
};

ShapeLite shape_of(const Root& r) {
  int p1 = 0, m1 = 0, p2 = 0;
  int ia = 0, ib = 0, is = 0, id = 0;
  int firstp = 0;
  for (size_t i = 0; i < r.c.size(); ++i) {
    if (r.c[i] == 1) {
      if (!firstp) firstp = static_cast<int>(i) + 1;
      else ib = static_cast<int>(i) + 1;
      ++p1;
    } else if (r.c[i] == -1) {
      ia = static_cast<int>(i) + 1;
      ++m1;
    } else if (r.c[i] == 2) {
      id = static_cast<int>(i) + 1;
      ++p2;
    }
  }
  if (p1 == 1 && m1 == 1) return {0, ia, firstp};
  if (p1 == 2) return {1, firstp, ib};
  if (p1 == 1) { is = firstp; return {2, is, 0}; }
  if (p2 == 1) return {3, id, 0};
  fail(Errc::internal, "unexpected positive root shape " + r.str());
}

bool commutes_with(const RootSystem& rs, const Root& v, const Root& alpha) {
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      Root w = v.scaled(i) + alpha.scaled(j);
      if (!w.is_zero() && rs.is_root(w)) return false;
    }
  return true;
}

// BFS over the Weyl group action for an element s with econj(X_u, s) equal to
// a root subgroup on the Levi side.
LeviPlan::Conjugator find_conjugator(const Realization& R, const Root& u,
                                     const std::set<Root>& goal) {
  struct Node {
    Root r;
    std::vector<int> word;
  };
  // monomial generator roots: simple reflections; 2-parameter simple roots
  // act through their doubled root (same reflection)
  std::vector<Root> gen;
  for (const Root& f : R.rs.fundamental) {
    Root g = f;
    if (R.pattern(f).kind == ParamKind::TWO_PARAM) g = f.scaled(2);
    gen.push_back(g);
  }
  std::deque<Node> bfs;
  std::set<Root> seen;
  bfs.push_back({u, {}});
  seen.insert(u);
  while (!bfs.empty()) {
    Node cur = bfs.front();
    bfs.pop_front();
    if (goal.count(cur.r)) {
      LeviPlan::Conjugator c;
      c.target = cur.r;
      Elem s = R.identity();
      for (int gi : cur.word) {
        s = emul(s, weyl_monomial(R, gen[gi], 1));
        c.word.push_back(gen[gi]);
      }
      c.s = s;
      // verify the subgroup really lands on the target
      std::vector<Root> order = {cur.r};
      if (R.rs.is_root(cur.r.scaled(2))) order.push_back(cur.r.scaled(2));
      for (size_t i = 0; i < R.param_count(u); ++i) {
        Elem x = root_element(R, u, R.param_at(u, i));
        std::vector<PeeledFactor> fs;
        require(peel(R, econj(x, c.s), order, fs), Errc::internal,
                "conjugator for " + u.str() + " misses X_" + cur.r.str());
      }
      return c;
    }
    if (cur.word.size() >= 6) continue;
    for (size_t gi = 0; gi < gen.size(); ++gi) {
      Root nxt = reflect(gen[gi], cur.r);
      // econj(x, n1 n2) conjugates by n1 first, so later reflections append
      std::vector<int> w = cur.word;
      w.push_back(static_cast<int>(gi));
      if (seen.insert(nxt).second) bfs.push_back({nxt, std::move(w)});
    }
  }
  fail(Errc::coverage_gap, "no Weyl word maps " + u.str() + " into the Levi");
}

Elem witness_inverse(const Witness& w, size_t i) { return einv(w.elems[i]); }

}  // namespace

LeviPlan build_plan(RealizationPtr Rp, int sign) {
  const Realization& R = *Rp;
  require(R.family != Family::SL, Errc::type_a_unsupported,
          "the Levi decomposition is defined for types other than A");
  LeviPlan P;
  P.R = Rp;
  P.sign = sign;
  const RootSystem& rs = R.rs;
  const int n = rs.rank;

  for (const Root& v : rs.sigma1_plus) P.sigma1.push_back(oriented(v, sign));
  for (const Root& r : rs.delta) {
    Root o = oriented(r, sign);
    P.delta.push_back(o);
    P.levels[rs.ht(r)].push_back(o);
  }
  P.r0 = oriented(rs.r0, sign);
  Root twice = rs.r0.scaled(2);
  if (rs.is_root(twice)) {
    P.r0_doubled = true;
    P.r0_twice = oriented(twice, sign);
  }

  const bool sigma_b = rs.type == LieType::B;
  const bool star_type = R.family == Family::SOminus;

  // --- the four unipotent witnesses ------------------------------------------
  P.constituents.resize(4);
  auto E = [&](int i) { return rs.e(i); };
  auto add_constituent = [&](int j, const Root& base_root, const RootParams& pr) {
    Root w = oriented(base_root, sign);
    P.constituents[j].push_back({w, make_witness(R, w, pr)});
  };
  for (int i = 1; i <= n - 1; ++i) {
    Root ai = E(i) + E(i + 1);
    add_constituent(i % 2 == 1 ? 0 : 1, ai, {1, 0});
  }
  switch (R.family) {
    case Family::SOplus:
      break;  // w3 = w4 = 1
    case Family::SOodd:
    case Family::SpB:
      for (int i = 1; i <= n; ++i) add_constituent(2, E(i), {1, 0});
      break;
    case Family::Sp:
      for (int i = 1; i <= n; ++i) add_constituent(2, E(i).scaled(2), {1, 0});
      break;
    case Family::SU:
      if (rs.type == LieType::C) {
        for (int i = 1; i <= n; ++i) add_constituent(2, E(i).scaled(2), {1, 0});
      } else {
        for (int i = 1; i <= n; ++i)
          add_constituent(2, E(i), {1, R.section(1)});
        for (int i = 1; i <= n; ++i) add_constituent(3, E(i).scaled(2), {1, 0});
      }
      break;
    case Family::SOminus: {
      // proper pairs (1, z) with z any fixed element outside F'
      scalar_t z = 0;
      for (uint32_t a = 0; a < R.F->q(); ++a)
        if (!R.F->in_fprime(static_cast<scalar_t>(a))) { z = static_cast<scalar_t>(a); break; }
      for (int i = 1; i <= n; ++i) add_constituent(2, E(i), {1, 0});
      for (int i = 1; i <= n; ++i) add_constituent(3, E(i), {z, 0});
      break;
    }
    case Family::SL:
      break;
  }
  for (int j = 0; j < 4; ++j) {
    Elem w = R.identity();
    for (const auto& c : P.constituents[j]) w = emul(w, c.witness.elems[0]);
    P.wj.push_back(w);
  }

  // --- t_j(v) and r(j,v) -------------------------------------------------------
  for (int j = 0; j < 4; ++j)
    for (const Root& v : P.sigma1) {
      int hits = 0;
      Root alpha;
      for (const auto& c : P.constituents[j])
        if (!commutes_with(rs, v, c.alpha)) {
          ++hits;
          alpha = c.alpha;
        }
      if (hits == 0) continue;  // t_j(v) = infinity
      require(hits == 1, Errc::coverage_gap,
              "X_" + v.str() + " meets several constituents of w" + std::to_string(j + 1));
      Root r = v + alpha;
      require(rs.is_root(r), Errc::coverage_gap,
              "constituent sum " + r.str() + " leaves the root system");
      P.tj[{j, v}] = rs.ht_abs(r);
      P.rjv[{j, v}] = r;
    }

  // --- routes per Delta root ----------------------------------------------------
  if (sigma_b) {
    P.has_W = true;
    P.w_root = oriented(E(1) + E(2), sign);
  }
  auto add_route = [&](const Root& dr, int j, const Root& base_v) {
    Root v = oriented(base_v, sign);
    int found = -1;
    for (size_t i = 0; i < P.constituents[j].size(); ++i)
      if (!commutes_with(rs, v, P.constituents[j][i].alpha)) {
        require(found < 0, Errc::coverage_gap, "ambiguous constituent");
        found = static_cast<int>(i);
      }
    require(found >= 0, Errc::coverage_gap,
            "route (" + std::to_string(j + 1) + ", " + v.str() + ") has no constituent");
    const auto& c = P.constituents[j][found];
    require(v + c.alpha == dr, Errc::coverage_gap,
            "route for " + dr.str() + " reaches " + (v + c.alpha).str());
    auto it = P.rjv.find({j, v});
    require(it != P.rjv.end() && it->second == dr, Errc::coverage_gap,
            "target map disagrees on " + dr.str());
    require(!excluded_pair(R, v, c.alpha), Errc::excluded_commutator_pair,
            "plan would use an excluded characteristic-2 pair at " + dr.str());
    P.routes[dr].push_back({j, v, found});
  };

  for (const Root& dro : P.delta) {
    ShapeLite sh = shape_of(sign > 0 ? dro : -dro);  // classify in the unsigned base system
    if (sh.kind == 1 && sh.a == 1 && sh.b == 2) {
      if (sigma_b) {
        P.route_kind[dro] = 'W';
        continue;
      }
      if (rs.type == LieType::C) {
        add_route(dro, 2, E(2) + (-E(1)));
      } else {  // BC
        add_route(dro, 3, E(2) + (-E(1)));
      }
    } else if (sh.kind == 1) {
      int i = sh.a, l = sh.b;
      if (i > 1)
        add_route(dro, (i % 2 == 0) ? 0 : 1, E(l) + (-E(i - 1)));
      else
        add_route(dro, 0, E(l) + (-E(2)));
    } else if (sh.kind == 2) {
      int l = sh.a;
      require(l >= 2, Errc::coverage_gap, "short root e1 should be r0");
      if (star_type) {
        add_route(dro, 2, E(l) + (-E(l - 1)));
        add_route(dro, 3, E(l) + (-E(l - 1)));
      } else {
        add_route(dro, 2, E(l) + (-E(l - 1)));
      }
    } else if (sh.kind == 3) {
      int l = sh.a;
      require(l >= 2, Errc::coverage_gap, "doubled root 2e1 should be 2r0");
      add_route(dro, (l % 2 == 0) ? 0 : 1, E(l) + (-E(l - 1)));
    } else {
      fail(Errc::coverage_gap, "Delta root of difference shape: " + dro.str());
    }
    P.route_kind[dro] = 'C';
  }
  for (const Root& dro : P.delta)
    require(P.route_kind.count(dro), Errc::coverage_gap, "uncovered root " + dro.str());

  // --- r0 case -------------------------------------------------------------------
  std::set<Root> levi_goal(P.sigma1.begin(), P.sigma1.end());
  switch (R.family) {
    case Family::SOplus:
      P.r0_case = 'a';
      P.into_levi.emplace(P.r0, find_conjugator(R, P.r0, levi_goal));
      break;
    case Family::SOodd:
    case Family::SpB:
    case Family::SOminus: {
      P.r0_case = 'b';
      P.r0_u = oriented(E(1) + (-E(2)), sign);
      P.r0_v = oriented(E(2), sign);
      if (star_type) {
        scalar_t z = 0;
        for (uint32_t a = 0; a < R.F->q(); ++a)
          if (!R.F->in_fprime(static_cast<scalar_t>(a))) { z = static_cast<scalar_t>(a); break; }
        P.r0_witnesses.push_back(make_witness_pair(R, P.r0_v, 1, z));
      } else {
        P.r0_witnesses.push_back(make_witness(R, P.r0_v, {1, 0}));
      }
      P.into_levi.emplace(P.r0_u, find_conjugator(R, P.r0_u, levi_goal));
      break;
    }
    case Family::Sp:
      P.r0_case = 'c';
      P.r0_u = oriented(E(1) + E(2), sign);
      P.r0_v = oriented(E(1) + (-E(2)), sign);
      P.r0_witnesses.push_back(make_witness(R, P.r0_v, {1, 0}));
      P.into_levi.emplace(P.r0_u, find_conjugator(R, P.r0_u, levi_goal));
      break;
    case Family::SU:
      if (rs.type == LieType::C) {
        P.r0_case = 'c';
        P.r0_u = oriented(E(1) + E(2), sign);
        P.r0_v = oriented(E(1) + (-E(2)), sign);
        P.r0_witnesses.push_back(make_witness(R, P.r0_v, {1, 0}));
        P.into_levi.emplace(P.r0_u, find_conjugator(R, P.r0_u, levi_goal));
      } else {
        P.r0_case = 'd';
        P.r0_u = oriented(E(1) + (-E(2)), sign);
        P.r0_v = oriented(E(2), sign);
        P.r0_witnesses.push_back(make_witness(R, oriented(E(2), sign), {1, R.section(1)}));
        P.r0_witnesses.push_back(make_witness(R, oriented(E(1) + E(2), sign), {1, 0}));
        P.into_levi.emplace(P.r0_u, find_conjugator(R, P.r0_u, levi_goal));
      }
      break;
    case Family::SL:
      break;
  }
  if (P.has_W) P.into_levi.emplace(P.w_root, find_conjugator(R, P.w_root, levi_goal));

  // --- fixed slot layout -----------------------------------------------------------
  const std::string u1 = P.u1_tag();
  P.slot_r0_begin = 0;
  if (P.r0_case == 'a') {
    P.slots.push_back({P.into_levi.at(P.r0).s, u1});
    P.slot_r0_count = 1;
  } else {
    const Elem& s = P.into_levi.at(P.r0_u).s;
    const Witness& w0 = P.r0_witnesses[0];
    if (w0.elems.size() == 2) {  // proper pair under (*)
      P.slots.push_back({s, u1});
      P.slots.push_back({emul(witness_inverse(w0, 0), s), u1});
      P.slots.push_back({s, u1});
      P.slots.push_back({emul(witness_inverse(w0, 1), s), u1});
      P.slot_r0_count = 4;
    } else if (P.r0_case == 'd') {
      P.slots.push_back({s, u1});
      P.slots.push_back({emul(witness_inverse(P.r0_witnesses[0], 0), s), u1});
      P.slots.push_back({s, u1});
      P.slots.push_back({emul(witness_inverse(P.r0_witnesses[1], 0), s), u1});
      P.slot_r0_count = 4;
    } else {
      P.slots.push_back({s, u1});
      P.slots.push_back({emul(witness_inverse(w0, 0), s), u1});
      P.slot_r0_count = 2;
    }
  }
  P.slot_u1 = static_cast<int>(P.slots.size());
  P.slots.push_back({R.identity(), u1});
  if (P.has_W) {
    P.slot_W = static_cast<int>(P.slots.size());
    P.slots.push_back({P.into_levi.at(P.w_root).s, u1});
  }
  P.slot_j_begin = static_cast<int>(P.slots.size());
  for (int j = 0; j < 4; ++j) {
    P.slots.push_back({R.identity(), u1});
    P.slots.push_back({einv(P.wj[j]), u1});
  }
  require(P.slots.size() <= 14, Errc::internal, "slot layout exceeds 14");

  return P;
}

// --- factor_d ---------------------------------------------------------------------

namespace {

Elem commutator_product(const LeviPlan& P, const Elem& y, const std::vector<Elem>& x) {
  Elem cur = y;
  for (int j = 0; j < 4; ++j) cur = emul(cur, ecomm(x[j], P.wj[j]));
  return cur;
}

void push_cert_factor(Certificate& c, const Elem& conj, const Elem& payload,
                      const std::string& tag) {
  if (payload.is_identity()) return;
  c.factors.push_back({conj.m, payload.m, tag});
}

}  // namespace

Certificate factor_d(const LeviPlan& P, const Elem& d) {
  const Realization& R = *P.R;
  {
    std::vector<PeeledFactor> fs;
    require(peel(R, d, P.delta, fs), Errc::not_in_d, "element is not in D");
  }
  Elem y = R.identity();
  std::vector<Elem> x(4, R.identity());

  int maxlev = P.levels.empty() ? 1 : P.levels.rbegin()->first;
  for (int k = 2; k <= maxlev; ++k) {
    Elem resid = emul(einv(commutator_product(P, y, x)), d);
    std::vector<PeeledFactor> fs;
    require(peel(R, resid, P.delta, fs), Errc::level_stall,
            "residual left D at level " + std::to_string(k));
    std::vector<std::vector<std::pair<Root, scalar_t>>> collected(4);
    scalar_t ycoord = 0;
    bool have_y = false;
    for (const PeeledFactor& pf : fs) {
      int h = R.rs.ht_abs(pf.root);
      require(h >= k || pf.p.t == 0, Errc::level_stall,
              "level " + std::to_string(h) + " residue survived below level " +
                  std::to_string(k));
      if (h != k || pf.p.t == 0) continue;
      if (P.route_kind.at(pf.root) == 'W') {
        ycoord = pf.p.t;
        have_y = true;
        continue;
      }
      const auto& routes = P.routes.at(pf.root);
      if (routes.size() == 1) {
        const PlanRoute& rt = routes[0];
        const auto& c = P.constituents[rt.j][rt.witness_index];
        auto sol = solve_comrel(R, rt.v, c.witness, pf.p.t);
        collected[rt.j].push_back({rt.v, sol.xparams[0]});
      } else {
        // (*) short root: joint solve through the proper pair (w3, w4)
        const PlanRoute& r3 = routes[0];
        const PlanRoute& r4 = routes[1];
        Witness pairw;
        pairw.v = P.constituents[r3.j][r3.witness_index].alpha;
        pairw.elems = {P.constituents[r3.j][r3.witness_index].witness.elems[0],
                       P.constituents[r4.j][r4.witness_index].witness.elems[0]};
        pairw.params = {P.constituents[r3.j][r3.witness_index].witness.params[0],
                        P.constituents[r4.j][r4.witness_index].witness.params[0]};
        auto sol = solve_comrel(R, r3.v, pairw, pf.p.t);
        collected[r3.j].push_back({r3.v, sol.xparams[0]});
        collected[r4.j].push_back({r4.v, sol.xparams[1]});
      }
    }
    if (have_y) {
      require(P.has_W && R.rs.ht_abs(P.w_root) == k, Errc::internal,
              "W correction outside its level");
      y = emul(y, root_element(R, P.w_root, ycoord));
    }
    for (int j = 0; j < 4; ++j) {
      if (collected[j].empty()) continue;
      std::sort(collected[j].begin(), collected[j].end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      Elem blockj = R.identity();
      for (const auto& [v, t] : collected[j]) blockj = emul(blockj, root_element(R, v, t));
      x[j] = emul(blockj, x[j]);  // level-k parts precede lower levels
    }
    // monotone residual: everything at heights <= k must now be cleared
    Elem check = emul(einv(commutator_product(P, y, x)), d);
    std::vector<PeeledFactor> cfs;
    require(peel(R, check, P.delta, cfs), Errc::level_stall, "residual left D");
    for (const PeeledFactor& pf : cfs)
      require(R.rs.ht_abs(pf.root) > k || pf.p.t == 0, Errc::level_stall,
              "level " + std::to_string(k) + " not cleared at " + pf.root.str());
  }
  require(commutator_product(P, y, x) == d, Errc::level_stall, "induction left a residue");

  Certificate cert;
  cert.kind = "D";
  cert.group = R.groupspec;
  cert.element_hex = canon_hex(d);
  cert.bound = 9;
  push_cert_factor(cert, R.identity(), y, "W");
  for (int j = 0; j < 4; ++j) {
    if (x[j].is_identity()) continue;
    push_cert_factor(cert, R.identity(), einv(x[j]), P.u1_tag());
    push_cert_factor(cert, einv(P.wj[j]), x[j], P.u1_tag());
  }
  cert.achieved_length = static_cast<long>(cert.factors.size());
  return cert;
}

// --- factor_r0 --------------------------------------------------------------------

namespace {

// Expands an element of the r0 root subgroup into its commutator slots plus a
// residual in D.
std::pair<std::vector<CertFactor>, Elem> r0_expand(const LeviPlan& P, const Elem& g) {
  const Realization& R = *P.R;
  std::vector<Root> order = {P.r0};
  if (P.r0_doubled) order.push_back(P.r0_twice);
  std::vector<PeeledFactor> fs;
  require(peel(R, g, order, fs), Errc::not_in_r0_subgroup,
          "element is not in the r0 root subgroup");

  std::vector<CertFactor> out;
  const std::string u1 = P.u1_tag();
  auto push = [&](const Elem& conj, const Elem& payload) {
    if (!payload.is_identity()) out.push_back({conj.m, payload.m, u1});
  };

  if (P.r0_case == 'a') {
    const auto& cj = P.into_levi.at(P.r0);
    push(cj.s, econj(g, cj.s));
    return {out, R.identity()};
  }

  const auto& cj = P.into_levi.at(P.r0_u);
  if (P.r0_case == 'd') {
    scalar_t tpart = fs[0].p.t;
    auto sol1 = solve_comrel(R, P.r0_u, P.r0_witnesses[0], tpart);
    Elem x1 = root_element(R, P.r0_u, sol1.xparams[0]);
    Elem rem1 = emul(einv(sol1.achieved), g);
    // the correction window reaches into D, so peel over the r0 group and D
    std::vector<Root> wide = order;
    for (const Root& v : P.delta) wide.push_back(v);
    std::vector<PeeledFactor> f1;
    require(peel(R, rem1, wide, f1), Errc::internal, "case (d) first residual");
    require(f1[0].p.t == 0, Errc::internal, "case (d) t-part survived");
    scalar_t ypart = f1[1].p.t;
    auto sol2 = solve_comrel(R, P.r0_u, P.r0_witnesses[1], ypart);
    Elem x2 = root_element(R, P.r0_u, sol2.xparams[0]);
    Elem rem = emul(einv(sol2.achieved), rem1);
    push(cj.s, econj(einv(x1), cj.s));
    push(emul(einv(P.r0_witnesses[0].elems[0]), cj.s), econj(x1, cj.s));
    push(cj.s, econj(einv(x2), cj.s));
    push(emul(einv(P.r0_witnesses[1].elems[0]), cj.s), econj(x2, cj.s));
    return {out, rem};
  }

  scalar_t target = fs[0].p.t;
  const Witness& w0 = P.r0_witnesses[0];
  auto sol = solve_comrel(R, P.r0_u, w0, target);
  Elem rem = emul(einv(sol.achieved), g);
  for (size_t e = 0; e < w0.elems.size(); ++e) {
    Elem xe = root_element(R, P.r0_u, sol.xparams[e]);
    push(cj.s, econj(einv(xe), cj.s));
    push(emul(einv(w0.elems[e]), cj.s), econj(xe, cj.s));
  }
  return {out, rem};
}

Elem factor_product(const Realization& R, const std::vector<CertFactor>& fs) {
  Elem cur = R.identity();
  for (const CertFactor& f : fs) {
    Elem c = R.elem(f.conj), p = R.elem(f.payload);
    cur = emul(cur, emul(emul(c, p), einv(c)));
  }
  return cur;
}

}  // namespace

Certificate factor_r0(const LeviPlan& P, const Elem& g) {
  const Realization& R = *P.R;
  auto [factors, rem] = r0_expand(P, g);
  Certificate cert;
  cert.kind = "R0";
  cert.group = R.groupspec;
  cert.element_hex = canon_hex(g);
  cert.bound = 13;
  cert.factors = factors;
  if (!rem.is_identity()) {
    Certificate dc = factor_d(P, rem);
    cert.factors.insert(cert.factors.end(), dc.factors.begin(), dc.factors.end());
  }
  cert.achieved_length = static_cast<long>(cert.factors.size());
  require(factor_product(R, cert.factors) == g, Errc::internal,
          "r0 certificate does not multiply back");
  return cert;
}

Certificate factor_u_plus(const LeviPlan& P, const Elem& g) {
  const Realization& R = *P.R;
  std::vector<Root> order;
  order.push_back(P.r0);
  if (P.r0_doubled) order.push_back(P.r0_twice);
  for (const Root& v : P.sigma1) order.push_back(v);
  for (const Root& v : P.delta) order.push_back(v);
  std::vector<PeeledFactor> fs;
  require(peel(R, g, order, fs), Errc::not_unipotent_upper,
          "element is outside the expected unipotent group");

  size_t nr0 = P.r0_doubled ? 2 : 1;
  std::vector<PeeledFactor> r0f(fs.begin(), fs.begin() + nr0);
  std::vector<PeeledFactor> u1f(fs.begin() + nr0, fs.begin() + nr0 + P.sigma1.size());
  std::vector<PeeledFactor> df(fs.begin() + nr0 + P.sigma1.size(), fs.end());
  Elem g_r0 = assemble(R, r0f), g_u1 = assemble(R, u1f), g_d = assemble(R, df);

  auto [factors, rem] = r0_expand(P, g_r0);
  Elem d_total = emul(econj(rem, g_u1), g_d);

  Certificate cert;
  cert.kind = "Uplus";
  cert.group = R.groupspec;
  cert.element_hex = canon_hex(g);
  cert.bound = 14;
  cert.factors = factors;
  if (!g_u1.is_identity())
    cert.factors.push_back({R.identity().m, g_u1.m, P.u1_tag()});
  if (!d_total.is_identity()) {
    Certificate dc = factor_d(P, d_total);
    cert.factors.insert(cert.factors.end(), dc.factors.begin(), dc.factors.end());
  }
  cert.achieved_length = static_cast<long>(cert.factors.size());
  require(cert.achieved_length <= 14, Errc::internal, "more than 14 slots used");
  require(factor_product(R, cert.factors) == g, Errc::internal,
          "U+ certificate does not multiply back");
  return cert;
}

// --- the alternating unipotent word ---------------------------------------------

namespace {

std::vector<Root> ortho_family(const RootSystem& rs) {
  std::vector<Root> fam;
  auto E = [&](int i) { return rs.e(i); };
  const int n = rs.rank;
  switch (rs.type) {
    case LieType::A: {
      int m = rs.ncoord;
      for (int i = 1; 2 * i <= m; ++i) fam.push_back(E(m + 1 - i) + (-E(i)));
      break;
    }
    case LieType::B:
      for (int i = 1; 2 * i <= n; ++i) {
        fam.push_back(E(2 * i) + (-E(2 * i - 1)));
        fam.push_back(E(2 * i) + E(2 * i - 1));
      }
      if (n % 2 == 1) fam.push_back(E(n));
      break;
    case LieType::C:
    case LieType::BC:
      for (int i = 1; i <= n; ++i) fam.push_back(E(i).scaled(2));
      break;
    case LieType::D:
      if (n % 2 == 0) {
        for (int i = 1; 2 * i <= n; ++i) {
          fam.push_back(E(2 * i) + (-E(2 * i - 1)));
          fam.push_back(E(2 * i) + E(2 * i - 1));
        }
      } else {
        for (int i = 1; 2 * i + 1 <= n; ++i) {
          fam.push_back(E(2 * i + 1) + (-E(2 * i)));
          fam.push_back(E(2 * i + 1) + E(2 * i));
        }
      }
      break;
  }
  return fam;
}

Mat diag_of(const Mat& U) {
  Mat d(U.n);
  for (int i = 0; i < U.n; ++i) d.at(i, i) = U.at(i, i);
  return d;
}

bool is_diagonal(const Mat& m) {
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (i != j && m.at(i, j)) return false;
  return true;
}

// U_- element for a deterministic enumeration index (0 = all parameters one).
Elem u_minus_at(const Realization& R, size_t idx) {
  Elem g = R.identity();
  if (idx == 0) {
    for (const Root& w : R.rs.positive) {
      size_t c = R.param_count(-w);
      size_t pick = 0;
      for (size_t i = 0; i < c; ++i)
        if (R.param_at(-w, i).t != 0) { pick = i; break; }
      g = emul(g, root_element(R, -w, R.param_at(-w, pick)));
    }
    return g;
  }
  size_t v = idx;
  for (const Root& w : R.rs.positive) {
    size_t c = R.param_count(-w);
    g = emul(g, root_element(R, -w, R.param_at(-w, v % c)));
    v /= c;
  }
  return g;
}

std::optional<std::vector<std::pair<int, Elem>>> bigcell_blocks(const LpContext& ctx,
                                                                const Elem& g) {
  const Realization& R = *ctx.R;
  const Field& f = *R.F;
  Mat A = mat_mul(f, mat_inv(f, ctx.m0.m), g.m);
  auto lu = mat_lu(f, A);
  if (!lu) return std::nullopt;
  auto [L, U] = *lu;
  Elem l_elem = R.elem(mat_mul(f, ctx.m0.m, mat_mul(f, L, mat_inv(f, ctx.m0.m))));
  if (!in_unipotent(R, l_elem, true)) return std::nullopt;
  Mat D = diag_of(U);
  Elem u2 = R.elem(mat_mul(f, mat_inv(f, D), U));
  if (!in_unipotent(R, u2, true)) return std::nullopt;
  Elem M = R.elem(mat_mul(f, ctx.m0.m, D));

  // peel the monomial along the commuting rank-one family
  std::vector<MonomialParts> chain;
  Elem Rm = M;
  for (const Root& gam : ctx.ortho_family) {
    bool found = false;
    size_t c = R.param_count(gam);
    // prefer the parameter whose removal normalizes the block diagonal to 1
    for (int pass = 0; pass < 2 && !found; ++pass)
      for (size_t i = 0; i < c && !found; ++i) {
        RootParams p = R.param_at(gam, i);
        if (p.t == 0) continue;
        MonomialParts mp = weyl_monomial_parts(R, gam, p.t);
        Elem test = emul(einv(mp.product), Rm);
        bool zeros = true;
        for (const Root& s : {gam, -gam})
          for (const PEntry& e : R.pattern(s).entries)
            if (test.m.at(e.r, e.c)) zeros = false;
        if (!zeros) continue;
        if (pass == 0) {
          const RootPattern& pt = R.pattern(gam);
          if (test.m.at(pt.read_r, pt.read_r) != 1) continue;
        }
        chain.push_back(mp);
        Rm = test;
        found = true;
      }
    if (!found) return std::nullopt;
  }
  if (!is_diagonal(Rm.m)) return std::nullopt;

  std::vector<std::pair<int, Elem>> blocks;
  blocks.push_back({+1, l_elem});
  Elem up = R.identity(), low = R.identity();
  for (const MonomialParts& mp : chain) {
    up = emul(up, mp.upper);
    low = emul(low, mp.lower);
  }
  blocks.push_back({+1, up});
  blocks.push_back({-1, low});
  blocks.push_back({+1, up});
  if (!Rm.is_identity()) {
    auto it = ctx.torus_words.find(canon(Rm));
    if (it == ctx.torus_words.end()) return std::nullopt;
    for (const auto& [w, t] : it->second) {
      MonomialParts a = weyl_monomial_parts(R, w, t);
      MonomialParts b = weyl_monomial_parts(R, w, f.neg(1));
      blocks.push_back({+1, a.upper});
      blocks.push_back({-1, a.lower});
      blocks.push_back({+1, emul(a.upper, b.upper)});
      blocks.push_back({-1, b.lower});
      blocks.push_back({+1, b.upper});
    }
  }
  blocks.push_back({+1, u2});
  return blocks;
}

}  // namespace

LpContext make_lp_context(RealizationPtr Rp) {
  const Realization& R = *Rp;
  LpContext ctx;
  ctx.R = Rp;
  ctx.ortho_family = ortho_family(R.rs);
  Elem m0 = R.identity();
  for (const Root& gam : ctx.ortho_family) m0 = emul(m0, weyl_monomial(R, gam, 1));
  ctx.m0 = m0;
  // m0 must swap the positive and negative unipotent sides
  for (const Root& w : R.rs.positive) {
    Elem x = root_element(R, w, R.param_at(w, R.param_count(w) - 1));
    require(in_unipotent(R, econj(x, m0), false), Errc::internal,
            "w0 family does not reverse " + w.str() + " in " + R.groupspec);
  }
  // torus closure with shortest generator words
  std::deque<std::string> frontier;
  Elem id = R.identity();
  ctx.torus_words[canon(id)] = {};
  frontier.push_back(canon(id));
  std::vector<std::pair<std::pair<Root, scalar_t>, Elem>> gens;
  for (const Root& w : R.rs.positive) {
    if (R.pattern(w).kind == ParamKind::TWO_PARAM) continue;
    for (size_t i = 0; i < R.param_count(w); ++i) {
      RootParams p = R.param_at(w, i);
      if (p.t == 0) continue;
      gens.push_back({{w, p.t}, torus_h(R, w, p.t)});
    }
  }
  while (!frontier.empty()) {
    std::string key = frontier.front();
    frontier.pop_front();
    Elem cur = decode_canon(R, key);
    auto word = ctx.torus_words.at(key);
    for (const auto& [gp, h] : gens) {
      Elem nxt = emul(cur, h);
      std::string nk = canon(nxt);
      if (!ctx.torus_words.count(nk)) {
        auto w2 = word;
        w2.push_back(gp);
        ctx.torus_words[nk] = std::move(w2);
        frontier.push_back(nk);
        require(ctx.torus_words.size() <= 65536, Errc::overflow, "torus closure too large");
      }
    }
  }
  return ctx;
}

int LpWord::alternations() const { return static_cast<int>(blocks.size()); }

LpWord lp_factor(const LpContext& ctx, const Elem& g) {
  const Realization& R = *ctx.R;
  require(preserves_structure(R, g), Errc::not_in_s,
          "element fails the structure check for " + R.groupspec);
  if (g.is_identity()) {
    LpWord w;
    w.blocks.push_back({+1, R.identity()});
    return w;
  }
  std::vector<std::pair<int, Elem>> raw;
  auto attempt = bigcell_blocks(ctx, g);
  if (attempt) {
    raw = *attempt;
  } else {
    size_t umax = 1;
    for (const Root& w : R.rs.positive) {
      umax *= R.param_count(w);
      if (umax > (1u << 22)) break;
    }
    bool done = false;
    for (size_t idx = 0; idx < umax && !done; ++idx) {
      Elem u = u_minus_at(R, idx);
      if (u.is_identity()) continue;
      auto a2 = bigcell_blocks(ctx, emul(g, u));
      if (a2) {
        raw = *a2;
        raw.push_back({-1, einv(u)});
        done = true;
      }
    }
    require(done, Errc::internal, "no U_- correction reached the big cell");
  }
  // merge adjacent blocks of equal sign, drop identities
  LpWord word;
  for (auto& [s, e] : raw) {
    if (e.is_identity()) continue;
    if (!word.blocks.empty() && word.blocks.back().first == s)
      word.blocks.back().second = emul(word.blocks.back().second, e);
    else
      word.blocks.push_back({s, e});
  }
  // merging can create fresh identities; sweep until stable
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < word.blocks.size(); ++i)
      if (word.blocks[i].second.is_identity()) {
        word.blocks.erase(word.blocks.begin() + i);
        changed = true;
        break;
      }
    for (size_t i = 0; i + 1 < word.blocks.size(); ++i)
      if (word.blocks[i].first == word.blocks[i + 1].first) {
        word.blocks[i].second = emul(word.blocks[i].second, word.blocks[i + 1].second);
        word.blocks.erase(word.blocks.begin() + i + 1);
        changed = true;
        break;
      }
  }
  if (word.blocks.empty()) word.blocks.push_back({+1, R.identity()});
  Elem check = R.identity();
  for (auto& [s, e] : word.blocks) {
    require(in_unipotent(R, e, s > 0), Errc::internal, "merged block left U+-/U-");
    check = emul(check, e);
  }
  require(check == g, Errc::internal, "alternating word does not multiply back");
  return word;
}

Certificate lp_certificate(const LpContext& ctx, const Elem& g) {
  LpWord w = lp_factor(ctx, g);
  const Realization& R = *ctx.R;
  Certificate cert;
  cert.kind = "LP";
  cert.group = R.groupspec;
  cert.element_hex = canon_hex(g);
  cert.blocks = static_cast<int>(w.blocks.size());
  cert.bound = cert.blocks;
  for (auto& [s, e] : w.blocks)
    cert.factors.push_back({R.identity().m, e.m, s > 0 ? "U+" : "U-"});
  cert.achieved_length = static_cast<long>(cert.factors.size());
  return cert;
}

Decomposer make_decomposer(RealizationPtr R) {
  Decomposer d{R, build_plan(R, +1), build_plan(R, -1), make_lp_context(R)};
  return d;
}

Certificate factor_group(const Decomposer& dec, const Elem& g) {
  const Realization& R = *dec.R;
  require(R.family != Family::SL, Errc::type_a_unsupported,
          "factor_group covers the non-A types");
  LpWord word = lp_factor(dec.lp, g);
  Certificate cert;
  cert.kind = "Main";
  cert.group = R.groupspec;
  cert.element_hex = canon_hex(g);
  cert.blocks = static_cast<int>(word.blocks.size());
  cert.bound = 14L * cert.blocks;
  cert.paper_bound_met = cert.blocks <= 13;
  for (auto& [s, e] : word.blocks) {
    Certificate part = factor_u_plus(s > 0 ? dec.plus : dec.minus, e);
    cert.factors.insert(cert.factors.end(), part.factors.begin(), part.factors.end());
  }
  cert.achieved_length = static_cast<long>(cert.factors.size());
  require(factor_product(R, cert.factors) == g, Errc::internal,
          "main certificate does not multiply back");
  return cert;
}

std::vector<Elem> theorem_conjugators(const Decomposer& dec) {
  std::vector<Elem> out;
  for (int pos = 0; pos < 13; ++pos) {
    const LeviPlan& p = (pos % 2 == 0) ? dec.plus : dec.minus;
    for (const Slot& s : p.slots) out.push_back(s.conj);
  }
  return out;
}

// --- type A ------------------------------------------------------------------------

namespace {

// M in SL(V) with M*from = to, fixing the coordinate axis `fix` entirely
// (column and row fix are identity). from/to have no `fix` component.
Mat stab_map(const Realization& R, int fix, const std::vector<scalar_t>& from,
             const std::vector<scalar_t>& to) {
  const Field& f = *R.F;
  const int N = R.dim;
  auto apply_transvection = [&](Mat& M, const std::vector<scalar_t>& u,
                                const std::vector<scalar_t>& w) {
    // M := (I + u w^T) M
    Mat T = mat_identity(f, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        T.at(i, j) = f.add(T.at(i, j), f.mul(u[i], w[j]));
    M = mat_mul(f, T, M);
  };
  auto one_step = [&](Mat& M, const std::vector<scalar_t>& a,
                      const std::vector<scalar_t>& b) {
    // independent a, b with no `fix` component: transvection sending a to b
    std::vector<scalar_t> u(N, 0);
    for (int i = 0; i < N; ++i) u[i] = f.sub(b[i], a[i]);
    // functional w with w(a) = 1, w(u) = 0, w(e_fix) = 0
    std::vector<scalar_t> A(static_cast<size_t>(3) * N, 0), rhs = {1, 0, 0}, x;
    for (int i = 0; i < N; ++i) {
      A[i] = a[i];
      A[N + i] = u[i];
      A[2 * N + i] = (i == fix) ? scalar_t(1) : scalar_t(0);
    }
    require(field_solve(f, 3, N, A, rhs, x), Errc::internal, "no transvection functional");
    apply_transvection(M, u, x);
  };
  Mat M = mat_identity(f, N);
  if (from == to) return M;
  // dependence test: to = c * from?
  bool dep = true;
  scalar_t c = 0;
  for (int i = 0; i < N && dep; ++i)
    if (from[i]) { c = f.mul(to[i], f.inv(from[i])); break; }
  for (int i = 0; i < N; ++i)
    if (to[i] != f.mul(c, from[i])) dep = false;
  if (!dep) {
    one_step(M, from, to);
  } else {
    // route through a vector independent of `from`
    std::vector<scalar_t> z(N, 0);
    int pick = -1;
    for (int i = 0; i < N && pick < 0; ++i) {
      if (i == fix) continue;
      z.assign(N, 0);
      z[i] = 1;
      bool indep = false;
      for (int j = 0; j < N; ++j)
        if (f.mul(z[j], from[(j + 1) % N]) != f.mul(z[(j + 1) % N], from[j])) indep = true;
      if (indep) pick = i;
    }
    require(pick >= 0, Errc::internal, "no independent route vector");
    one_step(M, from, z);
    // recompute: current image of from is z
    one_step(M, z, to);
  }
  // verify
  std::vector<scalar_t> img(N, 0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) img[i] = f.add(img[i], f.mul(M.at(i, j), from[j]));
  require(img == to, Errc::internal, "stabilizer map misses its target");
  require(mat_det(f, M) == 1, Errc::internal, "stabilizer map is not unimodular");
  for (int i = 0; i < N; ++i) {
    require(M.at(i, fix) == (i == fix ? 1 : 0), Errc::internal, "fix column moved");
    require(M.at(fix, i) == (i == fix ? 1 : 0), Errc::internal, "fix row moved");
  }
  return M;
}

bool in_stab(const Realization& R, const Mat& m, int i0) {
  for (int r = 0; r < R.dim; ++r) {
    if (m.at(r, i0) != (r == i0 ? 1 : 0)) return false;
    if (m.at(i0, r) != (r == i0 ? 1 : 0)) return false;
  }
  return true;
}

}  // namespace

Certificate sl_factor(const Realization& R, const Elem& g) {
  const Field& f = *R.F;
  require(R.family == Family::SL, Errc::bad_spec, "sl_factor needs a type A realization");
  require(R.rs.rank >= 3, Errc::rank_too_small, "the five-factor form needs rank >= 3");
  require(mat_det(f, g.m) == 1, Errc::not_unimodular, "determinant is not 1");
  const int N = R.dim;

  // x = g v1
  std::vector<scalar_t> x(N, 0), e0(N, 0);
  e0[0] = 1;
  for (int i = 0; i < N; ++i) x[i] = g.m.at(i, 0);

  // split x = x3 v3 + x'
  scalar_t x3 = x[2];
  std::vector<scalar_t> xp = x;
  xp[2] = 0;
  bool xp_zero = true;
  for (scalar_t v : xp)
    if (v) xp_zero = false;

  std::vector<scalar_t> y(N, 0), yp(N, 0);
  y[2] = x3;
  if (!xp_zero) {
    y[0] = 1;
    yp[0] = 1;
  }
  Mat a2 = stab_map(R, 1, e0, y);
  Mat a3 = stab_map(R, 2, yp, xp);

  Mat gp = mat_mul(f, mat_inv(f, a2), mat_mul(f, mat_inv(f, a3), g.m));
  for (int i = 0; i < N; ++i)
    require(gp.at(i, 0) == (i == 0 ? 1 : 0), Errc::internal, "first column not fixed");

  // clear the first row with right multiplications 1 + lambda E_{1,j}
  Mat b3 = mat_identity(f, N), b2 = mat_identity(f, N);
  for (int j = 1; j < N; ++j) {
    scalar_t lam = f.neg(gp.at(0, j));
    if (j == 2) b2.at(0, j) = lam;
    else b3.at(0, j) = lam;
  }
  Mat gpp = mat_mul(f, gp, mat_mul(f, b3, b2));
  require(in_stab(R, gpp, 0), Errc::internal, "reduction missed S(1)");

  Certificate cert;
  cert.kind = "SL";
  cert.group = R.groupspec;
  cert.element_hex = canon_hex(g);
  cert.bound = 5;
  Mat id = mat_identity(f, N);
  cert.factors.push_back({id, a3, "S3"});
  cert.factors.push_back({id, a2, "S2"});
  cert.factors.push_back({id, gpp, "S1"});
  cert.factors.push_back({id, mat_inv(f, b2), "S2"});
  cert.factors.push_back({id, mat_inv(f, b3), "S3"});
  cert.achieved_length = 5;
  require(factor_product(R, cert.factors) == g, Errc::internal,
          "five-factor form does not multiply back");
  return cert;
}

// --- type D corollary ------------------------------------------------------------

namespace {

// X = prod of (I + lambda E_{ab}); returned in multiplication order.
std::vector<std::tuple<int, int, scalar_t>> transvection_factor(const Field& f, Mat X) {
  const int n = X.n;
  std::vector<std::tuple<int, int, scalar_t>> applied;  // left-multiplied ops
  auto rowop = [&](int a, int b, scalar_t lam) {
    if (!lam) return;
    for (int j = 0; j < n; ++j) X.at(a, j) = f.add(X.at(a, j), f.mul(lam, X.at(b, j)));
    applied.push_back({a, b, lam});
  };
  for (int j = 0; j < n; ++j) {
    if (!X.at(j, j)) {
      int pick = -1;
      for (int i = j + 1; i < n; ++i)
        if (X.at(i, j)) { pick = i; break; }
      require(pick >= 0, Errc::internal, "transvection pivot vanished");
      rowop(j, pick, 1);
    }
    scalar_t inv = f.inv(X.at(j, j));
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      rowop(i, j, f.neg(f.mul(X.at(i, j), inv)));
    }
  }
  // diagonal cleanup: multiply by diag(t^{-1}, t) blocks built from six ops
  for (int j = 0; j + 1 < n; ++j) {
    scalar_t t = X.at(j, j);
    if (t == 1) continue;
    scalar_t s = f.inv(t);
    auto nblock = [&](scalar_t a) {
      rowop(j, j + 1, a);
      rowop(j + 1, j, f.neg(f.inv(a)));
      rowop(j, j + 1, a);
    };
    nblock(s);
    nblock(f.neg(1));
  }
  require(mat_is_identity(X), Errc::internal, "transvection reduction left a residue");
  // A_m ... A_1 X = I, so X = A_1^{-1} ... A_m^{-1}: same order, negated
  std::vector<std::tuple<int, int, scalar_t>> out;
  for (const auto& [a, b, lam] : applied) out.push_back({a, b, f.neg(lam)});
  return out;
}

// Embed an SL_n block matrix into the Levi of a type D realization.
Elem embed_block(const Realization& R, const Mat& X) {
  const Field& f = *R.F;
  const int n = R.rs.rank;
  Elem g = R.identity();
  for (auto& [a, b, lam] : transvection_factor(f, X)) {
    Root w = R.rs.e(n - a) + (-R.rs.e(n - b));
    g = emul(g, root_element(R, w, lam));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      require(g.m.at(i, j) == X.at(i, j), Errc::internal, "block embedding mismatch");
  return g;
}

Mat top_block(const Mat& m, int n) {
  Mat b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.at(i, j) = m.at(i, j);
  return b;
}

}  // namespace

Certificate sbar_factor(const Decomposer& dec, const Elem& g) {
  const Realization& R = *dec.R;
  require(R.family == Family::SOplus, Errc::not_type_d,
          "the small Levi corollary applies to type D");
  const int n = R.rs.rank;
  Certificate main = factor_group(dec, g);

  auto RA = build_realization("A", n - 1, R.F);
  const Field& f = *R.F;

  // conjugators moving S(i) onto S(n) inside SL_n
  auto m_of = [&](int i0) {
    Mat m = mat_identity(f, n);
    if (i0 != n - 1) {
      m.at(i0, i0) = 0;
      m.at(n - 1, n - 1) = 0;
      m.at(n - 1, i0) = f.neg(1);
      m.at(i0, n - 1) = 1;
    }
    return m;
  };

  Certificate cert;
  cert.kind = "Sbar";
  cert.group = R.groupspec;
  cert.element_hex = canon_hex(g);
  cert.blocks = main.blocks;
  cert.bound = 5L * main.achieved_length;
  for (const CertFactor& mf : main.factors) {
    Mat A = top_block(mf.payload, n);
    Certificate slc = sl_factor(*RA, RA->elem(A));
    for (const CertFactor& sf : slc.factors) {
      int i0 = sf.tag == "S1" ? 0 : (sf.tag == "S2" ? 1 : 2);
      Mat mi = m_of(i0);
      Mat moved = mat_mul(f, mat_inv(f, mi), mat_mul(f, sf.payload, mi));
      Elem payload = embed_block(R, moved);
      Elem conj = emul(R.elem(mf.conj), embed_block(R, mi));
      cert.factors.push_back({conj.m, payload.m, "Sbar"});
    }
  }
  cert.achieved_length = static_cast<long>(cert.factors.size());
  require(cert.achieved_length <= cert.bound, Errc::internal, "Sbar bound violated");
  require(factor_product(R, cert.factors) == g, Errc::internal,
          "Sbar certificate does not multiply back");
  return cert;
}

// --- verification --------------------------------------------------------------------

bool verify_certificate(const Realization& R, const Certificate& cert, const Elem& g) {
  require(cert.group == R.groupspec, Errc::malformed_certificate,
          "certificate was issued for " + cert.group);
  static const std::set<std::string> kinds = {"D", "R0", "Uplus", "LP", "Main", "SL", "Sbar"};
  require(kinds.count(cert.kind) != 0, Errc::malformed_certificate,
          "unknown certificate kind " + cert.kind);
  long maxb = -1;
  if (cert.kind == "D") maxb = 9;
  if (cert.kind == "R0") maxb = 13;
  if (cert.kind == "Uplus") maxb = 14;
  if (cert.kind == "SL") maxb = 5;
  if (cert.kind == "Main") maxb = 14L * cert.blocks;
  if (maxb >= 0 && (cert.bound > maxb || cert.achieved_length > cert.bound)) return false;
  if (maxb < 0 && cert.achieved_length > cert.bound && cert.kind != "LP") return false;
  if (cert.kind == "SL" && cert.factors.size() != 5) return false;
  if (cert.kind == "Main" && cert.paper_bound_met != (cert.blocks <= 13)) return false;

  const Field& f = *R.F;
  Elem prod = R.identity();
  for (const CertFactor& cf : cert.factors) {
    if (cf.conj.n != R.dim || cf.payload.n != R.dim) fail(Errc::malformed_certificate, "bad dims");
    Elem c = R.elem(cf.conj), p = R.elem(cf.payload);
    prod = emul(prod, emul(emul(c, p), einv(c)));

    if (cf.tag == "U1+" || cf.tag == "U1-") {
      std::vector<Root> order;
      for (const Root& v : R.rs.sigma1_plus)
        order.push_back(cf.tag == "U1+" ? v : -v);
      std::vector<PeeledFactor> fs;
      if (!peel(R, p, order, fs)) return false;
    } else if (cf.tag == "W") {
      if (R.rs.type != LieType::B) return false;  // W exists only for Sigma of type B
      Root wr = R.rs.e(1) + R.rs.e(2);
      std::vector<PeeledFactor> fs;
      if (!peel(R, p, {wr}, fs) && !peel(R, p, {-wr}, fs)) return false;
    } else if (cf.tag == "U+" || cf.tag == "U-") {
      if (!in_unipotent(R, p, cf.tag == "U+")) return false;
    } else if (cf.tag == "S1" || cf.tag == "S2" || cf.tag == "S3") {
      int i0 = cf.tag == "S1" ? 0 : (cf.tag == "S2" ? 1 : 2);
      if (!in_stab(R, p.m, i0)) return false;
      if (mat_det(f, p.m) != 1) return false;
    } else if (cf.tag == "Sbar") {
      if (!preserves_structure(R, p)) return false;
      const int n = R.rs.rank;
      // the SL_n block must fix v_n and stabilize its complement
      for (int r = 0; r < n; ++r) {
        if (p.m.at(r, n - 1) != (r == n - 1 ? 1 : 0)) return false;
        if (p.m.at(n - 1, r) != (r == n - 1 ? 1 : 0)) return false;
      }
    } else {
      fail(Errc::malformed_certificate, "unknown subgroup tag " + cf.tag);
    }
  }
  return prod == g;
}

}  // namespace classprod
