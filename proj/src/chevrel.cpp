#include "classprod/chevrel.hpp"

#include <algorithm>

namespace classprod {

namespace {

// all i*u + j*v in Sigma with i,j >= 1, ordered by (i+j, lex), deduplicated
std::vector<Root> support_roots(const RootSystem& sys, const Root& u, const Root& v,
                                int min_sum) {
  std::vector<std::pair<int, Root>> found;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      if (i + j < min_sum) continue;
      Root w = u.scaled(i) + v.scaled(j);
      if (w.is_zero() || !sys.is_root(w)) continue;
      bool dup = false;
      for (auto& [s, r] : found)
        if (r == w) dup = true;
      if (!dup) found.push_back({i + j, w});
    }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  std::vector<Root> out;
  for (auto& [s, r] : found) out.push_back(r);
  return out;
}

}  // namespace

std::vector<Root> z_window(const RootSystem& sys, const Root& u, const Root& v) {
  require(sys.is_root(u), Errc::root_not_in_system, u.str());
  require(sys.is_root(v), Errc::root_not_in_system, v.str());
  Root s = u + v;
  require(!s.is_zero() && sys.is_root(s), Errc::not_a_root,
          u.str() + " + " + v.str() + " is not a root");
  return support_roots(sys, u, v, 3);
}

bool star_case(const Realization& R, const Root& u, const Root& v) {
  if (R.family != Family::SOminus) return false;
  Root s = u + v;
  return R.rs.is_long(u) && R.rs.is_short(v) && R.rs.is_short(s);
}

bool excluded_pair(const Realization& R, const Root& u, const Root& v) {
  if (R.F->p() != 2) return false;
  if (R.family != Family::SpB) return false;  // the B=C coincidence
  Root s = u + v;
  if (s.is_zero() || !R.rs.is_root(s)) return false;
  return R.rs.is_short(u) && R.rs.is_short(v) && R.rs.is_long(s);
}

CommutatorShape probe_shape(const Realization& R, const Root& u, const Root& v) {
  require(R.rs.is_root(u) && R.rs.is_root(v), Errc::root_not_in_system,
          u.str() + ", " + v.str());
  require(!(u + v).is_zero() && u != v, Errc::not_a_root,
          "probe needs u != +-v");
  CommutatorShape sh;
  sh.u = u;
  sh.v = v;
  sh.support = support_roots(R.rs, u, v, 2);
  size_t cu = R.param_count(u), cv = R.param_count(v);
  sh.table.resize(cu * cv);
  for (size_t i = 0; i < cu; ++i)
    for (size_t j = 0; j < cv; ++j) {
      Elem c = ecomm(root_element(R, u, R.param_at(u, i)),
                     root_element(R, v, R.param_at(v, j)));
      std::vector<PeeledFactor> fs;
      require(peel(R, c, sh.support, fs), Errc::probe_inconsistent,
              "commutator [" + u.str() + ", " + v.str() +
                  "] leaves its Chevalley support in " + R.groupspec);
      sh.table[i * cv + j] = std::move(fs);
    }
  return sh;
}

scalar_t leading_coord(const Realization& R, const Root& r, const Elem& g) {
  const RootPattern& pt = R.pattern(r);
  const Field& f = *R.F;
  scalar_t raw = g.m.at(pt.read_r, pt.read_c);
  if (pt.read_coef == -1) raw = f.neg(raw);
  if (pt.kind == ParamKind::FPRIME) {
    scalar_t t = pt.zeta_scaled ? f.mul(f.inv(f.zeta()), raw) : raw;
    require(f.in_fprime(t), Errc::internal,
            "leading coordinate of " + r.str() + " is outside F'");
    return t;
  }
  return raw;
}

Witness make_witness(const Realization& R, const Root& v, const RootParams& p) {
  require(R.param_proper(v, p), Errc::improper_witness,
          "witness in X_" + v.str() + " must have a nonzero leading parameter");
  Witness w;
  w.v = v;
  w.params = {p};
  w.elems = {root_element(R, v, p)};
  return w;
}

Witness make_witness_pair(const Realization& R, const Root& v, scalar_t t1, scalar_t t2) {
  require(R.pattern(v).kind == ParamKind::F, Errc::improper_witness,
          "proper pairs live in one-parameter short root subgroups");
  require(fprime_span_full(*R.F, t1, t2), Errc::improper_witness,
          "pair does not span F over F'");
  Witness w;
  w.v = v;
  w.params = {{t1, 0}, {t2, 0}};
  w.elems = {root_element(R, v, t1), root_element(R, v, t2)};
  return w;
}

namespace {

// F_p basis of the parameter space of X_u, as parameter scalars.
std::vector<scalar_t> param_basis(const Realization& R, const Root& u) {
  const Field& f = *R.F;
  switch (R.pattern(u).kind) {
    case ParamKind::F:
    case ParamKind::TWO_PARAM: {
      std::vector<scalar_t> b;
      uint32_t v = 1;
      for (int i = 0; i < f.k(); ++i) {
        b.push_back(static_cast<scalar_t>(v));
        v *= f.p();
      }
      return b;
    }
    case ParamKind::FPRIME: {
      std::vector<scalar_t> b;
      for (int i = 0; i < f.k() / 2; ++i) {
        std::vector<int> c(f.k() / 2, 0);
        c[i] = 1;
        b.push_back(f.from_fprime_coords(c));
      }
      return b;
    }
  }
  return {};
}

std::vector<int> target_coords(const Realization& R, const Root& r, scalar_t val) {
  const Field& f = *R.F;
  if (R.pattern(r).kind == ParamKind::FPRIME) return f.fprime_coords(val);
  return f.coeffs(val);
}

scalar_t param_from_coords(const Realization& R, const Root& u, const std::vector<int>& c) {
  const Field& f = *R.F;
  if (R.pattern(u).kind == ParamKind::FPRIME) return f.from_fprime_coords(c);
  scalar_t r = 0;
  uint32_t v = 1;
  for (size_t i = 0; i < c.size(); ++i) {
    r = f.add(r, f.mul(static_cast<scalar_t>(v % f.q()), f.from_int(c[i])));
    // v is the basis scalar p^i as an element index
    v *= f.p();
  }
  return r;
}

Elem x_of(const Realization& R, const Root& u, scalar_t t) {
  // For 2-parameter X_u this never happens (u is always a Levi-length root);
  // keep the canonical section for safety.
  if (R.pattern(u).kind == ParamKind::TWO_PARAM)
    return root_element(R, u, RootParams{t, R.section(t)});
  return root_element(R, u, t);
}

}  // namespace

ComrelSolution solve_comrel(const Realization& R, const Root& u, const Witness& wit,
                            scalar_t target) {
  const Field& f = *R.F;
  const Root& v = wit.v;
  Root s = u + v;
  require(!s.is_zero() && R.rs.is_root(s), Errc::not_a_root,
          u.str() + " + " + v.str() + " is not a root");
  require(!excluded_pair(R, u, v), Errc::excluded_commutator_pair,
          "characteristic-2 short+short=long pair " + u.str() + ", " + v.str());
  bool star = star_case(R, u, v);
  if (star)
    require(wit.elems.size() == 2, Errc::improper_witness,
            "the (*) configuration needs a proper pair");

  // Assemble the F_p-linear map (x parameters) -> leading coordinate of s.
  std::vector<std::vector<scalar_t>> bases;
  for (size_t e = 0; e < wit.elems.size(); ++e) bases.push_back(param_basis(R, u));
  int tdim = static_cast<int>(target_coords(R, s, 0).size());
  int cols = 0;
  for (auto& b : bases) cols += static_cast<int>(b.size());
  std::vector<int> mat(static_cast<size_t>(tdim) * cols, 0);
  int col = 0;
  for (size_t e = 0; e < wit.elems.size(); ++e) {
    for (scalar_t b : bases[e]) {
      Elem c = ecomm(x_of(R, u, b), wit.elems[e]);
      auto tc = target_coords(R, s, leading_coord(R, s, c));
      for (int rix = 0; rix < tdim; ++rix) mat[static_cast<size_t>(rix) * cols + col] = tc[rix];
      ++col;
    }
  }
  bool ok = false;
  auto x = solve_mod_p(f.p(), tdim, cols, mat, target_coords(R, s, target), &ok);
  require(ok, Errc::no_solution,
          "no x in X_" + u.str() + " reaches the target coordinate of X_" + s.str());

  ComrelSolution sol;
  col = 0;
  Elem achieved = R.identity();
  for (size_t e = 0; e < wit.elems.size(); ++e) {
    std::vector<int> coords(x.begin() + col, x.begin() + col + bases[e].size());
    col += static_cast<int>(bases[e].size());
    scalar_t xp = param_from_coords(R, u, coords);
    sol.xparams.push_back(xp);
    achieved = emul(achieved, ecomm(x_of(R, u, xp), wit.elems[e]));
  }
  // verify: the product lies in the Chevalley support and hits the target
  std::vector<Root> sup = support_roots(R.rs, u, v, 2);
  std::vector<PeeledFactor> fs;
  require(peel(R, achieved, sup, fs), Errc::internal,
          "solved commutator left its support");
  require(leading_coord(R, s, achieved) == target, Errc::internal,
          "solved commutator misses its target");
  sol.achieved = achieved;
  return sol;
}

}  // namespace classprod
