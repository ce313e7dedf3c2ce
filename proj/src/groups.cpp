#include "classprod/groups.hpp"

#include <algorithm>
#include <deque>

namespace classprod {

namespace {

// shape of a root vector in e-coordinates
enum class Shape { DIFF, SUMP, SUMN, SINGLEP, SINGLEN, DOUBP, DOUBN };

struct ShapeInfo {
  Shape shape;
  int a = 0, b = 0;  // 1-based coordinate indices; DIFF: +1 at b, -1 at a
};

ShapeInfo classify(const Root& r) {
  int plus1 = 0, minus1 = 0, plus2 = 0, minus2 = 0;
  int ip1[2] = {0, 0}, im1[2] = {0, 0}, ip2 = 0, im2 = 0;
  int np1 = 0, nm1 = 0;
  for (size_t i = 0; i < r.c.size(); ++i) {
    switch (r.c[i]) {
      case 0: break;
      case 1: if (np1 < 2) ip1[np1] = static_cast<int>(i) + 1; ++np1; ++plus1; break;
      case -1: if (nm1 < 2) im1[nm1] = static_cast<int>(i) + 1; ++nm1; ++minus1; break;
      case 2: ip2 = static_cast<int>(i) + 1; ++plus2; break;
      case -2: im2 = static_cast<int>(i) + 1; ++minus2; break;
      default: fail(Errc::root_not_in_system, "bad coefficient in " + r.str());
    }
  }
  if (plus1 == 1 && minus1 == 1 && !plus2 && !minus2)
    return {Shape::DIFF, im1[0], ip1[0]};
  if (plus1 == 2 && !minus1 && !plus2 && !minus2)
    return {Shape::SUMP, std::min(ip1[0], ip1[1]), std::max(ip1[0], ip1[1])};
  if (minus1 == 2 && !plus1 && !plus2 && !minus2)
    return {Shape::SUMN, std::min(im1[0], im1[1]), std::max(im1[0], im1[1])};
  if (plus1 == 1 && !minus1 && !plus2 && !minus2) return {Shape::SINGLEP, ip1[0], 0};
  if (minus1 == 1 && !plus1 && !plus2 && !minus2) return {Shape::SINGLEN, im1[0], 0};
  if (plus2 == 1 && !plus1 && !minus1 && !minus2) return {Shape::DOUBP, ip2, 0};
  if (minus2 == 1 && !plus1 && !minus1 && !plus2) return {Shape::DOUBN, im2, 0};
  fail(Errc::root_not_in_system, "unclassifiable root " + r.str());
}

struct SpecParts {
  std::string type;
  int rank;
  std::string field;
};

SpecParts parse_groupspec(const std::string& s) {
  auto at = s.find('@');
  require(at != std::string::npos && at >= 2, Errc::bad_spec,
          "groupspec must look like C2@F3: " + s);
  std::string head = s.substr(0, at);
  size_t i = 0;
  std::string type;
  if (head.size() >= 2 && head[0] == '2' && (head[1] == 'A' || head[1] == 'D')) {
    type = head.substr(0, 2);
    i = 2;
  } else if (head.size() >= 2 && head[0] == 'B' && head[1] == 'C') {
    type = "BC";
    i = 2;
  } else {
    type = head.substr(0, 1);
    i = 1;
  }
  require(i < head.size(), Errc::bad_spec, "missing rank in " + s);
  int rank = 0;
  try {
    rank = std::stoi(head.substr(i));
  } catch (const std::exception&) {
    fail(Errc::bad_spec, "bad rank in " + s);
  }
  return {type, rank, s.substr(at + 1)};
}

}  // namespace

const RootPattern& Realization::pattern(const Root& w) const {
  auto it = pat_.find(w);
  require(it != pat_.end(), Errc::root_not_in_system,
          "no root subgroup for " + w.str() + " in " + groupspec);
  return it->second;
}

Mat Realization::root_matrix(const Root& w, const RootParams& p) const {
  const RootPattern& pt = pattern(w);
  const Field& f = *F;
  scalar_t t = p.t;
  if (pt.kind == ParamKind::FPRIME && pt.zeta_scaled) t = f.mul(f.zeta(), t);
  Mat m = mat_identity(f, dim);
  for (const PEntry& e : pt.entries) {
    scalar_t v = 0;
    switch (e.form) {
      case EForm::T: v = t; break;
      case EForm::TBAR: v = f.conj(t); break;
      case EForm::TSQ: v = f.mul(t, t); break;
      case EForm::TNORM: v = f.mul(t, f.conj(t)); break;
      case EForm::MU: v = p.t; break;
      case EForm::MUBAR: v = f.conj(p.t); break;
      case EForm::NU: v = p.u; break;
    }
    v = f.mul(v, f.from_int(e.coef));
    m.at(e.r, e.c) = f.add(m.at(e.r, e.c), v);
  }
  return m;
}

size_t Realization::param_count(const Root& w) const {
  switch (pattern(w).kind) {
    case ParamKind::F: return F->q();
    case ParamKind::FPRIME: return F->qprime();
    case ParamKind::TWO_PARAM: return static_cast<size_t>(F->q()) * F->qprime();
  }
  return 0;
}

RootParams Realization::param_at(const Root& w, size_t idx) const {
  const Field& f = *F;
  switch (pattern(w).kind) {
    case ParamKind::F:
      return {static_cast<scalar_t>(idx), 0};
    case ParamKind::FPRIME:
      return {f.fprime_elements()[idx], 0};
    case ParamKind::TWO_PARAM: {
      scalar_t t = static_cast<scalar_t>(idx / f.qprime());
      scalar_t z = f.fprime_elements()[idx % f.qprime()];
      scalar_t u = f.add(section(t), f.mul(f.zeta(), z));
      return {t, u};
    }
  }
  return {};
}

bool Realization::param_proper(const Root& w, const RootParams& p) const {
  (void)w;
  return p.t != 0;
}

scalar_t Realization::section(scalar_t t) const {
  const Field& f = *F;
  return f.trace_preimage(f.neg(f.norm(t)));
}

Elem Realization::identity() const { return {this, mat_identity(*F, dim)}; }
Elem Realization::elem(Mat m) const {
  require(m.n == dim, Errc::dimension_mismatch, "wrong matrix dimension");
  return {this, std::move(m)};
}

namespace {

void add_pattern(std::map<Root, RootPattern>& out, const Root& w, ParamKind kind,
                 bool zscaled, std::vector<PEntry> entries, int read_idx,
                 int nu_idx = -1) {
  RootPattern p;
  p.root = w;
  p.kind = kind;
  p.zeta_scaled = zscaled;
  p.entries = std::move(entries);
  p.read_r = p.entries[read_idx].r;
  p.read_c = p.entries[read_idx].c;
  p.read_coef = p.entries[read_idx].coef;
  if (nu_idx >= 0) {
    p.nu_r = p.entries[nu_idx].r;
    p.nu_c = p.entries[nu_idx].c;
  }
  out.emplace(w, std::move(p));
}

}  // namespace

RealizationPtr build_realization(const std::string& lie, int rank, FieldPtr F) {
  auto Rp = std::shared_ptr<Realization>(new Realization());
  Realization& R = *Rp;
  R.F = F;
  const Field& f = *F;
  const int p = f.p();

  std::string type = lie;
  R.lie_label = lie + std::to_string(rank);

  if (type == "A") {
    R.family = Family::SL;
    R.twisted = false;
    R.rs = build_root_system(LieType::A, rank);
    R.dim = rank + 1;
  } else if (type == "B") {
    R.family = (p == 2) ? Family::SpB : Family::SOodd;
    R.rs = build_root_system(LieType::B, rank);
    R.dim = (p == 2) ? 2 * rank : 2 * rank + 1;
  } else if (type == "C") {
    require(p != 2, Errc::unsupported_type_rank_field,
            "type C in characteristic 2 coincides with B; use B" + std::to_string(rank));
    R.family = Family::Sp;
    R.rs = build_root_system(LieType::C, rank);
    R.dim = 2 * rank;
  } else if (type == "D") {
    R.family = Family::SOplus;
    R.rs = build_root_system(LieType::D, rank);
    R.dim = 2 * rank;
  } else if (type == "2A" || type == "BC") {
    int n = (type == "BC") ? 2 * rank : rank;  // ambient A-rank
    require(f.involuted(), Errc::twist_needs_involution, "2A needs an involuted field");
    R.family = Family::SU;
    R.twisted = true;
    R.dim = n + 1;
    if (n % 2 == 1)
      R.rs = build_root_system(LieType::C, (n + 1) / 2);
    else
      R.rs = build_root_system(LieType::BC, n / 2);
  } else if (type == "2D") {
    require(f.involuted(), Errc::twist_needs_involution, "2D needs an involuted field");
    require(rank >= 3, Errc::unsupported_rank, "2D needs ambient rank >= 3");
    R.family = Family::SOminus;
    R.twisted = true;
    R.dim = 2 * rank;
    R.rs = build_root_system(LieType::B, rank - 1);
  } else {
    fail(Errc::bad_spec, "unknown type " + type);
  }

  {
    std::string fl = "F" + std::to_string(f.p());
    if (f.k() > 1) fl += "^" + std::to_string(f.k());
    R.groupspec = R.lie_label + "@" + fl;
  }

  const int N = R.dim;
  auto mirror = [N](int x) { return N - 1 - x; };

  // Gram matrices and position maps.
  switch (R.family) {
    case Family::SL: break;
    case Family::Sp:
    case Family::SpB: {
      R.has_form = true;
      R.form = Mat(N);
      for (int r = 0; r < N; ++r)
        R.form.at(r, mirror(r)) = (r < N / 2) ? 1 : f.neg(1);
      break;
    }
    case Family::SOodd: {
      R.has_form = true;
      R.form = Mat(N);
      for (int r = 0; r < N; ++r) R.form.at(r, mirror(r)) = 1;
      R.form.at(N / 2, N / 2) = f.from_int(2);
      break;
    }
    case Family::SOplus:
    case Family::SU: {
      R.has_form = true;
      R.form = Mat(N);
      for (int r = 0; r < N; ++r) R.form.at(r, mirror(r)) = 1;
      break;
    }
    case Family::SOminus: {
      R.has_form = true;
      R.form = Mat(N);
      for (int r = 0; r < N; ++r) R.form.at(r, mirror(r)) = 1;
      R.has_twist_perm = true;
      R.twist_perm.resize(N);
      for (int r = 0; r < N; ++r) R.twist_perm[r] = r;
      std::swap(R.twist_perm[N / 2 - 1], R.twist_perm[N / 2]);
      break;
    }
  }

  // Root subgroup patterns.
  auto both_signs = [&](const Root& w) {
    std::vector<Root> v = {w, -w};
    return v;
  };

  std::vector<Root> all_roots;
  for (const Root& w : R.rs.positive)
    for (const Root& s : both_signs(w)) all_roots.push_back(s);

  const int n = R.rs.rank;
  switch (R.family) {
    case Family::SL: {
      auto pos = [N](int i) { return N - i; };
      for (const Root& w : all_roots) {
        ShapeInfo si = classify(w);
        add_pattern(R.pat_, w, ParamKind::F, false,
                    {{pos(si.b), pos(si.a), 1, EForm::T}}, 0);
      }
      break;
    }
    case Family::Sp:
    case Family::SpB: {
      auto pp = [n](int i) { return n - i; };
      auto pn = [n](int i) { return n - 1 + i; };
      for (const Root& w : all_roots) {
        ShapeInfo si = classify(w);
        // characteristic-2 B labels use the symplectic matrices of the
        // corresponding doubled/undoubled C-shapes
        if (R.family == Family::SpB && si.shape == Shape::SINGLEP) si.shape = Shape::DOUBP;
        if (R.family == Family::SpB && si.shape == Shape::SINGLEN) si.shape = Shape::DOUBN;
        switch (si.shape) {
          case Shape::DIFF:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.b), pp(si.a), 1, EForm::T},
                         {pn(si.a), pn(si.b), -1, EForm::T}},
                        0);
            break;
          case Shape::SUMP:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.a), pn(si.b), 1, EForm::T},
                         {pp(si.b), pn(si.a), 1, EForm::T}},
                        0);
            break;
          case Shape::SUMN:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pn(si.b), pp(si.a), 1, EForm::T},
                         {pn(si.a), pp(si.b), 1, EForm::T}},
                        0);
            break;
          case Shape::DOUBP:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.a), pn(si.a), 1, EForm::T}}, 0);
            break;
          case Shape::DOUBN:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pn(si.a), pp(si.a), 1, EForm::T}}, 0);
            break;
          default:
            fail(Errc::internal, "bad symplectic shape " + w.str());
        }
      }
      break;
    }
    case Family::SOodd:
    case Family::SOplus: {
      const bool odd = R.family == Family::SOodd;
      auto pp = [n](int i) { return n - i; };
      auto pn = [n, odd](int i) { return odd ? n + i : n - 1 + i; };
      const int mid = n;
      for (const Root& w : all_roots) {
        ShapeInfo si = classify(w);
        switch (si.shape) {
          case Shape::DIFF:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.b), pp(si.a), 1, EForm::T},
                         {pn(si.a), pn(si.b), -1, EForm::T}},
                        0);
            break;
          case Shape::SUMP:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.a), pn(si.b), 1, EForm::T},
                         {pp(si.b), pn(si.a), -1, EForm::T}},
                        0);
            break;
          case Shape::SUMN:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pn(si.b), pp(si.a), 1, EForm::T},
                         {pn(si.a), pp(si.b), -1, EForm::T}},
                        0);
            break;
          case Shape::SINGLEP:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.a), mid, -2, EForm::T},
                         {mid, pn(si.a), 1, EForm::T},
                         {pp(si.a), pn(si.a), -1, EForm::TSQ}},
                        1);
            break;
          case Shape::SINGLEN:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pn(si.a), mid, -2, EForm::T},
                         {mid, pp(si.a), 1, EForm::T},
                         {pn(si.a), pp(si.a), -1, EForm::TSQ}},
                        1);
            break;
          default:
            fail(Errc::internal, "bad orthogonal shape " + w.str());
        }
      }
      break;
    }
    case Family::SU: {
      const bool oddN = N % 2 == 1;
      const int m = N / 2;
      auto pp = [m](int i) { return m - i; };
      auto pn = [m, oddN](int i) { return oddN ? m + i : m - 1 + i; };
      const int mid = m;
      for (const Root& w : all_roots) {
        ShapeInfo si = classify(w);
        switch (si.shape) {
          case Shape::DIFF:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.b), pp(si.a), 1, EForm::T},
                         {pn(si.a), pn(si.b), -1, EForm::TBAR}},
                        0);
            break;
          case Shape::SUMP:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pp(si.a), pn(si.b), 1, EForm::T},
                         {pp(si.b), pn(si.a), -1, EForm::TBAR}},
                        0);
            break;
          case Shape::SUMN:
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pn(si.b), pp(si.a), 1, EForm::T},
                         {pn(si.a), pp(si.b), -1, EForm::TBAR}},
                        0);
            break;
          case Shape::DOUBP:
            add_pattern(R.pat_, w, ParamKind::FPRIME, true,
                        {{pp(si.a), pn(si.a), 1, EForm::T}}, 0);
            break;
          case Shape::DOUBN:
            add_pattern(R.pat_, w, ParamKind::FPRIME, true,
                        {{pn(si.a), pp(si.a), 1, EForm::T}}, 0);
            break;
          case Shape::SINGLEP:
            add_pattern(R.pat_, w, ParamKind::TWO_PARAM, false,
                        {{pp(si.a), mid, -1, EForm::MUBAR},
                         {mid, pn(si.a), 1, EForm::MU},
                         {pp(si.a), pn(si.a), 1, EForm::NU}},
                        1, 2);
            break;
          case Shape::SINGLEN:
            add_pattern(R.pat_, w, ParamKind::TWO_PARAM, false,
                        {{pn(si.a), mid, -1, EForm::MUBAR},
                         {mid, pp(si.a), 1, EForm::MU},
                         {pn(si.a), pp(si.a), 1, EForm::NU}},
                        1, 2);
            break;
        }
      }
      break;
    }
    case Family::SOminus: {
      const int m = N / 2;  // ambient rank; the B-system index j sits at ambient j+1
      auto pp = [m](int i) { return m - i; };
      auto pn = [m](int i) { return m - 1 + i; };
      const int pc = pp(1), pb = pn(1);  // the tau-swapped middle pair
      for (const Root& w : all_roots) {
        ShapeInfo si = classify(w);
        int a = si.a + 1, b = si.b + 1;  // ambient coordinates
        switch (si.shape) {
          case Shape::DIFF:
            add_pattern(R.pat_, w, ParamKind::FPRIME, false,
                        {{pp(b), pp(a), 1, EForm::T},
                         {pn(a), pn(b), -1, EForm::T}},
                        0);
            break;
          case Shape::SUMP:
            add_pattern(R.pat_, w, ParamKind::FPRIME, false,
                        {{pp(a), pn(b), 1, EForm::T},
                         {pp(b), pn(a), -1, EForm::T}},
                        0);
            break;
          case Shape::SUMN:
            add_pattern(R.pat_, w, ParamKind::FPRIME, false,
                        {{pn(b), pp(a), 1, EForm::T},
                         {pn(a), pp(b), -1, EForm::T}},
                        0);
            break;
          case Shape::SINGLEP: {
            int ar = pp(a), br = pn(a);
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{ar, pc, 1, EForm::T},
                         {ar, pb, 1, EForm::TBAR},
                         {pc, br, -1, EForm::TBAR},
                         {pb, br, -1, EForm::T},
                         {ar, br, -1, EForm::TNORM}},
                        0);
            break;
          }
          case Shape::SINGLEN: {
            int ar = pp(a), br = pn(a);
            add_pattern(R.pat_, w, ParamKind::F, false,
                        {{pc, ar, 1, EForm::T},
                         {pb, ar, 1, EForm::TBAR},
                         {br, pc, -1, EForm::TBAR},
                         {br, pb, -1, EForm::T},
                         {br, ar, -1, EForm::TNORM}},
                        0);
            break;
          }
          default:
            fail(Errc::internal, "bad 2D shape " + w.str());
        }
      }
      break;
    }
  }

  // Small-field cases where the unipotent-generated group is known not to be
  // quasisimple; runs are allowed, reports carry a warning.
  if (R.family == Family::SpB && n == 2 && f.q() == 2) R.small_field_warning = true;

  Rp->validate();
  return Rp;
}

RealizationPtr build_realization(const std::string& groupspec) {
  SpecParts sp = parse_groupspec(groupspec);
  FieldPtr F = field_from_name(sp.field);
  if ((sp.type == "2A" || sp.type == "2D" || sp.type == "BC") && !F->involuted()) {
    require(F->k() % 2 == 0, Errc::twist_needs_involution,
            "twisted groups need an even-degree field, got " + F->name());
    F = field_make(F->p(), F->k(), true);
  }
  return build_realization(sp.type, sp.rank, F);
}

void Realization::validate() const {
  const Field& f = *F;
  for (const auto& [w, pt] : pat_) {
    // X(0) = 1
    require(mat_is_identity(root_matrix(w, {0, 0})), Errc::probe_inconsistent,
            groupspec + ": X_" + w.str() + "(0) != 1");
    size_t count = param_count(w);
    size_t step = count <= 64 ? 1 : count / 64;
    for (size_t i = 0; i < count; i += step) {
      RootParams p = param_at(w, i);
      Elem g{this, root_matrix(w, p)};
      require(preserves_structure(*this, g), Errc::probe_inconsistent,
              groupspec + ": X_" + w.str() + " breaks the form");
      // additivity
      RootParams p2 = param_at(w, (i * 7 + 3) % count);
      Mat lhs = mat_mul(f, root_matrix(w, p), root_matrix(w, p2));
      RootParams sum;
      if (pt.kind == ParamKind::TWO_PARAM)
        sum = {f.add(p.t, p2.t), f.sub(f.add(p.u, p2.u), f.mul(f.conj(p.t), p2.t))};
      else
        sum = {f.add(p.t, p2.t), 0};
      require(lhs == root_matrix(w, sum), Errc::probe_inconsistent,
              groupspec + ": X_" + w.str() + " closure law fails");
    }
  }
}

// --- element ops -------------------------------------------------------------

Elem root_element(const Realization& R, const Root& w, const RootParams& p) {
  const RootPattern& pt = R.pattern(w);
  const Field& f = *R.F;
  switch (pt.kind) {
    case ParamKind::F:
      require(p.u == 0, Errc::bad_arity, "X_" + w.str() + " takes one parameter");
      break;
    case ParamKind::FPRIME:
      require(p.u == 0, Errc::bad_arity, "X_" + w.str() + " takes one parameter");
      require(f.in_fprime(p.t), Errc::param_out_of_subfield,
              "X_" + w.str() + " parameter must lie in F'");
      break;
    case ParamKind::TWO_PARAM: {
      scalar_t lhs = f.add(p.u, f.conj(p.u));
      scalar_t rhs = f.neg(f.mul(p.t, f.conj(p.t)));
      require(lhs == rhs, Errc::constraint_violated,
              "X_" + w.str() + "(t,u) needs u + conj(u) = -t conj(t)");
      break;
    }
  }
  return {&R, R.root_matrix(w, p)};
}

Elem root_element(const Realization& R, const Root& w, scalar_t t) {
  return root_element(R, w, RootParams{t, 0});
}

Elem emul(const Elem& a, const Elem& b) {
  require(a.R == b.R, Errc::dimension_mismatch, "elements from different realizations");
  return {a.R, mat_mul(*a.R->F, a.m, b.m)};
}

Elem einv(const Elem& a) { return {a.R, mat_inv(*a.R->F, a.m)}; }

Elem econj(const Elem& a, const Elem& g) {
  return emul(emul(einv(g), a), g);
}

Elem ecomm(const Elem& a, const Elem& b) {
  return emul(emul(einv(a), einv(b)), emul(a, b));
}

bool preserves_structure(const Realization& R, const Elem& g) {
  const Field& f = *R.F;
  if (mat_det(f, g.m) != 1) return false;
  if (R.has_form) {
    Mat gt = mat_transpose(g.m);
    Mat rhs = (R.family == Family::SU) ? mat_mul(f, mat_conj(f, gt), mat_mul(f, R.form, g.m))
                                       : mat_mul(f, gt, mat_mul(f, R.form, g.m));
    if (!(rhs == R.form)) return false;
  }
  if (R.has_twist_perm) {
    // sigma-fixed: P conj(g) P = g
    Mat c = mat_conj(f, g.m);
    Mat pg(R.dim);
    for (int i = 0; i < R.dim; ++i)
      for (int j = 0; j < R.dim; ++j)
        pg.at(i, j) = c.at(R.twist_perm[i], R.twist_perm[j]);
    if (!(pg == g.m)) return false;
  }
  return true;
}

// --- canonical encoding -------------------------------------------------------

std::string canon(const Elem& g) {
  const Field& f = *g.R->F;
  const int p = f.p(), k = f.k();
  int bits = 1;
  while ((1 << bits) < p) ++bits;
  std::string out;
  out.reserve((g.m.a.size() * k * bits + 7) / 8);
  uint32_t acc = 0;
  int nacc = 0;
  for (scalar_t e : g.m.a) {
    uint32_t v = e;
    for (int i = 0; i < k; ++i) {
      acc |= (v % p) << nacc;
      nacc += bits;
      v /= p;
      while (nacc >= 8) {
        out.push_back(static_cast<char>(acc & 0xff));
        acc >>= 8;
        nacc -= 8;
      }
    }
  }
  if (nacc) out.push_back(static_cast<char>(acc & 0xff));
  return out;
}

std::string canon_hex(const Elem& g) {
  static const char* digits = "0123456789abcdef";
  std::string raw = canon(g), out;
  out.reserve(raw.size() * 2);
  for (unsigned char c : raw) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

Elem decode_canon(const Realization& R, const std::string& key) {
  const Field& f = *R.F;
  const int p = f.p(), k = f.k();
  int bits = 1;
  while ((1 << bits) < p) ++bits;
  Mat m(R.dim);
  size_t pos = 0;
  uint32_t acc = 0;
  int nacc = 0;
  for (size_t idx = 0; idx < m.a.size(); ++idx) {
    uint32_t v = 0, mul = 1;
    for (int i = 0; i < k; ++i) {
      while (nacc < bits) {
        require(pos < key.size(), Errc::corrupt_document, "canon key too short");
        acc |= static_cast<uint32_t>(static_cast<unsigned char>(key[pos++])) << nacc;
        nacc += 8;
      }
      v += (acc & ((1u << bits) - 1)) * mul;
      acc >>= bits;
      nacc -= bits;
      mul *= p;
    }
    require(v < f.q(), Errc::corrupt_document, "canon digit out of range");
    m.a[idx] = static_cast<scalar_t>(v);
  }
  return {&R, std::move(m)};
}

Elem decode_canon_hex(const Realization& R, const std::string& hex) {
  require(hex.size() % 2 == 0, Errc::corrupt_document, "odd hex length");
  std::string raw;
  raw.reserve(hex.size() / 2);
  auto val = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail(Errc::corrupt_document, "bad hex digit");
  };
  for (size_t i = 0; i < hex.size(); i += 2)
    raw.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
  return decode_canon(R, raw);
}

// --- peeling -------------------------------------------------------------------

bool peel(const Realization& R, const Elem& g, const std::vector<Root>& order,
          std::vector<PeeledFactor>& out) {
  const Field& f = *R.F;
  out.clear();
  Mat cur = g.m;
  for (const Root& w : order) {
    const RootPattern& pt = R.pattern(w);
    scalar_t raw = cur.at(pt.read_r, pt.read_c);
    if (pt.read_coef == -1) raw = f.neg(raw);
    RootParams p{};
    switch (pt.kind) {
      case ParamKind::F:
        p = {raw, 0};
        break;
      case ParamKind::FPRIME: {
        scalar_t t = pt.zeta_scaled ? f.mul(f.inv(f.zeta()), raw) : raw;
        if (!f.in_fprime(t)) return false;
        p = {t, 0};
        break;
      }
      case ParamKind::TWO_PARAM:
        p = {raw, R.section(raw)};
        break;
    }
    out.push_back({w, p});
    // strip: X(p)^{-1} * cur
    RootParams ip;
    if (pt.kind == ParamKind::TWO_PARAM)
      ip = {f.neg(p.t), f.neg(f.add(p.u, f.norm(p.t)))};
    else
      ip = {f.neg(p.t), 0};
    cur = mat_mul(f, R.root_matrix(w, ip), cur);
  }
  return mat_is_identity(cur);
}

Elem assemble(const Realization& R, const std::vector<PeeledFactor>& fs) {
  Elem g = R.identity();
  for (const PeeledFactor& pf : fs) g = emul(g, Elem{&R, R.root_matrix(pf.root, pf.p)});
  return g;
}

bool in_unipotent(const Realization& R, const Elem& g, bool positive) {
  std::vector<Root> order;
  for (const Root& w : R.rs.positive) order.push_back(positive ? w : -w);
  std::vector<PeeledFactor> fs;
  return peel(R, g, order, fs);
}

// --- monomials -----------------------------------------------------------------

namespace {
bool mat_monomial(const Mat& m) {
  for (int i = 0; i < m.n; ++i) {
    int nr = 0, nc = 0;
    for (int j = 0; j < m.n; ++j) {
      if (m.at(i, j)) ++nr;
      if (m.at(j, i)) ++nc;
    }
    if (nr != 1 || nc != 1) return false;
  }
  return true;
}
}  // namespace

MonomialParts weyl_monomial_parts(const Realization& R, const Root& w, scalar_t t) {
  const RootPattern& pt = R.pattern(w);
  require(pt.kind != ParamKind::TWO_PARAM, Errc::internal,
          "monomial through a 2-parameter subgroup; use the doubled root");
  require(t != 0, Errc::division_by_zero, "monomial needs a unit");
  Elem x1 = root_element(R, w, t);
  size_t c = R.param_count(-w);
  for (size_t i = 0; i < c; ++i) {
    RootParams p = R.param_at(-w, i);
    if (p.t == 0) continue;
    Elem x2 = root_element(R, -w, p);
    Elem cand = emul(emul(x1, x2), x1);
    if (mat_monomial(cand.m)) return {x1, x2, p.t, cand};
  }
  fail(Errc::internal, "no monomial in the rank-1 subgroup of " + w.str());
}

Elem weyl_monomial(const Realization& R, const Root& w, scalar_t t) {
  return weyl_monomial_parts(R, w, t).product;
}

Elem torus_h(const Realization& R, const Root& w, scalar_t t) {
  scalar_t m1 = R.F->neg(1);
  return emul(weyl_monomial(R, w, t), weyl_monomial(R, w, m1));
}

// --- generation ------------------------------------------------------------------

ElementSet bfs_generate(const Realization& R, const std::vector<Elem>& gens,
                        size_t cap, const std::string& source) {
  ElementSet out;
  out.spec = R.groupspec;
  out.source = source;
  require(!gens.empty(), Errc::bad_arity, "bfs_generate needs generators");
  std::deque<Elem> frontier;
  Elem id = R.identity();
  out.keys.insert(canon(id));
  frontier.push_back(id);
  while (!frontier.empty()) {
    Elem cur = frontier.front();
    frontier.pop_front();
    for (const Elem& g : gens) {
      Elem nxt = emul(cur, g);
      std::string key = canon(nxt);
      if (out.keys.insert(key).second) {
        require(out.keys.size() <= cap, Errc::overflow,
                "closure exceeded cap " + std::to_string(cap));
        frontier.push_back(std::move(nxt));
      }
    }
  }
  return out;
}

std::vector<Elem> all_root_elements(const Realization& R) {
  std::vector<Elem> out;
  for (const Root& w : R.rs.positive)
    for (const Root& s : {w, -w}) {
      size_t c = R.param_count(s);
      for (size_t i = 0; i < c; ++i) {
        RootParams p = R.param_at(s, i);
        if (p.t == 0 && p.u == 0) continue;
        out.push_back(root_element(R, s, p));
      }
    }
  return out;
}

std::vector<Elem> subgroup_generators(const Realization& R, const std::vector<Root>& roots) {
  std::vector<Elem> out;
  for (const Root& w : roots) {
    size_t c = R.param_count(w);
    for (size_t i = 0; i < c; ++i) {
      RootParams p = R.param_at(w, i);
      if (p.t == 0 && p.u == 0) continue;
      out.push_back(root_element(R, w, p));
    }
  }
  return out;
}

}  // namespace classprod
