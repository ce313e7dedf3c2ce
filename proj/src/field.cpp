#include "classprod/field.hpp"

#include <algorithm>
#include <numeric>

namespace classprod {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::non_prime: return "NonPrime";
    case Errc::odd_degree_involution: return "OddDegreeInvolution";
    case Errc::reducible_modulus: return "ReducibleModulus";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::no_involution: return "NoInvolution";
    case Errc::unsupported_rank: return "UnsupportedRank";
    case Errc::root_not_in_system: return "RootNotInSystem";
    case Errc::not_a_root: return "NotARoot";
    case Errc::twist_needs_involution: return "TwistNeedsInvolution";
    case Errc::unsupported_type_rank_field: return "UnsupportedTypeRankField";
    case Errc::param_out_of_subfield: return "ParamOutOfSubfield";
    case Errc::constraint_violated: return "ConstraintViolated";
    case Errc::bad_arity: return "BadArity";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::overflow: return "Overflow";
    case Errc::probe_inconsistent: return "ProbeInconsistent";
    case Errc::improper_witness: return "ImproperWitness";
    case Errc::no_solution: return "NoSolution";
    case Errc::excluded_commutator_pair: return "ExcludedCommutatorPair";
    case Errc::type_a_unsupported: return "TypeAUnsupported";
    case Errc::coverage_gap: return "CoverageGap";
    case Errc::not_in_d: return "NotInD";
    case Errc::level_stall: return "LevelStall";
    case Errc::not_in_r0_subgroup: return "NotInR0Subgroup";
    case Errc::not_unipotent_upper: return "NotUnipotentUpper";
    case Errc::not_in_s: return "NotInS";
    case Errc::rank_too_small: return "RankTooSmall";
    case Errc::not_unimodular: return "NotUnimodular";
    case Errc::not_type_d: return "NotTypeD";
    case Errc::malformed_certificate: return "MalformedCertificate";
    case Errc::realization_mismatch: return "RealizationMismatch";
    case Errc::budget_exhausted: return "BudgetExhausted";
    case Errc::bad_spec: return "BadSpec";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::corrupt_document: return "CorruptDocument";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Dense polynomials over F_p, coefficient i = degree i.
using Poly = std::vector<int>;

Poly poly_mod(Poly a, const Poly& m, int p) {
  int dm = static_cast<int>(m.size()) - 1;
  while (static_cast<int>(a.size()) > dm) {
    int da = static_cast<int>(a.size()) - 1;
    int lead = a[da] % p;
    if (lead) {
      // m is monic
      for (int i = 0; i <= dm; ++i) {
        a[da - dm + i] = ((a[da - dm + i] - lead * m[i]) % p + p) % p;
      }
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(c), m, p);
}

uint32_t poly_encode(const Poly& a, int p) {
  uint32_t v = 0;
  for (size_t i = a.size(); i-- > 0;) v = v * p + a[i];
  return v;
}

Poly poly_decode(uint32_t v, int p) {
  Poly a;
  while (v) {
    a.push_back(static_cast<int>(v % p));
    v /= p;
  }
  return a;
}

// Trial division by every monic polynomial of degree <= deg(f)/2.
bool poly_irreducible(const Poly& f, int p) {
  int d = static_cast<int>(f.size()) - 1;
  if (d <= 0) return false;
  if (d == 1) return true;
  for (int dd = 1; 2 * dd <= d; ++dd) {
    uint32_t count = 1;
    for (int i = 0; i < dd; ++i) count *= p;
    for (uint32_t low = 0; low < count; ++low) {
      Poly g = poly_decode(low, p);
      g.resize(dd + 1, 0);
      g[dd] = 1;
      // divide f by g, check remainder
      Poly r = f;
      while (static_cast<int>(r.size()) - 1 >= dd && !r.empty()) {
        int dr = static_cast<int>(r.size()) - 1;
        int lead = r[dr];
        if (lead) {
          for (int i = 0; i <= dd; ++i)
            r[dr - dd + i] = ((r[dr - dd + i] - lead * g[i]) % p + p) % p;
        }
        r.pop_back();
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (static_cast<int>(r.size()) - 1 < dd) break;
      }
      if (r.empty()) return false;
    }
  }
  return true;
}

}  // namespace

std::shared_ptr<const Field> Field::make(int p, int k, bool involuted) {
  require(is_prime(p), Errc::non_prime, "p = " + std::to_string(p));
  require(k >= 1, Errc::unsupported_type_rank_field, "k >= 1 required");
  if (involuted) require(k % 2 == 0, Errc::odd_degree_involution,
                         "involution needs even degree, got k = " + std::to_string(k));
  long q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    require(q <= 65536, Errc::unsupported_type_rank_field, "|F| > 2^16");
  }

  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  f->k_ = k;
  f->q_ = static_cast<uint32_t>(q);
  f->involuted_ = involuted;

  // Least irreducible monic modulus in base-p coefficient encoding.
  f->modulus_.assign(k, 0);
  if (k == 1) {
    f->modulus_ = {0};  // x itself; unused for prime fields
  } else {
    bool found = false;
    for (uint32_t low = 0; low < f->q_; ++low) {
      Poly cand = poly_decode(low, p);
      cand.resize(k + 1, 0);
      cand[k] = 1;
      if (poly_irreducible(cand, p)) {
        for (int i = 0; i < k; ++i) f->modulus_[i] = cand[i];
        found = true;
        break;
      }
    }
    require(found, Errc::reducible_modulus, "no irreducible modulus found");
  }

  Poly m(f->modulus_.begin(), f->modulus_.end());
  m.push_back(1);

  const uint32_t Q = f->q_;
  f->tabled_ = Q <= 1024;
  if (f->tabled_) {
    f->mul_table_.assign(static_cast<size_t>(Q) * Q, 0);
    for (uint32_t a = 0; a < Q; ++a) {
      Poly pa = poly_decode(a, p);
      for (uint32_t b = a; b < Q; ++b) {
        Poly pb = poly_decode(b, p);
        scalar_t c = static_cast<scalar_t>(
            poly_encode(k == 1 ? Poly{static_cast<int>((a * b) % p)}
                                : poly_mulmod(pa, pb, m, p),
                        p));
        f->mul_table_[static_cast<size_t>(a) * Q + b] = c;
        f->mul_table_[static_cast<size_t>(b) * Q + a] = c;
      }
    }
  }

  f->neg_.assign(Q, 0);
  for (uint32_t a = 0; a < Q; ++a) {
    Poly pa = poly_decode(a, p);
    for (auto& c : pa) c = (p - c) % p;
    f->neg_[a] = static_cast<scalar_t>(poly_encode(pa, p));
  }

  f->frob_.assign(Q, 0);
  for (uint32_t a = 0; a < Q; ++a) f->frob_[a] = f->pow(static_cast<scalar_t>(a), p);

  f->inv_.assign(Q, 0);
  for (uint32_t a = 1; a < Q; ++a) f->inv_[a] = f->pow(static_cast<scalar_t>(a), q - 2);

  if (involuted) {
    f->conj_.assign(Q, 0);
    for (uint32_t a = 0; a < Q; ++a) {
      scalar_t x = static_cast<scalar_t>(a);
      for (int i = 0; i < k / 2; ++i) x = f->frob_[x];
      f->conj_[a] = x;
    }
    // order exactly 2
    bool identity = true;
    for (uint32_t a = 0; a < Q; ++a) {
      require(f->conj_[f->conj_[a]] == a, Errc::odd_degree_involution,
              "conjugation does not square to identity");
      if (f->conj_[a] != a) identity = false;
    }
    require(!identity, Errc::odd_degree_involution, "conjugation is trivial");

    f->in_fp_.assign(Q, 0);
    for (uint32_t a = 0; a < Q; ++a)
      if (f->conj_[a] == a) {
        f->in_fp_[a] = 1;
        f->fprime_.push_back(static_cast<scalar_t>(a));
      }
    // F_p-basis of F' by greedy Gaussian independence on coefficient vectors.
    {
      std::vector<std::vector<int>> rows;
      for (scalar_t e : f->fprime_) {
        if (e == 0) continue;
        std::vector<int> v = f->coeffs(e);
        std::vector<std::vector<int>> trial = rows;
        trial.push_back(v);
        // rank via elimination
        int rank = 0;
        std::vector<std::vector<int>> mat = trial;
        for (int col = 0; col < k && rank < static_cast<int>(mat.size()); ++col) {
          int piv = -1;
          for (int r = rank; r < static_cast<int>(mat.size()); ++r)
            if (mat[r][col] % p != 0) { piv = r; break; }
          if (piv < 0) continue;
          std::swap(mat[rank], mat[piv]);
          int lead = mat[rank][col];
          int li = 1;
          for (int t = 1; t < p; ++t) if (lead * t % p == 1) { li = t; break; }
          for (int c = 0; c < k; ++c) mat[rank][c] = mat[rank][c] * li % p;
          for (int r = 0; r < static_cast<int>(mat.size()); ++r) {
            if (r == rank || mat[r][col] % p == 0) continue;
            int fac = mat[r][col] % p;
            for (int c = 0; c < k; ++c)
              mat[r][c] = ((mat[r][c] - fac * mat[rank][c]) % p + p) % p;
          }
          ++rank;
        }
        if (rank == static_cast<int>(trial.size())) {
          rows = trial;
          f->fprime_basis_.push_back(e);
        }
        if (static_cast<int>(f->fprime_basis_.size()) == k / 2) break;
      }
      require(static_cast<int>(f->fprime_basis_.size()) == k / 2, Errc::internal,
              "F' basis size mismatch");
    }

    // zeta: least unit with conj(z) = -z.
    for (uint32_t a = 1; a < Q; ++a)
      if (f->conj_[a] == f->neg_[a]) { f->zeta_ = static_cast<scalar_t>(a); break; }
    require(f->zeta_ != 0, Errc::internal, "no trace-zero unit");

    f->trace_pre_.assign(Q, 0);
    std::vector<uint8_t> seen(Q, 0);
    for (uint32_t u = 0; u < Q; ++u) {
      scalar_t t = f->add(static_cast<scalar_t>(u), f->conj_[u]);
      if (!seen[t]) { seen[t] = 1; f->trace_pre_[t] = static_cast<scalar_t>(u); }
    }
  }

  return f;
}

std::string Field::name() const {
  std::string s = "F" + std::to_string(p_);
  if (k_ > 1) s += "^" + std::to_string(k_);
  if (involuted_) s += "c";
  return s;
}

scalar_t Field::add(scalar_t a, scalar_t b) const {
  uint32_t x = a, y = b, r = 0, mul = 1;
  for (int i = 0; i < k_; ++i) {
    r += mul * ((x % p_ + y % p_) % p_);
    x /= p_;
    y /= p_;
    mul *= p_;
  }
  return static_cast<scalar_t>(r);
}

scalar_t Field::sub(scalar_t a, scalar_t b) const { return add(a, neg_[b]); }
scalar_t Field::neg(scalar_t a) const { return neg_[a]; }

scalar_t Field::mul(scalar_t a, scalar_t b) const {
  if (tabled_) return mul_table_[static_cast<size_t>(a) * q_ + b];
  return mul_slow(a, b);
}

scalar_t Field::mul_slow(scalar_t a, scalar_t b) const {
  Poly m(modulus_.begin(), modulus_.end());
  m.push_back(1);
  if (k_ == 1) return static_cast<scalar_t>((static_cast<long>(a) * b) % p_);
  return static_cast<scalar_t>(
      poly_encode(poly_mulmod(poly_decode(a, p_), poly_decode(b, p_), m, p_), p_));
}

scalar_t Field::inv(scalar_t a) const {
  require(a != 0, Errc::division_by_zero, "inverse of zero");
  return inv_[a];
}

scalar_t Field::conj(scalar_t a) const {
  require(involuted_, Errc::no_involution, "field " + name() + " has no involution");
  return conj_[a];
}

scalar_t Field::pow(scalar_t a, long e) const {
  if (e < 0) return pow(inv(a), -e);
  scalar_t r = 1, b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

scalar_t Field::from_int(long c) const {
  long v = c % p_;
  if (v < 0) v += p_;
  return static_cast<scalar_t>(v);
}

bool Field::in_fprime(scalar_t a) const {
  require(involuted_, Errc::no_involution, "no subfield F' without involution");
  return in_fp_[a] != 0;
}

scalar_t Field::zeta() const {
  require(involuted_, Errc::no_involution, "zeta needs an involution");
  return zeta_;
}

scalar_t Field::trace(scalar_t a) const { return add(a, conj(a)); }
scalar_t Field::norm(scalar_t a) const { return mul(a, conj(a)); }

scalar_t Field::trace_preimage(scalar_t rhs) const {
  require(involuted_, Errc::no_involution, "trace preimage needs an involution");
  require(in_fp_[rhs], Errc::internal, "trace preimage target not in F'");
  return trace_pre_[rhs];
}

std::vector<int> Field::coeffs(scalar_t a) const {
  std::vector<int> c(k_);
  uint32_t v = a;
  for (int i = 0; i < k_; ++i) {
    c[i] = static_cast<int>(v % p_);
    v /= p_;
  }
  return c;
}

std::vector<int> Field::fprime_coords(scalar_t a) const {
  require(involuted_ && in_fp_[a], Errc::internal, "fprime_coords needs a in F'");
  // Solve sum x_i * basis_i = a over F_p.
  int kk = k_, half = k_ / 2;
  std::vector<int> mat(static_cast<size_t>(kk) * half);
  for (int j = 0; j < half; ++j) {
    auto bc = coeffs(fprime_basis_[j]);
    for (int i = 0; i < kk; ++i) mat[static_cast<size_t>(i) * half + j] = bc[i];
  }
  bool ok = false;
  auto x = solve_mod_p(p_, kk, half, mat, coeffs(a), &ok);
  require(ok, Errc::internal, "fprime_coords inconsistent");
  return x;
}

scalar_t Field::from_fprime_coords(const std::vector<int>& c) const {
  scalar_t r = 0;
  for (size_t j = 0; j < fprime_basis_.size(); ++j) {
    scalar_t term = mul(fprime_basis_[j], from_int(c[j]));
    r = add(r, term);
  }
  return r;
}

FieldPtr field_make(int p, int k, bool involuted) { return Field::make(p, k, involuted); }

FieldPtr field_from_name(const std::string& s) {
  require(!s.empty() && (s[0] == 'F' || s[0] == 'f'), Errc::bad_spec,
          "field name must start with F: " + s);
  bool invol = false;
  std::string body = s.substr(1);
  if (!body.empty() && (body.back() == 'c' || body.back() == 'C')) {
    invol = true;
    body.pop_back();
  }
  size_t caret = body.find('^');
  long p = 0, k = 1;
  try {
    if (caret == std::string::npos) {
      long n = std::stol(body);
      // accept a plain prime power like F4: factor as p^k with least prime p
      p = n;
      k = 1;
      for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
          p = d;
          k = 0;
          long m = n;
          while (m > 1) {
            require(m % d == 0, Errc::bad_spec, "field size not a prime power: " + s);
            m /= d;
            ++k;
          }
          break;
        }
      }
    } else {
      p = std::stol(body.substr(0, caret));
      k = std::stol(body.substr(caret + 1));
    }
  } catch (const std::exception&) {
    fail(Errc::bad_spec, "cannot parse field name: " + s);
  }
  return field_make(static_cast<int>(p), static_cast<int>(k), invol);
}

bool fprime_span_full(const Field& f, scalar_t t1, scalar_t t2) {
  require(f.involuted(), Errc::no_involution, "span test needs F'");
  std::vector<uint8_t> hit(f.q(), 0);
  uint32_t count = 0;
  for (scalar_t a : f.fprime_elements())
    for (scalar_t b : f.fprime_elements()) {
      scalar_t v = f.add(f.mul(a, t1), f.mul(b, t2));
      if (!hit[v]) {
        hit[v] = 1;
        ++count;
      }
    }
  return count == f.q();
}

std::vector<int> solve_mod_p(int p, int rows, int cols, std::vector<int> a,
                             std::vector<int> rhs, bool* ok) {
  for (auto& v : a) v = (v % p + p) % p;
  for (auto& v : rhs) v = (v % p + p) % p;
  std::vector<int> pivot_col(rows, -1);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[static_cast<size_t>(r) * cols + col]) { piv = r; break; }
    if (piv < 0) continue;
    for (int c = 0; c < cols; ++c)
      std::swap(a[static_cast<size_t>(rank) * cols + c], a[static_cast<size_t>(piv) * cols + c]);
    std::swap(rhs[rank], rhs[piv]);
    int lead = a[static_cast<size_t>(rank) * cols + col];
    int li = 1;
    for (int t = 1; t < p; ++t) if (lead * t % p == 1) { li = t; break; }
    for (int c = 0; c < cols; ++c)
      a[static_cast<size_t>(rank) * cols + c] = a[static_cast<size_t>(rank) * cols + c] * li % p;
    rhs[rank] = rhs[rank] * li % p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      int fac = a[static_cast<size_t>(r) * cols + col];
      if (!fac) continue;
      for (int c = 0; c < cols; ++c)
        a[static_cast<size_t>(r) * cols + c] =
            ((a[static_cast<size_t>(r) * cols + c] - fac * a[static_cast<size_t>(rank) * cols + c]) % p + p) % p;
      rhs[r] = ((rhs[r] - fac * rhs[rank]) % p + p) % p;
    }
    pivot_col[rank] = col;
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (rhs[r]) {
      *ok = false;
      return {};
    }
  std::vector<int> x(cols, 0);
  for (int r = 0; r < rank; ++r) x[pivot_col[r]] = rhs[r];
  *ok = true;
  return x;
}

}  // namespace classprod
