#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "classprod/matrix.hpp"
#include "classprod/rootsys.hpp"

namespace classprod {

// Matrix model backing a group spec.
enum class Family {
  SL,       // A_n: SL_{n+1}
  Sp,       // C_n: Sp_{2n}, antidiagonal alternating form
  SpB,      // B_n over characteristic 2, realized as Sp_{2n} with B labels
  SOodd,    // B_n odd characteristic: Omega_{2n+1}
  SOplus,   // D_n: Omega^+_{2n}
  SU,       // 2A_n: SU_{n+1} over F with conjugation, antidiagonal Hermitian
  SOminus,  // 2D_m: sigma-fixed points in the split O^+_{2m} over F
};

// How a matrix entry of a root element depends on the parameters.
enum class EForm : uint8_t {
  T,      // t
  TBAR,   // conj(t)
  TSQ,    // t^2
  TNORM,  // t*conj(t)
  MU,     // first parameter of a 2-parameter subgroup
  MUBAR,  // conj of it
  NU,     // second parameter
};

enum class ParamKind : uint8_t {
  F,         // one parameter ranging over F
  FPRIME,    // one parameter ranging over F' (possibly zeta-scaled inside)
  TWO_PARAM, // (t, u) in F x F with u + conj(u) = -t*conj(t)
};

struct PEntry {
  int r, c;
  int coef;  // small integer, applied through Field::from_int
  EForm form;
};

// Parameter values for a root element. One-parameter subgroups use t only.
struct RootParams {
  scalar_t t = 0;
  scalar_t u = 0;
  bool operator==(const RootParams& o) const { return t == o.t && u == o.u; }
};

struct RootPattern {
  Root root;
  ParamKind kind = ParamKind::F;
  bool zeta_scaled = false;  // FPRIME: internal value is zeta * t'
  std::vector<PEntry> entries;
  // peel readout: entry holding the leading parameter with coefficient +-1
  int read_r = 0, read_c = 0;
  int read_coef = 1;
  // TWO_PARAM: position of the nu entry
  int nu_r = 0, nu_c = 0;
};

class Realization;
using RealizationPtr = std::shared_ptr<const Realization>;

struct Elem {
  const Realization* R = nullptr;
  Mat m;
  bool operator==(const Elem& o) const { return m == o.m; }
  bool is_identity() const { return mat_is_identity(m); }
};

// A matrix realization of one classical quasisimple group together with its
// root-subgroup patterns for every root of Sigma (both signs). Immutable.
class Realization : public std::enable_shared_from_this<Realization> {
 public:
  Family family;
  std::string groupspec;  // canonical, e.g. "C2@F3", "2A3@F2^2"
  std::string lie_label;  // "C2", "2A3", "BC2", ...
  bool twisted = false;
  FieldPtr F;
  RootSystem rs;
  int dim = 0;
  bool has_form = false;
  Mat form;
  bool has_twist_perm = false;
  std::vector<int> twist_perm;  // sigma(g) = P conj(g) P for SOminus
  bool small_field_warning = false;  // S known non-quasisimple at this size

  const RootPattern& pattern(const Root& w) const;
  Mat root_matrix(const Root& w, const RootParams& p) const;

  // number of admissible parameter tuples of X_w
  size_t param_count(const Root& w) const;
  RootParams param_at(const Root& w, size_t idx) const;  // enumeration
  bool param_proper(const Root& w, const RootParams& p) const;

  // canonical second coordinate: least u with u + conj(u) = -t conj(t)
  scalar_t section(scalar_t t) const;

  Elem identity() const;
  Elem elem(Mat m) const;

  friend RealizationPtr build_realization(const std::string& lie, int rank, FieldPtr F);

 private:
  Realization() = default;
  std::map<Root, RootPattern> pat_;
  void validate() const;
};

// Accepts "<TYPE><rank>@F<p>[^<k>][c]" with TYPE in {A,B,C,D,2A,2D,BC}.
RealizationPtr build_realization(const std::string& groupspec);
RealizationPtr build_realization(const std::string& lie, int rank, FieldPtr F);

// --- element operations -----------------------------------------------------
Elem root_element(const Realization& R, const Root& w, const RootParams& p);
Elem root_element(const Realization& R, const Root& w, scalar_t t);
Elem emul(const Elem& a, const Elem& b);
Elem einv(const Elem& a);
Elem econj(const Elem& a, const Elem& g);        // g^{-1} a g
Elem ecomm(const Elem& a, const Elem& b);        // a^{-1} b^{-1} a b
bool preserves_structure(const Realization& R, const Elem& g);

// Canonical byte encoding: row-major entries, each packed as k base-p digits
// of ceil(log2 p) bits. Injective on matrices of a fixed realization.
std::string canon(const Elem& g);
std::string canon_hex(const Elem& g);
Elem decode_canon(const Realization& R, const std::string& key);
Elem decode_canon_hex(const Realization& R, const std::string& hex);

// --- peeling ----------------------------------------------------------------
// Writes g as the ordered product of root elements over `order` (each root
// once). Returns false if g is not in that product set.
struct PeeledFactor {
  Root root;
  RootParams p;
};
bool peel(const Realization& R, const Elem& g, const std::vector<Root>& order,
          std::vector<PeeledFactor>& out);
Elem assemble(const Realization& R, const std::vector<PeeledFactor>& fs);
bool in_unipotent(const Realization& R, const Elem& g, bool positive);

// --- monomials and the torus -------------------------------------------------
// n_w(t) = X_w(t) X_{-w}(s) X_w(t) with s the unique opposite parameter
// making the product monomial (s = -t^{-1} up to pattern normalization).
// t must be a unit (an F' unit for F'-parameter subgroups; the doubled roots
// stand in for the BC 2-parameter short positions).
struct MonomialParts {
  Elem upper;        // X_w(t), used twice
  Elem lower;        // X_{-w}(s)
  scalar_t lower_param;
  Elem product;
};
MonomialParts weyl_monomial_parts(const Realization& R, const Root& w, scalar_t t);
Elem weyl_monomial(const Realization& R, const Root& w, scalar_t t);
Elem torus_h(const Realization& R, const Root& w, scalar_t t);  // n_w(t) n_w(-1)

// --- generation ---------------------------------------------------------------
struct ElementSet {
  std::string spec;    // groupspec the keys belong to
  std::string source;  // provenance label
  std::unordered_set<std::string> keys;
  size_t size() const { return keys.size(); }
  bool contains(const std::string& k) const { return keys.count(k) != 0; }
};

// Closure of `gens` under multiplication (all products of unbounded length).
// Throws overflow when the closure exceeds cap.
ElementSet bfs_generate(const Realization& R, const std::vector<Elem>& gens,
                        size_t cap, const std::string& source = "bfs");

// All root elements (every root, every parameter tuple).
std::vector<Elem> all_root_elements(const Realization& R);
// Generators X_w(basis params) for w in the given roots.
std::vector<Elem> subgroup_generators(const Realization& R, const std::vector<Root>& roots);

}  // namespace classprod
