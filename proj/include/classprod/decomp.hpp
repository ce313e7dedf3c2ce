#pragma once

#include <optional>

#include "classprod/chevrel.hpp"

namespace classprod {

// One slot of the fixed conjugate-of-U_1 layout. The slot's contribution to a
// product is conj * payload * conj^{-1}; payloads always peel inside the tag
// subgroup (U1 of the plan's sign, or W).
struct Slot {
  Elem conj;
  std::string tag;  // "U1+", "U1-", "W"
};

// A route sending a Delta root to the commutator [X_v, w_j] that reaches it.
struct PlanRoute {
  int j = 0;          // 1..4
  Root v;             // the Sigma_1 root (oriented)
  int witness_index;  // which constituent of w_j is the non-commuting one
};

// All element-independent data for factoring U_+ (sign +1) or U_- (sign -1)
// through conjugates of U_1: the four witnesses w_1..w_4 with their
// constituents, the target maps, the r_0 treatment, the Weyl conjugators and
// the slot layout. Built once per realization and sign; immutable afterwards.
struct LeviPlan {
  RealizationPtr R;
  int sign = 1;

  std::vector<Root> sigma1;       // oriented positive Sigma_1, system order
  std::vector<Root> delta;        // oriented Delta, (height, lex) order
  std::map<int, std::vector<Root>> levels;  // |height| -> oriented Delta roots
  Root r0;                        // oriented
  bool r0_doubled = false;        // BC: 2 r0 is a root
  Root r0_twice;

  // w_j data; constituents[j] lists (root, witness) in product order
  struct Constituent {
    Root alpha;       // oriented root of the constituent
    Witness witness;  // proper element (or pair member stored singly)
  };
  std::vector<std::vector<Constituent>> constituents;  // [4]
  std::vector<Elem> wj;                                // [4]

  bool has_W = false;
  Root w_root;  // oriented e1+e2 when Sigma has type B

  // t_j and r(j, v); absent key means t_j(v) = infinity
  std::map<std::pair<int, Root>, int> tj;
  std::map<std::pair<int, Root>, Root> rjv;
  // Delta root -> its route(s); two routes exactly for the (*) short roots
  std::map<Root, std::vector<PlanRoute>> routes;
  std::map<Root, char> route_kind;  // 'W' or 'C' (commutator)

  char r0_case = 'a';               // 'a','b','c','d'
  Root r0_u, r0_v;
  std::vector<Witness> r0_witnesses;  // 1 generally, 2 under (*) or case d

  // Weyl conjugators: for each needed root u, an element s built from
  // monomials with econj(X_u, s) = X_{target} <= U_1(sign); stored with the
  // target root.
  struct Conjugator {
    Elem s;
    Root target;
    std::vector<Root> word;  // simple reflections applied, for reports
  };
  std::map<Root, Conjugator> into_levi;

  std::vector<Slot> slots;  // fixed layout, <= 14
  // slot indices of the moving parts
  int slot_r0_begin = 0, slot_r0_count = 0;
  int slot_u1 = 0;
  int slot_W = -1;
  int slot_j_begin = 0;  // 8 slots: (x_j^{-1} @ 1, x_j @ w_j^{-1}) for j=1..4

  std::string u1_tag() const { return sign > 0 ? "U1+" : "U1-"; }
};

LeviPlan build_plan(RealizationPtr R, int sign = 1);

// --- certificates -----------------------------------------------------------
struct CertFactor {
  Mat conj;     // contribution = conj * payload * conj^{-1}
  Mat payload;
  std::string tag;  // U1+, U1-, W, U+, U-, S1, S2, S3, Sbar
};

struct Certificate {
  std::string kind;  // D, R0, Uplus, LP, Main, SL, Sbar
  std::string group;
  std::string element_hex;
  std::vector<CertFactor> factors;
  long bound = 0;          // kind bound the verifier enforces
  long achieved_length = 0;
  int blocks = 0;              // LP/Main: unipotent block count
  bool paper_bound_met = false;  // Main: blocks <= 13, so length <= 182
};

// --- factoring operations ------------------------------------------------------
Certificate factor_d(const LeviPlan& plan, const Elem& d);
Certificate factor_r0(const LeviPlan& plan, const Elem& g);
Certificate factor_u_plus(const LeviPlan& plan, const Elem& g);

// Alternating unipotent word machinery shared by lp_factor/factor_group.
struct LpContext {
  RealizationPtr R;
  std::vector<Root> ortho_family;  // strongly orthogonal roots realizing w_0
  Elem m0;                         // prod n_gamma(1)
  // shortest torus words: canon(h) -> [(root, param)]
  std::map<std::string, std::vector<std::pair<Root, scalar_t>>> torus_words;
};
LpContext make_lp_context(RealizationPtr R);

struct LpWord {
  std::vector<std::pair<int, Elem>> blocks;  // (sign, unipotent block)
  int alternations() const;                  // number of blocks
};
LpWord lp_factor(const LpContext& ctx, const Elem& g);
Certificate lp_certificate(const LpContext& ctx, const Elem& g);

// Everything needed to factor arbitrary group elements.
struct Decomposer {
  RealizationPtr R;
  LeviPlan plus, minus;
  LpContext lp;
};
Decomposer make_decomposer(RealizationPtr R);

Certificate factor_group(const Decomposer& dec, const Elem& g);

// The fixed conjugate list realizing S as a product of <= 182 conjugates of
// S_1: thirteen alternating unipotent positions, each expanded into its slot
// conjugators. Pieces act as c * S_1 * c^{-1}.
std::vector<Elem> theorem_conjugators(const Decomposer& dec);

// --- type A -----------------------------------------------------------------
Certificate sl_factor(const Realization& R, const Elem& g);

// --- type D corollary ----------------------------------------------------------
Certificate sbar_factor(const Decomposer& dec, const Elem& g);

// --- verification ----------------------------------------------------------------
bool verify_certificate(const Realization& R, const Certificate& cert, const Elem& g);

}  // namespace classprod
