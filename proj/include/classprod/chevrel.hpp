#pragma once

#include <map>
#include <variant>

#include "classprod/groups.hpp"

namespace classprod {

// Roots i*u + j*v with i,j >= 1, i+j > 2 that lie in Sigma: the correction
// window of the commutator [X_u, X_v]. May be empty.
std::vector<Root> z_window(const RootSystem& sys, const Root& u, const Root& v);

// Empirically probed shape of [X_u(s), X_v(r)]: the support roots in window
// order (u+v first, then increasing i+j) and, per support root, the full
// parameter table indexed by (param index of u, param index of v). Evaluating
// the shape reproduces the commutator exactly for every parameter pair.
struct CommutatorShape {
  Root u, v;
  std::vector<Root> support;  // peel order: u+v then window by (i+j, lex)
  // table[pu * param_count(v) + pv] = peeled factors over `support`
  std::vector<std::vector<PeeledFactor>> table;
  bool commuting() const { return support.empty(); }
};

CommutatorShape probe_shape(const Realization& R, const Root& u, const Root& v);

// A witness inside X_v: one proper element, or a proper pair (case (*)).
struct Witness {
  std::vector<Elem> elems;          // size 1 or 2
  std::vector<RootParams> params;   // matching parameters
  Root v;
};

Witness make_witness(const Realization& R, const Root& v, const RootParams& p);
Witness make_witness_pair(const Realization& R, const Root& v, scalar_t t1, scalar_t t2);

// Solution of [x, a] = X_{u+v}(target) modulo the window: the parameters for
// x in X_u (one per witness element). The target is the leading coordinate of
// X_{u+v}: its F-parameter, or its F'-parameter for F'-ranged subgroups; for
// a 2-parameter X_{u+v} the t-part.
struct ComrelSolution {
  std::vector<scalar_t> xparams;  // per witness element
  Elem achieved;                  // the commutator product actually realized
};

// Solves the constructive form of the commutator lemma. Preconditions follow
// its hypotheses: u and u+v are roots, u has the Levi length class, and in
// characteristic 2 with a B-labelled system u,v must not be short roots
// summing to a long root. Throws improper_witness / no_solution accordingly.
ComrelSolution solve_comrel(const Realization& R, const Root& u, const Witness& w,
                            scalar_t target);

// The leading coordinate of an element of X_r * (higher window part), i.e.
// the parameter read at X_r's readout position.
scalar_t leading_coord(const Realization& R, const Root& r, const Elem& g);

// True when the (*) length configuration holds: type 2D, u long, v and u+v
// short.
bool star_case(const Realization& R, const Root& u, const Root& v);

// Characteristic-2 B/C proviso: u, v short with u+v long.
bool excluded_pair(const Realization& R, const Root& u, const Root& v);

}  // namespace classprod
