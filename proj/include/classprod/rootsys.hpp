#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "classprod/common.hpp"

namespace classprod {

enum class LieType { A, B, C, D, BC };

const char* lie_type_name(LieType t);

// Integer vector in the orthonormal basis e_1..e_m of the ambient Euclidean
// space (m = rank for B/C/D/BC, rank+1 for A).
struct Root {
  std::vector<int> c;

  Root() = default;
  explicit Root(std::vector<int> v) : c(std::move(v)) {}

  bool operator==(const Root& o) const { return c == o.c; }
  bool operator!=(const Root& o) const { return c != o.c; }
  bool operator<(const Root& o) const { return c < o.c; }  // lex on coefficients

  Root operator+(const Root& o) const;
  Root operator-() const;
  Root scaled(int s) const;
  bool is_zero() const;
  long dot(const Root& o) const;
  std::string str() const;  // e.g. "e2-e1", "2e1", "e1+e2"
};

// Root system in the standard Euclidean realization, with the data the
// decomposition machinery consumes: heights, Pi, Pi_1, Sigma_1, Delta and the
// BC doubled roots. Positive roots are ordered by (height, lex). Immutable.
struct RootSystem {
  LieType type = LieType::A;
  int rank = 0;   // n'
  int ncoord = 0; // ambient coordinates

  std::vector<Root> positive;    // Sigma_+, (height, lex)-ordered
  std::vector<Root> fundamental; // Pi
  Root r0;
  std::vector<Root> pi1;         // Pi \ {r0}
  std::vector<Root> sigma1_plus; // positive roots of Sigma_1
  std::vector<Root> theta;
  std::vector<Root> delta;       // Sigma_+ \ (Sigma_1 u {r0, 2r0}), same order
  std::vector<Root> doubled;     // BC only: roots w with 2w also a root

  std::map<Root, int> height;    // on Sigma_+

  bool is_root(const Root& r) const;        // membership in Sigma (both signs)
  bool is_positive(const Root& r) const;
  bool in_sigma1(const Root& r) const;      // either sign
  int ht(const Root& r) const;              // positive roots only
  int ht_abs(const Root& r) const;          // ht of r or -r
  bool is_short(const Root& r) const;       // squared length below the max
  bool is_long(const Root& r) const;
  int max_height() const;

  // Basis vector e_i (1-based).
  Root e(int i) const;
};

RootSystem build_root_system(LieType type, int rank);

// u+v when it is a root; doubled_sum reports whether 2(u+v) is also a root
// (relevant in BC). Throws root_not_in_system when u or v is not a root.
struct RootSum {
  std::optional<Root> sum;
  bool doubled_sum = false;
};
RootSum root_sum(const RootSystem& sys, const Root& u, const Root& v);

// Delta partitioned by height level k >= 2.
std::map<int, std::vector<Root>> delta_and_filtration(const RootSystem& sys);

// Reflection of x in the hyperplane orthogonal to w.
Root reflect(const Root& w, const Root& x);

}  // namespace classprod
