#pragma once

#include <optional>
#include <vector>

#include "classprod/field.hpp"

namespace classprod {

// Dense square matrix over a shared Field; entries are field indices.
struct Mat {
  int n = 0;
  std::vector<scalar_t> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0) {}

  scalar_t& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  scalar_t at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  bool operator==(const Mat& o) const { return n == o.n && a == o.a; }
};

Mat mat_identity(const Field& F, int n);
Mat mat_mul(const Field& F, const Mat& A, const Mat& B);
Mat mat_transpose(const Mat& A);
Mat mat_conj(const Field& F, const Mat& A);
scalar_t mat_det(const Field& F, Mat A);
Mat mat_inv(const Field& F, const Mat& A);  // throws not_unimodular if singular
bool mat_is_identity(const Mat& A);
bool mat_upper_unitriangular(const Mat& A);
bool mat_lower_unitriangular(const Mat& A);

// Doolittle LU without pivoting: A = L*U with L lower unitriangular and U
// upper triangular. Fails (returns nullopt) when a leading minor vanishes.
std::optional<std::pair<Mat, Mat>> mat_lu(const Field& F, const Mat& A);

// Solve A x = rhs over the field (A is rows x cols, row-major). Returns false
// when inconsistent; free variables are set to zero.
bool field_solve(const Field& F, int rows, int cols, std::vector<scalar_t> A,
                 std::vector<scalar_t> rhs, std::vector<scalar_t>& x);

}  // namespace classprod
