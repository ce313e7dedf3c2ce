#include "classprod/matrix.hpp"

namespace classprod {

Mat mat_identity(const Field& F, int n) {
  (void)F;
  Mat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat mat_mul(const Field& F, const Mat& A, const Mat& B) {
  require(A.n == B.n, Errc::dimension_mismatch, "matrix product");
  Mat C(A.n);
  const int n = A.n;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      scalar_t v = A.at(i, k);
      if (!v) continue;
      for (int j = 0; j < n; ++j) {
        scalar_t b = B.at(k, j);
        if (!b) continue;
        C.at(i, j) = F.add(C.at(i, j), F.mul(v, b));
      }
    }
  return C;
}

Mat mat_transpose(const Mat& A) {
  Mat T(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

Mat mat_conj(const Field& F, const Mat& A) {
  Mat C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) C.at(i, j) = F.conj(A.at(i, j));
  return C;
}

scalar_t mat_det(const Field& F, Mat A) {
  const int n = A.n;
  scalar_t det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (A.at(r, col)) { piv = r; break; }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
      det = F.neg(det);
    }
    det = F.mul(det, A.at(col, col));
    scalar_t li = F.inv(A.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      scalar_t f = F.mul(A.at(r, col), li);
      if (!f) continue;
      for (int j = col; j < n; ++j)
        A.at(r, j) = F.sub(A.at(r, j), F.mul(f, A.at(col, j)));
    }
  }
  return det;
}

Mat mat_inv(const Field& F, const Mat& A) {
  const int n = A.n;
  Mat W = A, I = mat_identity(F, n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (W.at(r, col)) { piv = r; break; }
    require(piv >= 0, Errc::not_unimodular, "singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(W.at(piv, j), W.at(col, j));
        std::swap(I.at(piv, j), I.at(col, j));
      }
    scalar_t li = F.inv(W.at(col, col));
    for (int j = 0; j < n; ++j) {
      W.at(col, j) = F.mul(W.at(col, j), li);
      I.at(col, j) = F.mul(I.at(col, j), li);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      scalar_t f = W.at(r, col);
      if (!f) continue;
      for (int j = 0; j < n; ++j) {
        W.at(r, j) = F.sub(W.at(r, j), F.mul(f, W.at(col, j)));
        I.at(r, j) = F.sub(I.at(r, j), F.mul(f, I.at(col, j)));
      }
    }
  }
  return I;
}

bool mat_is_identity(const Mat& A) {
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j)
      if (A.at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool mat_upper_unitriangular(const Mat& A) {
  for (int i = 0; i < A.n; ++i) {
    if (A.at(i, i) != 1) return false;
    for (int j = 0; j < i; ++j)
      if (A.at(i, j)) return false;
  }
  return true;
}

bool mat_lower_unitriangular(const Mat& A) {
  for (int i = 0; i < A.n; ++i) {
    if (A.at(i, i) != 1) return false;
    for (int j = i + 1; j < A.n; ++j)
      if (A.at(i, j)) return false;
  }
  return true;
}

bool field_solve(const Field& F, int rows, int cols, std::vector<scalar_t> A,
                 std::vector<scalar_t> rhs, std::vector<scalar_t>& x) {
  std::vector<int> pivot_col(rows, -1);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (A[static_cast<size_t>(r) * cols + col]) { piv = r; break; }
    if (piv < 0) continue;
    for (int c = 0; c < cols; ++c)
      std::swap(A[static_cast<size_t>(rank) * cols + c], A[static_cast<size_t>(piv) * cols + c]);
    std::swap(rhs[rank], rhs[piv]);
    scalar_t li = F.inv(A[static_cast<size_t>(rank) * cols + col]);
    for (int c = 0; c < cols; ++c)
      A[static_cast<size_t>(rank) * cols + c] = F.mul(A[static_cast<size_t>(rank) * cols + c], li);
    rhs[rank] = F.mul(rhs[rank], li);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      scalar_t f = A[static_cast<size_t>(r) * cols + col];
      if (!f) continue;
      for (int c = 0; c < cols; ++c)
        A[static_cast<size_t>(r) * cols + c] =
            F.sub(A[static_cast<size_t>(r) * cols + c],
                  F.mul(f, A[static_cast<size_t>(rank) * cols + c]));
      rhs[r] = F.sub(rhs[r], F.mul(f, rhs[rank]));
    }
    pivot_col[rank] = col;
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (rhs[r]) return false;
  x.assign(cols, 0);
  for (int r = 0; r < rank; ++r) x[pivot_col[r]] = rhs[r];
  return true;
}

std::optional<std::pair<Mat, Mat>> mat_lu(const Field& F, const Mat& A) {
  const int n = A.n;
  Mat L = mat_identity(F, n), U = A;
  for (int col = 0; col < n; ++col) {
    if (!U.at(col, col)) return std::nullopt;
    scalar_t li = F.inv(U.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      scalar_t f = F.mul(U.at(r, col), li);
      if (!f) continue;
      L.at(r, col) = f;
      for (int j = col; j < n; ++j)
        U.at(r, j) = F.sub(U.at(r, j), F.mul(f, U.at(col, j)));
    }
  }
  return std::make_pair(L, U);
}

}  // namespace classprod
