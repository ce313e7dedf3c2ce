#pragma once

#include <memory>
#include <vector>

#include "classprod/common.hpp"

namespace classprod {

// Elements of GF(p^k) are indices 0..q-1; the index encodes the coefficient
// vector in the modulus basis base-p (least significant digit = constant
// term). Index 0 is zero, index 1 is one.
using scalar_t = uint16_t;

// GF(p^k) with a deterministic modulus (the irreducible monic polynomial of
// degree k whose base-p coefficient encoding is least) and, optionally, the
// order-2 field automorphism x -> x^(p^(k/2)) together with its fixed
// subfield F'. Immutable after construction; share freely across threads.
class Field {
 public:
  static std::shared_ptr<const Field> make(int p, int k, bool involuted);

  int p() const { return p_; }
  int k() const { return k_; }
  uint32_t q() const { return q_; }
  bool involuted() const { return involuted_; }
  const std::vector<int>& modulus() const { return modulus_; }
  // "F<p>^<k>" with a trailing 'c' when the involution is enabled.
  std::string name() const;

  scalar_t add(scalar_t a, scalar_t b) const;
  scalar_t sub(scalar_t a, scalar_t b) const;
  scalar_t neg(scalar_t a) const;
  scalar_t mul(scalar_t a, scalar_t b) const;
  scalar_t inv(scalar_t a) const;           // throws division_by_zero on 0
  scalar_t conj(scalar_t a) const;          // throws no_involution if plain
  scalar_t frob(scalar_t a) const { return frob_[a]; }  // x -> x^p
  scalar_t pow(scalar_t a, long e) const;
  scalar_t from_int(long c) const;          // canonical image of an integer

  bool in_fprime(scalar_t a) const;         // fixed by conj
  const std::vector<scalar_t>& fprime_elements() const { return fprime_; }
  uint32_t qprime() const { return static_cast<uint32_t>(fprime_.size()); }
  // A fixed unit with conj(zeta) = -zeta (1 in characteristic 2). Scales the
  // trace-zero parameter sets of long twisted root subgroups onto F'.
  scalar_t zeta() const;
  scalar_t trace(scalar_t a) const;         // a + conj(a), lands in F'
  scalar_t norm(scalar_t a) const;          // a * conj(a), lands in F'
  // Least u with u + conj(u) = rhs; rhs must be in F'.
  scalar_t trace_preimage(scalar_t rhs) const;

  std::vector<int> coeffs(scalar_t a) const;
  // F_p coordinates of a with respect to a fixed basis of F' (size k/2).
  std::vector<int> fprime_coords(scalar_t a) const;
  scalar_t from_fprime_coords(const std::vector<int>& c) const;

 private:
  Field() = default;
  int p_ = 0, k_ = 0;
  uint32_t q_ = 0;
  bool involuted_ = false;
  std::vector<int> modulus_;
  bool tabled_ = false;
  std::vector<scalar_t> mul_table_;  // q*q when tabled
  std::vector<scalar_t> neg_, inv_, frob_, conj_;
  std::vector<uint8_t> in_fp_;
  std::vector<scalar_t> fprime_;
  std::vector<scalar_t> fprime_basis_;   // k/2 F_p-independent elements of F'
  std::vector<scalar_t> trace_pre_;      // indexed by rhs
  scalar_t zeta_ = 0;

  scalar_t mul_slow(scalar_t a, scalar_t b) const;
};

using FieldPtr = std::shared_ptr<const Field>;

// Spec-surface helpers.
FieldPtr field_make(int p, int k, bool involuted);
FieldPtr field_from_name(const std::string& s);  // parses "F3", "F2^2", "F4c"
// True iff {a*t1 + b*t2 : a,b in F'} is all of F.
bool fprime_span_full(const Field& f, scalar_t t1, scalar_t t2);

// Gaussian elimination over F_p. Solves A x = rhs where A is rows x cols,
// row-major, entries reduced mod p. Returns empty optional when inconsistent;
// free variables are set to zero.
std::vector<int> solve_mod_p(int p, int rows, int cols, std::vector<int> a,
                             std::vector<int> rhs, bool* ok);

}  // namespace classprod
