#include "doctest.h"

#include "classprod/field.hpp"

using namespace classprod;

TEST_CASE("prime field GF(3)") {
  auto F = field_make(3, 1, false);
  CHECK(F->q() == 3);
  CHECK(F->name() == "F3");
  CHECK(F->inv(1) == 1);
  CHECK(F->add(1, 2) == 0);
  CHECK(F->mul(2, 2) == 1);
  CHECK_THROWS_AS(F->inv(0), Error);
  CHECK_THROWS_AS(F->conj(1), Error);
}

TEST_CASE("field_make rejections") {
  CHECK_THROWS_AS(field_make(4, 1, false), Error);   // NonPrime
  CHECK_THROWS_AS(field_make(2, 3, true), Error);    // OddDegreeInvolution
}

TEST_CASE("GF(4) with conjugation x -> x^2") {
  auto F = field_make(2, 2, true);
  CHECK(F->q() == 4);
  CHECK(F->name() == "F2^2c");
  // the two non-subfield elements swap under conjugation; order exactly 2
  int moved = 0;
  for (scalar_t a = 0; a < 4; ++a) {
    CHECK(F->conj(F->conj(a)) == a);
    if (F->conj(a) != a) ++moved;
  }
  CHECK(moved == 2);
  // omega * conj(omega) = 1 for a generator omega of GF(4)^*
  scalar_t omega = 2;  // x
  CHECK(F->conj(omega) == F->mul(omega, omega));
  CHECK(F->mul(omega, F->conj(omega)) == 1);
}

TEST_CASE("GF(9) conjugation fixes exactly GF(3)") {
  auto F = field_make(3, 2, true);
  int fixed = 0;
  for (uint32_t a = 0; a < F->q(); ++a)
    if (F->conj(static_cast<scalar_t>(a)) == a) ++fixed;
  CHECK(fixed == 3);
  CHECK(F->fprime_elements().size() == 3);
}

TEST_CASE("field axioms exhaustively for |F| <= 16") {
  for (auto [p, k, inv] : {std::tuple{2, 1, false}, {3, 1, false}, {2, 2, true},
                           {3, 2, true}, {2, 3, false}, {2, 4, true}}) {
    auto F = field_make(p, k, inv);
    const uint32_t q = F->q();
    for (uint32_t a = 0; a < q; ++a)
      for (uint32_t b = 0; b < q; ++b) {
        scalar_t sa = static_cast<scalar_t>(a), sb = static_cast<scalar_t>(b);
        CHECK(F->add(sa, sb) == F->add(sb, sa));
        CHECK(F->mul(sa, sb) == F->mul(sb, sa));
        for (uint32_t c = 0; c < q; ++c) {
          scalar_t sc = static_cast<scalar_t>(c);
          CHECK(F->mul(sa, F->add(sb, sc)) == F->add(F->mul(sa, sb), F->mul(sa, sc)));
          CHECK(F->mul(sa, F->mul(sb, sc)) == F->mul(F->mul(sa, sb), sc));
        }
        if (a) CHECK(F->mul(sa, F->inv(sa)) == 1);
      }
    if (inv) {
      for (uint32_t a = 0; a < q; ++a)
        for (uint32_t b = 0; b < q; ++b) {
          scalar_t sa = static_cast<scalar_t>(a), sb = static_cast<scalar_t>(b);
          CHECK(F->conj(F->add(sa, sb)) == F->add(F->conj(sa), F->conj(sb)));
          CHECK(F->conj(F->mul(sa, sb)) == F->mul(F->conj(sa), F->conj(sb)));
        }
    }
  }
}

TEST_CASE("fprime_span_full") {
  auto F4 = field_make(2, 2, true);
  scalar_t omega = 2;
  CHECK(fprime_span_full(*F4, 1, omega));
  CHECK_FALSE(fprime_span_full(*F4, 1, 1));
  auto F9 = field_make(3, 2, true);
  for (uint32_t t = 0; t < 9; ++t)
    CHECK_FALSE(fprime_span_full(*F9, 0, static_cast<scalar_t>(t)));
  // 1 and t span iff t is outside F'
  for (uint32_t t = 0; t < 9; ++t) {
    bool expect = !F9->in_fprime(static_cast<scalar_t>(t));
    CHECK(fprime_span_full(*F9, 1, static_cast<scalar_t>(t)) == expect);
  }
}

TEST_CASE("deterministic modulus") {
  auto a = field_make(2, 2, true);
  auto b = field_make(2, 2, true);
  CHECK(a->modulus() == b->modulus());
  // least irreducible over GF(2) of degree 2 is x^2+x+1
  CHECK(a->modulus() == std::vector<int>{1, 1});
  auto f8 = field_make(2, 3, false);
  CHECK(f8->modulus() == std::vector<int>{1, 1, 0});  // x^3+x+1
}

TEST_CASE("trace and zeta") {
  auto F = field_make(2, 2, true);
  CHECK(F->zeta() == 1);  // characteristic 2
  auto F9 = field_make(3, 2, true);
  scalar_t z = F9->zeta();
  CHECK(z != 0);
  CHECK(F9->conj(z) == F9->neg(z));
  for (scalar_t r : F9->fprime_elements()) {
    scalar_t u = F9->trace_preimage(r);
    CHECK(F9->add(u, F9->conj(u)) == r);
  }
}

TEST_CASE("field name parsing") {
  CHECK(field_from_name("F3")->q() == 3);
  CHECK(field_from_name("F2^2")->q() == 4);
  CHECK(field_from_name("F4c")->q() == 4);
  CHECK(field_from_name("F4c")->involuted());
  CHECK_THROWS_AS(field_from_name("G3"), Error);
}
