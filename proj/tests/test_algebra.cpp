#include "doctest.h"

#include <cmath>
#include <random>

#include "betamatch/algebra.hpp"

using namespace betamatch;

namespace {

// plain bisection of x^N - x^{N-1} - ... - 1 on [lo, hi]
double bisect_multinacci(int n, double lo, double hi) {
  auto f = [n](double x) {
    double s = std::pow(x, n);
    for (int i = 0; i < n; ++i) s -= std::pow(x, i);
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (lo + hi);
    (f(m) > 0 ? hi : lo) = m;
  }
  return 0.5 * (lo + hi);
}

FieldElement random_element(const FieldPtr& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 17);
  std::vector<mpq_class> c;
  for (int i = 0; i < f->degree(); ++i) {
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    c.push_back(q);
  }
  return FieldElement(f, c);
}

}  // namespace

TEST_CASE("multinacci constructors") {
  CHECK(make_multinacci(2)->approx() == doctest::Approx(1.6180339887).epsilon(1e-10));
  CHECK(make_multinacci(3)->approx() == doctest::Approx(1.8392867552).epsilon(1e-10));
  CHECK(make_multinacci(4)->approx() == doctest::Approx(bisect_multinacci(4, 1.9, 2.0)).epsilon(1e-14));
  for (int n = 2; n <= 8; ++n) {
    auto f = make_multinacci(n);
    CHECK(f->pisot_verified());
    CHECK(f->is_multinacci());
    auto e = f->enclosure();
    CHECK(e.hi - e.lo <= mpq_class(1, mpz_class(1) << 32));
    CHECK(sgn(f->eval_poly(e.lo)) * sgn(f->eval_poly(e.hi)) < 0);
  }
  CHECK_THROWS_AS(make_multinacci(1), Error);
}

TEST_CASE("make_pisot") {
  auto g = make_pisot(std::vector<long>{-1, -1, 1});
  CHECK(g->is_multinacci());
  CHECK(g->approx() == doctest::Approx(make_multinacci(2)->approx()).epsilon(1e-15));

  auto f = make_pisot(std::vector<long>{1, -3, 1});
  CHECK(f->approx() == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-14));
  CHECK(f->pisot_verified());
  CHECK(f->max_conjugate_modulus() == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-6));

  auto h = make_pisot(std::vector<long>{-4, 0, 1});
  CHECK(h->approx() == doctest::Approx(2.0));
  CHECK_FALSE(h->pisot_verified());

  // x^3 - 2: root 2^{1/3} > 1 but conjugates have modulus 2^{1/3}
  CHECK_FALSE(make_pisot(std::vector<long>{-2, 0, 0, 1})->pisot_verified());
  // x^2 + 1 has no real root
  CHECK_THROWS_AS(make_pisot(std::vector<long>{1, 0, 1}), Error);
  // x^2 - x/2 style inputs are rejected by type; x^2 - 1: root 1 is not > 1
  CHECK_THROWS_AS(make_pisot(std::vector<long>{-1, 0, 1}), Error);
}

TEST_CASE("arithmetic and inverse") {
  auto f = make_multinacci(2);
  auto b = FieldElement::generator(f);
  CHECK(b * b == b + 1);
  CHECK((b - 1) * b == FieldElement(f, 1L));
  CHECK((b + FieldElement(f, mpq_class(3, 7))) + -(b + FieldElement(f, mpq_class(3, 7))) ==
        FieldElement(f));
  CHECK(b.inverse() == b - 1);
  CHECK(FieldElement(f, 1L).inverse() == FieldElement(f, 1L));
  CHECK_THROWS_AS(FieldElement(f).inverse(), Error);

  for (int n = 2; n <= 8; ++n) {
    auto fn = make_multinacci(n);
    auto bn = FieldElement::generator(fn);
    // beta^{N-1} - beta^{N-2} - ... - 1
    std::vector<mpq_class> c(n, -1);
    c[n - 1] = 1;
    CHECK(bn.inverse() == FieldElement(fn, c));
    CHECK(bn * bn.inverse() == FieldElement(fn, 1L));
    CHECK(bn.times_generator() == bn * bn);
  }
  CHECK_THROWS_AS(b + FieldElement::generator(make_multinacci(3)), Error);
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(7);
  auto f = make_multinacci(3);
  for (int t = 0; t < 40; ++t) {
    auto x = random_element(f, rng), y = random_element(f, rng), z = random_element(f, rng);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * y == y * x);
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x * FieldElement(f, 1L) == x);
    CHECK(x + FieldElement(f) == x);
    if (!x.is_zero()) CHECK(x * x.inverse() == FieldElement(f, 1L));
    double xd = x.to_double(), yd = y.to_double();
    CHECK((x * y).to_double() == doctest::Approx(xd * yd).epsilon(1e-12));
    if (std::abs(xd) > 0x1p-40) CHECK(x.sign() == (xd > 0 ? 1 : -1));
  }
}

TEST_CASE("field identities") {
  for (int n = 2; n <= 8; ++n) {
    auto f = make_multinacci(n);
    FieldElement one(f, 1L), s(f);
    for (int i = 1; i <= n; ++i) s += FieldElement::beta_power(f, -i);
    CHECK(sign(one - s) == 0);
    auto b = FieldElement::generator(f);
    CHECK(sign(FieldElement(f, 2L) - b - FieldElement::beta_power(f, -n)) == 0);
  }
  CHECK(sign(FieldElement(make_multinacci(3))) == 0);
}

TEST_CASE("to_float") {
  auto f2 = make_multinacci(2);
  CHECK(to_float(FieldElement(f2, 1L)) == 1.0);
  CHECK(to_float(FieldElement::beta_power(f2, -2)) ==
        doctest::Approx(2 - bisect_multinacci(2, 1.5, 2.0)).epsilon(1e-15));
  CHECK(to_float(FieldElement::generator(make_multinacci(3))) == doctest::Approx(1.8392867552).epsilon(1e-10));
}

TEST_CASE("certified sign near zero") {
  // beta - F_{k+1}/F_k in the golden field changes sign with k and is ~ phi^{-2k}
  auto f = make_multinacci(2);
  auto b = FieldElement::generator(f);
  mpz_class a = 1, c = 1;  // F_1, F_2
  for (int k = 1; k <= 300; ++k) {
    if (k % 37 == 0 || k > 295) {
      int expect = (k % 2 == 1) ? 1 : -1;
      CHECK(sign(b - FieldElement(f, mpq_class(c, a))) == expect);
    }
    mpz_class t = a + c;
    a = c;
    c = t;
  }
  auto e = f->enclosure();
  f->refine(e.bits + 10);
  auto e2 = f->enclosure();
  CHECK(e2.lo >= e.lo);
  CHECK(e2.hi <= e.hi);
  CHECK_THROWS_AS(f->refine(5000), Error);
}

TEST_CASE("unreduced rationals compare equal after construction") {
  auto f = make_multinacci(4);
  FieldElement a(f, mpq_class(9, 9)), b(f, std::vector<mpq_class>{mpq_class(0, 9), mpq_class(-6, 3)});
  CHECK(a == 1L);
  CHECK(b == FieldElement(f, std::vector<mpq_class>{0, -2}));
  CHECK((a - FieldElement(f, 1L)).is_zero());
}
