#include "doctest.h"

#include <cmath>
#include <random>

#include "betamatch/maps.hpp"

using namespace betamatch;

TEST_CASE("parse exact expressions") {
  auto f = make_multinacci(3);
  auto b = FieldElement::generator(f);
  CHECK(parse_exact("1/2", f) == FieldElement(f, mpq_class(1, 2)));
  CHECK(parse_exact("0.4", f) == FieldElement(f, mpq_class(2, 5)));
  CHECK(parse_exact("beta^-3", f) == FieldElement::beta_power(f, -3));
  CHECK(parse_exact("2 - b", f) == 2L - b);
  CHECK(parse_exact("(1+beta^4-beta)/beta^5", f) ==
        (1L + FieldElement::beta_power(f, 4) - b) * FieldElement::beta_power(f, -5));
  CHECK(parse_exact("[1/3, 0, -2]", f) == FieldElement(f, {mpq_class(1, 3), 0, -2}));
  CHECK(parse_exact("1e-3", f) == FieldElement(f, mpq_class(1, 1000)));
  CHECK_THROWS_AS(parse_exact("1/0", f), Error);
  CHECK_THROWS_AS(parse_exact("beta", rational_field()), Error);
  CHECK_THROWS_AS(parse_exact("2 +", f), Error);

  auto m = parse_map_spec("genbeta:alpha=1/2,beta=multinacci(3)");
  CHECK(m.exact());
  CHECK(m.beta.value == doctest::Approx(1.8392867552));
  auto s = parse_map_spec("skewtent:alpha=0.4,beta=0.9");
  CHECK(s.kind == MapKind::SkewTent);
  CHECK(s.exact());
  CHECK(s.alpha.value == doctest::Approx(0.4));
  auto p = parse_map_spec("genbeta:alpha=0.1,beta=pisot(1,-3,1)");
  CHECK(p.field->pisot_verified());
  CHECK_THROWS_AS(parse_map_spec("skewtent:alpha=0.4,beta=0.5"), Error);
  CHECK_THROWS_AS(parse_map_spec("genbeta:alpha=1.2,beta=golden"), Error);
  CHECK_THROWS_AS(parse_map_spec("circle:alpha=0.1,beta=2"), Error);
}

TEST_CASE("skew tent eval") {
  SkewTent<double> t(0.4, 0.9);
  CHECK(t.eval(0.4).value == doctest::Approx(0.9));
  CHECK(t.eval(0.4).symbol == sym::C);
  SkewTent<double> full(0.5, 1.0);
  auto s = full.eval(0.25);
  CHECK(s.value == doctest::Approx(0.5));
  CHECK(s.symbol == sym::L);
  CHECK(full.eval(0.75).symbol == sym::R);
  CHECK_THROWS_AS(full.eval(1.5), Error);
  CHECK(SkewTent<double>(0.3, 0.8).eval(0.3 + 1e-14).guard);

  auto f = rational_field();
  SkewTent<FieldElement> te(FieldElement(f, mpq_class(2, 5)), FieldElement(f, mpq_class(9, 10)));
  CHECK(te.eval(FieldElement(f, mpq_class(2, 5))).value == FieldElement(f, mpq_class(9, 10)));
  CHECK(te.eval(FieldElement(f, mpq_class(1, 5))).value == FieldElement(f, mpq_class(9, 20)));
}

TEST_CASE("genbeta eval") {
  double beta = 1.7;
  GenBeta<double> g(0.0, beta);
  for (double x : {0.1, 0.3, 0.55, 0.77, 0.99}) {
    auto s = g.eval(x);
    CHECK(s.value == doctest::Approx(std::fmod(beta * x, 1.0)).epsilon(1e-14));
    CHECK(s.symbol == static_cast<int>(std::floor(beta * x)));
  }
  auto f = make_multinacci(2);
  auto b = FieldElement::generator(f);
  GenBeta<FieldElement> ge(FieldElement(f, mpq_class(1, 2)), b);
  // x = c_1 = (1 - 1/2)/beta exactly: right value 0, left value 1
  FieldElement c1 = FieldElement(f, mpq_class(1, 2)) * b.inverse();
  CHECK(ge.eval(c1).value == FieldElement(f));
  CHECK(ge.eval(c1).symbol == 1);
  CHECK(ge.eval_left(c1).value == FieldElement(f, 1L));
  CHECK(ge.eval_left(c1).symbol == 0);
  // left limit at 0 is the left limit at 1
  CHECK(ge.eval_left(FieldElement(f)).value == ge.eval_left(FieldElement(f, 1L)).value);
  CHECK(GenBeta<double>(0.3, 1.5).eval((1 - 0.3) / 1.5 + 1e-15).guard);
}

TEST_CASE("fixed points") {
  auto t = parse_map_spec("skewtent:alpha=0.5,beta=1");
  CHECK(fixed_point(t).value == doctest::Approx(2.0 / 3));
  CHECK(*fixed_point(t).exact == FieldElement(rational_field(), mpq_class(2, 3)));

  auto g = make_genbeta(make_multinacci(2), Param::from_exact(FieldElement(make_multinacci(2), mpq_class(1, 2))));
  auto p = fixed_point(g);
  double beta = (1 + std::sqrt(5.0)) / 2;
  CHECK(p.value == doctest::Approx(0.5 * beta).epsilon(1e-14));
  // oracle: G(p) = p in double
  CHECK(std::fmod(beta * p.value + 0.5, 1.0) == doctest::Approx(p.value).epsilon(1e-12));

  auto d = parse_map_spec("genbeta:alpha=0,beta=2");
  CHECK(fixed_point(d).value == doctest::Approx(1.0));
  auto lo = parse_map_spec("genbeta:alpha=0,beta=1.5");
  CHECK_THROWS_AS(fixed_point(parse_map_spec("genbeta:alpha=0,beta=1.0000001")), Error);
  (void)lo;
}

TEST_CASE("involution") {
  auto t = parse_map_spec("skewtent:alpha=0.5,beta=1");
  CHECK(involution(t, Param::from_double(0.25)).value == doctest::Approx(0.75));
  CHECK(involution(t, Param::from_double(0.0)).value == doctest::Approx(1.0));
  auto u = parse_map_spec("skewtent:alpha=0.25,beta=0.9");
  auto xh = involution(u, parse_param("0.1", rational_field()));
  CHECK(*xh.exact == FieldElement(rational_field(), mpq_class(7, 10)));
  CHECK(eval(u, 0.1).value == doctest::Approx(eval(u, 0.7).value).epsilon(1e-14));
  CHECK(involution(u, xh).value == doctest::Approx(0.1));
  CHECK(involution(u, Param::from_double(0.0)).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(involution(u, Param::from_double(0.25)), Error);
}

TEST_CASE("symmetry conjugate") {
  auto m = parse_map_spec("genbeta:alpha=0,beta=1.5");
  auto c = symmetry_conjugate(m);
  CHECK(c.alpha.value == doctest::Approx(0.5));
  double x = 0.3;
  CHECK(eval(m, 1 - x).value == doctest::Approx(1 - eval(c, x).value).epsilon(1e-14));
  CHECK(symmetry_conjugate(c).alpha.value == doctest::Approx(0.0).epsilon(1e-15));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0, 1), ub(1.05, 2.9), ux(0.01, 0.99);
  for (int i = 0; i < 50; ++i) {
    auto mi = parse_map_spec("genbeta:alpha=" + std::to_string(ua(rng)) + ",beta=" + std::to_string(ub(rng)));
    auto ci = symmetry_conjugate(mi);
    double y = ux(rng);
    auto l = eval(mi, 1 - y), r = eval(ci, y);
    if (l.guard || r.guard) continue;
    double d = std::abs(l.value - (1 - r.value));
    CHECK(std::min(d, 1 - d) < 1e-12);
    CHECK(symmetry_conjugate(ci).alpha.value == doctest::Approx(mi.alpha.value).epsilon(1e-12));
  }
  // alpha = (1 + floor(alpha+beta) - beta)/2 is self-conjugate
  auto f = make_multinacci(3);
  auto b = FieldElement::generator(f);
  auto sm = make_genbeta(f, Param::from_exact((3L - b) * FieldElement(f, mpq_class(1, 2))));
  CHECK(*symmetry_conjugate(sm).alpha.exact == *sm.alpha.exact);
}

TEST_CASE("orbits") {
  auto f = make_multinacci(3);
  auto half = Param::from_exact(FieldElement(f, mpq_class(1, 2)));
  auto m = make_genbeta(f, half);
  auto zero = Param::from_exact(FieldElement(f));
  auto o0 = orbit(m, zero, 0, {Mode::Exact});
  CHECK(o0.size() == 1);
  CHECK(o0[0].symbol == sym::None);

  // alpha = 1/2 lands exactly on c_1 at step 3 (G^4(0) = 0): float flags it
  auto ex = orbit(m, zero, 200, {Mode::Exact});
  auto fl = orbit(m, zero, 200, {Mode::Float});
  CHECK(ex[4].x == 0.0);
  CHECK(fl[4].guard);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ex[i].x - fl[i].x) <= 1e-9);

  auto m2 = make_genbeta(f, Param::from_exact(FieldElement(f, mpq_class(2, 5))));
  auto ex2 = orbit(m2, zero, 200, {Mode::Exact});
  auto fl2 = orbit(m2, zero, 200, {Mode::Float});
  double worst = 0;
  for (size_t i = 0; i < ex2.size(); ++i) {
    CHECK_FALSE(fl2[i].guard);
    worst = std::max(worst, std::abs(ex2[i].x - fl2[i].x));
    CHECK(ex2[i].symbol == fl2[i].symbol);
  }
  CHECK(worst <= 1e-9);

  // two-branch regime: G^n(0) = alpha (beta^n - 1)/(beta - 1)
  auto a = Param::from_exact(FieldElement(f, mpq_class(1, 10)));
  auto tb = orbit(make_genbeta(f, a), zero, 2, {Mode::Exact});
  auto b = FieldElement::generator(f);
  for (int n = 1; n <= 2; ++n) {
    auto bn = FieldElement::beta_power(f, n);
    CHECK(parse_exact(tb[n].exact, f) == *a.exact * (bn - 1L) * (b - 1L).inverse());
  }
  CHECK_THROWS_AS(orbit(parse_map_spec("genbeta:alpha=0.1,beta=1.5"), Param::from_double(0.1), 3, {Mode::Exact}),
                  Error);
}

TEST_CASE("piecewise expansion") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  auto t = parse_map_spec("skewtent:alpha=0.35,beta=0.8");
  for (int i = 0; i < 200; ++i) {
    double x = u(rng), y = u(rng);
    auto sx = eval(t, x), sy = eval(t, y);
    if (sx.symbol != sy.symbol || sx.symbol == sym::C) continue;
    double slope = sx.symbol == sym::L ? 0.8 / 0.35 : 0.8 / 0.65;
    CHECK(std::abs(sx.value - sy.value) == doctest::Approx(slope * std::abs(x - y)).epsilon(1e-9));
  }
  auto g = parse_map_spec("genbeta:alpha=0.3,beta=1.8");
  for (int i = 0; i < 200; ++i) {
    double x = u(rng), y = u(rng);
    auto sx = eval(g, x), sy = eval(g, y);
    if (sx.symbol != sy.symbol) continue;
    CHECK(std::abs(sx.value - sy.value) == doctest::Approx(1.8 * std::abs(x - y)).epsilon(1e-9));
  }
}

TEST_CASE("geometry and ordering assertions") {
  auto f = make_multinacci(3);
  auto b = FieldElement::generator(f);
  std::mt19937_64 rng(5);
  FieldElement lo = FieldElement::beta_power(f, -2), hi = b.inverse();
  for (int i = 1; i < 40; ++i) {
    FieldElement a = lo + (hi - lo) * FieldElement(f, mpq_class(i, 40));
    CHECK(multinacci_ordering_holds(f, a));
    auto g = geometry(make_genbeta(f, Param::from_exact(a)));
    CHECK(g.ordering_ok);
    REQUIRE(g.c1);
    CHECK(*g.c1 == doctest::Approx((1 - a.to_double()) / b.to_double()));
  }
  auto f4 = make_multinacci(4);
  auto b4 = FieldElement::generator(f4);
  for (int i = 1; i < 20; ++i) {
    FieldElement a = FieldElement::beta_power(f4, -3) +
                     (b4.inverse() - FieldElement::beta_power(f4, -3)) * FieldElement(f4, mpq_class(i, 20));
    CHECK(multinacci_ordering_holds(f4, a));
  }
  CHECK_THROWS_AS(multinacci_ordering_holds(f, FieldElement(f, mpq_class(1, 10))), Error);
  auto t = geometry(parse_map_spec("skewtent:alpha=0.5,beta=1"));
  CHECK(t.p == doctest::Approx(2.0 / 3));
  CHECK(t.p_hat == doctest::Approx(1.0 / 3));
}
