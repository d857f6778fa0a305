#include "betamatch/maps.hpp"

#include <algorithm>
#include <cmath>

namespace betamatch {

namespace {

BigFloat big(const Param& p, long bits) {
  if (p.exact) return p.exact->to_bigfloat(bits);
  return BigFloat(p.value, bits);
}

const FieldElement& ex(const Param& p) {
  if (!p.exact) throw Error(Errc::InvalidArgument, "exact mode needs exact parameter '" + p.text + "'");
  return *p.exact;
}

template <class Real>
std::vector<OrbitPoint> run_orbit(const MapParams& m, const Real& a, const Real& b, const Real& x0, long n,
                                  const EvalOptions& opt) {
  std::vector<OrbitPoint> out;
  auto fill = [&](const auto& steps) {
    for (const auto& s : steps) {
      OrbitPoint p{to_double(s.value), s.symbol, s.guard, {}};
      if constexpr (is_exact_v<Real>) p.exact = exact_string(s.value);
      out.push_back(std::move(p));
    }
  };
  if (m.kind == MapKind::SkewTent)
    fill(orbit_of(SkewTent<Real>(a, b, opt.guard), x0, n));
  else
    fill(orbit_of(GenBeta<Real>(a, b, opt.guard), x0, n, opt.left_continuous));
  return out;
}

}  // namespace

long auto_float_bits(const MapParams& m, long n) {
  double a = m.alpha.value, b = m.beta.value;
  double slope = m.kind == MapKind::GenBeta ? b : std::max(b / a, b / (1 - a));
  return 53 + 24 + static_cast<long>(std::ceil(std::max(0L, n) * std::log2(std::max(slope, 1.0))));
}

Step<double> eval(const MapParams& m, double x, double guard) {
  if (m.kind == MapKind::SkewTent) return SkewTent<double>(m.alpha.value, m.beta.value, guard).eval(x);
  return GenBeta<double>(m.alpha.value, m.beta.value, guard).eval(x);
}

Step<FieldElement> eval_exact(const MapParams& m, const FieldElement& x) {
  if (m.kind == MapKind::SkewTent) return SkewTent<FieldElement>(ex(m.alpha), ex(m.beta)).eval(x);
  return GenBeta<FieldElement>(ex(m.alpha), ex(m.beta)).eval(x);
}

Param fixed_point(const MapParams& m) {
  if (m.exact()) {
    FieldElement p = m.kind == MapKind::SkewTent ? SkewTent<FieldElement>(*m.alpha.exact, *m.beta.exact).fixed_point()
                                                 : GenBeta<FieldElement>(*m.alpha.exact, *m.beta.exact).fixed_point();
    auto img = m.kind == MapKind::SkewTent ? eval_exact(m, p).value : eval_exact(m, p == 1L ? p - 1L : p).value;
    bool fixed = img == p || (p == 1L && img == 0L);
    if (!fixed) throw Error(Errc::Inconsistent, "fixed point check failed");
    return Param::from_exact(p);
  }
  double p = m.kind == MapKind::SkewTent ? SkewTent<double>(m.alpha.value, m.beta.value).fixed_point()
                                         : GenBeta<double>(m.alpha.value, m.beta.value).fixed_point();
  double q = p >= 1 ? 0.0 : p;
  double img = eval(m, std::min(q, 1.0), 0).value;
  double d = std::abs(img - q);
  if (std::min(d, 1 - d) > 1e-12) throw Error(Errc::Inconsistent, "fixed point check failed");
  return Param::from_double(p);
}

Param involution(const MapParams& m, const Param& x) {
  if (m.kind != MapKind::SkewTent) throw Error(Errc::InvalidArgument, "involution is defined for skew tent maps");
  if (m.exact() && x.exact)
    return Param::from_exact(
        SkewTent<FieldElement>(*m.alpha.exact, *m.beta.exact).involution(embed(*x.exact, m.field)));
  return Param::from_double(SkewTent<double>(m.alpha.value, m.beta.value).involution(x.value));
}

MapParams symmetry_conjugate(const MapParams& m) {
  if (m.kind != MapKind::GenBeta) throw Error(Errc::InvalidArgument, "symmetry is defined for beta maps");
  MapParams r = m;
  if (m.exact()) {
    auto g = GenBeta<FieldElement>(*m.alpha.exact, *m.beta.exact).symmetry_conjugate();
    r.alpha = Param::from_exact(g.alpha());
  } else {
    r.alpha = Param::from_double(GenBeta<double>(m.alpha.value, m.beta.value).symmetry_conjugate().alpha());
  }
  return r;
}

namespace {
template <class Real>
Geometry geometry_t(const MapParams& m, const Real& a, const Real& b) {
  Geometry g;
  if (m.kind == MapKind::SkewTent) {
    SkewTent<Real> t(a, b);
    Real p = t.fixed_point(), ph = t.involution(p);
    Real t2 = t.eval(b).value;
    g.breakpoints = {to_double(a)};
    g.p = to_double(p);
    g.p_hat = to_double(ph);
    g.ordering_ok = t2 < ph && ph < p && p < b;
    g.ordering = "T^2(alpha) < p_hat < p < T(alpha)";
    return g;
  }
  GenBeta<Real> G(a, b);
  auto cs = G.breakpoints();
  for (auto& c : cs) g.breakpoints.push_back(to_double(c));
  if (!G.has_fixed_point()) {
    g.p = g.p_hat = NAN;
    g.ordering_ok = false;
    g.ordering = "no fixed point";
    return g;
  }
  Real p = G.fixed_point(), ph = p - inv(b);
  g.p = to_double(p);
  g.p_hat = to_double(ph);
  if (cs.size() >= 1) g.c1 = to_double(cs[0]);
  if (cs.size() >= 2) g.c2 = to_double(cs[1]);
  Real s = a + b;
  if (s > 2L && s < 3L) {
    g.ordering = "p_hat < c1 < p < c2 < 1";
    g.ordering_ok = ph < cs[0] && cs[0] < p && p < cs[1] && cs[1] < 1L;
  } else {
    g.ordering = "not applicable";
  }
  return g;
}
}  // namespace

Geometry geometry(const MapParams& m) {
  if (m.exact()) return geometry_t<FieldElement>(m, *m.alpha.exact, *m.beta.exact);
  return geometry_t<double>(m, m.alpha.value, m.beta.value);
}

std::vector<OrbitPoint> orbit(const MapParams& m, const Param& x0, long n, const EvalOptions& opt) {
  if (n < 0) throw Error(Errc::InvalidArgument, "orbit length must be >= 0");
  if (opt.mode != Mode::Float) {
    if (!m.exact() || !x0.exact) throw Error(Errc::InvalidArgument, "exact orbit needs exact parameters and start");
    return run_orbit<FieldElement>(m, *m.alpha.exact, *m.beta.exact, embed(*x0.exact, m.field), n, opt);
  }
  long bits = opt.float_bits > 0 ? opt.float_bits : auto_float_bits(m, n);
  if (bits <= 53) return run_orbit<double>(m, m.alpha.value, m.beta.value, x0.value, n, opt);
  return run_orbit<BigFloat>(m, big(m.alpha, bits), big(m.beta, bits), big(x0, bits), n, opt);
}

bool multinacci_ordering_holds(const FieldPtr& f, const FieldElement& alpha_in) {
  if (!f->is_multinacci()) throw Error(Errc::InvalidArgument, "multinacci field required");
  const int n = f->degree();
  FieldElement a = embed(alpha_in, f);
  FieldElement b = FieldElement::generator(f), ib = b.inverse();
  if (!(a > FieldElement::beta_power(f, 1 - n) && a < ib))
    throw Error(Errc::OutOfDomain, "alpha outside (beta^{1-N}, beta^{-1})");
  FieldElement p = (1L - a) * (b - 1L).inverse();
  FieldElement c1 = (1L - a) * ib, c2 = (2L - a) * ib;
  FieldElement ib2 = ib * ib;
  bool one = ib2 < p - c1 && p - c1 < (b - 1L) * ib;
  bool two = FieldElement::beta_power(f, -(n + 1)) < c2 - p && c2 - p < ib - ib2;
  return one && two;
}

}  // namespace betamatch
