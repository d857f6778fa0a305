#include "betamatch/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace betamatch {

namespace {

bool skew(const MapParams& m) { return m.kind == MapKind::SkewTent; }

// d/dbeta of T(x) at fixed alpha, and dT/dx; at x == alpha the left branch is used
double skew_dbeta(double a, double x) { return x <= a ? x / a : (1 - x) / (1 - a); }
double skew_dx(double a, double b, double x) { return x <= a ? b / a : -b / (1 - a); }

double circle_dist(double x, double y) {
  double d = std::fabs(x - y);
  return std::min(d, std::fabs(1 - d));
}

// admissible range of the varied parameter
std::pair<double, double> param_domain(const MapParams& m) {
  if (skew(m)) {
    double a = m.alpha.value;
    return {std::nextafter(std::max(a, 1 - a), 2.0), 1.0};
  }
  return {0.0, std::nextafter(1.0, 0.0)};
}

// symbols of xi_1 .. xi_{n-1}
std::vector<int> itinerary(const MapParams& m, int n, double t) {
  std::vector<int> out;
  out.reserve(n > 1 ? n - 1 : 0);
  if (skew(m)) {
    SkewTent<double> T(m.alpha.value, t, 0);
    double x = t;
    for (int j = 1; j < n; ++j) {
      auto s = T.eval(x);
      out.push_back(s.symbol);
      x = s.value;
    }
  } else {
    GenBeta<double> G(t, m.beta.value, 0);
    double x = 0;  // k_j is the branch producing xi_j
    for (int j = 1; j < n; ++j) {
      auto s = G.eval(x);
      out.push_back(s.symbol);
      x = s.value;
    }
  }
  return out;
}

std::vector<double> xi_orbit(const MapParams& m, int n, double t) {
  std::vector<double> xs;
  xs.reserve(n + 1);
  if (skew(m)) {
    SkewTent<double> T(m.alpha.value, t, 0);
    xs.push_back(m.alpha.value);
    for (int j = 0; j < n; ++j) xs.push_back(T.eval(xs.back()).value);
  } else {
    GenBeta<double> G(t, m.beta.value, 0);
    xs.push_back(0);
    for (int j = 0; j < n; ++j) xs.push_back(G.eval(xs.back()).value);
  }
  return xs;
}

// G^j(1) with left-continuous branches
std::vector<double> left_orbit_of_one(double a, double b, int n) {
  GenBeta<double> G(a, b, 0);
  std::vector<double> xs{1.0};
  for (int j = 0; j < n; ++j) xs.push_back(G.eval_left(xs.back()).value);
  return xs;
}

int first_difference(const std::vector<int>& u, const std::vector<int>& v) {
  for (size_t i = 0; i < u.size() && i < v.size(); ++i)
    if (u[i] != v[i]) return static_cast<int>(i) + 1;
  return -1;
}

struct Edge {
  double t;
  int r;
};

// push outward from t0 until the itinerary changes, then bisect to adjacent doubles
Edge find_edge(const MapParams& m, int n, double t0, const std::vector<int>& it0, int dir, double resolution) {
  auto [dlo, dhi] = param_domain(m);
  double edge = dir > 0 ? dhi : dlo;
  double in = t0, out = t0, h = resolution;
  for (;;) {
    double t = t0 + dir * h;
    if ((dir > 0 && t >= edge) || (dir < 0 && t <= edge)) {
      if (itinerary(m, n, edge) == it0) return {edge, -1};
      out = edge;
      break;
    }
    if (itinerary(m, n, t) != it0) {
      out = t;
      break;
    }
    in = t;
    h *= 2;
  }
  for (;;) {
    double mid = 0.5 * (in + out);
    if (mid == in || mid == out) break;
    if (itinerary(m, n, mid) == it0)
      in = mid;
    else
      out = mid;
  }
  if (out == edge) return {in, -1};  // the family's edge, not a critical crossing
  return {in, first_difference(it0, itinerary(m, n, out))};
}

void float_identities(const MapParams& m, ParamWindow& w) {
  int n = w.n;
  auto check = [&](double t, int r, bool lower, double& res) {
    if (r < 0) return false;
    auto xs = xi_orbit(m, n, t);
    if (skew(m)) {
      res = std::fabs(xs[n] - xs[n - r]);
    } else if (lower) {
      res = circle_dist(xs[n], xs[n - r]);
    } else {
      auto ys = left_orbit_of_one(t, m.beta.value, n - r);
      res = circle_dist(xs[n], ys[n - r]);
    }
    return res <= 1e-7;
  };
  w.identity_lo = check(w.t_lo, w.r_lo, true, w.residual_lo);
  w.identity_hi = check(w.t_hi, w.r_hi, false, w.residual_hi);
}

ParamWindow float_window(const MapParams& m, int n, double resolution) {
  double t0 = varied_parameter(m);
  ParamWindow w;
  w.n = n;
  w.itinerary = itinerary(m, n, t0);
  auto lo = find_edge(m, n, t0, w.itinerary, -1, resolution);
  auto hi = find_edge(m, n, t0, w.itinerary, +1, resolution);
  w.t_lo = lo.t;
  w.r_lo = lo.r;
  w.t_hi = hi.t;
  w.r_hi = hi.r;
  if (w.t_hi - w.t_lo < resolution) {
    auto xs = xi_orbit(m, n, t0);
    double worst = 1;
    for (int j = 1; j < n; ++j) {
      double c = skew(m) ? std::fabs(xs[j] - m.alpha.value) : std::min(xs[j], 1 - xs[j]);
      worst = std::min(worst, c);
    }
    throw Error(Errc::WindowUnderflow, "window of xi_" + std::to_string(n) + " narrower than " +
                                           std::to_string(resolution) + "; closest critical approach " +
                                           std::to_string(worst));
  }
  float_identities(m, w);
  if (!skew(m)) {
    double b = m.beta.value;
    w.slope_expected = (std::pow(b, n) - 1) / (b - 1);
    double t1 = w.t_lo + (w.t_hi - w.t_lo) / 3, t2 = w.t_lo + 2 * (w.t_hi - w.t_lo) / 3;
    auto lift = [&](double t) { return b * xi_orbit(m, n - 1, t)[n - 1] + t; };
    w.slope = (lift(t2) - lift(t1)) / (t2 - t1);
    w.image_width = w.slope_expected * (w.t_hi - w.t_lo);
  }
  return w;
}

// GenBeta windows are cut out by the affine constraints B_j <= A_j t < B_j + 1
ParamWindow exact_window(const MapParams& m, int n) {
  if (skew(m) || !m.exact()) throw Error(Errc::InvalidArgument, "exact windows need a GenBeta map with exact parameters");
  const FieldPtr& f = m.field;
  const FieldElement& alpha = *m.alpha.exact;
  const FieldElement& beta = *m.beta.exact;
  GenBeta<FieldElement> G(alpha, beta, 0);

  ParamWindow w;
  w.n = n;
  w.exact = true;
  FieldElement A(f, 0L), B(f, 0L), x(f, 0L);
  std::optional<FieldElement> lo, hi;
  for (int j = 1; j < n; ++j) {
    auto s = G.eval(x);
    x = s.value;
    w.itinerary.push_back(s.symbol);
    A = A * beta + 1L;
    B = B * beta + static_cast<long>(s.symbol);
    FieldElement l = B / A, h = (B + 1L) / A;
    if (!lo || l > *lo) {
      lo = l;
      w.r_lo = j;
    }
    if (!hi || h < *hi) {
      hi = h;
      w.r_hi = j;
    }
  }
  if (n < 2) {
    lo = FieldElement(f, 0L);
    hi = FieldElement(f, 1L);
  }
  if (*lo == 0L) w.r_lo = -1;
  if (*hi == 1L) w.r_hi = -1;
  w.lo_exact = *lo;
  w.hi_exact = *hi;
  w.t_lo = lo->to_double();
  w.t_hi = hi->to_double();

  if (w.r_lo > 0) {
    auto xs = orbit_of(GenBeta<FieldElement>(*lo, beta, 0), FieldElement(f, 0L), n);
    w.identity_lo = xs[n].value == xs[n - w.r_lo].value;
    w.residual_lo = (xs[n].value - xs[n - w.r_lo].value).abs().to_double();
  }
  if (w.r_hi > 0) {
    GenBeta<FieldElement> Gh(*hi, beta, 0);
    FieldElement y = *hi;  // G(0) = alpha, then left-continuous
    for (int j = 1; j < n; ++j) y = Gh.eval_left(y).value;
    FieldElement z(f, 1L);
    for (int j = 0; j < n - w.r_hi; ++j) z = Gh.eval_left(z).value;
    w.identity_hi = y == z;
    w.residual_hi = (y - z).abs().to_double();
  }

  FieldElement width = *hi - *lo;
  FieldElement t1 = *lo + width / FieldElement(f, 3L), t2 = *lo + width * FieldElement(f, mpq_class(2, 3));
  auto lift = [&](const FieldElement& t) {
    auto xs = orbit_of(GenBeta<FieldElement>(t, beta, 0), FieldElement(f, 0L), n - 1);
    return beta * xs.back().value + t;
  };
  w.slope = ((lift(t2) - lift(t1)) / (t2 - t1)).to_double();
  FieldElement expected = (FieldElement::beta_power(f, n) - 1L) / (beta - 1L);
  w.slope_expected = expected.to_double();
  w.image_width = (expected * width).to_double();
  return w;
}

}  // namespace

double varied_parameter(const MapParams& m) { return skew(m) ? m.beta.value : m.alpha.value; }

MapParams with_parameter(const MapParams& m, double t) {
  MapParams out = m;
  (skew(m) ? out.beta : out.alpha) = Param::from_double(t);
  if (!out.exact()) out.field = nullptr;
  return out;
}

double XiCurve::eval(double t) const { return xi_orbit(base, n, t)[n]; }

double XiCurve::derivative(double t) const {
  if (!skew(base)) {
    double b = base.beta.value;
    return (std::pow(b, n) - 1) / (b - 1);
  }
  double a = base.alpha.value;
  auto xs = xi_orbit(base, n, t);
  double d = 0;
  for (int k = 1; k <= n; ++k) d = skew_dbeta(a, xs[k - 1]) + skew_dx(a, t, xs[k - 1]) * d;
  return d;
}

std::vector<std::pair<double, double>> XiCurve::sample(double lo, double hi, int count) const {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) {
    double t = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    out.emplace_back(t, eval(t));
  }
  return out;
}

double xi_eval(const XiCurve& c, double t) {
  auto [lo, hi] = param_domain(c.base);
  if (t < lo || t > hi) throw Error(Errc::OutOfDomain, "parameter outside the family's region");
  return c.eval(t);
}

double fit_geometric_rate(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(std::fabs(y[i]) > 0) || !std::isfinite(y[i])) continue;
    double ly = std::log(std::fabs(y[i]));
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++k;
  }
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  double den = k * sxx - sx * sx;
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::exp((k * sxy - sx * sy) / den);
}

QSequenceReport q_sequence(const MapParams& m, int n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "q_sequence needs n >= 2");
  validate(m);
  QSequenceReport r;
  double a = m.alpha.value, b = m.beta.value;
  auto xs = xi_orbit(m, n, varied_parameter(m));
  if (skew(m)) {
    r.lambda = std::min(b / a, b / (1 - a));
    double D = 1, Q = 0;  // D = d/dx T^k at alpha^-
    for (int k = 1; k <= n; ++k) {
      double x = xs[k - 1];
      D *= k == 1 ? b / a : skew_dx(a, b, x);
      if (k > 1 && x == a && !r.bound_orbit) {
        r.bound_orbit = true;
        r.diagnostics.push_back("bound orbit: xi_" + std::to_string(k - 1) +
                                " is the critical point, left derivatives used from there");
      }
      double inc = skew_dbeta(a, x) / D;
      if (k > 1) r.diffs.push_back(inc);
      Q += inc;
      r.q.push_back(Q);
    }
  } else {
    r.lambda = b;
    double dxi = 0, D = 1;
    for (int k = 1; k <= n; ++k) {
      if (k > 1 && xs[k - 1] == 0 && !r.bound_orbit) {
        r.bound_orbit = true;
        r.diagnostics.push_back("bound orbit: xi_" + std::to_string(k - 1) + " is the discontinuity");
      }
      dxi = b * dxi + 1;
      D *= b;
      double Q = dxi / D;
      if (k > 1) r.diffs.push_back(1 / D);
      r.q.push_back(Q);
    }
  }
  std::vector<double> idx;
  for (size_t i = 0; i < r.diffs.size(); ++i) idx.push_back(static_cast<double>(i + 1));
  r.rate = fit_geometric_rate(idx, r.diffs);
  double logC = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < r.diffs.size(); ++i)
    if (r.diffs[i] != 0) logC = std::max(logC, std::log(std::fabs(r.diffs[i])) + (i + 1) * std::log(r.lambda));
  r.constant = std::exp(logC);
  r.limit = r.q.back();
  if (!r.diffs.empty() && r.rate < 1) r.limit += r.diffs.back() * r.rate / (1 - r.rate);
  return r;
}

ParamWindow param_window(const MapParams& m, int n, Mode mode, double resolution) {
  if (n < 1) throw Error(Errc::InvalidArgument, "param_window needs n >= 1");
  validate(m);
  if (mode == Mode::Exact || (mode == Mode::Both && m.exact() && !skew(m))) return exact_window(m, n);
  return float_window(m, n, resolution);
}

double window_quotient(const MapParams& m, const ParamWindow& w, double t) {
  int n = w.n;
  if (!skew(m)) {
    double b = m.beta.value;
    auto lift = [&](double s) { return b * xi_orbit(m, n - 1, s)[n - 1] + s; };
    double l = lift(w.t_lo), h = lift(w.t_hi);
    return (lift(t) - l) / (h - l);
  }
  auto xs = xi_orbit(m, n, t);
  if (w.r_lo > 0 && w.r_hi > 0) {
    double base = xs[n - w.r_lo];
    return (xs[n] - base) / (xs[n - w.r_hi] - base);
  }
  double l = xi_orbit(m, n, w.t_lo)[n], h = xi_orbit(m, n, w.t_hi)[n];
  return (xs[n] - l) / (h - l);
}

CuttingTimes cutting_times(const MapParams& m, long n) {
  if (!skew(m)) throw Error(Errc::InvalidArgument, "cutting times are defined for the skew tent");
  validate(m);
  double a = m.alpha.value, b = m.beta.value;
  SkewTent<double> T(a, b, 0);
  CuttingTimes out;
  // D_k = T^{k-1}(W_{k-1}); end[0] comes from the left end of W, end[1] from the right
  struct End {
    double x;
    int label;
  };
  End lo{0.0, 0}, hi{1.0, 1};
  double xi = b;  // xi_k, k = 1
  for (long k = 1; k <= n; ++k) {
    if (xi == a) {
      out.bound = true;
      break;
    }
    if (lo.x < a && a < hi.x) {
      End& cut = xi < a ? hi : lo;
      (cut.label == 0 ? out.S : out.S_tilde).push_back(k);
      cut.x = a;
    }
    End nl{T.eval(lo.x).value, lo.label}, nh{T.eval(hi.x).value, hi.label};
    if (nl.x > nh.x) std::swap(nl, nh);
    lo = nl;
    hi = nh;
    xi = T.eval(xi).value;
  }
  return out;
}

std::vector<long> closest_approach_times(const MapParams& m, long n) {
  if (!skew(m)) throw Error(Errc::InvalidArgument, "closest approach times are defined for the skew tent");
  validate(m);
  double b = m.beta.value;
  SkewTent<double> T(m.alpha.value, b, 0);
  std::vector<long> out;
  double x = T.eval(b).value;  // xi_2
  double best = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= n; ++k) {
    double d = std::fabs(x - b);
    if (d < best) {
      best = d;
      out.push_back(k);
    }
    x = T.eval(x).value;
  }
  return out;
}

namespace {

using Intervals = std::vector<std::pair<double, double>>;

Intervals merge(Intervals v, double tol) {
  std::sort(v.begin(), v.end());
  Intervals out;
  for (auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second + tol)
      out.back().second = std::max(out.back().second, iv.second);
    else
      out.push_back(iv);
  }
  return out;
}

Intervals image(const GenBeta<double>& G, const std::vector<double>& cuts, const Intervals& v) {
  double a = G.alpha(), b = G.beta();
  Intervals out;
  for (auto [lo, hi] : v) {
    double u = lo;
    long k = static_cast<long>(std::floor(b * lo + a));
    for (;;) {
      double c = static_cast<size_t>(k) < cuts.size() ? cuts[k] : 2.0;  // c_{k+1}
      double v_end = std::min(hi, c);
      out.emplace_back(std::clamp(b * u + a - k, 0.0, 1.0), std::clamp(b * v_end + a - k, 0.0, 1.0));
      if (hi <= c) break;
      u = c;
      ++k;
    }
  }
  return out;
}

// length of the part of w not covered by v
double uncovered(const Intervals& w, const Intervals& v) {
  double miss = 0;
  for (auto [lo, hi] : w) {
    double covered = 0;
    for (auto [p, q] : v) covered += std::max(0.0, std::min(hi, q) - std::max(lo, p));
    miss = std::max(miss, (hi - lo) - covered);
  }
  return miss;
}

}  // namespace

double IntervalCycle::total_length() const {
  double s = 0;
  for (auto& c : components) s += c.second - c.first;
  return s;
}

IntervalCycle attractor(const MapParams& m, double tol, double seed, long max_iter, size_t max_components) {
  if (skew(m)) throw Error(Errc::InvalidArgument, "attractor is implemented for the generalised beta map");
  validate(m);
  GenBeta<double> G(m.alpha.value, m.beta.value, 0);
  auto cuts = G.breakpoints();
  Intervals V = merge(image(G, cuts, {{0.0, seed}, {1.0 - seed, 1.0}}), tol);
  IntervalCycle out;
  for (long it = 1;; ++it) {
    Intervals img = merge(image(G, cuts, V), tol);
    double miss = uncovered(img, V);
    Intervals next = V;
    next.insert(next.end(), img.begin(), img.end());
    next = merge(next, tol);
    if (next.size() > max_components)
      throw Error(Errc::Fragmentation, "attractor estimate has more than " + std::to_string(max_components) + " components");
    if (miss <= tol) {
      out.L = it;
      out.invariance_error = miss;
      V = next;
      break;
    }
    V = next;
    if (it >= max_iter) throw Error(Errc::Fragmentation, "attractor estimate did not stabilise");
  }
  out.components = V;

  // boundary points should sit on the orbits of G(c+) = alpha and G(c-)
  long J = out.L + 64;
  std::vector<double> pts;
  double x = 0, y = 1;
  for (long j = 0; j < J; ++j) {
    x = G.eval(x).value;
    y = G.eval_left(y).value;
    pts.push_back(x);
    pts.push_back(y);
  }
  double ptol = std::max(tol, 1e-9);
  out.endpoints_on_orbits = true;
  for (auto [lo, hi] : V)
    for (double e : {lo, hi}) {
      if (e <= ptol || e >= 1 - ptol) continue;
      bool hit = std::any_of(pts.begin(), pts.end(), [&](double p) { return std::fabs(p - e) <= ptol; });
      if (!hit) out.endpoints_on_orbits = false;
    }
  return out;
}

DensityProfile density_profile(const MapParams& m, double x0, long n, double eps, const IntervalCycle* cycle) {
  if (!(eps > 0)) throw Error(Errc::InvalidArgument, "eps must be positive");
  validate(m);
  Intervals comps;
  if (cycle) {
    comps = cycle->components;
  } else if (skew(m)) {
    double b = m.beta.value;
    double c2 = SkewTent<double>(m.alpha.value, b, 0).eval(b).value;
    comps = {{c2, b}};
  } else {
    comps = attractor(m).components;
  }
  DensityProfile d;
  d.eps = eps;
  d.origin = comps.front().first;
  double right = comps.back().second;
  long ncell = static_cast<long>(std::ceil((right - d.origin) / eps));
  std::vector<long> index(ncell, -1);
  for (long i = 0; i < ncell; ++i) {
    double lo = d.origin + i * eps, hi = lo + eps;
    for (auto [p, q] : comps)
      if (std::min(hi, q) - std::max(lo, p) > 1e-12) {
        index[i] = d.cells++;
        d.cell_lo.push_back(lo);
        break;
      }
  }
  d.first_visit.assign(d.cells, -1);
  auto visit = [&](double x, long t) {
    long i = static_cast<long>(std::floor((x - d.origin) / eps));
    if (i < 0 || i >= ncell || index[i] < 0) return;
    long& fv = d.first_visit[index[i]];
    if (fv < 0) {
      fv = t;
      ++d.visited;
    }
  };
  double x = x0;
  visit(x, 0);
  if (skew(m)) {
    SkewTent<double> T(m.alpha.value, m.beta.value, 0);
    for (long t = 1; t <= n; ++t) visit(x = T.eval(x).value, t);
  } else {
    GenBeta<double> G(m.alpha.value, m.beta.value, 0);
    for (long t = 1; t <= n; ++t) visit(x = G.eval(x).value, t);
  }
  d.fraction = d.cells ? static_cast<double>(d.visited) / d.cells : 0.0;
  return d;
}

DistortionReport distortion_check(const MapParams& m, int n_lo, int n_hi, int samples) {
  if (!skew(m)) throw Error(Errc::InvalidArgument, "distortion check is for the skew tent");
  DistortionReport r;
  for (int n = n_lo; n <= n_hi; ++n) {
    ParamWindow w;
    try {
      w = param_window(m, n, Mode::Float);
    } catch (const Error& e) {
      if (e.code() == Errc::WindowUnderflow) break;
      throw;
    }
    XiCurve c{m, n};
    double mx = 0, mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      double t = w.t_lo + (w.t_hi - w.t_lo) * (i + 0.5) / samples;
      double d = std::fabs(c.derivative(t));
      mx = std::max(mx, d);
      mn = std::min(mn, d);
    }
    r.n.push_back(n);
    r.excess.push_back(mx / mn - 1);
  }
  std::vector<double> x(r.n.begin(), r.n.end());
  r.rate = fit_geometric_rate(x, r.excess);
  return r;
}

}  // namespace betamatch
