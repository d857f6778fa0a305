#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betamatch/maps.hpp"

namespace betamatch {

// xi_n(t): SkewTent varies beta (xi_n = T^n(alpha)), GenBeta varies alpha (xi_n = G^n(0)).
struct XiCurve {
  MapParams base;
  int n = 0;

  double eval(double t) const;
  double derivative(double t) const;  // d xi_n / dt along the branch containing t
  std::vector<std::pair<double, double>> sample(double lo, double hi, int count) const;
};
double xi_eval(const XiCurve& c, double t);
double varied_parameter(const MapParams& m);
MapParams with_parameter(const MapParams& m, double t);

struct QSequenceReport {
  std::vector<double> q;      // q[k-1] = Q_k
  std::vector<double> diffs;  // Q_{k+1} - Q_k
  double rate = 0;            // fitted geometric decay of |diffs|
  double constant = 0;        // C with |diffs_k| <= C lambda^-k
  double limit = 0;
  double lambda = 0;
  bool bound_orbit = false;
  std::vector<std::string> diagnostics;
};
QSequenceReport q_sequence(const MapParams& m, int n);

struct ParamWindow {
  int n = 0;
  double t_lo = 0, t_hi = 0;
  std::optional<FieldElement> lo_exact, hi_exact;
  int r_lo = -1, r_hi = -1;  // first itinerary-breaking iterate at each end, -1 at a domain edge
  std::vector<int> itinerary;  // symbols of xi_1 .. xi_{n-1}
  bool exact = false;
  bool identity_lo = false, identity_hi = false;
  double residual_lo = 0, residual_hi = 0;
  double slope = 0, slope_expected = 0;  // GenBeta: finite-difference slope of xi_n vs (b^n-1)/(b-1)
  double image_width = 0;                // |xi_n(Z_n)| via the affine lift (GenBeta)
};
ParamWindow param_window(const MapParams& m, int n, Mode mode = Mode::Float, double resolution = 1e-14);
// quotient map of the window, 0 at t_lo and 1 at t_hi
double window_quotient(const MapParams& m, const ParamWindow& w, double t);

struct CuttingTimes {
  std::vector<long> S, S_tilde;
  bool bound = false;  // critical orbit hit the critical point
};
CuttingTimes cutting_times(const MapParams& m, long n);
std::vector<long> closest_approach_times(const MapParams& m, long n);

struct IntervalCycle {
  std::vector<std::pair<double, double>> components;
  long L = 0;
  double invariance_error = 0;
  bool endpoints_on_orbits = false;
  double total_length() const;
};
IntervalCycle attractor(const MapParams& m, double tol = 1e-10, double seed = 1e-3, long max_iter = 100000,
                        size_t max_components = 1000);

struct DensityProfile {
  double fraction = 0;
  long cells = 0, visited = 0;
  double origin = 0, eps = 0;
  std::vector<double> cell_lo;
  std::vector<long> first_visit;  // -1 when never visited
};
// cells are [origin + i eps, origin + (i+1) eps) meeting the attractor
DensityProfile density_profile(const MapParams& m, double x0, long n, double eps,
                               const IntervalCycle* cycle = nullptr);

struct DistortionReport {
  std::vector<int> n;
  std::vector<double> excess;  // max|xi'_n| / min|xi'_n| - 1 over the branch
  double rate = 0;
};
DistortionReport distortion_check(const MapParams& m, int n_lo, int n_hi, int samples = 33);

// least-squares slope of log|y| against x, returned as exp(slope)
double fit_geometric_rate(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace betamatch
