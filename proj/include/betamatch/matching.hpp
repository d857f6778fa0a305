#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "betamatch/maps.hpp"

namespace betamatch {

// e_1..e_N (bit i-1 holds e_i) and sign(G^n(0) - G^n(1))
struct EVectorState {
  std::uint32_t bits = 0;
  int n_digits = 0;
  int sign = 0;
  long step = 0;

  int digit(int i) const { return (bits >> (i - 1)) & 1u; }
  bool all_zero() const { return bits == 0; }
  bool all_ones() const { return n_digits > 0 && bits == (1u << n_digits) - 1; }
  std::string digits() const;  // "011"
  std::string code() const;    // "+011", "0" when matched
  FieldElement value(const FieldPtr& f) const;
  double value_double(const FieldPtr& f) const;

  static EVectorState from_digits(const std::string& d, int sign, long step = 0);
  friend bool operator==(const EVectorState&, const EVectorState&) = default;
};

EVectorState evector_init(const BetaField& f);
EVectorState evector_step(const EVectorState& s, bool flip);

enum class Outcome { Matched, NotMatched, PeriodicObstruction };
std::string outcome_name(Outcome o);

struct TraceStep {
  EVectorState state;
  double x = 0, y = 0;  // G^n(0), G^n(1) (or the chosen start pair)
  int kx = 0, ky = 0;   // branches used to reach this step
  bool guard = false;
  double d_float = 0;   // |x - y|
};

struct MatchingOptions {
  Mode mode = Mode::Exact;
  long cap = 100000;
  double guard = kDefaultGuard;
  unsigned precision_cap_bits = kPrecisionCapBits;
  long float_bits = 0;  // 0: adaptive from 256 bits; 53: plain double
  bool keep_trace = true;
  bool detect_cycles = true;
  bool escalate = true;  // float guard hit with exact alpha -> exact rerun
};

struct MatchingResult {
  Outcome outcome = Outcome::NotMatched;
  long kappa = -1;
  long period = 0;
  long iterations = 0;
  Mode mode_used = Mode::Exact;
  bool boundary = false;  // matched on the discontinuity (points 0 and 1)
  bool escalated = false;
  bool precision_exhausted = false;
  bool orbit_distance_mode = false;
  long guard_hits = 0;
  double max_discrepancy = 0;  // max |(x-y) - sign*value(e)| outside guard steps
  long float_bits = 0;
  std::optional<long> float_kappa;  // Mode::Both
  std::vector<TraceStep> trace;
  std::vector<std::string> diagnostics;
};

// Start from (G(0), G(1)) unless a start pair is given.
struct StartPair {
  Param x, y;
  EVectorState state;
};

MatchingResult matching_index(const FieldPtr& f, const Param& alpha, const MatchingOptions& opt = {});
MatchingResult matching_from(const FieldPtr& f, const Param& alpha, const StartPair& start,
                             const MatchingOptions& opt = {});
// (p - eps, p - eps - value(e)) with sign +
StartPair near_fixed_point_start(const FieldPtr& f, const Param& alpha, const Param& eps, const std::string& e);

struct TwoBranch {
  long kappa = 0;
  bool boundary = false;
};
TwoBranch two_branch_matching(const FieldPtr& f, const Param& alpha);

enum class Regime { R4i, R4ii, Other };
std::string regime_name(Regime r);
Regime regime_classify(const FieldPtr& f, const Param& alpha);

struct FlowchartReport {
  long audited = 0;
  long skipped_far = 0;       // orbit of 0 not within eps of p
  long skipped_nonideal = 0;  // near p but branches differ from the ideal configuration
  struct Transition {
    long n;
    std::string from, to;
  };
  std::vector<Transition> off_graph;
  std::map<std::string, long> edge_counts;  // "from->to"
  bool ok() const { return off_graph.empty(); }
};

FlowchartReport flowchart_check(const MatchingResult& r, const FieldPtr& f, const Param& alpha, double eps = 0.01);
bool flowchart_edge(const std::string& from, const std::string& to);

void write_trace_csv(std::ostream& os, const MatchingResult& r, const FieldPtr& f);
std::string result_json(const MatchingResult& r, const FieldPtr& f, bool with_trace);

}  // namespace betamatch
