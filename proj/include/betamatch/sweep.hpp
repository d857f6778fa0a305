#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "betamatch/matching.hpp"
#include "betamatch/orbits.hpp"

namespace betamatch {

struct StartMode {
  enum Kind { FromZeroAndOne, NearFixedPoint } kind = FromZeroAndOne;
  std::string eps = "0.01";
  std::string e;  // e-vector digits, NearFixedPoint only

  std::string tag() const;  // "zero_one" or "near_fixed_point(0.01,0110)"
  static StartMode parse(const std::string& s);
  bool operator==(const StartMode&) const = default;
};

// Flat key=value file, one key per line, '#' starts a comment.
struct SweepConfig {
  std::string field = "multinacci(4)";
  std::string alpha_lo = "beta^-3";
  std::string alpha_hi = "beta^-1";
  long grid = 100;
  std::string sampling = "grid";  // grid | random
  std::vector<StartMode> starts{StartMode{}};
  long cap = 100000;
  Mode mode = Mode::Exact;
  uint64_t seed = 0;
  long density_n = 100000;
  double density_eps = 0.01;
  std::string output;
  std::string format = "csv";  // csv | jsonl

  std::string serialize() const;
  static SweepConfig parse(const std::string& text);
  static SweepConfig load(const std::string& path);
  void check() const;
  bool operator==(const SweepConfig&) const = default;
};

// alpha values of the sweep, exact whenever the endpoints are
std::vector<Param> sweep_alphas(const SweepConfig& cfg, const FieldPtr& f);

struct SweepRecord {
  long index = 0;
  std::string start;
  double alpha = 0;
  std::string alpha_exact;
  std::string outcome;  // matched | not_matched | periodic_obstruction | error
  long kappa = -1;
  long period = 0;
  long iterations = 0;
  long guard_hits = 0;
  double max_discrepancy = 0;
  bool boundary = false;
  bool escalated = false;
  std::string mode_used;
  std::string error;
};

std::vector<SweepRecord> sweep_matching(const SweepConfig& cfg);
std::vector<SweepRecord> sweep_matching_serial(const SweepConfig& cfg);

struct DensityRecord {
  long index = 0;
  double alpha = 0;
  std::string alpha_exact;
  double fraction = 0;
  long cells = 0, visited = 0;
  long components = 0;
  long first_visit_median = -1, first_visit_max = -1;  // over visited cells
  std::string error;
};

std::vector<DensityRecord> sweep_density(const SweepConfig& cfg);
std::vector<DensityRecord> sweep_density_serial(const SweepConfig& cfg);

void write_records(std::ostream& os, const std::vector<SweepRecord>& r, const std::string& format);
void write_records(std::ostream& os, const std::vector<DensityRecord>& r, const std::string& format);
// 0: all points ran, 1: some per-point failures
int sweep_status(const std::vector<SweepRecord>& r);
int sweep_status(const std::vector<DensityRecord>& r);

}  // namespace betamatch
