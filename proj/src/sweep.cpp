#include "betamatch/sweep.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "json.hpp"

namespace betamatch {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(Errc::Parse, "config key '" + key + "' needs an integer, got '" + v + "'");
  }
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

SweepRecord run_point(const FieldPtr& f, const SweepConfig& cfg, const Param& alpha, long index,
                      const StartMode& start) {
  SweepRecord r;
  r.index = index;
  r.start = start.tag();
  r.alpha = alpha.value;
  if (alpha.exact) r.alpha_exact = exact_string(*alpha.exact);
  MatchingOptions opt;
  opt.mode = cfg.mode;
  opt.cap = cfg.cap;
  opt.keep_trace = false;
  try {
    MatchingResult m;
    if (start.kind == StartMode::FromZeroAndOne) {
      m = matching_index(f, alpha, opt);
    } else {
      auto sp = near_fixed_point_start(f, alpha, parse_param(start.eps, f), start.e);
      m = matching_from(f, alpha, sp, opt);
    }
    r.outcome = outcome_name(m.outcome);
    r.kappa = m.kappa;
    r.period = m.period;
    r.iterations = m.iterations;
    r.guard_hits = m.guard_hits;
    r.max_discrepancy = m.max_discrepancy;
    r.boundary = m.boundary;
    r.escalated = m.escalated;
    r.mode_used = mode_name(m.mode_used);
    if (m.precision_exhausted) r.error = "precision exhausted";
  } catch (const std::exception& e) {
    r.outcome = "error";
    r.error = e.what();
  }
  return r;
}

DensityRecord density_point(const FieldPtr& f, const SweepConfig& cfg, const Param& alpha, long index) {
  DensityRecord r;
  r.index = index;
  r.alpha = alpha.value;
  if (alpha.exact) r.alpha_exact = exact_string(*alpha.exact);
  try {
    auto m = make_genbeta(f, alpha);
    auto cyc = attractor(m);
    auto d = density_profile(m, 0.0, cfg.density_n, cfg.density_eps, &cyc);
    r.fraction = d.fraction;
    r.cells = d.cells;
    r.visited = d.visited;
    r.components = static_cast<long>(cyc.components.size());
    std::vector<long> fv;
    for (long t : d.first_visit)
      if (t >= 0) fv.push_back(t);
    if (!fv.empty()) {
      std::sort(fv.begin(), fv.end());
      r.first_visit_median = fv[fv.size() / 2];
      r.first_visit_max = fv.back();
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

template <class Rec, class Fn>
std::vector<Rec> run_jobs(size_t count, Fn fn, bool parallel) {
  std::vector<Rec> out(count);
  const long n = static_cast<long>(count);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) out[i] = fn(i);
  } else {
    for (long i = 0; i < n; ++i) out[i] = fn(i);
  }
  return out;
}

std::vector<SweepRecord> matching_impl(const SweepConfig& cfg, bool parallel) {
  cfg.check();
  FieldPtr f = parse_field(cfg.field);
  f->refine(256);
  auto alphas = sweep_alphas(cfg, f);
  const size_t ns = cfg.starts.size();
  // records ordered by grid index, then by start mode
  return run_jobs<SweepRecord>(alphas.size() * ns, [&](long i) {
    return run_point(f, cfg, alphas[i / ns], i / ns, cfg.starts[i % ns]);
  }, parallel);
}

std::vector<DensityRecord> density_impl(const SweepConfig& cfg, bool parallel) {
  cfg.check();
  FieldPtr f = parse_field(cfg.field);
  auto alphas = sweep_alphas(cfg, f);
  return run_jobs<DensityRecord>(alphas.size(), [&](long i) { return density_point(f, cfg, alphas[i], i); }, parallel);
}

}  // namespace

std::string StartMode::tag() const {
  if (kind == FromZeroAndOne) return "zero_one";
  return "near_fixed_point(" + eps + "," + e + ")";
}

StartMode StartMode::parse(const std::string& text) {
  std::string s = trim(text);
  StartMode m;
  if (s == "zero_one") return m;
  const std::string head = "near_fixed_point(";
  if (s.rfind(head, 0) == 0 && s.back() == ')') {
    auto args = split(s.substr(head.size(), s.size() - head.size() - 1), ',');
    if (args.size() == 2 && !args[0].empty() && !args[1].empty()) {
      m.kind = NearFixedPoint;
      m.eps = args[0];
      m.e = args[1];
      if (m.e.find_first_not_of("01") == std::string::npos) return m;
    }
  }
  throw Error(Errc::Parse, "bad start mode '" + s + "' (zero_one or near_fixed_point(eps,digits))");
}

std::string SweepConfig::serialize() const {
  std::ostringstream os;
  os << "field = " << field << "\n";
  os << "alpha_lo = " << alpha_lo << "\n";
  os << "alpha_hi = " << alpha_hi << "\n";
  os << "grid = " << grid << "\n";
  os << "sampling = " << sampling << "\n";
  os << "start = ";
  for (size_t i = 0; i < starts.size(); ++i) os << (i ? "; " : "") << starts[i].tag();
  os << "\n";
  os << "cap = " << cap << "\n";
  os << "mode = " << mode_name(mode) << "\n";
  os << "seed = " << seed << "\n";
  os << "density_n = " << density_n << "\n";
  os << "density_eps = " << num(density_eps) << "\n";
  os << "output = " << output << "\n";
  os << "format = " << format << "\n";
  return os.str();
}

SweepConfig SweepConfig::parse(const std::string& text) {
  SweepConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::Parse, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k == "field") c.field = v;
    else if (k == "alpha_lo") c.alpha_lo = v;
    else if (k == "alpha_hi") c.alpha_hi = v;
    else if (k == "grid") c.grid = to_long(k, v);
    else if (k == "sampling") c.sampling = v;
    else if (k == "start") {
      c.starts.clear();
      for (auto& s : split(v, ';')) c.starts.push_back(StartMode::parse(s));
    } else if (k == "cap") c.cap = to_long(k, v);
    else if (k == "mode") c.mode = parse_mode(v);
    else if (k == "seed") c.seed = static_cast<uint64_t>(to_long(k, v));
    else if (k == "density_n") c.density_n = to_long(k, v);
    else if (k == "density_eps") {
      try {
        c.density_eps = std::stod(v);
      } catch (const std::exception&) {
        throw Error(Errc::Parse, "config key 'density_eps' needs a number");
      }
    } else if (k == "output") c.output = v;
    else if (k == "format") c.format = v;
    else throw Error(Errc::Parse, "unknown config key '" + k + "'");
  }
  c.check();
  return c;
}

SweepConfig SweepConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void SweepConfig::check() const {
  if (grid < 1) throw Error(Errc::InvalidArgument, "grid count must be at least 1");
  if (cap < 1) throw Error(Errc::InvalidArgument, "cap must be at least 1");
  if (starts.empty()) throw Error(Errc::InvalidArgument, "at least one start mode is needed");
  if (sampling != "grid" && sampling != "random") throw Error(Errc::InvalidArgument, "sampling is grid or random");
  if (format != "csv" && format != "jsonl") throw Error(Errc::InvalidArgument, "format is csv or jsonl");
  if (!(density_eps > 0)) throw Error(Errc::InvalidArgument, "density_eps must be positive");
  auto f = parse_field(field);
  auto lo = parse_param(alpha_lo, f), hi = parse_param(alpha_hi, f);
  if (lo.value < 0 || hi.value >= 1 || hi.value < lo.value)
    throw Error(Errc::InvalidArgument, "alpha range must satisfy 0 <= alpha_lo <= alpha_hi < 1");
  for (auto& s : starts)
    if (s.kind == StartMode::NearFixedPoint) {
      if (!f->is_multinacci() || static_cast<int>(s.e.size()) != f->degree())
        throw Error(Errc::InvalidArgument, "e-vector '" + s.e + "' does not fit field " + field);
      if (s.e.find('1') == std::string::npos) throw Error(Errc::InvalidArgument, "e-vector must be nonzero");
    }
}

std::vector<Param> sweep_alphas(const SweepConfig& cfg, const FieldPtr& f) {
  Param lo = parse_param(cfg.alpha_lo, f), hi = parse_param(cfg.alpha_hi, f);
  const long g = cfg.grid;
  std::vector<Param> out;
  out.reserve(g);
  bool exact = lo.exact && hi.exact;
  if (cfg.sampling == "random") {
    // alpha_lo + (alpha_hi - alpha_lo) k / D with k uniform in 1..D-1
    const long D = 1000003;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<long> uk(1, D - 1);
    for (long j = 0; j < g; ++j) {
      long k = uk(rng);
      if (exact) {
        FieldElement t = embed(*lo.exact, f) + (embed(*hi.exact, f) - embed(*lo.exact, f)) * FieldElement(f, mpq_class(k, D));
        out.push_back(Param::from_exact(t));
      } else {
        out.push_back(Param::from_double(lo.value + (hi.value - lo.value) * k / D));
      }
    }
    return out;
  }
  for (long j = 0; j < g; ++j) {
    if (exact) {
      FieldElement a = embed(*lo.exact, f);
      if (g > 1) a = a + (embed(*hi.exact, f) - a) * FieldElement(f, mpq_class(j, g - 1));
      out.push_back(Param::from_exact(a));
    } else {
      out.push_back(Param::from_double(g > 1 ? lo.value + j * (hi.value - lo.value) / (g - 1) : lo.value));
    }
  }
  return out;
}

std::vector<SweepRecord> sweep_matching(const SweepConfig& cfg) { return matching_impl(cfg, true); }
std::vector<SweepRecord> sweep_matching_serial(const SweepConfig& cfg) { return matching_impl(cfg, false); }
std::vector<DensityRecord> sweep_density(const SweepConfig& cfg) { return density_impl(cfg, true); }
std::vector<DensityRecord> sweep_density_serial(const SweepConfig& cfg) { return density_impl(cfg, false); }

void write_records(std::ostream& os, const std::vector<SweepRecord>& recs, const std::string& format) {
  if (format == "jsonl") {
    for (auto& r : recs) {
      nlohmann::ordered_json j;
      j["index"] = r.index;
      j["start"] = r.start;
      j["alpha"] = r.alpha;
      j["alpha_exact"] = r.alpha_exact;
      j["outcome"] = r.outcome;
      j["kappa"] = r.kappa;
      j["period"] = r.period;
      j["iterations"] = r.iterations;
      j["guard_hits"] = r.guard_hits;
      j["max_discrepancy"] = r.max_discrepancy;
      j["boundary"] = r.boundary;
      j["escalated"] = r.escalated;
      j["mode_used"] = r.mode_used;
      j["error"] = r.error;
      os << j.dump() << "\n";
    }
    return;
  }
  os << "index,start,alpha,alpha_exact,outcome,kappa,period,iterations,guard_hits,max_discrepancy,boundary,escalated,"
        "mode_used,error\n";
  for (auto& r : recs)
    os << r.index << "," << csv_field(r.start) << "," << num(r.alpha) << "," << csv_field(r.alpha_exact) << ","
       << r.outcome << "," << r.kappa << "," << r.period << "," << r.iterations << "," << r.guard_hits << ","
       << num(r.max_discrepancy) << "," << r.boundary << "," << r.escalated << "," << r.mode_used << ","
       << csv_field(r.error) << "\n";
}

void write_records(std::ostream& os, const std::vector<DensityRecord>& recs, const std::string& format) {
  if (format == "jsonl") {
    for (auto& r : recs) {
      nlohmann::ordered_json j;
      j["index"] = r.index;
      j["alpha"] = r.alpha;
      j["alpha_exact"] = r.alpha_exact;
      j["fraction"] = r.fraction;
      j["cells"] = r.cells;
      j["visited"] = r.visited;
      j["components"] = r.components;
      j["first_visit_median"] = r.first_visit_median;
      j["first_visit_max"] = r.first_visit_max;
      j["error"] = r.error;
      os << j.dump() << "\n";
    }
    return;
  }
  os << "index,alpha,alpha_exact,fraction,cells,visited,components,first_visit_median,first_visit_max,error\n";
  for (auto& r : recs)
    os << r.index << "," << num(r.alpha) << "," << csv_field(r.alpha_exact) << "," << num(r.fraction) << ","
       << r.cells << "," << r.visited << "," << r.components << "," << r.first_visit_median << ","
       << r.first_visit_max << "," << csv_field(r.error) << "\n";
}

int sweep_status(const std::vector<SweepRecord>& r) {
  return std::any_of(r.begin(), r.end(), [](auto& x) { return !x.error.empty(); }) ? 1 : 0;
}

int sweep_status(const std::vector<DensityRecord>& r) {
  return std::any_of(r.begin(), r.end(), [](auto& x) { return !x.error.empty(); }) ? 1 : 0;
}

}  // namespace betamatch
