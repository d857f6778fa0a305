#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "betamatch/sweep.hpp"

using namespace betamatch;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string mode;  // empty: the subcommand's default
  double guard = kDefaultGuard;
  unsigned cap_bits = kPrecisionCapBits;
  std::string out;
  std::string format;
};

// writes to --out when given, stdout otherwise
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(Errc::Io, "cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

json window_json(const ParamWindow& w) {
  json j;
  j["n"] = w.n;
  j["t_lo"] = w.t_lo;
  j["t_hi"] = w.t_hi;
  if (w.lo_exact) j["lo_exact"] = exact_string(*w.lo_exact);
  if (w.hi_exact) j["hi_exact"] = exact_string(*w.hi_exact);
  j["r_lo"] = w.r_lo;
  j["r_hi"] = w.r_hi;
  j["exact"] = w.exact;
  j["identity_lo"] = w.identity_lo;
  j["identity_hi"] = w.identity_hi;
  j["residual_lo"] = w.residual_lo;
  j["residual_hi"] = w.residual_hi;
  if (w.slope_expected != 0) {
    j["slope"] = w.slope;
    j["slope_expected"] = w.slope_expected;
    j["image_width"] = w.image_width;
  }
  j["itinerary"] = w.itinerary;
  return j;
}

int run_orbit(const Globals& g, const std::string& spec, const std::string& x0, long n) {
  auto m = parse_map_spec(spec);
  EvalOptions opt;
  opt.mode = g.mode.empty() ? Mode::Float : parse_mode(g.mode);
  opt.guard = g.guard;
  Param start = m.field ? parse_param(x0, m.field) : Param::from_double(std::stod(x0));
  auto pts = orbit(m, start, n, opt);
  Sink sink(g.out);
  auto& os = sink.os();
  if (g.format == "json") {
    json arr = json::array();
    for (size_t i = 0; i < pts.size(); ++i)
      arr.push_back({{"n", i}, {"x", pts[i].x}, {"symbol", pts[i].symbol == sym::None ? json() : json(pts[i].symbol)},
                     {"guard", pts[i].guard}, {"exact", pts[i].exact}});
    os << arr.dump(1) << "\n";
  } else {
    os << "n,x,symbol,guard,exact\n";
    for (size_t i = 0; i < pts.size(); ++i)
      os << i << "," << num(pts[i].x) << "," << (pts[i].symbol == sym::None ? std::string() : std::to_string(pts[i].symbol))
         << "," << pts[i].guard << ",\"" << pts[i].exact << "\"\n";
  }
  return 0;
}

int run_matching(const Globals& g, const std::string& field, int multinacci, const std::string& alpha, long cap,
                 const std::string& start, bool trace) {
  FieldPtr f = multinacci > 0 ? make_multinacci(multinacci) : parse_field(field);
  Param a = parse_param(alpha, f);
  MatchingOptions opt;
  opt.mode = g.mode.empty() ? Mode::Exact : parse_mode(g.mode);
  opt.cap = cap;
  opt.guard = g.guard;
  opt.precision_cap_bits = g.cap_bits;
  MatchingResult r;
  if (start.empty() || start == "zero_one") {
    r = matching_index(f, a, opt);
  } else {
    auto sm = StartMode::parse(start);
    r = matching_from(f, a, near_fixed_point_start(f, a, parse_param(sm.eps, f), sm.e), opt);
  }
  Sink sink(g.out);
  if (g.format == "csv")
    write_trace_csv(sink.os(), r, f);
  else
    sink.os() << result_json(r, f, trace) << "\n";
  return 0;
}

int run_sweep(const Globals& g, SweepConfig cfg, bool density) {
  if (!g.format.empty()) cfg.format = g.format == "json" ? "jsonl" : g.format;
  if (!g.mode.empty()) cfg.mode = parse_mode(g.mode);
  std::string out = g.out.empty() ? cfg.output : g.out;
  Sink sink(out);
  if (density) {
    auto recs = sweep_density(cfg);
    write_records(sink.os(), recs, cfg.format);
    return sweep_status(recs);
  }
  auto recs = sweep_matching(cfg);
  write_records(sink.os(), recs, cfg.format);
  return sweep_status(recs);
}

int run_windows(const Globals& g, const std::string& spec, int n_lo, int n_hi) {
  auto m = parse_map_spec(spec);
  Mode mode = g.mode.empty() ? Mode::Both : parse_mode(g.mode);
  if (mode == Mode::Exact && (m.kind == MapKind::SkewTent || !m.exact())) mode = Mode::Float;
  json arr = json::array();
  int status = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    try {
      arr.push_back(window_json(param_window(m, n, mode)));
    } catch (const Error& e) {
      arr.push_back({{"n", n}, {"error", errc_name(e.code())}, {"message", e.what()}});
      status = 1;
    }
  }
  Sink sink(g.out);
  if (g.format == "csv") {
    auto& os = sink.os();
    os << "n,t_lo,t_hi,r_lo,r_hi,identity_lo,identity_hi,residual_lo,residual_hi,error\n";
    for (auto& j : arr) {
      if (j.contains("error")) {
        os << j["n"] << ",,,,,,,,," << j["error"].get<std::string>() << "\n";
        continue;
      }
      os << j["n"] << "," << num(j["t_lo"]) << "," << num(j["t_hi"]) << "," << j["r_lo"] << "," << j["r_hi"] << ","
         << j["identity_lo"] << "," << j["identity_hi"] << "," << num(j["residual_lo"]) << ","
         << num(j["residual_hi"]) << ",\n";
    }
  } else {
    sink.os() << arr.dump(1) << "\n";
  }
  return status;
}

int run_attractor(const Globals& g, const std::string& spec, double tol) {
  auto m = parse_map_spec(spec);
  auto c = attractor(m, tol);
  Sink sink(g.out);
  if (g.format == "csv") {
    sink.os() << "lo,hi\n";
    for (auto [lo, hi] : c.components) sink.os() << num(lo) << "," << num(hi) << "\n";
    return 0;
  }
  json j;
  j["map"] = m.str();
  j["L"] = c.L;
  j["total_length"] = c.total_length();
  j["invariance_error"] = c.invariance_error;
  j["endpoints_on_orbits"] = c.endpoints_on_orbits;
  json comps = json::array();
  for (auto [lo, hi] : c.components) comps.push_back({lo, hi});
  j["components"] = comps;
  sink.os() << j.dump(1) << "\n";
  return 0;
}

int run_qseq(const Globals& g, const std::string& spec, int n) {
  auto m = parse_map_spec(spec);
  auto r = q_sequence(m, n);
  Sink sink(g.out);
  if (g.format == "csv") {
    sink.os() << "n,Q,diff\n";
    for (size_t k = 0; k < r.q.size(); ++k)
      sink.os() << k + 1 << "," << num(r.q[k]) << "," << (k < r.diffs.size() ? num(r.diffs[k]) : std::string()) << "\n";
    return 0;
  }
  json j;
  j["map"] = m.str();
  j["n"] = n;
  j["Q_n"] = r.q.back();
  j["limit"] = r.limit;
  j["rate"] = r.rate;
  j["constant"] = r.constant;
  j["lambda"] = r.lambda;
  j["bound_orbit"] = r.bound_orbit;
  j["diagnostics"] = r.diagnostics;
  j["Q"] = r.q;
  sink.os() << j.dump(1) << "\n";
  return 0;
}

void usage_error(const std::string& kind, const std::string& msg) {
  json j{{"error", kind}, {"message", msg}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matching of critical orbits for skew tents and generalised beta maps"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--mode", g.mode, "exact | float | both")->check(CLI::IsMember({"exact", "float", "both"}));
  app.add_option("--guard-band", g.guard, "float guard band around breakpoints");
  app.add_option("--precision-cap-bits", g.cap_bits, "largest float precision tried before giving up");
  app.add_option("--out", g.out, "output file (stdout by default)");
  app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json", "jsonl"}));

  std::string spec, x0 = "0", field = "multinacci(3)", alpha, start, config;
  long n = 20, cap = 100000;
  int multinacci = 0, n_lo = 0, n_hi = 0;
  bool trace = false, density = false;
  double tol = 1e-10;

  auto* orb = app.add_subcommand("orbit", "orbit of x0 as CSV");
  orb->add_option("map", spec, "e.g. skewtent:alpha=0.4,beta=0.9")->required();
  orb->add_option("--x0", x0);
  orb->add_option("-n", n);

  auto* mat = app.add_subcommand("matching", "matching index of the orbits of 0 and 1");
  mat->add_option("--multinacci", multinacci, "N");
  mat->add_option("--field", field, "multinacci(N), pisot(c0,...,1), golden, tribonacci");
  mat->add_option("--alpha", alpha)->required();
  mat->add_option("--cap", cap);
  mat->add_option("--start", start, "zero_one or near_fixed_point(eps,digits)");
  mat->add_flag("--trace", trace, "include the e-vector trace in the JSON");

  auto* swp = app.add_subcommand("sweep", "parameter sweep");
  swp->add_option("--config", config, "key=value file");
  swp->add_flag("--density", density, "density fractions instead of matching");
  std::string s_field, s_lo, s_hi, s_start;
  long s_grid = 0;
  swp->add_option("--field", s_field);
  swp->add_option("--alpha-lo", s_lo);
  swp->add_option("--alpha-hi", s_hi);
  swp->add_option("--grid", s_grid);
  swp->add_option("--start", s_start, "';'-separated start modes");
  swp->add_option("--cap", cap);

  auto* win = app.add_subcommand("windows", "maximal monotone parameter windows");
  win->add_option("map", spec)->required();
  win->add_option("-n", n);
  win->add_option("--n-lo", n_lo);
  win->add_option("--n-hi", n_hi);

  auto* att = app.add_subcommand("attractor", "invariant interval cycle");
  att->add_option("map", spec)->required();
  att->add_option("--tol", tol);

  auto* qs = app.add_subcommand("qseq", "Q_n sequence");
  qs->add_option("map", spec)->required();
  qs->add_option("-n", n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    usage_error("usage", e.what());
    return 2;
  }

  try {
    if (*orb) return run_orbit(g, spec, x0, n);
    if (*mat) {
      if (g.format.empty()) g.format = "json";
      return run_matching(g, field, multinacci, alpha, cap, start, trace);
    }
    if (*swp) {
      SweepConfig cfg = config.empty() ? SweepConfig{} : SweepConfig::load(config);
      if (!s_field.empty()) cfg.field = s_field;
      if (!s_lo.empty()) cfg.alpha_lo = s_lo;
      if (!s_hi.empty()) cfg.alpha_hi = s_hi;
      if (s_grid > 0) cfg.grid = s_grid;
      if (!s_start.empty()) {
        cfg.starts.clear();
        std::stringstream ss(s_start);
        std::string part;
        while (std::getline(ss, part, ';')) cfg.starts.push_back(StartMode::parse(part));
      }
      if (swp->count("--cap")) cfg.cap = cap;
      cfg.check();
      return run_sweep(g, cfg, density);
    }
    if (*win) {
      if (g.format.empty()) g.format = "json";
      if (n_lo == 0) n_lo = static_cast<int>(n);
      if (n_hi == 0) n_hi = std::max(n_lo, static_cast<int>(n));
      return run_windows(g, spec, n_lo, n_hi);
    }
    if (*att) return run_attractor(g, spec, tol);
    if (*qs) return run_qseq(g, spec, static_cast<int>(n));
  } catch (const Error& e) {
    usage_error(errc_name(e.code()), e.what());
    switch (e.code()) {
      case Errc::InvalidArgument:
      case Errc::Parse:
      case Errc::OutOfDomain:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    usage_error("internal", e.what());
    return 1;
  }
  return 0;
}
