#include "betamatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace betamatch {

std::string EVectorState::digits() const {
  std::string s;
  for (int i = 1; i <= n_digits; ++i) s += static_cast<char>('0' + digit(i));
  return s;
}

std::string EVectorState::code() const {
  if (sign == 0) return all_zero() ? "0" : "?" + digits();
  return (sign > 0 ? "+" : "-") + digits();
}

FieldElement EVectorState::value(const FieldPtr& f) const {
  FieldElement v(f);
  for (int i = 1; i <= n_digits; ++i)
    if (digit(i)) v += FieldElement::beta_power(f, -i);
  return v;
}

double EVectorState::value_double(const FieldPtr& f) const {
  double v = 0, ib = 1.0 / f->approx(), p = ib;
  for (int i = 1; i <= n_digits; ++i, p *= ib)
    if (digit(i)) v += p;
  return v;
}

EVectorState EVectorState::from_digits(const std::string& d, int sign, long step) {
  if (d.empty() || d.size() > 30) throw Error(Errc::InvalidArgument, "e-vector needs 1..30 digits");
  EVectorState s;
  s.n_digits = static_cast<int>(d.size());
  for (int i = 0; i < s.n_digits; ++i) {
    if (d[i] != '0' && d[i] != '1') throw Error(Errc::Parse, "e-vector digits must be 0/1: " + d);
    if (d[i] == '1') s.bits |= 1u << i;
  }
  s.sign = s.bits ? sign : 0;
  s.step = step;
  return s;
}

EVectorState evector_init(const BetaField& f) {
  if (!f.is_multinacci()) throw Error(Errc::InvalidArgument, "e-vectors need a multinacci field");
  EVectorState s;
  s.n_digits = f.degree();
  s.bits = 1u << (s.n_digits - 1);
  s.sign = 1;
  s.step = 1;
  return s;
}

EVectorState evector_step(const EVectorState& s, bool flip) {
  if (s.all_zero()) throw Error(Errc::InvalidArgument, "cannot step a matched e-vector");
  EVectorState r = s;
  std::uint32_t mask = (1u << s.n_digits) - 1;
  r.bits = s.bits >> 1;
  if (flip) {
    r.bits = (~r.bits) & mask;  // complements e_2..e_N and sets the last digit
    r.sign = -s.sign;
  }
  if (r.bits == 0) r.sign = 0;
  r.step = s.step + 1;
  return r;
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Matched: return "matched";
    case Outcome::NotMatched: return "not_matched";
    case Outcome::PeriodicObstruction: return "periodic";
  }
  return "?";
}

namespace {

enum class Status { Done, Horizon, Escalate };

template <class Real>
Real lift(const Param& p, const FieldPtr& f, long bits) {
  if constexpr (is_exact_v<Real>) {
    if (!p.exact) throw Error(Errc::InvalidArgument, "exact mode needs exact value for '" + p.text + "'");
    return embed(*p.exact, f);
  } else if constexpr (std::is_same_v<Real, BigFloat>) {
    return p.exact ? p.exact->to_bigfloat(bits) : BigFloat(p.value, bits);
  } else {
    (void)f;
    (void)bits;
    return p.value;
  }
}

template <class Real>
struct Engine {
  const FieldPtr& f;
  const MatchingOptions& opt;
  MatchingResult& res;
  bool automaton;
  bool escalate_ok;
  long bits;
  GenBeta<Real> G;
  std::vector<FieldElement> ipow;  // beta^{-i}, exact runs only

  Engine(const FieldPtr& f_, const Param& alpha, const MatchingOptions& o, MatchingResult& r, bool esc, long b)
      : f(f_),
        opt(o),
        res(r),
        automaton(f_->is_multinacci()),
        escalate_ok(esc),
        bits(b),
        G(lift<Real>(alpha, f_, b), lift<Real>(Param::from_exact(FieldElement::generator(f_)), f_, b), o.guard) {
    if constexpr (is_exact_v<Real>)
      for (int i = 1; i <= f->degree(); ++i) ipow.push_back(FieldElement::beta_power(f, -i));
  }

  FieldElement exact_value(const EVectorState& s) const {
    FieldElement v(f);
    for (int i = 1; i <= s.n_digits; ++i)
      if (s.digit(i)) v += ipow[i - 1];
    return v;
  }

  void record(const EVectorState& s, const Real& x, const Real& y, int kx, int ky, bool guard) {
    double d = to_double(x - y);
    if (automaton && !guard) {
      double disc = std::abs(d - s.sign * s.value_double(f));
      res.max_discrepancy = std::max(res.max_discrepancy, disc);
      if (disc > 1e-9 && res.diagnostics.size() < 20)
        res.diagnostics.push_back("automaton/geometry disagreement " + std::to_string(disc) + " at step " +
                                  std::to_string(s.step));
    }
    if constexpr (is_exact_v<Real>) {
      if (automaton) {
        FieldElement v = exact_value(s);
        if (!(x - y == (s.sign >= 0 ? v : -v)))
          throw Error(Errc::Inconsistent, "e-vector value differs from orbit distance at step " +
                                              std::to_string(s.step));
      }
    }
    if (opt.keep_trace) res.trace.push_back({s, to_double(x), to_double(y), kx, ky, guard, std::abs(d)});
  }

  bool matched(const EVectorState& s, const Real& x, const Real& y) {
    if constexpr (is_exact_v<Real>) {
      bool eq = x == y;
      if (automaton && eq != s.all_zero() && !res.boundary)
        throw Error(Errc::Inconsistent, "matching by orbit and by e-vector disagree");
      return eq || res.boundary;
    } else {
      if (automaton) return s.all_zero() || res.boundary;
      return std::abs(to_double(x - y)) < 1e-13;
    }
  }

  Status run(Real x, Real y, EVectorState s, long horizon) {
    long n = s.step;
    Real tort_x = x, tort_y = y;
    long power = 1, lam = 0;
    if (matched(s, x, y)) return finish_match(n);
    while (n < opt.cap) {
      if (n >= horizon) return Status::Horizon;
      auto sx = G.eval(x);
      auto sy = G.eval_left(y);
      bool guard = sx.guard || sy.guard;
      if (guard) {
        if (escalate_ok) return Status::Escalate;
        ++res.guard_hits;
      }
      int dk = sx.symbol - sy.symbol;
      ++n;
      if (automaton) {
        int e1 = s.digit(1), sg = s.sign;
        bool rest_zero = (s.bits >> 1) == 0;
        if (dk == sg * e1) {
          s = evector_step(s, false);
        } else if (dk == sg * (e1 + 1)) {
          s = evector_step(s, true);
        } else if (dk == sg * (e1 - 1) && rest_zero) {
          // lands on the discontinuity from both sides: distance 1
          s.bits = (1u << s.n_digits) - 1;
          s.step += 1;
          res.boundary = true;
        } else {
          std::string msg = "branch difference " + std::to_string(dk) + " impossible from state " + s.code() +
                            " at step " + std::to_string(n);
          if (is_exact_v<Real> || !guard) throw Error(Errc::Inconsistent, msg);
          res.diagnostics.push_back(msg + " (guard band)");
          res.iterations = n;
          return Status::Done;
        }
      } else {
        s.step = n;
      }
      x = std::move(sx.value);
      y = std::move(sy.value);
      record(s, x, y, sx.symbol, sy.symbol, guard);
      if (matched(s, x, y)) return finish_match(n);
      if constexpr (is_exact_v<Real>) {
        if (opt.detect_cycles) {
          ++lam;
          if (x == tort_x && y == tort_y) {
            res.outcome = Outcome::PeriodicObstruction;
            res.period = lam;
            res.iterations = n;
            return Status::Done;
          }
          if (lam == power) {
            tort_x = x;
            tort_y = y;
            power *= 2;
            lam = 0;
          }
        }
      }
    }
    res.outcome = Outcome::NotMatched;
    res.iterations = n;
    return Status::Done;
  }

  Status finish_match(long n) {
    res.outcome = Outcome::Matched;
    res.kappa = n;
    res.iterations = n;
    return Status::Done;
  }

  // step 0 is the pair (0, 1): distance 1, the all-ones e-vector with sign -
  EVectorState zero_state() const {
    EVectorState s0;
    if (automaton) {
      s0.n_digits = f->degree();
      s0.bits = (1u << s0.n_digits) - 1;
      s0.sign = -1;
    }
    return s0;
  }
};

long horizon_for(long bits, const FieldPtr& f) {
  if (bits <= 53) return std::numeric_limits<long>::max();
  return static_cast<long>((bits - 64) / std::log2(f->approx()));
}

template <class Real>
Status run_engine(const FieldPtr& f, const Param& alpha, const StartPair* start, const MatchingOptions& opt,
                  MatchingResult& res, bool esc, long bits) {
  Engine<Real> eng(f, alpha, opt, res, esc, bits);
  long horizon = horizon_for(bits, f);
  if (!start) {
    Real x = like(eng.G.alpha(), 0), y = like(eng.G.alpha(), 1);
    EVectorState s0 = eng.zero_state();
    eng.record(s0, x, y, 0, 0, false);
    return eng.run(std::move(x), std::move(y), s0, horizon);
  }
  if (eng.automaton && start->state.n_digits != f->degree())
    throw Error(Errc::InvalidArgument, "start e-vector length differs from field degree");
  Real x = lift<Real>(start->x, f, bits), y = lift<Real>(start->y, f, bits);
  if (x < 0L || x > 1L || y < 0L || y > 1L) throw Error(Errc::OutOfDomain, "start pair outside [0,1]");
  eng.record(start->state, x, y, 0, 0, false);
  return eng.run(std::move(x), std::move(y), start->state, horizon);
}

MatchingResult run_exact(const FieldPtr& f, const Param& alpha, const StartPair* start, const MatchingOptions& opt) {
  MatchingResult res;
  res.mode_used = Mode::Exact;
  res.orbit_distance_mode = !f->is_multinacci();
  run_engine<FieldElement>(f, alpha, start, opt, res, false, 0);
  return res;
}

MatchingResult run_float(const FieldPtr& f, const Param& alpha, const StartPair* start, const MatchingOptions& opt) {
  bool can_escalate = opt.escalate && alpha.exact && (!start || (start->x.exact && start->y.exact));
  long bits = opt.float_bits > 0 ? opt.float_bits : 256;
  for (;;) {
    MatchingResult res;
    res.mode_used = Mode::Float;
    res.orbit_distance_mode = !f->is_multinacci();
    res.float_bits = bits;
    Status st = bits <= 53 ? run_engine<double>(f, alpha, start, opt, res, can_escalate, bits)
                           : run_engine<BigFloat>(f, alpha, start, opt, res, can_escalate, bits);
    if (st == Status::Escalate) {
      MatchingResult ex = run_exact(f, alpha, start, opt);
      ex.escalated = true;
      ex.diagnostics.insert(ex.diagnostics.begin(), "float guard band hit, rerun in exact mode");
      return ex;
    }
    if (st == Status::Done) return res;
    // precision horizon reached
    if (opt.float_bits == 0 && 2 * bits <= static_cast<long>(opt.precision_cap_bits)) {
      bits *= 2;
      continue;
    }
    res.outcome = Outcome::NotMatched;
    res.precision_exhausted = true;
    res.iterations = horizon_for(bits, f);
    res.diagnostics.push_back("precision exhausted at " + std::to_string(bits) + " bits");
    return res;
  }
}

MatchingResult dispatch(const FieldPtr& f, const Param& alpha_in, const StartPair* start, const MatchingOptions& opt) {
  if (opt.cap < 1) throw Error(Errc::InvalidArgument, "cap must be >= 1");
  Param alpha = alpha_in;
  if (alpha.exact) alpha.exact = embed(*alpha.exact, f);
  if (alpha.exact ? (*alpha.exact < 0L || !(*alpha.exact < 1L)) : (alpha.value < 0 || alpha.value >= 1))
    throw Error(Errc::OutOfDomain, "alpha must lie in [0,1)");
  switch (opt.mode) {
    case Mode::Exact:
      return run_exact(f, alpha, start, opt);
    case Mode::Float:
      return run_float(f, alpha, start, opt);
    case Mode::Both: {
      MatchingResult ex = run_exact(f, alpha, start, opt);
      MatchingOptions fo = opt;
      fo.escalate = false;
      fo.keep_trace = false;
      MatchingResult fl = run_float(f, alpha, start, fo);
      ex.mode_used = Mode::Both;
      ex.float_kappa = fl.kappa;
      ex.float_bits = fl.float_bits;
      ex.guard_hits += fl.guard_hits;
      ex.max_discrepancy = std::max(ex.max_discrepancy, fl.max_discrepancy);
      if (fl.kappa != ex.kappa || fl.outcome != ex.outcome)
        ex.diagnostics.push_back("float result differs: " + outcome_name(fl.outcome) + " kappa=" +
                                 std::to_string(fl.kappa));
      for (auto& d : fl.diagnostics) ex.diagnostics.push_back("float: " + d);
      return ex;
    }
  }
  return {};
}

}  // namespace

MatchingResult matching_index(const FieldPtr& f, const Param& alpha, const MatchingOptions& opt) {
  return dispatch(f, alpha, nullptr, opt);
}

MatchingResult matching_from(const FieldPtr& f, const Param& alpha, const StartPair& start,
                             const MatchingOptions& opt) {
  return dispatch(f, alpha, &start, opt);
}

StartPair near_fixed_point_start(const FieldPtr& f, const Param& alpha, const Param& eps, const std::string& e) {
  if (!f->is_multinacci()) throw Error(Errc::InvalidArgument, "e-vector start needs a multinacci field");
  EVectorState s = EVectorState::from_digits(e, +1, 0);
  if (s.n_digits != f->degree()) throw Error(Errc::InvalidArgument, "e-vector length must equal N");
  if (s.all_zero()) throw Error(Errc::InvalidArgument, "start e-vector must be nonzero");
  StartPair sp;
  sp.state = s;
  if (alpha.exact && eps.exact) {
    FieldElement a = embed(*alpha.exact, f), b = FieldElement::generator(f);
    FieldElement p = (1L - a) * (b - 1L).inverse();
    FieldElement x = p - embed(*eps.exact, f);
    sp.x = Param::from_exact(x);
    sp.y = Param::from_exact(x - s.value(f));
  } else {
    double b = f->approx();
    double x = (1 - alpha.value) / (b - 1) - eps.value;
    sp.x = Param::from_double(x);
    sp.y = Param::from_double(x - s.value_double(f));
  }
  return sp;
}

TwoBranch two_branch_matching(const FieldPtr& f, const Param& alpha) {
  if (!f->is_multinacci()) throw Error(Errc::InvalidArgument, "two-branch matching needs a multinacci field");
  const int n = f->degree();
  if (!alpha.exact) {
    double b = f->approx(), a = alpha.value;
    if (!(a > 0 && a <= 2 - b)) throw Error(Errc::OutOfDomain, "alpha outside the two-branch region (0, 2-beta]");
    double x = 0, y = 1;
    for (int k = 1; k <= n; ++k) {
      x = b * x + a;
      y = b * y + a - 1;
      double fx = a * (std::pow(b, k) - 1) / (b - 1);
      if (std::abs(x - fx) > 1e-9) throw Error(Errc::Inconsistent, "two-branch orbit formula fails");
      if (k < n && x > y + 1e-12) throw Error(Errc::Inconsistent, "two-branch ordering fails");
    }
    if (std::abs(x - y) > 1e-9) throw Error(Errc::Inconsistent, "no matching at step N");
    return {n, std::abs(a - (2 - b)) < 1e-15};
  }
  FieldElement a = embed(*alpha.exact, f), b = FieldElement::generator(f);
  FieldElement two_minus_b = 2L - b;
  if (!(a > 0L && a <= two_minus_b)) throw Error(Errc::OutOfDomain, "alpha outside the two-branch region (0, 2-beta]");
  FieldElement ib1 = (b - 1L).inverse();
  // unreduced orbits: G^k(0) = a(b^k-1)/(b-1) stays left of c_1; G^k(1) = b G^{k-1}(1) + a - 1
  FieldElement x(f), y(f, 1L), bk(f, 1L);
  for (int k = 1; k <= n; ++k) {
    x = b * x + a;
    y = b * y + a - 1L;
    bk *= b;
    if (!(x == a * (bk - 1L) * ib1)) throw Error(Errc::Inconsistent, "two-branch orbit formula fails");
    if (k < n && !(x <= y)) throw Error(Errc::Inconsistent, "two-branch ordering fails");
    // both orbits stay in one branch, values in [0,1]
    if (x > 1L || y > 1L || y < 0L) throw Error(Errc::Inconsistent, "two-branch orbit leaves [0,1]");
  }
  if (!(x == y)) throw Error(Errc::Inconsistent, "no matching at step N");
  return {n, a == two_minus_b};
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::R4i: return "4i";
    case Regime::R4ii: return "4ii";
    case Regime::Other: return "other";
  }
  return "?";
}

Regime regime_classify(const FieldPtr& f, const Param& alpha) {
  if (!f->is_multinacci() || f->degree() != 3) throw Error(Errc::InvalidArgument, "tribonacci field required");
  FieldElement b = FieldElement::generator(f), ib = b.inverse();
  FieldElement a = alpha.exact ? embed(*alpha.exact, f) : FieldElement(f);
  auto cmp_a = [&](const FieldElement& t) {
    if (alpha.exact) return cmp(a, t);
    double d = alpha.value - t.to_double();
    return (d > 0) - (d < 0);
  };
  if (!(cmp_a(FieldElement::beta_power(f, -2)) > 0 && cmp_a(ib) < 0))
    throw Error(Errc::OutOfDomain, "alpha outside (beta^-2, beta^-1)");
  FieldElement t_i = (3L * b - b * b - 1L) * ib;
  FieldElement t_ii = (b * b - 2L) * ib * ib;
  if (cmp_a(t_i) > 0) return Regime::R4i;
  if (cmp_a(t_ii) >= 0) return Regime::R4ii;
  return Regime::Other;
}

namespace {
const std::set<std::pair<std::string, std::string>>& edges() {
  static const std::set<std::pair<std::string, std::string>> e = {
      // part 1 / part 3 chain
      {"+001", "+010"}, {"+010", "+100"}, {"+100", "0"}, {"-100", "0"},
      // part 2
      {"+110", "+100"}, {"+101", "+010"},
      // drawn edge labelled p - c_1 > d(n), and the variant listed in prose
      {"+011", "+110"}, {"+011", "+101"},
      // part 4(i) chain
      {"+011", "-001"}, {"-001", "-010"}, {"-010", "-100"},
      // part 4(ii): -100 -> +001 after 3k+1 steps, through the period-3 loop
      {"-100", "+001"}, {"-010", "+011"},
  };
  return e;
}
}  // namespace

bool flowchart_edge(const std::string& from, const std::string& to) { return edges().count({from, to}) > 0; }

FlowchartReport flowchart_check(const MatchingResult& r, const FieldPtr& f, const Param& alpha, double eps) {
  if (!f->is_multinacci() || f->degree() != 3) throw Error(Errc::InvalidArgument, "tribonacci field required");
  FlowchartReport rep;
  auto G = GenBeta<double>(alpha.value, f->approx(), 0);
  std::optional<GenBeta<FieldElement>> Ge;
  std::optional<FieldElement> pe;
  if (alpha.exact) {
    Ge.emplace(embed(*alpha.exact, f), FieldElement::generator(f));
    pe = Ge->fixed_point();
  }
  double p = G.fixed_point();
  for (size_t i = 0; i + 1 < r.trace.size(); ++i) {
    const auto& a = r.trace[i];
    const auto& b = r.trace[i + 1];
    if (a.state.n_digits != 3 || (a.state.sign == 0) != a.state.all_zero())
      throw Error(Errc::InvalidArgument, "state outside the flowchart alphabet: " + a.state.code());
    if (a.state.all_zero()) break;
    if (std::abs(a.x - p) >= eps) {
      ++rep.skipped_far;
      continue;
    }
    // branches of the ideal pair (p, p - sign d) must equal the ones taken
    int kp, kq;
    if (Ge) {
      FieldElement v = a.state.value(f);
      FieldElement q = *pe - (a.state.sign > 0 ? v : -v);
      if (q < 0L || q > 1L) {
        ++rep.skipped_nonideal;
        continue;
      }
      kp = Ge->eval(*pe).symbol;
      kq = Ge->eval(q).symbol;
    } else {
      double q = p - a.state.sign * a.state.value_double(f);
      if (q < 0 || q > 1) {
        ++rep.skipped_nonideal;
        continue;
      }
      kp = G.eval(p).symbol;
      kq = G.eval(q).symbol;
    }
    if (kp != b.kx || kq != b.ky) {
      ++rep.skipped_nonideal;
      continue;
    }
    ++rep.audited;
    std::string from = a.state.code(), to = b.state.code();
    ++rep.edge_counts[from + "->" + to];
    if (!flowchart_edge(from, to)) rep.off_graph.push_back({b.state.step, from, to});
  }
  return rep;
}

void write_trace_csv(std::ostream& os, const MatchingResult& r, const FieldPtr& f) {
  os << "n,sign,e,d_float,d_exact\n";
  std::vector<FieldElement> cache;
  for (const auto& t : r.trace) {
    os << t.state.step << ',' << (t.state.sign > 0 ? "+" : t.state.sign < 0 ? "-" : "0") << ','
       << t.state.digits() << ',';
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", t.d_float);
    os << buf << ',';
    if (f->is_multinacci()) {
      FieldElement v = t.state.value(f);
      for (size_t i = 0; i < v.coeffs().size(); ++i) os << (i ? ";" : "") << v.coeffs()[i].get_str();
    }
    os << '\n';
  }
}

std::string result_json(const MatchingResult& r, const FieldPtr& f, bool with_trace) {
  nlohmann::ordered_json j;
  j["outcome"] = outcome_name(r.outcome);
  j["kappa"] = r.outcome == Outcome::Matched ? nlohmann::ordered_json(r.kappa) : nlohmann::ordered_json(nullptr);
  j["period"] = r.period;
  j["iterations"] = r.iterations;
  j["mode"] = mode_name(r.mode_used);
  j["field"] = f->describe();
  j["boundary"] = r.boundary;
  j["escalated"] = r.escalated;
  j["precision_exhausted"] = r.precision_exhausted;
  j["orbit_distance_mode"] = r.orbit_distance_mode;
  j["guard_hits"] = r.guard_hits;
  j["max_discrepancy"] = r.max_discrepancy;
  if (r.float_bits) j["float_bits"] = r.float_bits;
  if (r.float_kappa) j["float_kappa"] = *r.float_kappa;
  j["diagnostics"] = r.diagnostics;
  if (with_trace) {
    auto& t = j["trace"] = nlohmann::ordered_json::array();
    for (const auto& s : r.trace)
      t.push_back({{"n", s.state.step}, {"code", s.state.code()}, {"x", s.x}, {"y", s.y}, {"kx", s.kx},
                   {"ky", s.ky}, {"guard", s.guard}, {"d", s.d_float}});
  }
  return j.dump(2);
}

}  // namespace betamatch
