#include "betamatch/params.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace betamatch {

Mode parse_mode(const std::string& s) {
  if (s == "float") return Mode::Float;
  if (s == "exact") return Mode::Exact;
  if (s == "both") return Mode::Both;
  throw Error(Errc::Parse, "unknown mode '" + s + "'");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Float: return "float";
    case Mode::Exact: return "exact";
    case Mode::Both: return "both";
  }
  return "?";
}

std::string kind_name(MapKind k) { return k == MapKind::SkewTent ? "skewtent" : "genbeta"; }

Param Param::from_double(double v) {
  Param p;
  p.value = v;
  std::ostringstream os;
  os.precision(17);
  os << v;
  p.text = os.str();
  return p;
}

Param Param::from_exact(const FieldElement& e, std::string text) {
  Param p;
  p.value = e.to_double();
  p.exact = e;
  p.text = text.empty() ? exact_string(e) : std::move(text);
  return p;
}

std::string exact_string(const FieldElement& e) {
  if (e.is_rational()) return e.coeffs()[0].get_str();
  return e.str();
}

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& s, FieldPtr f) : s_(s), f_(std::move(f)) {}

  FieldElement parse() {
    FieldElement v = expr();
    skip();
    if (i_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  const std::string& s_;
  FieldPtr f_;
  size_t i_ = 0;

  [[noreturn]] void fail(const std::string& why) {
    throw Error(Errc::Parse, "'" + s_ + "': " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  FieldElement expr() {
    FieldElement v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  FieldElement term() {
    FieldElement v = unary();
    for (;;) {
      if (eat('*'))
        v *= unary();
      else if (eat('/')) {
        FieldElement d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else
        return v;
    }
  }
  FieldElement unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  FieldElement power() {
    FieldElement b = atom();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      skip();
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (st == i_) fail("expected integer exponent");
      int k = std::stoi(s_.substr(st, i_ - st));
      if (neg) {
        if (b.is_zero()) fail("zero to negative power");
        b = b.inverse();
      }
      FieldElement r(f_, 1L);
      for (int j = 0; j < k; ++j) r *= b;
      return r;
    }
    return b;
  }
  FieldElement atom() {
    skip();
    if (eat('(')) {
      FieldElement v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (eat('[')) {
      std::vector<mpq_class> c;
      do {
        FieldElement q = expr();
        if (!q.is_rational()) fail("coefficient list entries must be rational");
        c.push_back(q.coeffs()[0]);
      } while (eat(','));
      if (!eat(']')) fail("missing ']'");
      if (static_cast<int>(c.size()) > f_->degree()) fail("too many coefficients");
      return FieldElement(f_, c);
    }
    if (s_.compare(i_, 4, "beta") == 0) {
      i_ += 4;
      return gen();
    }
    if (i_ < s_.size() && s_[i_] == 'b') {
      ++i_;
      return gen();
    }
    size_t st = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (st == i_) fail("unexpected character");
    std::string lit = s_.substr(st, i_ - st);
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '-' || s_[j] == '+')) ++j;
      size_t ds = j;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      if (ds == j) fail("bad exponent");
      long e10 = std::stol(s_.substr(i_ + 1, j - i_ - 1));
      i_ = j;
      mpq_class q = decimal(lit);
      mpz_class p10;
      mpz_ui_pow_ui(p10.get_mpz_t(), 10, std::labs(e10));
      if (e10 >= 0)
        q *= p10;
      else
        q /= p10;
      return FieldElement(f_, q);
    }
    return FieldElement(f_, decimal(lit));
  }
  FieldElement gen() {
    if (f_->is_rational()) fail("beta is not available for rational parameters");
    return FieldElement::generator(f_);
  }
  mpq_class decimal(const std::string& lit) {
    auto dot = lit.find('.');
    if (lit.find('.', dot == std::string::npos ? 0 : dot + 1) != std::string::npos &&
        dot != std::string::npos)
      fail("bad number");
    std::string digits = lit;
    size_t frac = 0;
    if (dot != std::string::npos) {
      frac = lit.size() - dot - 1;
      digits.erase(dot, 1);
    }
    if (digits.empty()) fail("bad number");
    mpz_class num(digits, 10), den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
};

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

FieldElement parse_exact(const std::string& s, const FieldPtr& f) { return ExprParser(s, f).parse(); }

Param parse_param(const std::string& s, const FieldPtr& f) {
  try {
    return Param::from_exact(parse_exact(s, f ? f : rational_field()), s);
  } catch (const Error&) {
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(Errc::Parse, "cannot parse parameter '" + s + "'");
    }
    if (used != s.size()) throw Error(Errc::Parse, "cannot parse parameter '" + s + "'");
    Param p = Param::from_double(v);
    p.text = s;
    return p;
  }
}

FieldPtr parse_field(const std::string& text) {
  std::string s = trim(text);
  if (s == "golden") return make_multinacci(2);
  if (s == "tribonacci") return make_multinacci(3);
  if (s == "tetrabonacci") return make_multinacci(4);
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw Error(Errc::Parse, "unknown field '" + s + "'");
  std::string name = s.substr(0, open), args = s.substr(open + 1, s.size() - open - 2);
  if (name == "multinacci") {
    int n = 0;
    try {
      n = std::stoi(args);
    } catch (const std::exception&) {
      throw Error(Errc::Parse, "bad multinacci degree '" + args + "'");
    }
    return make_multinacci(n);
  }
  if (name == "pisot") {
    std::vector<mpz_class> c;
    for (auto& t : split_top(args, ',')) {
      try {
        c.emplace_back(trim(t), 10);
      } catch (const std::exception&) {
        throw Error(Errc::Parse, "bad polynomial coefficient '" + t + "'");
      }
    }
    return make_pisot(c);
  }
  throw Error(Errc::Parse, "unknown field '" + s + "'");
}

MapParams make_genbeta(const FieldPtr& f, const Param& alpha) {
  MapParams m;
  m.kind = MapKind::GenBeta;
  m.field = f;
  m.beta = Param::from_exact(FieldElement::generator(f), "beta");
  m.alpha = alpha;
  if (alpha.exact) m.alpha.exact = embed(*alpha.exact, f);
  validate(m);
  return m;
}

MapParams parse_map_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(Errc::Parse, "map spec needs 'kind:...': " + spec);
  MapParams m;
  std::string kind = trim(spec.substr(0, colon));
  if (kind == "skewtent")
    m.kind = MapKind::SkewTent;
  else if (kind == "genbeta")
    m.kind = MapKind::GenBeta;
  else
    throw Error(Errc::Parse, "unknown map kind '" + kind + "'");
  std::string alpha_text, beta_text;
  for (auto& kv : split_top(spec.substr(colon + 1), ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(Errc::Parse, "expected key=value in '" + kv + "'");
    std::string k = trim(kv.substr(0, eq)), v = trim(kv.substr(eq + 1));
    if (k == "alpha")
      alpha_text = v;
    else if (k == "beta")
      beta_text = v;
    else
      throw Error(Errc::Parse, "unknown map key '" + k + "'");
  }
  if (alpha_text.empty() || beta_text.empty()) throw Error(Errc::Parse, "map spec needs alpha and beta");

  FieldPtr f;
  try {
    f = parse_field(beta_text);
  } catch (const Error&) {
  }
  if (f) {
    m.field = f;
    m.beta = Param::from_exact(FieldElement::generator(f), beta_text);
  } else {
    m.beta = parse_param(beta_text, nullptr);
    if (m.beta.exact) m.field = rational_field();
  }
  m.alpha = parse_param(alpha_text, m.field ? m.field : rational_field());
  if (m.alpha.exact && !m.field) m.alpha.exact.reset();  // float beta: alpha stays float
  if (m.alpha.exact) m.alpha.exact = embed(*m.alpha.exact, m.field);
  validate(m);
  return m;
}

void validate(const MapParams& m) {
  double a = m.alpha.value, b = m.beta.value;
  if (m.kind == MapKind::SkewTent) {
    bool ok;
    if (m.exact())
      ok = *m.alpha.exact > 0 && *m.alpha.exact < 1 && *m.beta.exact <= 1 &&
           *m.beta.exact > *m.alpha.exact && *m.beta.exact > 1 - *m.alpha.exact;
    else
      ok = a > 0 && a < 1 && b <= 1 && b > std::max(a, 1 - a);
    if (!ok) throw Error(Errc::OutOfDomain, "skew tent needs 0<alpha<1 and max(alpha,1-alpha)<beta<=1");
  } else {
    bool ok;
    if (m.exact())
      ok = *m.alpha.exact >= 0 && *m.alpha.exact < 1 && *m.beta.exact > 1;
    else
      ok = a >= 0 && a < 1 && b > 1;
    if (!ok) throw Error(Errc::OutOfDomain, "generalised beta map needs beta>1 and 0<=alpha<1");
  }
}

std::string MapParams::str() const {
  return kind_name(kind) + ":alpha=" + alpha.text + ",beta=" + beta.text;
}

}  // namespace betamatch
