#pragma once

#include <optional>
#include <string>

#include "betamatch/algebra.hpp"

namespace betamatch {

enum class Mode { Float, Exact, Both };
enum class MapKind { SkewTent, GenBeta };

Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);
std::string kind_name(MapKind k);

// A real parameter, optionally with an exact value in some field.
struct Param {
  double value = 0;
  std::optional<FieldElement> exact;
  std::string text;

  static Param from_double(double v);
  static Param from_exact(const FieldElement& e, std::string text = {});
  bool is_exact() const { return exact.has_value(); }
};

// Exact expression in Q(beta): rationals, decimals (read exactly), "beta" or "b",
// integer powers, + - * / and parentheses, or a coefficient list "[c0,c1,...]".
FieldElement parse_exact(const std::string& s, const FieldPtr& f);
// exact if the text parses exactly, otherwise a plain double
Param parse_param(const std::string& s, const FieldPtr& f);

// "multinacci(3)", "pisot(1,-3,1)" (monic, low to high), "tribonacci", "golden"
FieldPtr parse_field(const std::string& s);

struct MapParams {
  MapKind kind = MapKind::GenBeta;
  Param alpha, beta;
  FieldPtr field;  // shared field of exact parameters, null when float only

  bool exact() const { return alpha.is_exact() && beta.is_exact(); }
  std::string str() const;
};

// "skewtent:alpha=0.4,beta=0.9", "genbeta:alpha=1/2,beta=multinacci(3)"
MapParams parse_map_spec(const std::string& s);
MapParams make_genbeta(const FieldPtr& f, const Param& alpha);
// validates the family's parameter region, throws OutOfDomain
void validate(const MapParams& m);

std::string exact_string(const FieldElement& e);

}  // namespace betamatch
