#include "flightoed/constraints.hpp"

#include "flightoed/errors.hpp"
#include "flightoed/units.hpp"

namespace flightoed {

EnvelopeConstraints EnvelopeConstraints::defaults(const TrimCondition& trim) {
  EnvelopeConstraints c;
  const double d = deg2rad(1.0);
  c.envelope = {
      {"V_T", {12.0, 30.0}},         {"beta", {-20 * d, 20 * d}}, {"alpha", {-8 * d, 20 * d}},
      {"phi", {-35 * d, 35 * d}},    {"theta", {-30 * d, 40 * d}}, {"p", {-60 * d, 60 * d}},
      {"q", {-40 * d, 40 * d}},      {"r", {-40 * d, 40 * d}},
  };
  const std::map<std::string, Bound> absolute = {
      {"V_T", {17.0, 23.0}},         {"beta", {-7.5 * d, 7.5 * d}},        {"alpha", {-4.36 * d, 3.64 * d}},
      {"phi", {-28 * d, 28 * d}},    {"theta", {-28.77 * d, 27.33 * d}},    {"p", {-48 * d, 48 * d}},
      {"q", {-32 * d, 32 * d}},      {"r", {-32 * d, 32 * d}},
  };
  for (const auto& [name, b] : absolute) {
    const double t = trim_value(name, trim);
    c.oed[name] = {b.lower - t, b.upper - t};
  }
  for (const char* defl : {"delta_a", "delta_e", "delta_r"}) {
    c.oed[defl] = {-5 * d, 5 * d};
    c.oed[std::string(defl) + "_rate"] = {-3.25, 3.25};
  }
  return c;
}

std::optional<Bound> EnvelopeConstraints::oed_bound(std::string_view label) const {
  auto it = oed.find(std::string(label));
  if (it == oed.end()) return std::nullopt;
  return it->second;
}

std::optional<Bound> EnvelopeConstraints::envelope_bound(std::string_view label) const {
  auto it = envelope.find(std::string(label));
  if (it == envelope.end()) return std::nullopt;
  return it->second;
}

double EnvelopeConstraints::trim_value(std::string_view label, const TrimCondition& trim) {
  if (label == "V_T") return trim.airspeed;
  if (label == "alpha") return trim.angle_of_attack;
  if (label == "theta") return trim.pitch;
  return 0.0;
}

void EnvelopeConstraints::validate(const TrimCondition& trim) const {
  if (!(safety_margin >= 0.0 && safety_margin < 1.0)) throw ValidationError("constraints: safety margin must be in [0, 1)");
  for (const auto& [name, b] : envelope)
    if (!(b.lower < b.upper)) throw ValidationError("constraints: empty envelope for '" + name + "'");
  for (const auto& [name, b] : oed) {
    if (!(b.lower < 0.0 && b.upper > 0.0))
      throw ValidationError("constraints: OED bounds for '" + name + "' must contain trim");
    auto env = envelope_bound(name);
    if (!env) continue;
    const double t = trim_value(name, trim);
    if (b.lower + t < env->lower - 1e-12 || b.upper + t > env->upper + 1e-12)
      throw ValidationError("constraints: OED bounds for '" + name + "' leave the flight envelope");
    if (b.span() > (1.0 - safety_margin + 0.005) * env->span())
      throw ValidationError("constraints: OED bounds for '" + name + "' violate the safety margin");
  }
}

}  // namespace flightoed
