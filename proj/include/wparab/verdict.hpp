#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wparab/radial/improper.hpp"

namespace wparab {

enum class Outcome { parabolic, hyperbolic, inconclusive };

enum class Criterion { thm32, thm33, cor_useful, cor_radialcase, cor_radial2, cor_translating, ahlfors_direct };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::parabolic: return "parabolic";
    case Outcome::hyperbolic: return "hyperbolic";
    default: return "inconclusive";
  }
}

inline const char* to_string(Criterion c) {
  static const char* names[] = {"thm32", "thm33", "cor_useful", "cor_radialcase", "cor_radial2", "cor_translating", "ahlfors_direct"};
  return names[static_cast<int>(c)];
}

inline std::optional<Criterion> criterion_from_string(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(Criterion::ahlfors_direct); ++k)
    if (s == to_string(static_cast<Criterion>(k))) return static_cast<Criterion>(k);
  return std::nullopt;
}

struct HypothesisCheck {
  enum class Status { holds, fails, window_only };
  enum class Source { sampled, asserted, hint };

  std::string name;
  Status status = Status::holds;
  // Where the inequality broke: a radius, and for submanifold checks the parameter point.
  std::optional<double> witness_t;
  std::vector<double> witness_point;
  double worst_margin = 0.0;  // smallest slack found (negative when failing)
  std::vector<double> window_lo, window_hi;
  int samples = 0;
  Source source = Source::sampled;
  std::string note;

  bool holds() const { return status == Status::holds; }
};

inline const char* to_string(HypothesisCheck::Status s) {
  switch (s) {
    case HypothesisCheck::Status::holds: return "holds";
    case HypothesisCheck::Status::fails: return "fails";
    default: return "window_only";
  }
}

inline const char* to_string(HypothesisCheck::Source s) {
  switch (s) {
    case HypothesisCheck::Source::sampled: return "sampled";
    case HypothesisCheck::Source::asserted: return "asserted";
    default: return "hint";
  }
}

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  Criterion criterion = Criterion::ahlfors_direct;
  std::vector<HypothesisCheck> checks;
  std::optional<IntegralVerdict> integral_evidence;
  // rho -> bound on the submanifold capacity per the comparison theorem.
  std::function<double(double)> capacity_bound;
  double t0 = 0.0;

  // Parabolic/Hyperbolic only with every check holding and a decisive integral.
  bool sound() const {
    if (outcome == Outcome::inconclusive) return true;
    if (!integral_evidence || !integral_evidence->decisive()) return false;
    for (const auto& c : checks)
      if (!c.holds()) return false;
    return true;
  }
};

}  // namespace wparab
