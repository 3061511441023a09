#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wparab/criteria/comparison.hpp"
#include "wparab/criteria/corollaries.hpp"
#include "wparab/geometry/catalog.hpp"
#include "wparab/geometry/identities.hpp"
#include "wparab/stochastic/verify.hpp"

namespace wparab::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "1.0";
inline constexpr const char* kCurvesFormatVersion = "1.0";

// Malformed configuration: the whole run is rejected.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t scenario_seed(std::uint64_t master, const std::string& id) { return splitmix64(master ^ fnv1a(id)); }

inline json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

inline json vec_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

// Typed access to scenario parameters.
class Params {
 public:
  explicit Params(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InvalidArgument(where_ + " must be an object");
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& raw(const char* key) const { return j_.at(key); }

  double number(const char* key) const {
    if (!has(key)) throw InvalidArgument(where_ + "." + key + " is required");
    const json& v = j_.at(key);
    if (!v.is_number()) throw InvalidArgument(where_ + "." + key + " must be a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  long integer(const char* key, long fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw InvalidArgument(where_ + "." + key + " must be an integer");
    return v.get<long>();
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw InvalidArgument(where_ + "." + key + " must be a string");
    return v.get<std::string>();
  }
  std::string text(const char* key) const {
    if (!has(key)) throw InvalidArgument(where_ + "." + key + " is required");
    return text(key, "");
  }

  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw InvalidArgument(where_ + "." + key + " must be true or false");
    return v.get<bool>();
  }

  Vec vector(const char* key) const {
    if (!has(key)) throw InvalidArgument(where_ + "." + key + " is required");
    const json& v = j_.at(key);
    if (!v.is_array() || v.empty() || v.size() > static_cast<std::size_t>(kMaxDim))
      throw InvalidArgument(where_ + "." + key + " must be an array of 1.." + std::to_string(kMaxDim) + " numbers");
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw InvalidArgument(where_ + "." + key + " must contain numbers");
      out(static_cast<int>(i)) = v[i].get<double>();
    }
    return out;
  }

  std::vector<double> list(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw InvalidArgument(where_ + "." + key + " must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw InvalidArgument(where_ + "." + key + " must contain numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

 private:
  json j_;
  std::string where_;
};

// Catalog entries: a bare name or an object {"name": ..., params}.
inline std::pair<std::string, json> catalog_entry(const json& spec, const std::string& where,
                                                  const std::vector<std::string>& names = {}) {
  if (spec.is_string()) {
    std::string s = spec.get<std::string>();
    bool word = !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c) || c == '_'; });
    if (!names.empty() && (!word || s == "t"))
      return {"custom", json{{"expr", s}}};
    return {s, json::object()};
  }
  if (spec.is_object() && spec.contains("name") && spec.at("name").is_string()) return {spec.at("name").get<std::string>(), spec};
  if (spec.is_object() && spec.contains("expr")) return {"custom", spec};
  throw InvalidArgument(where + " must be a catalog name or an object with \"name\"");
}

inline AsymptoticHint hint_from(const json& j) {
  if (j.is_null()) return {};
  Params p(j, "hint");
  std::string kind = p.text("kind", "none");
  if (kind == "none") return {};
  if (kind == "eventually_monotone") return AsymptoticHint::eventually_monotone();
  if (kind == "exponential_order") return AsymptoticHint::exponential_order(p.number("param"));
  if (kind == "power_order") return AsymptoticHint::power_order(p.number("param"));
  throw InvalidArgument("unknown hint kind '" + kind + "'");
}

inline RadialProfile custom_profile(const Params& p) {
  RadialProfile r = profiles::from_expression(p.text("expr"), p.number("t_min", 0.0), p.flag("pole_singular", false));
  if (p.has("hint")) r = r.with_hint(hint_from(p.raw("hint")));
  return r;
}

inline RadialProfile warping_from(const json& spec) {
  auto [name, j] = catalog_entry(spec, "model.w", {"euclidean", "hyperbolic", "paraboloid", "custom"});
  Params p(j, "model.w");
  if (name == "euclidean") return profiles::linear();
  if (name == "hyperbolic") return profiles::hyperbolic(p.number("kappa", -1.0));
  if (name == "paraboloid") return profiles::paraboloid_warp(p.number("a", 1.0));
  if (name == "custom") return custom_profile(p);
  throw InvalidArgument("unknown model '" + name + "' (euclidean, hyperbolic, paraboloid, custom)");
}

inline RadialProfile weight_from(const json& spec, const RadialProfile& w) {
  auto [name, j] = catalog_entry(spec, "model.f", {"zero", "gaussian", "antigaussian", "power", "logpow", "custom"});
  Params p(j, "model.f");
  RadialProfile f;
  if (name == "zero") f = profiles::zero();
  else if (name == "gaussian") f = profiles::gaussian();
  else if (name == "antigaussian") f = profiles::antigaussian();
  else if (name == "power") f = profiles::power(p.number("a"), p.number("k"));
  else if (name == "logpow") f = profiles::log_power(p.number("k"), w);
  else if (name == "custom") return custom_profile(p);
  else throw InvalidArgument("unknown weight '" + name + "' (zero, gaussian, antigaussian, power, logpow, custom)");
  if (p.has("hint")) f = f.with_hint(hint_from(p.raw("hint")));
  return f;
}

struct Setting {
  WeightedModel model;
  bool euclidean;
  Ambient ambient;
  std::optional<ImmersedSubmanifold> P;
};

inline WeightedModel model_from(const json& j) {
  Params p(j, "model");
  long m = p.integer("m", 0);
  if (m < 2 || m > kMaxDim) throw InvalidArgument("model.m must be in 2.." + std::to_string(kMaxDim));
  RadialProfile w = warping_from(p.has("w") ? p.raw("w") : json("euclidean"));
  RadialProfile f = weight_from(p.has("f") ? p.raw("f") : json("zero"), w);
  return WeightedModel(static_cast<int>(m), w, f);
}

inline ImmersedSubmanifold submanifold_from(const json& spec, const Ambient& A) {
  auto [name, j] = catalog_entry(spec, "submanifold");
  Params p(j, "submanifold");
  bool fd = p.flag("finite_difference", false);
  const int m = A.dim();
  if (name == "sphere") return catalog::sphere(A, p.number("a"), fd);
  if (name == "plane") {
    if (p.has("basis")) {
      const json& b = p.raw("basis");
      if (!b.is_array() || b.empty()) throw InvalidArgument("submanifold.basis must be a non-empty array of vectors");
      Mat B(m, static_cast<int>(b.size()));
      for (std::size_t c = 0; c < b.size(); ++c) {
        if (!b[c].is_array() || static_cast<int>(b[c].size()) != m) throw InvalidArgument("submanifold.basis vectors need m entries");
        for (int k = 0; k < m; ++k) B(k, static_cast<int>(c)) = b[c][k].get<double>();
      }
      Vec point = p.has("point") ? p.vector("point") : Vec(Vec::Zero(m));
      return catalog::affine_plane(A, B, point, fd);
    }
    Vec a = p.vector("normal");
    if (a.size() != m || !(a.norm() > 0)) throw InvalidArgument("submanifold.normal must be a non-zero vector with m entries");
    return catalog::hyperplane(A, a, p.number("offset", 0.0), fd);
  }
  if (name == "cylinder") return catalog::cylinder(A, p.number("a"), static_cast<int>(p.integer("k", 2)), fd);
  if (name == "graph") {
    std::vector<std::string> vars;
    for (int i = 0; i < m - 1; ++i) vars.push_back("x" + std::to_string(i + 1));
    return catalog::graph(A, Expression(p.text("expr"), vars), fd);
  }
  if (name == "helicoid") return catalog::helicoid(A, p.number("pitch", 1.0), fd);
  if (name == "grim_curve") return catalog::grim_curve(A, fd);
  if (name == "ambient") return catalog::identity(A);
  throw InvalidArgument("unknown submanifold '" + name + "' (sphere, plane, cylinder, graph, helicoid, grim_curve, ambient)");
}

inline Setting setting_from(const json& scenario) {
  if (!scenario.contains("model")) throw InvalidArgument("scenario.model is required");
  WeightedModel M = model_from(scenario.at("model"));
  bool euclid = M.w().profile().label() == profiles::linear().label();
  Ambient A = euclid ? Ambient::euclidean(M.dim(), weights::radial(M.dim(), M.f())) : Ambient::model_chart(M);
  Setting s{M, euclid, A, std::nullopt};
  if (scenario.contains("submanifold") && !scenario.at("submanifold").is_null()) s.P = submanifold_from(scenario.at("submanifold"), A);
  return s;
}

inline ParamBox window_from(const Params& p, const ParamBox& fallback) {
  if (!p.has("window")) return fallback;
  Params w(p.raw("window"), "params.window");
  ParamBox b{w.vector("lo"), w.vector("hi")};
  if (b.lo.size() != fallback.lo.size() || b.hi.size() != fallback.lo.size())
    throw InvalidArgument("params.window must have one entry per parameter");
  return b;
}

// Serialization.

inline json to_json(const IntegralVerdict& v) {
  return json{{"kind", to_string(v.kind)},       {"value", num(v.value)},         {"error_bound", num(v.error_bound)},
              {"cutoffs", vec_json(v.cutoffs)}, {"partials", vec_json(v.partials)}, {"hint_used", v.hint_used},
              {"reason", v.reason}};
}

inline json to_json(const HypothesisCheck& c) {
  return json{{"name", c.name},
              {"status", to_string(c.status)},
              {"source", to_string(c.source)},
              {"samples", c.samples},
              {"worst_margin", num(c.worst_margin)},
              {"witness_t", c.witness_t ? num(*c.witness_t) : json(nullptr)},
              {"witness_point", vec_json(c.witness_point)},
              {"window_lo", vec_json(c.window_lo)},
              {"window_hi", vec_json(c.window_hi)},
              {"note", c.note}};
}

inline json to_json(const Verdict& v, const std::vector<double>& bound_rho) {
  json checks = json::array();
  for (const auto& c : v.checks) checks.push_back(to_json(c));
  json bound = json::array();
  if (v.capacity_bound)
    for (double rho : bound_rho) {
      double b;
      try {
        b = v.capacity_bound(rho);
      } catch (const Error&) {
        b = std::numeric_limits<double>::quiet_NaN();
      }
      bound.push_back(json{{"rho", rho}, {"value", num(b)}});
    }
  return json{{"outcome", to_string(v.outcome)},
              {"criterion", to_string(v.criterion)},
              {"t0", num(v.t0)},
              {"sound", v.sound()},
              {"checks", checks},
              {"integral_evidence", v.integral_evidence ? to_json(*v.integral_evidence) : json(nullptr)},
              {"capacity_bound", bound}};
}

inline json to_json(const HitEstimate& h) {
  return json{{"p", num(h.p)},
              {"N", h.N},
              {"hits", h.hits},
              {"misses", h.misses},
              {"censored", h.censored},
              {"chart_exits", h.chart_exits},
              {"ci95", json::array({num(h.ci_lo), num(h.ci_hi)})},
              {"se", num(h.se)},
              {"mean_exit_time", num(h.mean_exit_time)},
              {"dt", num(h.dt)},
              {"bridge_crossings", h.bridge_crossings},
              {"large_step_fraction", num(h.large_step_fraction)},
              {"resolution_warning", h.resolution_warning}};
}

struct RunOptions {
  std::filesystem::path out_dir = "wparab-out";
  int workers = 1;
  std::uint64_t seed = 1;
  std::string only_task;  // run only scenarios with this task
};

struct ScenarioContext {
  const json& scenario;
  std::string id;
  std::uint64_t seed;
  const RunOptions& run;
  json resolved = json::object();
};

inline std::string sanitize(const std::string& id) {
  std::string s;
  for (char c : id) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return s;
}

// Tasks.

inline json task_classify(ScenarioContext& ctx) {
  Setting st = setting_from(ctx.scenario);
  Params p(ctx.scenario.value("params", json::object()), "params");
  std::string crit_name = p.text("criterion", "ahlfors_direct");
  auto crit = criterion_from_string(crit_name);
  if (!crit) throw InvalidArgument("unknown criterion '" + crit_name + "'");
  const WeightedModel& M = st.model;
  int n = static_cast<int>(p.integer("n", M.dim() - 1));
  AsymptoticHint hint = p.has("hint") ? hint_from(p.raw("hint")) : AsymptoticHint{};
  ImproperOptions io;
  std::vector<double> bound_rho = p.list("bound_rho", {});
  ctx.resolved["n"] = n;
  ctx.resolved["improper"] = json{{"abs", io.tol.abs}, {"rel", io.tol.rel}, {"divergence_threshold", io.divergence_threshold},
                                  {"max_doublings", io.max_doublings}};

  if (*crit == Criterion::ahlfors_direct) {
    double t0 = p.number("t0", std::max(1.0, 2.0 * M.domain_start()));
    ctx.resolved["t0"] = t0;
    Verdict v = ahlfors_classify(M, t0, hint.kind == AsymptoticHint::Kind::none ? M.f().hint() : hint, io);
    if (bound_rho.empty()) bound_rho = {t0, 2.0 * t0, 4.0 * t0};
    return json{{"verdict", to_json(v, bound_rho)}};
  }

  ClassifyOptions opt;
  opt.assert_A = p.flag("assert_A", false);
  opt.hint = hint;
  opt.improper = io;
  std::optional<SubmanifoldEvidence> ev;
  if (st.P) ev = SubmanifoldEvidence{&*st.P, window_from(p, st.P->sample_box), p.flag("assert_beyond_window", false)};
  if (ev) ctx.resolved["window"] = json{{"lo", vec_json(ev->window.lo)}, {"hi", vec_json(ev->window.hi)}};

  Verdict v;
  if (*crit == Criterion::thm32 || *crit == Criterion::thm33) {
    bool parabolic = *crit == Criterion::thm32;
    RadialProfile alpha = p.has("alpha") ? profiles::from_expression(p.text("alpha"), 0.0, true) : profiles::derivative(M.f());
    WeightedModel base(M.dim(), M.w().profile(), profiles::zero());
    double t0 = p.has("t0") && p.raw("t0").is_number() ? p.number("t0") : balance_anchor(base, n, alpha, parabolic ? -1.0 : 1.0);
    ctx.resolved["t0"] = t0;
    ComparisonSetup S(base, n, t0, alpha);
    v = parabolic ? classify_thm32(S, ev, opt) : classify_thm33(S, ev, opt);
  } else {
    CorollaryRequest q;
    q.which = *crit;
    q.n = n;
    std::string dir = p.text("direction", "parabolic");
    if (dir != "parabolic" && dir != "hyperbolic") throw InvalidArgument("params.direction must be parabolic or hyperbolic");
    q.direction = dir == "parabolic" ? Direction::parabolic : Direction::hyperbolic;
    q.c = p.number("c", 0.0);
    if (p.has("beta")) q.beta = profiles::from_expression(p.text("beta"), 0.0, true);
    q.k = p.number("k", 0.0);
    q.offset = p.number("offset", 0.0);
    q.moreover = p.flag("moreover", false);
    if (p.has("t0") && p.raw("t0").is_number()) q.t0 = p.number("t0");
    q.submanifold = ev;
    q.options = opt;
    v = corollary_shortcut(M, q);
    ctx.resolved["t0"] = v.t0;
  }
  if (bound_rho.empty()) bound_rho = {v.t0, 2.0 * v.t0, 4.0 * v.t0};
  json out{{"verdict", to_json(v, bound_rho)}};
  if (v.criterion != Criterion::ahlfors_direct) {
    double t0 = std::max(v.t0, 2.0 * M.domain_start());
    out["ahlfors"] = to_json(ahlfors_classify(M, t0, M.f().hint(), io), {});
  }
  return out;
}

inline json task_capacity(ScenarioContext& ctx) {
  Setting st = setting_from(ctx.scenario);
  Params p(ctx.scenario.value("params", json::object()), "params");
  double rho = p.number("rho");
  Tolerance tol;
  tol.abs = p.number("abs_tol", tol.abs);
  tol.rel = p.number("rel_tol", tol.rel);
  ctx.resolved["tolerance"] = json{{"abs", tol.abs}, {"rel", tol.rel}, {"max_intervals", tol.max_intervals}};
  bool infinite = p.has("R") && p.raw("R").is_string() && p.raw("R").get<std::string>() == "inf";
  if (infinite) {
    AsymptoticHint hint = p.has("hint") ? hint_from(p.raw("hint")) : st.model.f().hint();
    CapacityAtInfinity c = capacity_to_infinity(st.model, rho, hint);
    return json{{"rho", rho}, {"R", "inf"}, {"capacity", c.capacity ? num(*c.capacity) : json(nullptr)}, {"integral", to_json(c.verdict)}};
  }
  double R = p.number("R");
  CapacityReport rep = capacity_potential(st.model, rho, R, tol);
  json pot = json::array();
  for (double s : p.list("at", {})) pot.push_back(json{{"t", s}, {"phi", num(rep.potential(s))}});
  return json{{"rho", rho},
              {"R", R},
              {"capacity", num(rep.capacity)},
              {"quadrature_error", num(rep.quadrature_error)},
              {"ode_residual", num(rep.ode_residual)},
              {"potential", pot}};
}

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json task_curves(ScenarioContext& ctx) {
  Setting st = setting_from(ctx.scenario);
  const WeightedModel& M = st.model;
  Params p(ctx.scenario.value("params", json::object()), "params");
  double lo = p.number("t_lo"), hi = p.number("t_hi");
  long samples = p.integer("samples", 100);
  int n = static_cast<int>(p.integer("n", M.dim() - 1));
  if (samples < 2) throw InvalidArgument("params.samples must be >= 2");
  if (!(hi > lo)) throw InvalidArgument("params.t_hi must exceed params.t_lo");
  M.require_domain(lo);
  std::optional<CapacityReport> cap;
  if (p.has("rho") || p.has("R")) cap = capacity_potential(M, p.number("rho"), p.number("R"));
  bool volume = M.pole_regular();
  std::vector<std::string> cols = {"t", "area"};
  if (volume) cols.push_back("volume");
  cols.insert(cols.end(), {"H", "Hh_n"});
  if (cap) cols.push_back("phi");

  std::string text;
  for (std::size_t i = 0; i < cols.size(); ++i) text += (i ? "," : "") + cols[i];
  text += "\n";
  for (long i = 0; i < samples; ++i) {
    double t = lo + (hi - lo) * double(i) / double(samples - 1);
    std::vector<double> row = {t, M.sphere_area(t)};
    if (volume) row.push_back(M.ball_volume(t));
    row.push_back(M.mean_curvature(t));
    row.push_back(M.weighted_mean_curvature(n, t));
    if (cap) row.push_back(t <= cap->rho ? 1.0 : t >= cap->R ? 0.0 : cap->potential(t));
    for (std::size_t k = 0; k < row.size(); ++k) text += (k ? "," : "") + fmt(row[k]);
    text += "\n";
  }
  std::filesystem::create_directories(ctx.run.out_dir);
  std::string file = sanitize(ctx.id) + ".csv";
  std::ofstream(ctx.run.out_dir / file, std::ios::binary) << text;
  ctx.resolved["n"] = n;
  json colj = json::array();
  for (const auto& c : cols) colj.push_back(c);
  return json{{"file", file}, {"format_version", kCurvesFormatVersion}, {"columns", colj}, {"rows", samples}};
}

inline json task_mc(ScenarioContext& ctx) {
  Setting st = setting_from(ctx.scenario);
  Params p(ctx.scenario.value("params", json::object()), "params");
  ImmersedSubmanifold P = st.P ? *st.P : catalog::identity(st.ambient);
  DiffusionSpec spec{P, p.number("dt", 0.0), p.has("seed") ? static_cast<std::uint64_t>(p.integer("seed", 0)) : ctx.seed,
                     static_cast<int>(p.integer("workers", 1)), p.number("max_time", 0.0)};
  ctx.resolved["seed"] = spec.seed;
  Diffusion D(spec);
  std::string mode = p.text("mode", "hit");
  Vec start = p.vector("start");
  if (start.size() != P.n()) throw InvalidArgument("params.start needs one entry per parameter of the submanifold");
  double rho = p.number("rho");
  long N = p.integer("N", 10000);
  ctx.resolved["affine_fast_path"] = D.affine();
  if (mode == "hit") {
    double R = p.number("R");
    HitEstimate h = hit_probability(D, start, rho, R, N);
    json out{{"mode", mode}, {"r_start", num(D.radius(start))}, {"estimate", to_json(h)}};
    if (p.flag("compare_model", false)) {
      CapacityReport cap = capacity_potential(st.model, rho, R);
      out["model_phi"] = num(cap.potential(D.radius(start)));
    }
    return out;
  }
  if (mode == "comparison") {
    std::string crit = p.text("criterion", "thm32");
    auto c = criterion_from_string(crit);
    if (!c || (*c != Criterion::thm32 && *c != Criterion::thm33)) throw InvalidArgument("params.criterion must be thm32 or thm33");
    int n = static_cast<int>(p.integer("n", P.n()));
    RadialProfile alpha = p.has("alpha") ? profiles::from_expression(p.text("alpha"), 0.0, true) : profiles::derivative(st.model.f());
    WeightedModel base(st.model.dim(), st.model.w().profile(), profiles::zero());
    double t0 = p.has("t0") ? p.number("t0") : balance_anchor(base, n, alpha, *c == Criterion::thm32 ? -1.0 : 1.0);
    ctx.resolved["t0"] = t0;
    ComparisonSetup S(base, n, t0, alpha);
    ParamBox win = window_from(p, P.sample_box);
    ClassifyOptions opt;
    ComparisonReport r = comparison_check(D, S, *c, start, rho, p.number("R"), N, win, opt);
    return json{{"mode", mode},
                {"theorem", crit},
                {"r_start", num(r.r_start)},
                {"phi", num(r.phi)},
                {"estimate", to_json(r.hit)},
                {"margin", num(r.margin)},
                {"pass", r.pass},
                {"separation_se", num(r.separation)},
                {"verdict", to_json(r.verdict, {})},
                {"annulus_balance", to_json(r.annulus_balance)}};
  }
  if (mode == "recurrence") {
    std::vector<double> sched = p.list("schedule", {});
    RecurrenceReport r = recurrence_probe(D, start, rho, sched, N);
    json rows = json::array();
    for (std::size_t i = 0; i < sched.size(); ++i) rows.push_back(json{{"R", sched[i]}, {"estimate", to_json(r.estimates[i])}});
    return json{{"mode", mode}, {"rows", rows}, {"nondecreasing", r.nondecreasing}, {"limit", num(r.limit)}, {"limit_se", num(r.limit_se)}};
  }
  throw InvalidArgument("params.mode must be hit, comparison or recurrence");
}

inline json task_identities(ScenarioContext& ctx) {
  Setting st = setting_from(ctx.scenario);
  if (!st.P) throw InvalidArgument("check-identities needs a submanifold");
  const ImmersedSubmanifold& P = *st.P;
  Params p(ctx.scenario.value("params", json::object()), "params");
  long points = p.integer("points", 20);
  RadialProfile psi = profiles::from_expression(p.text("psi", "t^2"));
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ctx.resolved["seed"] = ctx.seed;
  double lemma = 0.0, hh = 0.0, angle = 0.0;
  long angle_points = 0;
  std::string angle_note;
  for (long k = 0; k < points; ++k) {
    Vec u(P.n());
    for (int i = 0; i < P.n(); ++i) u(i) = P.sample_box.lo(i) + U(rng) * (P.sample_box.hi(i) - P.sample_box.lo(i));
    lemma = std::max(lemma, lemma31_residual(P, u, psi).residual);
    hh = std::max(hh, weighted_mean_curvature_norm(geometry_at(P, u)));
    if (angle_note.empty()) {
      try {
        angle = std::max(angle, angle_function_laplacian(P, u).residual);
        ++angle_points;
      } catch (const InvalidArgument& e) {
        angle_note = e.what();
      }
    }
  }
  json out{{"points", points}, {"lemma_residual_max", num(lemma)}, {"weighted_mean_curvature_max", num(hh)}};
  out["angle_residual_max"] = angle_points ? num(angle) : json(nullptr);
  out["angle_note"] = angle_note;
  return out;
}

inline json run_scenario(ScenarioContext& ctx) {
  const std::string task = ctx.scenario.at("task").get<std::string>();
  json report{{"id", ctx.id}, {"task", task}};
  try {
    json result;
    if (task == "classify") result = task_classify(ctx);
    else if (task == "capacity") result = task_capacity(ctx);
    else if (task == "curves") result = task_curves(ctx);
    else if (task == "mc-verify") result = task_mc(ctx);
    else result = task_identities(ctx);
    report["status"] = "ok";
    report["inputs"] = ctx.scenario;
    report["resolved"] = ctx.resolved;
    report["result"] = result;
  } catch (const ComparisonRefused& e) {
    report["status"] = "error";
    report["inputs"] = ctx.scenario;
    report["error"] = json{{"type", "comparison_refused"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["inputs"] = ctx.scenario;
    const char* type = dynamic_cast<const DomainError*>(&e)          ? "domain_error"
                       : dynamic_cast<const ParseError*>(&e)         ? "expression_parse_error"
                       : dynamic_cast<const InvalidArgument*>(&e)    ? "invalid_argument"
                       : dynamic_cast<const NotAttainedError*>(&e)   ? "not_attained"
                       : dynamic_cast<const BracketError*>(&e)       ? "bracket_error"
                       : dynamic_cast<const EvaluationError*>(&e)    ? "evaluation_error"
                       : dynamic_cast<const Error*>(&e)              ? "numerical_error"
                                                                     : "internal_error";
    report["error"] = json{{"type", type}, {"message", e.what()}};
  }
  return report;
}

inline const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {"classify", "capacity", "curves", "mc-verify", "check-identities"};
  return names;
}

// Parses and structurally validates a configuration document.
inline json load_config(const std::string& text) {
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  if (!cfg.contains("scenarios") || !cfg.at("scenarios").is_array()) throw ConfigError("config needs a \"scenarios\" array");
  if (cfg.contains("seed") && !cfg.at("seed").is_number_unsigned()) throw ConfigError("config seed must be a non-negative integer");
  std::vector<std::string> seen;
  std::size_t i = 0;
  for (const auto& s : cfg.at("scenarios")) {
    std::string where = "scenarios[" + std::to_string(i++) + "]";
    if (!s.is_object()) throw ConfigError(where + " must be an object");
    if (!s.contains("id") || !s.at("id").is_string() || s.at("id").get<std::string>().empty())
      throw ConfigError(where + " needs a non-empty string id");
    std::string id = s.at("id").get<std::string>();
    if (std::find(seen.begin(), seen.end(), id) != seen.end()) throw ConfigError(where + " repeats id '" + id + "'");
    seen.push_back(id);
    if (!s.contains("task") || !s.at("task").is_string()) throw ConfigError(where + " needs a task");
    std::string task = s.at("task").get<std::string>();
    const auto& names = task_names();
    if (std::find(names.begin(), names.end(), task) == names.end())
      throw ConfigError(where + " has unknown task '" + task + "'");
    if (s.contains("params") && !s.at("params").is_object()) throw ConfigError(where + ".params must be an object");
  }
  return cfg;
}

struct RunResult {
  json report;
  int errors = 0;
};

inline RunResult run_config(const json& cfg, const RunOptions& opt) {
  const json& scenarios = cfg.at("scenarios");
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    if (opt.only_task.empty() || scenarios[i].at("task").get<std::string>() == opt.only_task) chosen.push_back(i);
  std::vector<json> out(chosen.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < chosen.size(); k = next++) {
      const json& s = scenarios[chosen[k]];
      std::string id = s.at("id").get<std::string>();
      ScenarioContext ctx{s, id, scenario_seed(opt.seed, id), opt};
      out[k] = run_scenario(ctx);
    }
  };
  int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(chosen.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  RunResult r;
  json list = json::array();
  for (auto& s : out) {
    if (s.at("status") != "ok") ++r.errors;
    list.push_back(std::move(s));
  }
  r.report = json{{"schema_version", kReportSchemaVersion}, {"tool", "wparab"}, {"seed", opt.seed}, {"scenarios", list}};
  return r;
}

}  // namespace wparab::cli
