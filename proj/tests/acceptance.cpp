#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "wparab/criteria/comparison.hpp"
#include "wparab/criteria/corollaries.hpp"
#include "wparab/criteria/critical.hpp"
#include "wparab/geometry/catalog.hpp"
#include "wparab/geometry/identities.hpp"
#include "wparab/stochastic/verify.hpp"

using namespace wparab;
using std::numbers::e;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

void run(int id, const char* name, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  detail.precision(6);
  bool ok = false;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& ex) {
    detail << "exception: " << ex.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail << " [" << secs << " s]";
  report(id, name, ok, detail.str());
}

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vec random_in(const ParamBox& b, std::mt19937& rng) {
  Vec u(b.dim());
  for (int i = 0; i < b.dim(); ++i) u(i) = std::uniform_real_distribution<double>(b.lo(i), b.hi(i))(rng);
  return u;
}

ClassifyOptions asserted() {
  ClassifyOptions o;
  o.assert_A = true;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  run(1, "closed-form capacity", [](auto& d) {
    double a = capacity_potential(models::euclidean(2), 1.0, e).capacity;
    double b = capacity_potential(models::euclidean(3), 1.0, 2.0).capacity;
    d << "R2 err " << std::abs(a - 2 * pi) << ", R3 err " << std::abs(b - 8 * pi);
    return std::abs(a - 2 * pi) <= 1e-8 && std::abs(b - 8 * pi) <= 1e-8;
  });

  run(2, "potential ODE residual", [](auto& d) {
    struct Case {
      WeightedModel m;
      double rho, R;
    };
    std::vector<Case> cases = {
        {models::euclidean(2), 1.0, e},
        {models::euclidean(3), 1.0, 2.0},
        {models::euclidean(5), 0.5, 4.0},
        {models::gaussian(2), 1.0, 4.0},
        {models::gaussian(4), 0.5, 3.0},
        {models::antigaussian(3), 0.5, 3.0},
        {models::hyperbolic(2), 0.5, 5.0},
        {models::hyperbolic(3, -4.0), 0.2, 2.0},
        {models::hyperbolic(4, -1.0, profiles::power(-0.5, 2.0)), 1.0, 3.0},
        {WeightedModel(3, profiles::paraboloid_warp(1.0), profiles::zero()), 0.2, 6.0},
        {WeightedModel(3, profiles::linear(), profiles::log_power(-2.0, profiles::linear())), 1.0, 10.0},
        {WeightedModel(2, profiles::linear(), profiles::power(0.3, 3.0)), 0.5, 2.5},
    };
    double worst = 0.0;
    for (const auto& c : cases) worst = std::max(worst, capacity_potential(c.m, c.rho, c.R).ode_residual);
    d << cases.size() << " combinations, max residual " << worst;
    return cases.size() == 12 && worst <= 1e-6;
  });

  run(3, "Ahlfors verdict table", [](auto& d) {
    struct Row {
      WeightedModel m;
      Outcome want;
    };
    std::vector<Row> rows = {{models::euclidean(2), Outcome::parabolic},   {models::antigaussian(2), Outcome::hyperbolic},
                             {models::euclidean(3), Outcome::hyperbolic},  {models::euclidean(4), Outcome::hyperbolic},
                             {models::gaussian(3), Outcome::parabolic},    {models::gaussian(4), Outcome::parabolic}};
    int right = 0;
    for (const auto& r : rows) {
      Outcome o = ahlfors_classify(r.m, 1.0).outcome;
      right += o == r.want;
      d << r.m.label() << "=" << to_string(o) << " ";
    }
    return right == static_cast<int>(rows.size());
  });

  run(4, "critical radii", [](auto& d) {
    double worst = 0.0;
    for (auto [m, lambda] : std::vector<std::pair<int, double>>{{2, 1.0}, {3, 0.0}, {10, 0.0}, {5, 2.0}}) {
      double want = (-lambda + std::sqrt(lambda * lambda + 4.0 * (m - 1))) / 2.0;
      double got = critical_sphere_radius(models::gaussian(m), m - 1, lambda, RadiusMode::last_above).t0;
      worst = std::max(worst, std::abs(got - want));
    }
    for (int k : {2, 3, 4})
      worst = std::max(worst, std::abs(critical_cylinder_radius(k, profiles::zero()) - std::sqrt(k - 1.0)));
    d << "max error " << worst;
    return worst <= 1e-10;
  });

  run(5, "lemma identity suite", [](auto& d) {
    std::vector<RadialProfile> fs = {profiles::zero(), profiles::gaussian(), profiles::power(0.25, 3.0)};
    std::vector<RadialProfile> psis = {profiles::from_expression("t^2/2"), profiles::from_expression("log(1+t)")};
    std::mt19937 rng(17);
    int count = 0;
    double worst = 0.0;
    for (int kind = 0; kind < 2; ++kind)
      for (const auto& f : fs) {
        Ambient A = kind == 0 ? Ambient::euclidean(3, weights::radial(3, f)) : Ambient::model_chart(models::hyperbolic(3, -1.0, f));
        std::vector<ImmersedSubmanifold> Ps = {catalog::sphere(A, 1.4), catalog::hyperplane(A, vec({0.0, 0.6, 0.8}), 0.5),
                                               catalog::cylinder(A, 1.2, 2), catalog::paraboloid(A, 0.3),
                                               catalog::helicoid(A, 0.5)};
        for (const auto& P : Ps)
          for (int k = 0; k < 20; ++k) {
            Vec u = random_in(P.sample_box, rng);
            for (const auto& psi : psis) {
              worst = std::max(worst, lemma31_residual(P, u, psi).residual);
              ++count;
            }
          }
      }
    ImmersedSubmanifold S = catalog::sphere(Ambient::euclidean(4, weights::gaussian(4)), 1.3);
    double cancel = 0.0;
    for (const char* psi : {"t", "t^3-t", "exp(-t)"})
      cancel = std::max(cancel, lemma31_residual(S, vec({0.8, 1.2, 2.0}), profiles::from_expression(psi)).residual);
    d << count << " combinations, max residual " << worst << ", sphere cancellation " << cancel;
    return count >= 600 && worst <= 1e-5 && cancel <= 1e-7;
  });

  run(6, "soliton minimality", [](auto& d) {
    std::mt19937 rng(23);
    double worst = 0.0;
    int cases = 0;
    auto check = [&](const ImmersedSubmanifold& P) {
      ++cases;
      for (int k = 0; k < 10; ++k) worst = std::max(worst, weighted_mean_curvature_norm(geometry_at(P, random_in(P.sample_box, rng))));
    };
    for (int m : {3, 4}) {
      check(catalog::sphere(Ambient::euclidean(m, weights::gaussian(m)), std::sqrt(m - 1.0)));
      check(catalog::hyperplane(Ambient::euclidean(m, weights::gaussian(m)), axis(m, 1), 0.0));
      check(catalog::hyperplane(Ambient::euclidean(m, weights::radial(m, profiles::power(-0.5, 4.0))), axis(m, 0), 0.0));
    }
    for (int k : {3, 4}) check(catalog::cylinder(Ambient::euclidean(k + 1, weights::gaussian(k + 1)), std::sqrt(k - 1.0), k));
    check(catalog::hyperplane(Ambient::euclidean(3, weights::coordinate(3, 2, profiles::from_expression("t^3-t"))), axis(3, 1), 0.8));
    check(catalog::grim_curve(Ambient::euclidean(2, weights::linear(axis(2, 1)))));
    d << cases << " submanifolds, max |Hh| " << worst;
    return worst <= 1e-7;
  });

  run(7, "hyperplane constancy", [](auto& d) {
    Vec a = vec({1.0, 2.0, 2.0}) / 3.0;
    double worst_value = 0.0, worst_spread = 0.0;
    for (double t : {-1.5, 0.0, 0.7, 4.0}) {
      Vec p = t * a + vec({0.4, -0.2, 0.0});
      p -= (p.dot(a) - t) * a;
      HyperplaneCurvature hc = hyperplane_weighted_mc(profiles::gaussian(), std::nullopt, a, t, p);
      worst_value = std::max(worst_value, std::abs(hc.value - t));
      worst_spread = std::max(worst_spread, hc.spread);
      if (hc.samples != 64) return false;
    }
    d << "max |value - t| " << worst_value << ", max spread " << worst_spread;
    return worst_spread <= 1e-10 && worst_value <= 1e-10;
  });

  run(8, "theorem-pipeline verdicts", [](auto& d) {
    bool ok = true;
    for (int m : {3, 4})
      for (double c : {0.0, 1.0}) {
        int n = m - 1;
        double t0 = (c + std::sqrt(c * c + 4.0 * n)) / 2.0;
        RadialProfile alpha = profiles::sum(profiles::scaled(profiles::linear(), -1.0), profiles::constant(c));
        Outcome o = classify_thm32(ComparisonSetup(models::euclidean(m), n, t0, alpha), std::nullopt, asserted()).outcome;
        d << "shrinker m=" << m << " c=" << c << ":" << to_string(o) << " ";
        ok = ok && o == Outcome::parabolic;
      }
    for (int m : {3, 4}) {
      Outcome o = classify_thm33(ComparisonSetup(models::euclidean(m), m - 1, 1.0, profiles::linear()), std::nullopt, asserted()).outcome;
      d << "expander m=" << m << ":" << to_string(o) << " ";
      ok = ok && o == Outcome::hyperbolic;
    }
    Outcome flat = classify_thm33(ComparisonSetup(models::euclidean(4), 3, 1.0, profiles::zero()), std::nullopt, asserted()).outcome;
    d << "alpha=0 n=3:" << to_string(flat) << " ";
    ok = ok && flat == Outcome::hyperbolic;
    for (int n : {2, 3}) {
      CorollaryRequest q;
      q.which = Criterion::cor_radial2;
      q.n = n;
      q.k = -n;
      Outcome o = corollary_shortcut(models::euclidean(n + 1), q).outcome;
      d << "k=-" << n << ":" << to_string(o) << " ";
      ok = ok && o == Outcome::parabolic;
    }
    return ok;
  });

  run(9, "Monte Carlo vs closed form", [](auto& d) {
    Diffusion D(DiffusionSpec{catalog::identity(Ambient::euclidean(2)), 0.0, 20240611, 1});
    HitEstimate h = hit_probability(D, vec({std::sqrt(e), 0.0}), 1.0, e, 100000);
    double width = h.ci_hi - h.ci_lo;
    d << "p=" << h.p << " ci=[" << h.ci_lo << "," << h.ci_hi << "] width " << width << " dt " << h.dt;
    return h.ci_lo <= 0.5 && 0.5 <= h.ci_hi && width <= 0.01;
  });

  run(10, "comparison inequality", [](auto& d) {
    Diffusion G(DiffusionSpec{catalog::coordinate_plane(Ambient::euclidean(3, weights::gaussian(3)), 2), 0.0, 20240612, 1});
    ComparisonSetup S32(models::euclidean(3), 2, std::sqrt(2.0), profiles::from_expression("-t"));
    ComparisonReport a = comparison_check(G, S32, Criterion::thm32, vec({2.0, 0.0}), 1.0, 4.0, 100000, cube(2, -4.0, 4.0));
    bool hyp = a.verdict.outcome == Outcome::parabolic && a.annulus_balance.holds();
    for (const auto& c : a.verdict.checks) hyp = hyp && c.holds();
    Diffusion F(DiffusionSpec{catalog::coordinate_plane(Ambient::euclidean(4), 3), 0.0, 20240613, 1});
    ComparisonSetup S33(models::euclidean(4), 3, 1.0, profiles::zero());
    ComparisonReport b = comparison_check(F, S33, Criterion::thm33, vec({2.0, 0.0, 0.0}), 1.0, 4.0, 100000, cube(3, -4.0, 4.0));
    d << "gaussian plane p=" << a.hit.p << " <= phi+3se=" << a.phi + 3 * a.hit.se << "; flat 3-plane p=" << b.hit.p
      << " >= phi-3se=" << b.phi - 3 * b.hit.se;
    return hyp && a.pass && b.pass;
  });

  run(11, "index form", [](auto& d) {
    ImmersedSubmanifold S = catalog::sphere(Ambient::euclidean(3, weights::gaussian(3)), std::sqrt(2.0));
    TestFunction one{[](const Vec&) { return 1.0; }, [](const Vec& u) { return Vec(Vec::Zero(u.size())); }};
    double q = index_form(S, one, S.domain);
    double want = -16.0 * pi / e;
    double rel = std::abs(q - want) / std::abs(want);
    d << "Q=" << q << " relative error " << rel;
    return rel <= 1e-4;
  });

  run(12, "angle-function identity", [](auto& d) {
    ImmersedSubmanifold P = catalog::paraboloid(Ambient::euclidean(3, weights::gaussian(3)), 0.25, true);
    std::mt19937 rng(8);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) worst = std::max(worst, angle_function_laplacian(P, random_in(P.sample_box, rng)).residual);
    d << "max residual " << worst << " over 20 points";
    return worst <= 1e-4;
  });

  run(13, "CLI determinism", [](auto& d) {
    namespace fs = std::filesystem;
    fs::path base = fs::temp_directory_path() / "wparab_acceptance";
    fs::remove_all(base);
    int rc[2];
    for (int i = 0; i < 2; ++i) {
      std::string cmd = std::string("\"") + WPARAB_CLI + "\" run \"" + WPARAB_DEMO + "\" --seed 99 --workers " +
                        std::to_string(i + 1) + " --out \"" + (base / std::to_string(i)).string() + "\" > /dev/null";
      rc[i] = std::system(cmd.c_str());
    }
    if (rc[0] != 0 || rc[1] != 0) {
      d << "cli exit status " << rc[0] << "/" << rc[1];
      return false;
    }
    int files = 0, same = 0;
    for (const auto& entry : fs::directory_iterator(base / "0")) {
      ++files;
      fs::path other = base / "1" / entry.path().filename();
      same += fs::exists(other) && slurp(entry.path()) == slurp(other);
    }
    int count1 = static_cast<int>(std::distance(fs::directory_iterator(base / "1"), fs::directory_iterator{}));
    d << same << "/" << files << " files byte-identical";
    return files > 1 && same == files && count1 == files;
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures ? 1 : 0;
}
