// One line per acceptance criterion: PASS/FAIL, the measured quantities, and
// wall time against the budget. Arguments select criteria by number; none runs
// all of them. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "strichartz/divergence.hpp"
#include "strichartz/grid_oracle.hpp"

using namespace strichartz;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!cond) {
      ok = false;
      detail += " [x]";
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double slope_law(int n, double c, double energy) {
  return std::numbers::ln2 * std::pow(std::sin(critical_angle(c)), n - 3) / c * energy;
}

nlohmann::json run_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return code == cli::kError ? nlohmann::json{} : nlohmann::json::parse(out.str());
}

// Native witness grid: box 2 pi, Nyquist just above the cutoff's support.
GridSpec witness_grid(int k, double c, const Profile& p, const Mollifier& m) {
  GridSpec g = GridSpec::for_cutoff(2, 16, 0, m, c, p);
  g.points_per_axis = 1 << (k + 3);
  g.box_halfwidth = 2.0 * kPi / 1.0001;
  const double band = (1.0 + c) * std::ldexp(m.outer_radius(), k) + p.spectral_cutoff();
  g.time_nodes = static_cast<int>(std::ceil(2.0 * g.time_halfwidth * band / (2.0 * kPi))) + 1;
  return g;
}

Check falsification() {
  Check c;
  int code = 0;
  const auto j = run_cli({"falsify", "--n", "4", "--c", "2", "--kmax", "24"}, code);
  c.expect(code == 0, fmt("exit %d", code));
  if (code != cli::kError) {
    const std::string kind = j["summary"]["verdict"]["kind"];
    c.expect(kind == "Divergent", "verdict " + kind);
    const double slope = j["summary"]["fit"]["slope"];
    const double law = slope_law(4, 2.0, halfline_energy(Profile::standard()));
    c.expect(rel(slope, law) <= 0.05,
             fmt("slope %.6f vs ln2*(sqrt3/4)*E = %.6f (rel %.1e)", slope, law, rel(slope, law)));
  }
  return c;
}

Check dimension_sweep() {
  Check c;
  const auto p = Profile::standard();
  const double e = halfline_energy(p);
  for (int n : {3, 4, 5, 7}) {
    const auto r = falsification_probe(n, 2.0, p, Mollifier{}, 24);
    const bool div = std::holds_alternative<Divergent>(r.verdict);
    const double slope = div ? std::get<Divergent>(r.verdict).slope : 0.0;
    const double law = slope_law(n, 2.0, e);
    c.expect(div && rel(slope, law) <= 0.05,
             fmt("n=%d %s slope %.5f law %.5f", n, verdict_kind(r.verdict).c_str(), slope, law));
  }
  return c;
}

Check n3_remark() {
  Check c;
  const auto p = Profile::standard();
  double prev = 0.0, worst = 0.0;
  bool growing = true;
  for (double eps : {0.2, 0.02, 0.002}) {
    const double q = n3_remark_value(eps, p);
    worst = std::max(worst, rel(q, halfline_energy(p) * std::log(2.0 / eps)));
    growing = growing && q > prev;
    prev = q;
  }
  c.expect(worst <= 1e-6, fmt("max rel gap to E ln(2/eps) %.1e", worst));
  const double tiny = n3_remark_value(1e-12, p);
  c.expect(growing && tiny > 80.0, fmt("increasing, value %.2f at eps=1e-12", tiny));
  return c;
}

Check contrast() {
  Check c;
  for (auto [n, q] : {std::pair{4, "4"}, std::pair{4, "3"}, std::pair{5, "3"}}) {
    int code = 0;
    const auto j = run_cli({"contrast", "--n", std::to_string(n), "--q", q, "--c", "2"}, code);
    if (code == cli::kError) {
      c.expect(false, fmt("n=%d q=%s error", n, q));
      continue;
    }
    const std::string kind = j["summary"]["verdict"]["kind"];
    const double gap = j["summary"].value("relative_gap", 1.0);
    c.expect(code == 0 && kind == "Bounded" && gap <= 0.01,
             fmt("n=%d q=%s %s gap %.1e", n, q, kind.c_str(), gap));
  }
  return c;
}

Check factorization() {
  Check c;
  const auto p = Profile::standard();
  const Mollifier m;
  double worst = 0.0;
  for (int n : {3, 4, 5, 7})
    for (double sp : {1.5, 2.0, 3.0}) {
      const AngularDomain dom{kPi / 2, critical_angle(sp) - 0.01};
      const double q = reduced_q_value(ProbeConfig::wave_dual(n, sp, std::nullopt, dom), p, m);
      worst = std::max(worst, rel(q, factorized_value(n, sp, p, dom)));
    }
  c.expect(worst <= 1e-6, fmt("12 cases, max rel gap %.1e", worst));
  return c;
}

Check angular_law() {
  Check c;
  std::vector<double> eps;
  for (double e = 1e-1; e > 5e-7; e /= 10.0) eps.push_back(e);
  for (auto [n, sp] : {std::pair{3, 2.0}, std::pair{4, 2.0}, std::pair{5, 1.5}}) {
    const auto s = epsilon_sweep(n, sp, eps);
    const double th = std::sin(critical_angle(sp));
    const double expect = std::pow(th, n - 2) / (sp * th);
    c.expect(s.fit && rel(s.fit->b, expect) <= 0.02,
             fmt("(%d,%.1f) b %.5f vs %.5f", n, sp, s.fit ? s.fit->b : 0.0, expect));
    if (n == 3) {
      double worst = 0.0;
      for (const auto& pt : s.points)
        worst = std::max(worst,
                         rel(pt.value, -0.5 * std::log(1.0 + 2.0 * std::cos(critical_angle(2.0) - pt.eps))));
      c.expect(worst <= 1e-8, fmt("antiderivative max rel %.1e", worst));
    }
  }
  return c;
}

Check cross_engine() {
  Check c;
  const auto p = Profile::standard();
  const Mollifier m;
  // On 128 points per axis k = 5, 6 leave a box too small for the profile
  // spectrum (NyquistViolation); k = 2..4 fit.
  for (int n : {2, 3}) {
    std::vector<double> omega(static_cast<std::size_t>(n), 0.0);
    omega[0] = 1.0;
    for (int k : {2, 3, 4}) {
      const auto g = GridSpec::for_cutoff(n, 128, k, m, 2.0, p);
      const double d = dual_functional_direct({p, m, k, 2.0, omega}, 0.5 * (n - 1), g);
      const double ref = reduced_reference_squared(n, k, 2.0, 0.5 * (n - 1), p, m);
      c.expect(rel(d * d, ref) <= 0.01, fmt("n=%d k=%d gap %.1e", n, k, rel(d * d, ref)));
    }
    const auto g = GridSpec::for_cutoff(n, 128, 4, m, 0.0, p);
    const double d = dual_functional_direct({p, m, 4, 0.0, omega}, 0.5 * (n - 1), g);
    const double ref = radial_reference_squared(n, 4, 0.5 * (n - 1), p, m);
    c.expect(rel(d * d, ref) <= 0.01, fmt("n=%d c=0 gap %.1e", n, rel(d * d, ref)));
  }
  return c;
}

Check witness() {
  Check c;
  const auto p = Profile::standard();
  const Mollifier m;
  GridSpec mass_grid;
  mass_grid.n = 2;
  mass_grid.points_per_axis = 256;  // 2x oversampled at k = 2
  mass_grid.box_halfwidth = 24.0;
  std::vector<double> mass;
  for (int k : {0, 1, 2}) mass.push_back(l1_mass(sample_mollifier_kernel(m, k, mass_grid)));
  const double spread = (*std::max_element(mass.begin(), mass.end()) -
                         *std::min_element(mass.begin(), mass.end())) / mass[0];
  c.expect(spread <= 0.02, fmt("mass %.5f/%.5f/%.5f spread %.1e", mass[0], mass[1], mass[2], spread));

  // Reduced-engine slope of the full-circle functional at n = 2.
  const auto seq = q_sequence(ProbeConfig::wave_dual(2, 2.0, 0, AngularDomain::full()), 8, 20, p, m);
  const double q_slope = growth_fit(seq, seq.entries.size()).slope;

  std::vector<double> r2;
  double wmass = 0.0;
  for (int k : {2, 4, 6, 8}) {
    const auto g = witness_grid(k, 2.0, p, m);
    const double r = witness_ratio(2, k, 2.0, p, m, g);
    r2.push_back(r * r);
    wmass = l1_mass(sample_mollifier_kernel(m, k, g));
  }
  bool increasing = true;
  for (std::size_t i = 1; i < r2.size(); ++i) increasing = increasing && r2[i] > r2[i - 1];
  c.expect(increasing, fmt("ratio %.5f %.5f %.5f %.5f", std::sqrt(r2[0]), std::sqrt(r2[1]),
                           std::sqrt(r2[2]), std::sqrt(r2[3])));
  const double p2 = p.l2_norm() * p.l2_norm();
  const double per_k = q_slope * sphere_surface_measure(0) / (4.0 * kPi * kPi) / (p2 * wmass * wmass);
  double worst = 0.0;
  for (std::size_t i = 1; i < r2.size(); ++i) worst = std::max(worst, rel(0.5 * (r2[i] - r2[i - 1]), per_k));
  c.expect(worst <= 0.10, fmt("ratio^2 increment per k vs %.5f: max rel %.1e", per_k, worst));
  return c;
}

Check invariance() {
  Check c;
  const auto p = Profile::standard();
  const Mollifier m;
  const auto seq =
      q_sequence(ProbeConfig::wave_dual(4, 2.0, 0, AngularDomain::to_critical(2.0)), 4, 24, p, m);
  bool mono = true;
  for (std::size_t i = 1; i < seq.entries.size(); ++i)
    mono = mono && seq.entries[i].value >= seq.entries[i - 1].value;
  c.expect(mono, "Q_k nondecreasing k=4..24");

  const double theta0 = critical_angle(2.0);
  bool dom = true;
  double prev = 0.0;
  for (double lo : {2.0, 1.8, kPi / 2, 1.0, 0.0}) {
    const double v = reduced_q_value(ProbeConfig::wave_dual(4, 2.0, 10, {lo, theta0}), p, m);
    dom = dom && v >= prev;
    prev = v;
  }
  c.expect(dom, "domain monotone");

  const AngularDomain sub{kPi / 2, theta0 - 0.01};
  const double f0 = factorized_value(4, 2.0, p, sub);
  double dil = 0.0;
  for (double mu : {0.25, 4.0}) dil = std::max(dil, rel(factorized_value(4, 2.0, p.dilated(mu), sub), f0));
  c.expect(dil <= 1e-8, fmt("dilation rel %.1e", dil));

  const auto g = witness_grid(4, 2.0, p, m);
  const double base = witness_ratio({p, m, 4, 2.0, {1.0, 0.0}}, g);
  double dir = 0.0;
  for (const auto& w : {std::vector<double>{-1.0, 0.0}, std::vector<double>{0.0, 1.0},
                        std::vector<double>{0.0, -1.0}})
    dir = std::max(dir, rel(witness_ratio({p, m, 4, 2.0, w}, g), base));
  c.expect(dir <= 1e-10, fmt("direction rel %.1e", dir));

  bool exact = true;
  for (double eta = 0.0; eta <= 1.0; eta += 1.0 / 64) exact = exact && m(eta) == 1.0 && m(-eta) == 1.0;
  for (double eta = 2.0; eta <= 6.0; eta += 1.0 / 16) exact = exact && m(eta) == 0.0;
  for (double eta = 1.05; eta < 1.96; eta += 0.01) exact = exact && m(eta) > 0.0 && m(eta) < 1.0;
  c.expect(exact, "mollifier flat region and support exact");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "falsification n=4 c=2", 60.0, falsification},
      {2, "dimension sweep", 240.0, dimension_sweep},
      {3, "n=3, c=1 log law", 5.0, n3_remark},
      {4, "q>2 contrast", 120.0, contrast},
      {5, "factorization identity", 60.0, factorization},
      {6, "angular log-law", 30.0, angular_law},
      {7, "cross-engine oracle", 180.0, cross_engine},
      {8, "witness growth and mass", 120.0, witness},
      {9, "invariance suite", 60.0, invariance},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& cr : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), cr.id) == selected.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= cr.budget_s;
    const bool pass = c.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s [%d] %s: %s; %.2f s of %.0f s%s\n", pass ? "PASS" : "FAIL", cr.id, cr.name,
                c.detail.c_str(), secs, cr.budget_s, in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return failures;
}
