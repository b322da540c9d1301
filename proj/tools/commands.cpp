#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

#include "report.hpp"
#include "strichartz/divergence.hpp"
#include "strichartz/error.hpp"
#include "strichartz/grid_oracle.hpp"

namespace strichartz::cli {

namespace {

constexpr double kOracleGap = 0.01;
constexpr double kN3Agreement = 1e-6;

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    fail(ErrorCode::InvalidArgument, "bad number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

nlohmann::ordered_json verdict_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["kind"] = verdict_kind(v);
  if (const auto* d = std::get_if<Divergent>(&v)) {
    j["slope"] = d->slope;
    j["slope_stderr"] = d->slope_stderr;
  } else if (const auto* b = std::get_if<Bounded>(&v)) {
    j["limit_estimate"] = b->limit_estimate;
    if (std::isfinite(b->tail_bound))
      j["tail_bound"] = b->tail_bound;
    else
      j["tail_bound"] = nullptr;
  } else {
    j["reason"] = std::get<Inconclusive>(v).reason;
  }
  return j;
}

nlohmann::ordered_json domain_json(const AngularDomain& d) {
  return {{"lower", d.lower}, {"upper", d.upper}};
}

nlohmann::ordered_json mollifier_json(const Mollifier& m) {
  return {{"inner_radius", m.inner_radius()}, {"outer_radius", m.outer_radius()}};
}

struct Common {
  std::string profile = "gaussian";
  std::string emit = "json";
  std::string out;
};

void add_common(CLI::App* sub, Common& c, bool with_profile = true) {
  if (with_profile)
    sub->add_option("--profile", c.profile, "family[:key=value,...] (gaussian, bump)")
        ->capture_default_str();
  sub->add_option("--emit", c.emit, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", c.out, "output path (stdout when absent)");
}

void emit(const RunReport& r, const Common& c, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (c.emit == "csv")
      write_csv(os, r.table);
    else
      write_json(os, r);
  };
  if (c.out.empty()) {
    write(out);
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot open --out " + c.out);
  write(f);
  if (!f) fail(ErrorCode::InvalidArgument, "write to " + c.out + " failed");
}

int exit_for(const Verdict& v, bool bounded_is_affirmative) {
  if (std::holds_alternative<Inconclusive>(v)) return kInconclusive;
  const bool bounded = std::holds_alternative<Bounded>(v);
  return bounded == bounded_is_affirmative ? kAffirmative : kInconclusive;
}

struct FalsifyArgs {
  int n = 4;
  double c = 2.0;
  int kmax = 24;
};

int cmd_falsify(const FalsifyArgs& a, const Common& common, RunReport& r, std::ostream& err) {
  const auto p = parse_profile(common.profile);
  const Mollifier m;
  const VerdictRules rules;
  const auto res = falsification_probe(a.n, a.c, p, m, a.kmax, rules);

  r.config = {{"n", a.n},
              {"c", a.c},
              {"s", 0.5 * (a.n - 1)},
              {"kmax", a.kmax},
              {"profile", p.describe()},
              {"mollifier", mollifier_json(m)},
              {"domain", domain_json(res.sequence.config.domain)},
              {"fit_window", rules.window}};
  r.summary["verdict"] = verdict_json(res.verdict);
  const double energy = halfline_energy(p);
  r.summary["halfline_energy"] = energy;
  if (a.c >= 1.0) {
    const double theta0 = critical_angle(a.c);
    const double law =
        std::numbers::ln2 * std::pow(std::sin(theta0), a.n - 3) / a.c * energy;
    r.summary["slope_law"] = law;
  }
  if (res.fit) {
    r.summary["fit"] = {{"slope", res.fit->slope},
                        {"intercept", res.fit->intercept},
                        {"residual_rms", res.fit->residual_rms},
                        {"slope_stderr", res.fit->slope_stderr}};
  }

  r.table.columns = {"k", "Q", "fit_slope", "fit_intercept", "fit_stderr", "verdict"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& e : res.sequence.entries)
    r.table.add_row({std::int64_t{e.k}, e.value, res.fit ? res.fit->slope : nan,
                     res.fit ? res.fit->intercept : nan, res.fit ? res.fit->slope_stderr : nan,
                     verdict_kind(res.verdict)});
  if (const auto* inc = std::get_if<Inconclusive>(&res.verdict))
    err << "inconclusive: " << inc->reason << '\n';
  return exit_for(res.verdict, false);
}

struct ContrastArgs {
  int n = 4;
  double q = 0.0;
  double c = 2.0;
  int kmax = 64;
};

int cmd_contrast(const ContrastArgs& a, const Common& common, RunReport& r, std::ostream& err) {
  const auto p = parse_profile(common.profile);
  const Mollifier m;
  const VerdictRules rules;
  const auto res = boundedness_probe(a.n, a.q, a.c, p, m, a.kmax, rules);
  const auto& cfg = res.sequence.config;

  r.config = {{"n", a.n},
              {"q", a.q},
              {"c", a.c},
              {"s", cfg.sobolev},
              {"kmax", a.kmax},
              {"profile", p.describe()},
              {"mollifier", mollifier_json(m)},
              {"domain", domain_json(cfg.domain)}};
  r.summary["verdict"] = verdict_json(res.verdict);
  const double limit = factorized_limit(cfg, p);
  r.summary["factorized_limit"] = limit;
  if (const auto* b = std::get_if<Bounded>(&res.verdict))
    r.summary["relative_gap"] = std::abs(b->limit_estimate - limit) / limit;

  r.table.columns = {"k", "Q", "factorized_limit", "verdict"};
  for (const auto& e : res.sequence.entries)
    r.table.add_row({std::int64_t{e.k}, e.value, limit, verdict_kind(res.verdict)});
  if (const auto* inc = std::get_if<Inconclusive>(&res.verdict))
    err << "inconclusive: " << inc->reason << '\n';
  return exit_for(res.verdict, true);
}

struct AngularArgs {
  int n = 4;
  double c = 2.0;
  std::string eps;
};

int cmd_angular(const AngularArgs& a, RunReport& r) {
  const auto eps = parse_eps(a.eps);
  const auto sweep = epsilon_sweep(a.n, a.c, eps);
  const double theta0 = critical_angle(a.c);

  r.config = {{"n", a.n}, {"c", a.c}, {"eps", eps}, {"theta_lower", 0.5 * std::numbers::pi}};
  r.summary["critical_angle"] = theta0;
  r.summary["local_coefficient"] = std::pow(std::sin(theta0), a.n - 3) / a.c;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double b = sweep.fit ? sweep.fit->b : nan;
  const double fa = sweep.fit ? sweep.fit->a : nan;
  if (sweep.fit)
    r.summary["fit"] = {{"b", b}, {"a", fa}};
  else
    r.summary["fit"] = nullptr;

  r.table.columns = {"eps", "J", "fit_b", "fit_a"};
  for (const auto& pt : sweep.points) r.table.add_row({pt.eps, pt.value, b, fa});
  return kAffirmative;
}

struct OracleArgs {
  int n = 2;
  int k = 4;
  double c = 2.0;
  int grid = 128;
  std::string dump;
};

int cmd_oracle(const OracleArgs& a, const Common& common, RunReport& r, std::ostream& err) {
  const auto p = parse_profile(common.profile);
  const Mollifier m;
  require(a.n == 2 || a.n == 3, "oracle needs --n 2 or 3");
  require(a.c >= 0.0, "speed must be nonnegative");
  require(a.k >= 0, "cutoff level must be nonnegative");
  const auto g = GridSpec::for_cutoff(a.n, a.grid, a.k, m, a.c, p);
  const double s = 0.5 * (a.n - 1);

  std::vector<double> omega(static_cast<std::size_t>(a.n), 0.0);
  omega[0] = 1.0;
  const double direct = dual_functional_direct({p, m, a.k, a.c, omega}, s, g);
  const double direct_sq = direct * direct;
  const bool separable = a.c == 0.0;
  const double reference = separable ? radial_reference_squared(a.n, a.k, s, p, m)
                                     : reduced_reference_squared(a.n, a.k, a.c, s, p, m);
  const double gap = std::abs(direct_sq - reference) / reference;

  if (!a.dump.empty()) {
    const auto samples = sample_mollifier_kernel(m, a.k, g);
    std::vector<std::uint32_t> dims(static_cast<std::size_t>(a.n),
                                    static_cast<std::uint32_t>(a.grid));
    std::ofstream f(a.dump, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot open --dump " + a.dump);
    write_grid_dump(f, dims, samples.values);
  }

  r.config = {{"n", a.n},
              {"k", a.k},
              {"c", a.c},
              {"s", s},
              {"profile", p.describe()},
              {"mollifier", mollifier_json(m)},
              {"grid",
               {{"points_per_axis", g.points_per_axis},
                {"box_halfwidth", g.box_halfwidth},
                {"time_nodes", g.time_nodes},
                {"time_halfwidth", g.time_halfwidth}}}};
  r.summary["reference"] = separable ? "radial" : "reduced";
  r.summary["direct_squared"] = direct_sq;
  r.summary["reference_squared"] = reference;
  r.summary["relative_gap"] = gap;
  r.summary["tolerance"] = kOracleGap;

  r.table.columns = {"n", "k", "c", "grid", "direct_squared", "reference_squared", "relative_gap"};
  r.table.add_row({std::int64_t{a.n}, std::int64_t{a.k}, a.c, std::int64_t{a.grid}, direct_sq,
                   reference, gap});
  if (gap > kOracleGap) {
    err << "relative gap " << format_double(gap) << " exceeds " << format_double(kOracleGap)
        << '\n';
    return kInconclusive;
  }
  return kAffirmative;
}

struct N3Args {
  std::string eps = "0.2,0.02,0.002";
};

int cmd_n3(const N3Args& a, const Common& common, RunReport& r) {
  const auto p = parse_profile(common.profile);
  const auto eps = parse_eps(a.eps);
  for (double e : eps) require(e > 0.0 && e <= 2.0, "n3 needs eps in (0, 2]");

  r.config = {{"n", 3}, {"c", 1.0}, {"eps", eps}, {"profile", p.describe()}};
  r.summary["halfline_energy"] = halfline_energy(p);
  r.table.columns = {"eps", "quadrature", "closed_form", "relative_gap"};
  double worst = 0.0;
  for (double e : eps) {
    const double q = n3_remark_value(e, p);
    const double cf = n3_remark_closed_form(e, p);
    const double gap = cf > 0.0 ? std::abs(q - cf) / cf : std::abs(q);
    worst = std::max(worst, gap);
    r.table.add_row({e, q, cf, gap});
  }
  r.summary["max_relative_gap"] = worst;
  return worst <= kN3Agreement ? kAffirmative : kInconclusive;
}

}  // namespace

Profile parse_profile(std::string_view text) {
  const auto colon = text.find(':');
  const auto family = text.substr(0, colon);
  std::map<std::string, double, std::less<>> kv;
  if (colon != std::string_view::npos) {
    for (auto item : split(text.substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        fail(ErrorCode::InvalidArgument, "profile parameter '" + std::string(item) + "' needs key=value");
      const std::string key(item.substr(0, eq));
      if (!kv.emplace(key, parse_number(item.substr(eq + 1), "--profile")).second)
        fail(ErrorCode::InvalidArgument, "profile parameter '" + key + "' repeated");
    }
  }
  auto take = [&](const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  const bool has_amplitude = kv.count("amplitude") > 0;
  const double amplitude = take("amplitude", 1.0);

  ProfileFamily fam;
  if (family == "gaussian") {
    fam = Gaussian{take("width", 1.0)};
  } else if (family == "bump") {
    const double center = take("center", 0.0);
    fam = CompactBump{center, take("radius", 1.0)};
  } else {
    fail(ErrorCode::InvalidArgument, "unknown profile family '" + std::string(family) + "'");
  }
  if (!kv.empty())
    fail(ErrorCode::InvalidArgument, "unknown profile parameter '" + kv.begin()->first + "'");
  return has_amplitude ? Profile(fam, amplitude) : Profile::normalized(fam);
}

std::vector<double> parse_eps(std::string_view text) {
  std::vector<double> out;
  if (text.empty()) fail(ErrorCode::InvalidArgument, "--eps list is empty");
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const double hi = parse_number(text.substr(0, dots), "--eps");
    const double lo = parse_number(text.substr(dots + 2), "--eps");
    require(hi > 0.0 && lo > 0.0 && lo <= hi, "--eps range must be hi..lo with 0 < lo <= hi");
    const double decades = std::log10(hi / lo);
    const auto steps = static_cast<int>(std::lround(decades));
    require(std::abs(decades - steps) < 1e-9, "--eps range ends must differ by whole decades");
    // Division by an exactly representable power of ten keeps 1e-1..1e-6 exact.
    double decade = 1.0;
    for (int i = 0; i <= steps; ++i, decade *= 10.0) out.push_back(i == steps ? lo : hi / decade);
  } else {
    for (auto item : split(text, ',')) out.push_back(parse_number(item, "--eps"));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical probes of the L2-in-time, L-infinity-in-space wave estimate"};
  app.name("strichartz-probe");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  FalsifyArgs fa;
  auto* falsify = app.add_subcommand("falsify", "log-divergence probe at s = (n-1)/2");
  falsify->add_option("--n", fa.n, "dimension")->capture_default_str();
  falsify->add_option("--c", fa.c, "source speed")->capture_default_str();
  falsify->add_option("--kmax,--k", fa.kmax, "largest cutoff level")->capture_default_str();
  add_common(falsify, common);

  ContrastArgs ca;
  auto* contrast = app.add_subcommand("contrast", "boundedness probe at s = n/2 - 1/q");
  contrast->add_option("--n", ca.n, "dimension")->capture_default_str();
  contrast->add_option("--q", ca.q, "time exponent in (2, inf)")->required();
  contrast->add_option("--c", ca.c, "source speed")->capture_default_str();
  contrast->add_option("--kmax,--k", ca.kmax, "largest cutoff level")->capture_default_str();
  add_common(contrast, common);

  AngularArgs aa;
  auto* angular = app.add_subcommand("angular", "angular integral up to theta0 - eps");
  angular->add_option("--n", aa.n, "dimension")->capture_default_str();
  angular->add_option("--c", aa.c, "source speed")->capture_default_str();
  angular->add_option("--eps", aa.eps, "hi..lo decades or comma list")->required();
  add_common(angular, common, false);

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "grid evaluation against the reduced engine");
  oracle->add_option("--n", oa.n, "dimension (2 or 3)")->capture_default_str();
  oracle->add_option("--k", oa.k, "cutoff level")->capture_default_str();
  oracle->add_option("--c", oa.c, "source speed")->capture_default_str();
  oracle->add_option("--grid", oa.grid, "points per axis")->capture_default_str();
  oracle->add_option("--dump", oa.dump, "write h_k samples as an SFGD file");
  add_common(oracle, common);

  N3Args na;
  auto* n3 = app.add_subcommand("n3", "n = 3, c = 1: quadrature against E ln(2/eps)");
  n3->add_option("--eps", na.eps, "hi..lo decades or comma list")->capture_default_str();
  add_common(n3, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kAffirmative : kError;
  }

  RunReport report;
  report.argv = args;
  const auto start = std::chrono::steady_clock::now();
  int code = kError;
  try {
    if (falsify->parsed()) {
      report.command = "falsify";
      code = cmd_falsify(fa, common, report, err);
    } else if (contrast->parsed()) {
      report.command = "contrast";
      code = cmd_contrast(ca, common, report, err);
    } else if (angular->parsed()) {
      report.command = "angular";
      code = cmd_angular(aa, report);
    } else if (oracle->parsed()) {
      report.command = "oracle";
      code = cmd_oracle(oa, common, report, err);
    } else {
      report.command = "n3";
      code = cmd_n3(na, common, report);
    }
    emit(report, common, out);
  } catch (const ProbeError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << report.command << ": " << format_double(elapsed) << " s\n";
  return code;
}

}  // namespace strichartz::cli
