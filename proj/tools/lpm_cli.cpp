// lpm: spectral splits, Lyapunov-Perron manifolds, MMT scans and water-wave
// multipliers from the command line.
//
// Every subcommand accepts --config FILE with key=value lines (keys are the
// long option names without dashes); flags given on the command line win.

#include "lpm/lyapunov_perron.hpp"
#include "lpm/models.hpp"
#include "lpm/verify.hpp"
#include "lpm/waterwave.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace lpm;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// CSV goes to --out when given (report on stdout), else to stdout (report on stderr).
struct Sink {
  std::ofstream file;
  std::ostream* csv = &std::cout;
  std::ostream* report = &std::cerr;

  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary);
    if (!file) throw InvalidInput("cannot open output file " + path);
    csv = &file;
    report = &std::cout;
  }
};

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput(what + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidInput(what + ": empty list");
  return out;
}

double parse_depth(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInf;
  return parse_list(s, "depth").at(0);
}

struct ModelOptions {
  std::string model = "saddle1";
  double lambda_param = 0.5;
  int modes = 5;
  MmtParams mmt;
  std::string side = "unstable";
  double gap = 0.1;

  void add(CLI::App* app) {
    app->add_option("--model", model, "saddle1 | saddle2 | rd | mmt")
        ->check(CLI::IsMember({"saddle1", "saddle2", "rd", "mmt"}));
    app->add_option("--lambda-param", lambda_param, "reaction-diffusion parameter");
    app->add_option("--modes", modes, "reaction-diffusion cosine modes");
    app->add_option("--alpha", mmt.alpha, "MMT dispersion order");
    app->add_option("--beta", mmt.beta, "MMT nonlinearity order");
    app->add_option("--sigma", mmt.sigma, "MMT sign (+1 or -1)");
    app->add_option("--a", mmt.a, "MMT plane-wave amplitude");
    app->add_option("--xi0", mmt.xi0, "MMT carrier mode");
    app->add_option("--radius", mmt.radius, "MMT modes xi0-radius .. xi0+radius");
    app->add_option("--side", side, "unstable | stable")->check(CLI::IsMember({"unstable", "stable"}));
    app->add_option("--gap", gap, "splitting gap");
  }

  ModelSystem build() const {
    ModelSystem m;
    if (model == "saddle1" || model == "saddle2") m = saddle_toy(model);
    else if (model == "rd") m = reaction_diffusion(lambda_param, modes);
    else m = mmt_galerkin(mmt);
    return side == "stable" ? time_reversed(m) : m;
  }
};

// key=value lines become --key=value tokens placed right after the subcommand
// path, so anything given later on the command line takes precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidInput("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file " + path);
  std::vector<std::string> injected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (key.empty()) throw InvalidInput(path + ":" + std::to_string(lineno) + ": empty key");
    injected.push_back("--" + key + "=" + value);
  }
  // subcommand path: leading tokens that are not options
  std::size_t depth = 0;
  while (depth < rest.size() && depth < 2 && rest[depth].rfind("-", 0) != 0) ++depth;
  if (depth == 2 && rest[0] != "waterwave") depth = 1;
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(depth), injected.begin(), injected.end());
  return rest;
}

// ---- split ---------------------------------------------------------------

int cmd_split(const ModelOptions& mo, const std::string& out) {
  const ModelSystem m = mo.build();
  const SpectralSplitting s = eigen_split(m.jacobian(m.equilibrium), mo.gap);
  Sink sink(out);
  std::ostream& rep = *sink.report;
  rep << "model " << m.name << " (" << mo.side << " side), dimension " << m.dimension << "\n";
  rep << "dims (plus, center, minus) = (" << s.dim_plus << ", " << s.dim_center << ", " << s.dim_minus << ")\n";
  rep << "lambda_plus " << (s.dim_plus ? num(s.lambda_plus) : std::string("none (X_+ is empty)")) << "\n";
  rep << "rest_abscissa " << num(s.rest_abscissa) << "\n";
  rep << "omega_plus " << num(s.omega_plus) << "\n";
  rep << "omega_minus " << num(s.omega_minus) << "\n";
  if (mo.model == "mmt") {
    rep << "mode pairs (xi, 2 xi0 - xi): c_plus c_minus c discriminant max_real_part\n";
    for (int xi : mo.mmt.modes()) {
      const int eta = 2 * mo.mmt.xi0 - xi;
      if (xi == mo.mmt.xi0 || eta < xi) continue;
      const auto row = mmt_unstable_scan(mo.mmt, xi, xi).at(0);
      const ModePairBlock b = mmt_block(mo.mmt, xi);
      rep << "  (" << xi << ", " << eta << "): " << num(b.c_plus) << " " << num(b.c_minus) << " " << num(b.c) << " "
          << num(row.discriminant) << " " << num(row.max_real_part) << (row.flagged ? " unstable" : "") << "\n";
    }
  }
  std::ostream& csv = *sink.csv;
  csv << "re,im,block\n";
  for (Index i = 0; i < s.eigenvalues.size(); ++i) {
    const int blk = s.block[static_cast<std::size_t>(i)];
    csv << num(s.eigenvalues[i].real()) << "," << num(s.eigenvalues[i].imag()) << ","
        << (blk > 0 ? "plus" : blk == 0 ? "center" : "minus") << "\n";
  }
  return 0;
}

// ---- manifold --------------------------------------------------------------

struct ManifoldOptions {
  double eps = 0.1;
  Index grid = 21;
  double lambda = kNaN;
  double T_max = 20.0;
  double dt = 0.01;
  int max_iter = 200;
  double tol = 1e-12;
  double r = 1.0;
  unsigned jobs = 1;
  bool force = false;
  double invariance_dt = 0.1;
  std::string out, plot;
  unsigned seed = 7;
  std::string path = "semilinear";
};

int cmd_manifold(const ModelOptions& mo, const ManifoldOptions& o) {
  LpConfig cfg;
  cfg.lambda = o.lambda, cfg.T_max = o.T_max, cfg.dt = o.dt, cfg.eps = o.eps;
  cfg.max_iter = o.max_iter, cfg.tol = o.tol, cfg.r = o.r;
  cfg.validate();
  if (o.grid < 1) throw InvalidInput("manifold: --grid must be at least 1");
  if (o.jobs < 1) throw InvalidInput("manifold: --jobs must be at least 1");
  if (!(o.invariance_dt >= 0.0)) throw InvalidInput("manifold: --invariance-dt must be nonnegative");

  const ModelSystem m = mo.build();
  const SpectralSplitting s = eigen_split(m.jacobian(m.equilibrium), mo.gap);
  if (s.dim_plus == 0) throw InvalidInput("manifold: X_+ is trivial for this model and side");
  LpSystem sys;
  if (o.path == "quasilinear") sys = quasilinearize(m, s).system;
  else sys = split_field(m, s);
  const LpSolver solver(std::move(sys), cfg);

  Sink sink(o.out);
  std::ostream& rep = *sink.report;
  const SampledConstants sc = sample_constants(solver, o.eps, o.seed);
  const ContractionBudget cb =
      contraction_budget(sc.C0, sc.Cf, 1, solver.system().lambda_minus, solver.system().lambda_plus, solver.lambda());
  rep << "lambda " << num(solver.lambda()) << " in (" << num(solver.system().lambda_minus) << ", "
      << num(solver.system().lambda_plus) << ")\n";
  rep << "sampled C0 " << num(sc.C0) << ", Cf " << num(sc.Cf) << ", L1 " << num(cb.L1) << ", feasible eps "
      << (cb.feasible_eps ? num(*cb.feasible_eps) : std::string("none")) << "\n";
  if (!(cb.L1 < 1.0) && !o.force) {
    throw NumericalFailure("manifold: contraction budget L1 = " + num(cb.L1) + " >= 1; shrink eps or pass --force");
  }
  if (cb.feasible_eps && o.eps > *cb.feasible_eps)
    rep << "warning: eps " << num(o.eps) << " exceeds the certified radius " << num(*cb.feasible_eps) << "\n";

  GraphSpec gs;
  gs.points_per_axis = o.grid, gs.eps = o.eps, gs.jobs = o.jobs;
  ManifoldGraph g = build_manifold_graph(solver, gs);
  if (g.failures == static_cast<Index>(g.samples.size())) throw NumericalFailure("manifold: every sample failed");
  InvarianceReport inv;
  if (o.invariance_dt > 0.0) inv = invariance_residual(g, solver, o.invariance_dt);

  const Index mp = solver.system().dim_plus, q = solver.system().dim_rest();
  std::ostream& csv = *sink.csv;
  for (Index i = 0; i < mp; ++i) csv << "base_" << i + 1 << ",";
  for (Index i = 0; i < q; ++i) csv << "h_" << i + 1 << ",";
  csv << "lambda_fit,iterations,fp_residual,invariance_residual,status\n";
  double budget = 0.0;
  for (const GraphSample& smp : g.samples) {
    for (Index i = 0; i < mp; ++i) csv << num(smp.base[i]) << ",";
    for (Index i = 0; i < q; ++i) csv << (smp.value.size() == q ? num(smp.value[i]) : std::string("nan")) << ",";
    csv << num(smp.lambda_fit) << "," << smp.iterations << "," << num(smp.fp_residual) << ","
        << num(smp.invariance_residual) << "," << smp.status << "\n";
    budget = std::max(budget, smp.budget + smp.tail_bound + cfg.tol);
  }
  if (!o.plot.empty()) {
    std::ofstream pf(o.plot, std::ios::binary);
    if (!pf) throw InvalidInput("cannot open plot file " + o.plot);
    for (const GraphSample& smp : g.samples) {
      if (smp.value.size() != q) continue;
      for (Index i = 0; i < mp; ++i) pf << num(smp.base[i]) << " ";
      for (Index i = 0; i < q; ++i) pf << num(smp.value[i]) << (i + 1 < q ? " " : "");
      pf << "\n";
    }
  }
  rep << "samples " << g.samples.size() << ", failures " << g.failures << "\n";
  rep << "summary: tangency_slope " << num(g.tangency_slope) << ", lipschitz " << num(g.lipschitz)
      << ", quadratic_coeff " << num(g.quadratic_coeff) << ", budget " << num(budget);
  if (o.invariance_dt > 0.0)
    rep << ", invariance_residual " << num(inv.max_residual) << " (ratio " << num(inv.max_ratio) << ", skipped "
        << inv.skipped << ")";
  rep << "\n";
  return 0;
}

// ---- mmt-scan ----------------------------------------------------------------

int cmd_mmt_scan(MmtParams p, const std::string& a_list, int xi_min, int xi_max, const std::string& out) {
  Sink sink(out);
  std::ostream& csv = *sink.csv;
  csv << "a,xi,c_plus,c_minus,c,discriminant,flagged,max_real_part\n";
  Index flagged = 0;
  for (double a : parse_list(a_list, "--a-list")) {
    p.a = a;
    if (!(a >= 0.0)) throw InvalidInput("mmt-scan: amplitudes must be nonnegative");
    if (!(p.beta > 0.0) || !(p.beta <= p.alpha)) throw InvalidInput("mmt: need 0 < beta <= alpha");
    if (p.sigma != 1.0 && p.sigma != -1.0) throw InvalidInput("mmt: sigma must be +1 or -1");
    for (const ScanRow& r : mmt_unstable_scan(p, xi_min, xi_max)) {
      const ModePairBlock b = mmt_block(p, r.xi);
      csv << num(a) << "," << r.xi << "," << num(b.c_plus) << "," << num(b.c_minus) << "," << num(b.c) << ","
          << num(r.discriminant) << "," << (r.flagged ? 1 : 0) << "," << num(r.max_real_part) << "\n";
      flagged += r.flagged;
    }
  }
  *sink.report << "flagged pairs: " << flagged << "\n";
  return 0;
}

// ---- waterwave -----------------------------------------------------------------

struct WaveOptions {
  std::string k = "1";
  std::string h0 = "inf";
  double g = 1.0, sigma = 1.0, c = 0.0;
  double rho_minus = 1.0, rho_plus = 1.0;
  double b = kNaN;
  std::string depth = "inf", h_plus, h_minus;
  double nu_plus = 0.0, nu_minus = 0.0;
  double k_min = 1e-3, k_max = 1e3;
  Index points = 200;
  std::string out;
};

int cmd_symbol(const WaveOptions& o) {
  Sink sink(o.out);
  const double h0 = parse_depth(o.h0);
  *sink.csv << "k,h0,symbol\n";
  for (double k : parse_list(o.k, "--k")) *sink.csv << num(k) << "," << num(h0) << "," << num(dn_flat_symbol(k, h0)) << "\n";
  return 0;
}

int cmd_froude(const WaveOptions& o) {
  OneFluidConfig cfg;
  cfg.g = o.g, cfg.sigma = o.sigma, cfg.h0 = parse_depth(o.h0), cfg.c_vec = Wavevector(o.c, 0.0);
  const FroudeBond fb = froude_bond(cfg);
  Sink sink(o.out);
  *sink.csv << "froude,bond,coercive\n" << num(fb.froude) << "," << num(fb.bond) << "," << (fb.coercive ? "true" : "false") << "\n";
  return 0;
}

int cmd_kh(const WaveOptions& o) {
  TwoFluidConfig cfg;
  cfg.rho_minus = o.rho_minus, cfg.rho_plus = o.rho_plus, cfg.g = o.g, cfg.sigma = o.sigma;
  const double depth = parse_depth(o.depth);
  cfg.h_plus = o.h_plus.empty() ? depth : parse_depth(o.h_plus);
  cfg.h_minus = o.h_minus.empty() ? depth : parse_depth(o.h_minus);
  if (!std::isnan(o.b)) {
    if (!(o.b >= 0.0)) throw InvalidInput("kh: --b must be nonnegative");
    if (!(o.rho_plus > 0.0)) throw InvalidInput("two-fluid config: densities must be positive");
    // b carried by the upper fluid along the diagonal, so |nu_+|^2 = 2 s^2 = b / rho_+
    const double s = std::sqrt(0.5 * o.b / o.rho_plus);
    cfg.nu_plus = Wavevector(s, s);
    cfg.nu_minus = Wavevector::Zero();
  } else {
    cfg.nu_plus = Wavevector(o.nu_plus, 0.0);
    cfg.nu_minus = Wavevector(o.nu_minus, 0.0);
  }
  const KhBound kb = kh_bound(cfg);
  Sink sink(o.out);
  *sink.csv << "bound,tau_min,closed_form\n"
            << num(kb.bound) << "," << num(kb.tau_min) << "," << (kb.closed_form ? "true" : "false") << "\n";
  return 0;
}

int cmd_scan(const WaveOptions& o) {
  OneFluidConfig cfg;
  cfg.g = o.g, cfg.sigma = o.sigma, cfg.h0 = parse_depth(o.h0), cfg.c_vec = Wavevector(o.c, 0.0);
  cfg.validate();
  if (!(o.k_min > 0.0) || !(o.k_max > o.k_min) || o.points < 2) throw InvalidInput("capillary_scan: bad log grid");
  Sink sink(o.out);
  *sink.csv << "k,multiplier\n";
  for (Index i = 0; i < o.points; ++i) {
    const double k = o.k_min * std::pow(o.k_max / o.k_min, static_cast<double>(i) / static_cast<double>(o.points - 1));
    *sink.csv << num(k) << "," << num(capillary_multiplier(Wavevector(k, 0.0), cfg)) << "\n";
  }
  const CoercivityScan s = capillary_scan(cfg, o.k_min, o.k_max, o.points);
  *sink.report << "min " << num(s.min_value) << " at k = " << num(s.k_at_min) << ", negative modes " << s.negative_count
               << "\n";
  return 0;
}

// ---- picard -----------------------------------------------------------------------

int cmd_picard(const ModelOptions& mo, const std::string& u0s, double T, double dt, double tol, unsigned seed,
               const std::string& out) {
  const ModelSystem m = mo.build();
  Vec u0;
  if (!u0s.empty()) {
    const auto v = parse_list(u0s, "--u0");
    if (static_cast<Index>(v.size()) != m.dimension)
      throw InvalidInput("picard: --u0 needs " + std::to_string(m.dimension) + " entries");
    u0 = Eigen::Map<const Vec>(v.data(), m.dimension);
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vec d(m.dimension);
    for (Index i = 0; i < m.dimension; ++i) d[i] = normal(rng);
    u0 = m.equilibrium + 0.05 * d.normalized();
  }
  const PicardResult pr = picard_solve(m, u0, T, dt, 50, tol);
  const Vec ref = rk4_flow(m.field, u0, T, 0.25 * dt);
  Sink sink(out);
  std::ostream& csv = *sink.csv;
  csv << "t";
  for (Index i = 0; i < m.dimension; ++i) csv << ",u_" << i + 1;
  csv << "\n";
  for (Index j = 0; j < pr.orbit.nodes(); ++j) {
    csv << num(pr.orbit.times[j]);
    for (Index i = 0; i < m.dimension; ++i) csv << "," << num(pr.orbit.states(i, j));
    csv << "\n";
  }
  *sink.report << "iterations " << pr.iterations << ", contraction " << num(pr.contraction) << ", |u(T) - rk4| "
               << num((pr.orbit.states.col(pr.orbit.nodes() - 1) - ref).norm()) << "\n";
  return 0;
}

// ---- verify -----------------------------------------------------------------------

int cmd_verify(const std::string& suite) {
  const auto results = run_verify_suite(suite);
  const CheckResult* first_fail = nullptr;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " -- " << r.detail << "\n";
    if (!r.pass && !first_fail) first_fail = &r;
  }
  if (first_fail) {
    std::cout << "first failing invariant: " << first_fail->name << "\n";
    return 2;
  }
  std::cout << "all " << results.size() << " checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov-Perron manifolds and spectral criteria", "lpm"};
  app.footer("Every subcommand also takes --config FILE (key=value lines, keys are long option names).");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ModelOptions mo;
  std::string out;

  CLI::App* split = app.add_subcommand("split", "spectral splitting report");
  mo.add(split);
  split->add_option("--out", out, "CSV output file");

  ManifoldOptions mf;
  CLI::App* manifold = app.add_subcommand("manifold", "sample the local manifold graph");
  mo.add(manifold);
  manifold->add_option("--eps", mf.eps, "radius of the base-point ball");
  manifold->add_option("--grid", mf.grid, "points per axis");
  manifold->add_option("--lambda", mf.lambda, "weight rate (default: middle of the gap)");
  manifold->add_option("--T-max", mf.T_max, "truncation horizon");
  manifold->add_option("--dt", mf.dt, "quadrature step");
  manifold->add_option("--max-iter", mf.max_iter, "iteration cap");
  manifold->add_option("--tol", mf.tol, "fixed-point tolerance");
  manifold->add_option("--r", mf.r, "space level");
  manifold->add_option("--jobs", mf.jobs, "worker threads");
  manifold->add_flag("--force", mf.force, "run even when the contraction budget fails");
  manifold->add_option("--invariance-dt", mf.invariance_dt, "flow time of the invariance check (0 skips it)");
  manifold->add_option("--out", mf.out, "CSV output file");
  manifold->add_option("--plot", mf.plot, "whitespace-delimited plot data file");
  manifold->add_option("--seed", mf.seed, "seed for constant sampling");
  manifold->add_option("--path", mf.path, "semilinear | quasilinear")
      ->check(CLI::IsMember({"semilinear", "quasilinear"}));

  MmtParams scan_p;
  scan_p.xi0 = 2;
  std::string a_list = "0.5,1,2";
  int xi_min = -4, xi_max = 8;
  CLI::App* mmt_scan = app.add_subcommand("mmt-scan", "MMT mode-pair instability table");
  mmt_scan->add_option("--alpha", scan_p.alpha);
  mmt_scan->add_option("--beta", scan_p.beta);
  mmt_scan->add_option("--sigma", scan_p.sigma);
  mmt_scan->add_option("--xi0", scan_p.xi0);
  mmt_scan->add_option("--a-list", a_list, "comma-separated amplitudes");
  mmt_scan->add_option("--xi-min", xi_min);
  mmt_scan->add_option("--xi-max", xi_max);
  mmt_scan->add_option("--out", out, "CSV output file");

  WaveOptions wo;
  CLI::App* wave = app.add_subcommand("waterwave", "flat-state water-wave multipliers");
  wave->require_subcommand(1);
  CLI::App* w_symbol = wave->add_subcommand("symbol", "Dirichlet-Neumann symbol |k| tanh(h0 |k|)");
  w_symbol->add_option("--k", wo.k, "comma-separated wavenumbers");
  w_symbol->add_option("--h0", wo.h0, "depth (number or inf)");
  CLI::App* w_froude = wave->add_subcommand("froude", "Froude and Bond numbers with the coercivity flag");
  w_froude->add_option("--g", wo.g);
  w_froude->add_option("--h0", wo.h0, "depth");
  w_froude->add_option("--c", wo.c, "background speed");
  w_froude->add_option("--sigma", wo.sigma, "surface tension");
  CLI::App* w_kh = wave->add_subcommand("kh", "Kelvin-Helmholtz / Rayleigh-Taylor bound");
  w_kh->add_option("--rho-", wo.rho_minus, "lower density");
  w_kh->add_option("--rho+", wo.rho_plus, "upper density");
  w_kh->add_option("--g", wo.g);
  w_kh->add_option("--sigma", wo.sigma);
  w_kh->add_option("--b", wo.b, "rho_+|nu_+|^2 + rho_-|nu_-|^2 (overrides --nu+/--nu-)");
  w_kh->add_option("--depth", wo.depth, "both depths (number or inf)");
  w_kh->add_option("--h+", wo.h_plus, "upper depth");
  w_kh->add_option("--h-", wo.h_minus, "lower depth");
  w_kh->add_option("--nu+", wo.nu_plus, "upper velocity");
  w_kh->add_option("--nu-", wo.nu_minus, "lower velocity");
  CLI::App* w_scan = wave->add_subcommand("scan", "capillary multiplier on a log grid");
  w_scan->add_option("--g", wo.g);
  w_scan->add_option("--h0", wo.h0, "depth");
  w_scan->add_option("--c", wo.c, "background speed");
  w_scan->add_option("--sigma", wo.sigma);
  w_scan->add_option("--k-min", wo.k_min);
  w_scan->add_option("--k-max", wo.k_max);
  w_scan->add_option("--points", wo.points);
  for (CLI::App* sub : {w_symbol, w_froude, w_kh, w_scan}) sub->add_option("--out", wo.out, "CSV output file");

  std::string u0s;
  double pT = 0.5, pdt = 1e-3, ptol = 1e-10;
  unsigned pseed = 7;
  CLI::App* picard = app.add_subcommand("picard", "Picard fixed point of the linearized flow");
  mo.add(picard);
  picard->add_option("--u0", u0s, "comma-separated initial state (default: seeded offset of size 0.05)");
  picard->add_option("--T", pT);
  picard->add_option("--dt", pdt);
  picard->add_option("--tol", ptol);
  picard->add_option("--seed", pseed);
  picard->add_option("--out", out, "CSV output file");

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "self-check suites");
  verify->add_option("--suite", suite, "all | acceptance | graded_space | linear_analysis | model_library | "
                                        "lyapunov_perron | waterwave_linear | oracles");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*split) return cmd_split(mo, out);
    if (*manifold) return cmd_manifold(mo, mf);
    if (*mmt_scan) return cmd_mmt_scan(scan_p, a_list, xi_min, xi_max, out);
    if (*w_symbol) return cmd_symbol(wo);
    if (*w_froude) return cmd_froude(wo);
    if (*w_kh) return cmd_kh(wo);
    if (*w_scan) return cmd_scan(wo);
    if (*picard) return cmd_picard(mo, u0s, pT, pdt, ptol, pseed, out);
    if (*verify) return cmd_verify(suite);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
