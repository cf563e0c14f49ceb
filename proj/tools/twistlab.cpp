// twistlab command-line checks.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <twistlab.hpp>

using namespace twistlab;
using nlohmann::json;

namespace {

struct Common {
  int n = 1;
  int kmax = -1;
  int grid_m = 64;
  double grid_l = -1.0;
  int nt = 32;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";

  int k_or(int fallback) const { return kmax >= 0 ? kmax : fallback; }
  GridSpec grid(int k) const { return make_grid(n, grid_l > 0 ? grid_l : default_half_width(n, k), grid_m); }
};

void add_common(CLI::App* sub, Common& c) {
  sub->allow_config_extras(CLI::config_extras_mode::error);
  sub->add_option("--n", c.n, "complex dimension")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--kmax", c.kmax, "truncation degree (-1: subcommand default)")->capture_default_str();
  sub->add_option("--grid-m", c.grid_m, "points per real axis (even, >= 8)")->capture_default_str();
  sub->add_option("--grid-l", c.grid_l, "grid half-width (-1: default for kmax)")->capture_default_str();
  sub->add_option("--nt", c.nt, "time nodes (even)")->capture_default_str();
  sub->add_option("--seed", c.seed, "base seed")->capture_default_str();
  sub->add_option("--out", c.out, "output path (default: stdout)");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

/// One named check with its measured value and tolerance.
struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

Check at_most(std::string name, double value, double tol) { return {std::move(name), value, tol, value <= tol}; }

json checks_json(const std::vector<Check>& cs) {
  json a = json::array();
  for (const auto& c : cs)
    a.push_back({{"name", c.name}, {"value", detail::finite_or_string(c.value)}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  return a;
}

void write_checks_csv(std::ostream& os, const std::vector<Check>& cs) {
  os << "check,value,tolerance,pass\n" << std::setprecision(17);
  for (const auto& c : cs) os << c.name << ',' << c.value << ',' << c.tolerance << ',' << (c.pass ? 1 : 0) << '\n';
}

/// Writes through `body` to --out or stdout.
template <class Body>
void emit(const Common& c, Body&& body) {
  if (c.out.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot open " + c.out);
  body(f);
}

int report(const std::vector<Check>& cs) {
  int failed = 0;
  for (const auto& c : cs)
    if (!c.pass) {
      std::cerr << "FAIL " << c.name << ": " << c.value << " (tolerance " << c.tolerance << ")\n";
      ++failed;
    }
  return failed ? 1 : 0;
}

SpectralCoeffs random_coeffs(const Truncation& tr, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  auto c = SpectralCoeffs::zeros(tr);
  for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) c.coeffs(i) = {d(rng), d(rng)};
  c.coeffs /= c.coeffs.norm();
  return c;
}

// verify-basis

struct BasisOpts {
  double gram_tol = 1e-6;
  double eig_tol = 1e-3;
  int eig_m = -1;
  int eig_kmax = 6;
};

int verify_basis(const Common& c, const BasisOpts& o) {
  const int k = c.k_or(8);
  const Truncation tr(c.n, k);
  const GridSpec g = c.grid(k);
  const Eigen::MatrixXcd B = sample_basis(tr, g);
  const Eigen::MatrixXcd G = B.adjoint() * g.weights().asDiagonal() * B;
  const double gram = (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();

  const int ke = std::min(k, o.eig_kmax);
  const Truncation tre(c.n, ke);
  const int me = o.eig_m > 0 ? o.eig_m : (c.n == 1 ? 256 : c.grid_m);
  const GridSpec ge = make_grid(c.n, c.grid_l > 0 ? c.grid_l : default_half_width(c.n, ke), me);
  if (static_cast<double>(ge.size()) * tre.size() > dense_entry_limit)
    throw size_guard_error("verify-basis: eigenrelation grid too large; lower --eig-m");
  const Eigen::MatrixXcd Be = sample_basis(tre, ge);
  std::vector<double> residual(tre.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < tre.size(); ++i) {
    Field phi{ge, Be.col(static_cast<Eigen::Index>(i))};
    Field expect = zero_boundary_ring(Field{ge, double(tre[i].eigenvalue()) * phi.values});
    residual[i] = lp_norm(Field{ge, apply_twisted_laplacian(phi).values - expect.values}, 2.0) / lp_norm(phi, 2.0);
    worst = std::max(worst, residual[i]);
  }
  std::vector<Check> cs{at_most("gram_max_error", gram, o.gram_tol), at_most("eigenrelation_max_residual", worst, o.eig_tol)};

  emit(c, [&](std::ostream& os) {
    if (c.format == "csv") {
      os << "mu,nu,lambda,residual\n" << std::setprecision(17);
      for (std::size_t i = 0; i < tre.size(); ++i)
        os << '"' << tre[i].mu.str() << "\",\"" << tre[i].nu.str() << "\"," << tre[i].eigenvalue() << ',' << residual[i] << '\n';
      return;
    }
    json modes = json::array();
    for (std::size_t i = 0; i < tre.size(); ++i)
      modes.push_back({{"mu", tre[i].mu.entries()}, {"nu", tre[i].nu.entries()}, {"residual", residual[i]}});
    os << json{{"discretization", discretization_json(g, TimeGrid(c.nt), k)},
               {"eigen_grid_m", me},
               {"gram_max_error", gram},
               {"eigenrelation", modes},
               {"checks", checks_json(cs)}}
              .dump(2)
       << '\n';
  });
  return report(cs);
}

// verify-kernel

struct KernelOpts {
  double r = 0.5;
  double path_tol = 1e-6;
  double plancherel_tol = 1e-6;
  int points = 400;
};

int verify_kernel(const Common& c, const KernelOpts& o) {
  const int k = c.k_or(4);
  const GridSpec g = c.grid(k);
  const TimeGrid tg(c.nt);

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-g.half_width, g.half_width);
  double bound = 0.0;
  for (int i = 0; i < o.points; ++i) {
    std::vector<cplx> z(c.n);
    for (auto& v : z) v = {u(rng), u(rng)};
    for (double t : tg.nodes())
      bound = std::max(bound, std::abs(mehler_kernel(ComplexTime{0.0, t}, z)) * std::pow(std::abs(std::sin(t)), c.n));
  }

  const Truncation tr(c.n, k);
  const SpectralBasis basis(tr, g);
  const auto coeffs = random_coeffs(tr, c.seed);
  const Field f = basis.inverse(coeffs);
  double path = 0.0;
  for (double t : {0.0, 0.7, -2.2}) {
    const ComplexTime eta{o.r, t};
    const Field s = basis.inverse(evolve_spectral(coeffs, eta));
    path = std::max(path, lp_norm(Field{g, evolve_kernel(f, eta).values - s.values}, 2.0) / lp_norm(s, 2.0));
  }

  double period = 0.0, unit = 0.0;
  for (double t : {0.5, -2.75, 1.0, 3.0}) {
    period = std::max(period, (propagate(coeffs, t).coeffs - propagate(coeffs, t + 2 * std::numbers::pi).coeffs).cwiseAbs().maxCoeff());
    unit = std::max(unit, std::abs(propagate(coeffs, t).coeffs.norm() - 1.0));
  }
  const double fn = lp_norm(f, 2.0);
  const double planch = std::abs(basis.forward(f).energy() - fn * fn);

  std::vector<Check> cs{at_most("kernel_modulus_times_sin_n", bound, 2.0), at_most("kernel_vs_spectral_rel_l2", path, o.path_tol),
                        at_most("periodicity_max_diff", period, 1e-14), at_most("unitarity_norm_drift", unit, 1e-14),
                        at_most("plancherel_error", planch, o.plancherel_tol)};
  emit(c, [&](std::ostream& os) {
    if (c.format == "csv")
      write_checks_csv(os, cs);
    else
      os << json{{"discretization", discretization_json(g, tg, k)}, {"r", o.r}, {"checks", checks_json(cs)}}.dump(2) << '\n';
  });
  return report(cs);
}

// schatten-bound

struct SchattenOpts {
  int samples = 50;
  double alpha = -1.0;
  double smoothing = 0.2;
  double spread_tol = 5.0;
};

int schatten_bound(const Common& c, const SchattenOpts& o) {
  const int k = c.k_or(4);
  const Truncation tr(c.n, k);
  const TimeGrid tg(c.nt);
  const auto P = build_propagation_matrix(tr, tg, c.grid(k));
  auto ex = DualityExponents::diagonal(c.n);
  if (o.alpha > 0) ex.alpha = o.alpha;
  ex.validate();

  std::vector<FormValue> vals;
  std::vector<SchattenReport> reps;
  for (int i = 0; i < o.samples; ++i) {
    const TimeField W = random_weight(tg, P.grid, c.seed + i, o.smoothing);
    vals.push_back(schatten_form(W, P, ex));
    reps.push_back(sandwich_schatten(W, P, ex.alpha));
  }
  std::vector<double> ratios;
  bool finite = true;
  for (const auto& v : vals) {
    ratios.push_back(v.ratio());
    finite = finite && std::isfinite(v.ratio()) && v.ratio() > 0.0;
  }
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  const double mx = sorted.back();
  std::vector<Check> cs{{"ratios_finite", finite ? 1.0 : 0.0, 1.0, finite}, at_most("max_over_median", mx / median, o.spread_tol)};

  emit(c, [&](std::ostream& os) {
    if (c.format == "csv") {
      os << "seed,lhs,rhs,ratio\n" << std::setprecision(17);
      for (int i = 0; i < o.samples; ++i) os << c.seed + i << ',' << vals[i].lhs << ',' << vals[i].rhs << ',' << ratios[i] << '\n';
      return;
    }
    const auto disc = discretization_json(P.grid, tg, k);
    json rows = json::array();
    for (int i = 0; i < o.samples; ++i) {
      json r = schatten_json("W A A^* conj(W)", reps[i], disc, c.seed + i, 8);
      r["weight_norm_sq"] = vals[i].rhs;
      r["ratio"] = ratios[i];
      rows.push_back(r);
    }
    os << json{{"discretization", disc},
               {"alpha", ex.alpha},
               {"weight_exponents", {ex.weight_time(), ex.weight_space()}},
               {"max_ratio", mx},
               {"median_ratio", median},
               {"samples", rows},
               {"checks", checks_json(cs)}}
              .dump(2)
       << '\n';
  });
  return report(cs);
}

// singularity

struct SingularityOpts {
  double z_re = -0.5;
  double z_im = 0.0;
  double tau = 1e-4;
  double t_min = 0.2;
  double t_max = std::numbers::pi - 0.2;
  int t_count = 30;
  long long k_cut = -1;
  double stability_tol = 0.1;
};

int singularity(const Common& c, const SingularityOpts& o) {
  ProbeConfig cfg;
  cfg.z = {o.z_re, o.z_im};
  cfg.tau = o.tau;
  cfg.k_cut = o.k_cut;
  if (o.t_count < 1 || !(o.t_max >= o.t_min)) throw std::invalid_argument("singularity: need t-count >= 1 and t-max >= t-min");
  for (int i = 0; i < o.t_count; ++i)
    cfg.t_samples.push_back(o.t_count == 1 ? o.t_min : o.t_min + (o.t_max - o.t_min) * i / (o.t_count - 1));
  cfg.validate();
  const auto prof = remainder_profile(cfg);

  ProbeConfig finer = cfg;
  finer.tau = cfg.tau / 10;
  if (finer.k_cut > 0) finer.k_cut *= 10;
  const auto prof10 = remainder_profile(finer);
  const double stab = std::abs(prof.sup_abs - prof10.sup_abs) / prof10.sup_abs;
  std::vector<Check> cs{{"remainder_finite", prof.sup_abs, inf, std::isfinite(prof.sup_abs)},
                        at_most("tau_stability", stab, o.stability_tol)};
  emit(c, [&](std::ostream& os) {
    if (c.format == "csv") {
      write_singularity_csv(os, cfg, prof);
      return;
    }
    json j = singularity_json(cfg, prof);
    j["sup_remainder_tau_over_10"] = prof10.sup_abs;
    j["checks"] = checks_json(cs);
    os << j.dump(2) << '\n';
  });
  return report(cs);
}

// strichartz-sweep

struct SweepOpts {
  SweepConfig cfg;
  std::string summary;
};

int strichartz_sweep(const Common& c, SweepOpts o) {
  auto& cfg = o.cfg;
  cfg.n = c.n;
  cfg.k_max = c.kmax;
  cfg.grid_points = c.grid_m;
  cfg.grid_half_width = c.grid_l;
  cfg.time_nodes = c.nt;
  cfg.seed = c.seed;
  const auto rep = sweep(cfg);

  bool finite = true;
  int offline = 0;
  for (const auto& r : rep.rows) {
    finite = finite && std::isfinite(r.ratio);
    offline += r.admissible ? 0 : 1;
  }
  if (offline) std::cerr << "warning: " << offline << " rows off the admissible line\n";
  std::vector<Check> cs{{"ratios_finite", finite ? 1.0 : 0.0, 1.0, finite}};
  const double e = rep.summary.growth_exponent;
  if (std::isfinite(e)) cs.push_back({"growth_exponent_below_1", e, 1.0, e < 1.0});

  json summary = sweep_summary_json(rep);
  summary["checks"] = checks_json(cs);
  emit(c, [&](std::ostream& os) {
    if (c.format == "csv")
      write_sweep_csv(os, rep);
    else
      os << summary.dump(2) << '\n';
  });
  if (!o.summary.empty()) {
    std::ofstream f(o.summary);
    if (!f) throw std::runtime_error("cannot open " + o.summary);
    f << summary.dump(2) << '\n';
  }
  return report(cs);
}

// duality-check

struct DualityOpts {
  int pairs = 20;
  double p = -1.0, q = -1.0, alpha = -1.0;
  double factor = 3.0;
};

int duality_check_cmd(const Common& c, const DualityOpts& o) {
  const int k = c.k_or(4);
  const Truncation tr(c.n, k);
  const TimeGrid tg(c.nt);
  const auto P = build_propagation_matrix(tr, tg, c.grid(k));
  auto ex = DualityExponents::diagonal(c.n);
  if (o.p > 0) ex.p = o.p;
  if (o.q > 0) ex.q = o.q;
  if (o.alpha > 0) ex.alpha = o.alpha;
  ex.validate();
  if (o.pairs < 2) throw std::invalid_argument("duality-check: need at least 2 pairs");

  const int nW = o.pairs / 2, nS = o.pairs - nW;
  std::vector<TimeField> Ws;
  for (int i = 0; i < nW; ++i) Ws.push_back(random_weight(tg, P.grid, c.seed + 1000 + i));
  std::vector<std::pair<OrthonormalSystem, CoefficientVector>> systems;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  const int D = static_cast<int>(tr.size());
  for (int i = 0; i < nS; ++i) {
    const int N = 1 + (2 * i) % D;
    CoefficientVector nj{Eigen::VectorXcd(N)};
    for (int j = 0; j < N; ++j) nj.values(j) = unit(rng);
    systems.emplace_back(sample_orthonormal_system(tr, N, c.seed + 500 + i), nj);
  }
  const auto rep = duality_check(P, systems, Ws, ex);
  std::vector<Check> cs{{"ratios_finite", rep.finite ? 1.0 : 0.0, 1.0, rep.finite},
                        at_most("pairing_violations", rep.pairing_violations, 0.0),
                        at_most("constant_ratio", rep.constant_ratio, o.factor)};
  emit(c, [&](std::ostream& os) {
    if (c.format == "csv") {
      os << "sample,kind,schatten_ratio,density_ratio\n" << std::setprecision(17);
      for (std::size_t i = 0; i < rep.schatten_ratios.size(); ++i)
        os << i << ',' << (i < Ws.size() ? "weight" : "system") << ',' << rep.schatten_ratios[i] << ','
           << rep.density_ratios[i] << '\n';
      return;
    }
    json j = duality_json(rep, ex);
    j["discretization"] = discretization_json(P.grid, tg, k);
    j["schatten_ratios"] = rep.schatten_ratios;
    j["density_ratios"] = rep.density_ratios;
    j["checks"] = checks_json(cs);
    os << j.dump(2) << '\n';
  });
  return report(cs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the twisted Laplacian propagator"};
  app.set_config("--config", "", "key/value config file (TOML or INI) mirroring the flags");
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common common;

  BasisOpts bo;
  auto* vb = app.add_subcommand("verify-basis", "Gram matrix and eigenrelation of the special Hermite basis");
  add_common(vb, common);
  vb->add_option("--gram-tol", bo.gram_tol)->capture_default_str();
  vb->add_option("--eig-tol", bo.eig_tol)->capture_default_str();
  vb->add_option("--eig-m", bo.eig_m, "grid points for the eigenrelation (-1: 256 at n = 1)")->capture_default_str();
  vb->add_option("--eig-kmax", bo.eig_kmax, "largest |mu|, |nu| in the eigenrelation")->capture_default_str();

  KernelOpts ko;
  auto* vk = app.add_subcommand("verify-kernel", "Mehler kernel bound, kernel vs spectral path, unitarity");
  add_common(vk, common);
  vk->add_option("--r", ko.r, "real part of the complex time")->capture_default_str();
  vk->add_option("--path-tol", ko.path_tol)->capture_default_str();
  vk->add_option("--points", ko.points, "sampled points for the modulus bound")->capture_default_str();

  SchattenOpts so;
  auto* sb = app.add_subcommand("schatten-bound", "Schatten norms of W A A^* conj(W) over random weights");
  add_common(sb, common);
  sb->add_option("--samples", so.samples)->capture_default_str();
  sb->add_option("--alpha", so.alpha, "Schatten exponent (-1: 2(n+1))")->capture_default_str();
  sb->add_option("--smoothing", so.smoothing)->capture_default_str();
  sb->add_option("--spread-tol", so.spread_tol, "bound on max/median")->capture_default_str();

  SingularityOpts sg;
  auto* si = app.add_subcommand("singularity", "Abel-summed series against its singular term");
  add_common(si, common);
  si->add_option("--z-re", sg.z_re)->capture_default_str();
  si->add_option("--z-im", sg.z_im)->capture_default_str();
  si->add_option("--tau", sg.tau)->capture_default_str();
  si->add_option("--t-min", sg.t_min)->capture_default_str();
  si->add_option("--t-max", sg.t_max)->capture_default_str();
  si->add_option("--t-count", sg.t_count)->capture_default_str();
  si->add_option("--k-cut", sg.k_cut, "series cutoff (-1: tail below 1e-16)")->capture_default_str();
  si->add_option("--stability-tol", sg.stability_tol)->capture_default_str();

  SweepOpts sw;
  auto* ss = app.add_subcommand("strichartz-sweep", "Orthonormal-system Strichartz quotients over q and N");
  add_common(ss, common);
  ss->add_option("--q", sw.cfg.q_values, "q values")->capture_default_str();
  ss->add_option("--N", sw.cfg.N_values, "system sizes")->capture_default_str();
  ss->add_option("--trials", sw.cfg.trials)->capture_default_str();
  ss->add_option("--summary", sw.summary, "also write the summary JSON here");

  DualityOpts dop;
  auto* dc = app.add_subcommand("duality-check", "Both duality forms on paired samples");
  add_common(dc, common);
  dc->add_option("--pairs", dop.pairs)->capture_default_str();
  dc->add_option("--p", dop.p, "-1: diagonal value")->capture_default_str();
  dc->add_option("--q", dop.q, "-1: diagonal value")->capture_default_str();
  dc->add_option("--alpha", dop.alpha, "-1: diagonal value")->capture_default_str();
  dc->add_option("--factor", dop.factor, "allowed ratio of the two constants")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (vb->parsed()) return verify_basis(common, bo);
    if (vk->parsed()) return verify_kernel(common, ko);
    if (sb->parsed()) return schatten_bound(common, so);
    if (si->parsed()) return singularity(common, sg);
    if (ss->parsed()) return strichartz_sweep(common, sw);
    if (dc->parsed()) return duality_check_cmd(common, dop);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
