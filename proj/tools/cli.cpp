#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "acceptance.hpp"
#include "innerlab/counting.hpp"
#include "innerlab/distortion.hpp"
#include "innerlab/errors.hpp"
#include "innerlab/lamination.hpp"
#include "innerlab/lyapunov.hpp"
#include "innerlab/parallel.hpp"
#include "innerlab/parabolic.hpp"
#include "innerlab/textio.hpp"
#include "innerlab/version.hpp"

namespace innerlab::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cplx parse_complex(const std::string& s) {
  const auto [x, y] = textio::parse_pair(s, 0);
  return {x, y};
}

bool is_halfplane(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = textio::trim(line);
    if (line.rfind("kind", 0) == 0 && line.find("halfplane") != std::string::npos) return true;
  }
  return false;
}

InnerModel load_disk(const std::string& path) {
  const std::string text = read_file(path);
  if (is_halfplane(text)) throw UsageError(path + " is a half-plane model");
  return InnerModel::parse(text);
}

HalfPlaneInner load_halfplane(const std::string& path) { return HalfPlaneInner::parse(read_file(path)); }

// Header with version stamp and the subcommand's resolved configuration.
std::string header(const CLI::App& sub, const std::string& model_text) {
  std::string out = "# innerlab " + std::string(kVersion) + "\n# [" + sub.get_name() + "]\n";
  std::istringstream cfg(sub.config_to_str(true, false));
  std::string line;
  while (std::getline(cfg, line))
    if (!line.empty()) out += "# " + line + "\n";
  std::istringstream m(model_text);
  while (std::getline(m, line))
    if (!line.empty() && line[0] != '#') out += "# model: " + line + "\n";
  return out;
}

std::vector<double> grid_to(double R, double step) {
  if (!(step > 0.0)) throw UsageError("--step must be positive");
  std::vector<double> Rs;
  for (int k = 1; k * step < R - 1e-12; ++k) Rs.push_back(k * step);
  Rs.push_back(R);
  return Rs;
}

struct Common {
  int threads = 0;
  std::string out;
};

struct CountArgs {
  std::string model, z;
  double R = 12.0, step = 1.0;
  long budget = 50'000'000;
  std::string tree;
};

struct LyapunovArgs {
  std::string model, method = "all";
  double tol = 1e-12, theta0 = 0.1234567;
  long n = 1'000'000;
  std::uint64_t seed = 1;
};

struct ScanArgs {
  std::string model;
  std::vector<int> truncations;
  double theta = 0.0, tol = 1e-10;
  std::vector<double> r_max{0.99, 0.9999, 0.999999};
};

struct OrbitArgs {
  std::string model, z;
  std::optional<double> theta;
  long n = 100;
  std::string policy = "uniform";
  std::vector<int> branches;
  std::uint64_t seed = 1;
  long radial_stat = 0;
};

struct XiArgs {
  std::string model;
  std::vector<double> box{0.5, 0.6, 0.1, 0.5};
  int depth = 3, cells_r = 4, cells_theta = 8;
};

struct MassArgs {
  std::string model;
  std::vector<double> r0{0.9, 0.99};
  long samples = 10'000'000;
  std::uint64_t seed = 1;
  double target_se = 0.0;
};

struct ShadowArgs {
  std::string bad = "dyadic", adversary = "upright";
  double T = 1e4, x0 = 0.0, y0 = 1.0, max_step = 0.01;
  int curve_points = 200;
};

struct ParabolicArgs {
  std::string model, z = "0,0.5";
  std::vector<double> interval{-1.0, 1.0};
  double R = 10.0, step = 1.0, re_safety = 16.0, tol = 1e-9;
  long budget = 50'000'000;
};

std::string run_count(const CLI::App& sub, const CountArgs& a, int threads, bool cesaro_only) {
  const std::string text = read_file(a.model);
  const InnerModel f = load_disk(a.model);
  const cplx z = parse_complex(a.z);
  EnumerateOptions opt;
  opt.node_budget = a.budget;
  opt.threads = threads;
  const PreimageTree tree = enumerate_ball(f, z, a.R, opt);
  if (!a.tree.empty()) {
    std::ofstream t(a.tree);
    if (!t) throw UsageError("cannot write " + a.tree);
    t << tree.to_csv();
  }
  const double chi = chi_jensen_oracle(f).value;
  const CountingProfile prof = CountingProfile::from_tree(tree, chi);
  std::string out = header(sub, text);
  out += "# chi=" + fmt(chi) + " nodes=" + std::to_string(tree.nodes().size()) +
         " collisions=" + std::to_string(tree.collisions()) + "\n";
  out += cesaro_only ? "R,cesaro,target,cesaro_ratio\n" : "R,count,count_over_eR,cesaro,target,ratio,cesaro_ratio\n";
  for (const CountingRow& r : counting_table(prof, grid_to(a.R, a.step))) {
    if (cesaro_only)
      out += fmt(r.R) + "," + fmt(r.cesaro) + "," + fmt(r.target) + "," + fmt(r.cesaro_ratio) + "\n";
    else
      out += fmt(r.R) + "," + fmt(r.count) + "," + fmt(r.count_over_eR) + "," + fmt(r.cesaro) + "," + fmt(r.target) +
             "," + fmt(r.ratio) + "," + fmt(r.cesaro_ratio) + "\n";
  }
  return out;
}

std::string run_lyapunov(const CLI::App& sub, const LyapunovArgs& a) {
  const std::string text = read_file(a.model);
  const InnerModel f = load_disk(a.model);
  std::vector<LyapunovEstimate> rows;
  const bool all = a.method == "all";
  if (all || a.method == "quadrature") rows.push_back(chi_quadrature(f, a.tol));
  if (all || a.method == "jensen") rows.push_back(chi_jensen_oracle(f));
  if (all || a.method == "birkhoff") rows.push_back(chi_birkhoff(f, a.theta0, a.n, a.seed));
  std::string out = header(sub, text) + "method,value,error,converged,restarts\n";
  for (const LyapunovEstimate& e : rows)
    out += to_string(e.method) + "," + fmt(e.value) + "," + fmt(e.error) + "," + (e.converged ? "1" : "0") + "," +
           std::to_string(e.restarts) + "\n";
  return out;
}

std::string run_scan(const CLI::App& sub, const ScanArgs& a, int threads) {
  std::vector<std::pair<std::string, InnerModel>> family;
  std::string text;
  if (!a.model.empty()) {
    text = read_file(a.model);
    family.emplace_back(a.model, load_disk(a.model));
  }
  for (int K : a.truncations) {
    if (K < 1) throw UsageError("truncation orders must be positive");
    std::vector<cplx> zeros;
    for (int k = 1; k <= K; ++k) zeros.push_back(std::polar(1.0 - std::ldexp(1.0, -k), a.theta));
    family.emplace_back("truncation_K" + std::to_string(K), InnerModel::blaschke(zeros));
  }
  if (family.empty()) throw UsageError("give --model or --truncations");
  std::string out = header(sub, text) +
                    "model_id,r_max,integral_mu,integral_eta,integral_delta,integral_alpha,log_angular_derivative\n";
  for (const CriterionRow& r : angular_derivative_criterion_scan(family, a.theta, a.r_max, a.tol, threads))
    out += r.model_id + "," + fmt(r.r_max) + "," + fmt(r.integral_mu) + "," + fmt(r.integral_eta) + "," +
           fmt(r.integral_delta) + "," + fmt(r.integral_alpha) + "," + fmt(r.log_angular_derivative) + "\n";
  return out;
}

BranchPolicy parse_policy(const std::string& s) {
  if (s == "explicit") return BranchPolicy::Explicit;
  if (s == "uniform") return BranchPolicy::Uniform;
  if (s == "lebesgue") return BranchPolicy::Lebesgue;
  throw UsageError("unknown branch policy " + s);
}

std::string run_orbit(const CLI::App& sub, const OrbitArgs& a) {
  const std::string text = read_file(a.model);
  const InnerModel f = load_disk(a.model);
  const BranchPolicy policy = parse_policy(a.policy);
  if (a.z.empty() == !a.theta) throw UsageError("give exactly one of --z and --theta");
  if (a.n < 0) throw UsageError("--n must be nonnegative");
  InverseOrbit o = a.theta ? InverseOrbit::boundary(f, *a.theta, policy, a.seed, a.branches)
                           : InverseOrbit::interior(f, Polar::from_complex(parse_complex(a.z)), policy, a.seed,
                                                    a.branches);
  o.extend(static_cast<std::size_t>(a.n));
  std::string out = header(sub, text);
  out += "# max_residual=" + fmt(o.max_residual()) + "\n";
  if (a.radial_stat > 0) {
    const ShadowingStat st = radial_shadowing_stat(o, static_cast<std::size_t>(a.radial_stat));
    out += "# radial_stat=" + fmt(st.statistic) + " depth_used=" + std::to_string(st.depth_used) +
           " limit_angle=" + fmt(st.limit_angle) + " inconclusive=" + (st.inconclusive ? "1" : "0") + "\n";
  }
  return out + o.to_csv();
}

std::string run_xi(const CLI::App& sub, const XiArgs& a, int threads) {
  const std::string text = read_file(a.model);
  const InnerModel f = load_disk(a.model);
  if (a.box.size() != 4) throw UsageError("--box needs r1,r2,theta1,theta2");
  const AnnularBox box{a.box[0], a.box[1], a.box[2], a.box[3]};
  std::string out = header(sub, text) + "n,mass,error,boundary_mass\n";
  const double bm = box_boundary_mass(box);
  for (int n = 0; n <= a.depth; ++n) {
    const BoxMassEstimate m = xi_box_mass(f, box, n, a.cells_r, a.cells_theta, threads);
    out += std::to_string(n) + "," + fmt(m.mass) + "," + fmt(m.error) + "," + fmt(bm) + "\n";
  }
  return out;
}

std::string run_mass(const CLI::App& sub, const MassArgs& a, int threads) {
  const std::string text = read_file(a.model);
  const InnerModel f = load_disk(a.model);
  std::optional<double> target;
  if (a.target_se > 0.0) target = a.target_se;
  std::string out = header(sub, text) + "r0,samples,mass,std_error,chi,relative_error\n";
  for (double r0 : a.r0) {
    const TotalMass m = total_mass_check(f, r0, a.samples, a.seed, threads, target);
    out += fmt(r0) + "," + std::to_string(m.samples) + "," + fmt(m.mass) + "," + fmt(m.std_error) + "," +
           fmt(m.chi_reference) + "," + fmt(m.mass / m.chi_reference - 1.0) + "\n";
  }
  return out;
}

std::string run_shadow(const CLI::App& sub, const ShadowArgs& a) {
  BadTimes bad;
  if (a.bad == "none") bad = BadTimes::none();
  else if (a.bad == "dyadic") bad = BadTimes::dyadic(a.T);
  else if (a.bad == "all") bad = BadTimes::all();
  else throw UsageError("unknown bad-time set " + a.bad);
  Adversary adv;
  if (a.adversary == "upright") adv = Adversary::UpRight;
  else if (a.adversary == "right") adv = Adversary::Right;
  else if (a.adversary == "up") adv = Adversary::Up;
  else throw UsageError("unknown adversary " + a.adversary);
  const ShadowResult r = shadowing_simulation(bad, a.T, adv, a.x0, a.y0, a.max_step, a.curve_points);
  std::string out = header(sub, "");
  out += "# limit_x=" + fmt(r.limit_x) + " diverged=" + (r.diverged ? "1" : "0") +
         " average_distance=" + fmt(r.average_distance) + "\n";
  out += "t,avg_min_distance\n";
  for (const auto& [t, v] : r.curve) out += fmt(t) + "," + fmt(v) + "\n";
  return out;
}

std::string run_parabolic(const CLI::App& sub, const ParabolicArgs& a, int threads) {
  const std::string text = read_file(a.model);
  const HalfPlaneInner f = load_halfplane(a.model);
  if (a.interval.size() != 2 || !(a.interval[0] <= a.interval[1])) throw UsageError("--I needs lo,hi with lo <= hi");
  const cplx z = parse_complex(a.z);
  StripOptions opt;
  opt.node_budget = a.budget;
  opt.threads = threads;
  opt.re_safety = a.re_safety;
  const HeightClass hc = height_classify(f, z);
  const StripProfile prof = enumerate_strip(f, z, a.interval[0], a.interval[1], a.R, opt);
  const double chi = chi_ell(f, a.tol);
  std::string out = header(sub, text);
  out += "# chi_ell=" + fmt(chi) + " height=" + (hc.infinite ? "infinite" : "finite") + " (" + hc.note + ")" +
         " nodes=" + std::to_string(prof.nodes.size()) + " re_pruned=" + std::to_string(prof.re_pruned) + "\n";
  out += "R,count,count_over_eR,cesaro,target,ratio,cesaro_ratio\n";
  for (const StripRow& r : strip_counting_report(prof, chi, grid_to(a.R, a.step)))
    out += fmt(r.R) + "," + fmt(r.count) + "," + fmt(r.count_over_eR) + "," + fmt(r.cesaro) + "," + fmt(r.target) +
           "," + fmt(r.ratio) + "," + fmt(r.cesaro_ratio) + "\n";
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"innerlab: orbit counting experiments for inner functions", "innerlab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Read key = value settings; [section] names a subcommand");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (0: INNERLAB_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", common.out, "Output path (default: stdout)");

  CountArgs count_args, cesaro_args;
  auto add_count = [&](const char* name, const char* help, CountArgs& a) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--model", a.model, "Disk model file")->required();
    s->add_option("--z", a.z, "Base point re,im")->required();
    s->add_option("--R", a.R, "Cutoff radius")->capture_default_str();
    s->add_option("--step", a.step, "Row spacing in R")->capture_default_str();
    s->add_option("--budget", a.budget, "Node budget")->capture_default_str();
    s->add_option("--tree", a.tree, "Also write the preimage tree CSV here");
    return s;
  };
  CLI::App* count = add_count("count", "N(z,R) e^-R against the target (columns R,count,count_over_eR,cesaro,target,ratio,cesaro_ratio)", count_args);
  CLI::App* cesaro = add_count("cesaro", "Cesaro means against the target (columns R,cesaro,target,cesaro_ratio)", cesaro_args);

  LyapunovArgs ly;
  CLI::App* lyap = app.add_subcommand("lyapunov", "Lyapunov exponent (columns method,value,error,converged,restarts)");
  lyap->add_option("--model", ly.model, "Disk model file")->required();
  lyap->add_option("--method", ly.method, "quadrature | jensen | birkhoff | all")
      ->check(CLI::IsMember({"quadrature", "jensen", "birkhoff", "all"}))
      ->capture_default_str();
  lyap->add_option("--tol", ly.tol, "Quadrature tolerance")->capture_default_str();
  lyap->add_option("--n", ly.n, "Birkhoff orbit length")->capture_default_str();
  lyap->add_option("--theta0", ly.theta0, "Birkhoff start angle")->default_str("0.1234567");
  lyap->add_option("--seed", ly.seed, "Seed")->capture_default_str();

  ScanArgs sc;
  CLI::App* scan = app.add_subcommand(
      "distortion-scan",
      "Radial distortion integrals (columns model_id,r_max,integral_mu,integral_eta,integral_delta,integral_alpha,log_angular_derivative)");
  scan->add_option("--model", sc.model, "Disk model file");
  scan->add_option("--truncations", sc.truncations, "Orders K of the products with zeros (1-2^-k) e^{i theta}")
      ->delimiter(',');
  scan->add_option("--theta", sc.theta, "Boundary angle")->capture_default_str();
  scan->add_option("--r-max", sc.r_max, "Radii r_max")->delimiter(',')->capture_default_str();
  scan->add_option("--tol", sc.tol, "Quadrature tolerance")->capture_default_str();

  OrbitArgs ob;
  CLI::App* orbit = app.add_subcommand("orbit", "Inverse orbit (columns n,re,im,height,angle)");
  orbit->add_option("--model", ob.model, "Disk model file")->required();
  orbit->add_option("--z", ob.z, "Interior base point re,im");
  orbit->add_option("--theta", ob.theta, "Boundary base angle");
  orbit->add_option("--n", ob.n, "Orbit length")->capture_default_str();
  orbit->add_option("--policy", ob.policy, "explicit | uniform | lebesgue")->capture_default_str();
  orbit->add_option("--branches", ob.branches, "Root indices for the explicit policy")->delimiter(',');
  orbit->add_option("--seed", ob.seed, "Seed")->capture_default_str();
  orbit->add_option("--radial-stat", ob.radial_stat, "Also report the radial shadowing statistic at this N")
      ->capture_default_str();

  XiArgs xi;
  CLI::App* xim = app.add_subcommand("xi-mass", "Box masses for n = 0..depth (columns n,mass,error,boundary_mass)");
  xim->add_option("--model", xi.model, "Disk model file")->required();
  xim->add_option("--box", xi.box, "r1,r2,theta1,theta2")->delimiter(',')->capture_default_str();
  xim->add_option("--depth", xi.depth, "Largest n")->capture_default_str();
  xim->add_option("--cells-r", xi.cells_r, "Radial quadrature cells")->capture_default_str();
  xim->add_option("--cells-theta", xi.cells_theta, "Angular quadrature cells")->capture_default_str();

  MassArgs ms;
  CLI::App* mass = app.add_subcommand("total-mass", "Fundamental-annulus mass (columns r0,samples,mass,std_error,chi,relative_error)");
  mass->add_option("--model", ms.model, "Disk model file")->required();
  mass->add_option("--r0", ms.r0, "Inner radii")->delimiter(',')->capture_default_str();
  mass->add_option("--samples", ms.samples, "Monte Carlo samples")->capture_default_str();
  mass->add_option("--seed", ms.seed, "Seed")->capture_default_str();
  mass->add_option("--target-se", ms.target_se, "Fail with exit 3 if the standard error stays above this")
      ->capture_default_str();

  ShadowArgs sh;
  CLI::App* shadow = app.add_subcommand("shadow-sim", "Shadowing simulation (columns t,avg_min_distance)");
  shadow->add_option("--bad", sh.bad, "none | dyadic | all")->capture_default_str();
  shadow->add_option("--adversary", sh.adversary, "upright | right | up")->capture_default_str();
  shadow->add_option("--T", sh.T, "Horizon")->capture_default_str();
  shadow->add_option("--x0", sh.x0, "Start Re")->capture_default_str();
  shadow->add_option("--y0", sh.y0, "Start Im")->capture_default_str();
  shadow->add_option("--max-step", sh.max_step, "RK4 step bound")->capture_default_str();
  shadow->add_option("--curve-points", sh.curve_points, "Rows of the running-average curve")->capture_default_str();

  ParabolicArgs pb;
  CLI::App* para = app.add_subcommand("parabolic-count", "Strip counting (columns R,count,count_over_eR,cesaro,target,ratio,cesaro_ratio)");
  para->add_option("--model", pb.model, "Half-plane model file")->required();
  para->add_option("--z", pb.z, "Base point re,im")->capture_default_str();
  para->add_option("--I", pb.interval, "Interval lo,hi")->delimiter(',')->capture_default_str();
  para->add_option("--R", pb.R, "Cutoff")->capture_default_str();
  para->add_option("--step", pb.step, "Row spacing in R")->capture_default_str();
  para->add_option("--re-safety", pb.re_safety, "Far-field pruning safety factor (<= 0 disables)")
      ->capture_default_str();
  para->add_option("--tol", pb.tol, "chi_ell tolerance")->capture_default_str();
  para->add_option("--budget", pb.budget, "Node budget")->capture_default_str();

  CLI::App* accept = app.add_subcommand("accept", "Run the acceptance suite; exit 0 iff every criterion passes");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    const int threads = resolve_threads(common.threads);
    std::string result;
    int code = kOk;
    if (count->parsed()) result = run_count(*count, count_args, threads, false);
    else if (cesaro->parsed()) result = run_count(*cesaro, cesaro_args, threads, true);
    else if (lyap->parsed()) result = run_lyapunov(*lyap, ly);
    else if (scan->parsed()) result = run_scan(*scan, sc, threads);
    else if (orbit->parsed()) result = run_orbit(*orbit, ob);
    else if (xim->parsed()) result = run_xi(*xim, xi, threads);
    else if (mass->parsed()) result = run_mass(*mass, ms, threads);
    else if (shadow->parsed()) result = run_shadow(*shadow, sh);
    else if (para->parsed()) result = run_parabolic(*para, pb, threads);
    else if (accept->parsed()) {
      std::ostringstream report;
      const int failed = run_acceptance(report, threads);
      result = report.str();
      code = failed == 0 ? kOk : kFailure;
    }
    if (common.out.empty()) {
      out << result;
    } else {
      std::ofstream f(common.out, std::ios::binary);
      if (!f) throw UsageError("cannot write " + common.out);
      f << result;
    }
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace innerlab::cli
