#include "innerlab/lamination.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "innerlab/errors.hpp"
#include "innerlab/lyapunov.hpp"
#include "innerlab/parallel.hpp"
#include "innerlab/preimage.hpp"
#include "innerlab/rng.hpp"

namespace innerlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_dynamic(const InnerModel& f) {
  if (!f.is_finite_blaschke() || !f.centered() || f.is_rotation())
    throw PreconditionError("orbits need a centered non-rotation finite Blaschke product");
}

// 1 - |w| = -expm1(-height); the shadowing time is -log of it.
double orbit_time(const Polar& w) { return -std::log(-std::expm1(-w.height)); }

}  // namespace

// ---------------------------------------------------------------- orbits

InverseOrbit::InverseOrbit(InnerModel f, bool boundary, BranchPolicy policy, std::uint64_t seed,
                           std::vector<int> branches)
    : f_(std::move(f)), boundary_(boundary), policy_(policy), rng_(substream(seed, 0)), branches_(std::move(branches)) {}

InverseOrbit InverseOrbit::interior(InnerModel f, const Polar& z0, BranchPolicy policy, std::uint64_t seed,
                                    std::vector<int> branches) {
  require_dynamic(f);
  if (std::isinf(z0.height)) throw PreconditionError("the constant orbit at 0 is excluded");
  if (!(z0.height > 0.0)) throw PreconditionError("point is not inside the disk");
  if (policy == BranchPolicy::Lebesgue) throw PreconditionError("Lebesgue weights apply to boundary orbits");
  InverseOrbit o(std::move(f), false, policy, seed, std::move(branches));
  o.coords_.push_back(z0);
  return o;
}

InverseOrbit InverseOrbit::boundary(InnerModel f, double theta0, BranchPolicy policy, std::uint64_t seed,
                                    std::vector<int> branches) {
  require_dynamic(f);
  InverseOrbit o(std::move(f), true, policy, seed, std::move(branches));
  o.coords_.push_back({0.0, canonical_angle(theta0)});
  return o;
}

void InverseOrbit::extend(std::size_t n) {
  const int d = f_.degree();
  while (coords_.size() <= n) {
    const std::size_t step = coords_.size() - 1;
    const Polar& last = coords_.back();
    int idx = 0;
    if (policy_ == BranchPolicy::Explicit && step < branches_.size()) {
      idx = ((branches_[step] % d) + d) % d;
    } else if (policy_ == BranchPolicy::Lebesgue) {
      const auto wts = backward_weights(f_, last.angle);
      double u = uniform01(rng_);
      idx = d - 1;
      for (int i = 0; i < d; ++i) {
        if (u < wts[static_cast<std::size_t>(i)].second) {
          idx = i;
          break;
        }
        u -= wts[static_cast<std::size_t>(i)].second;
      }
      chosen_.push_back(idx);
      coords_.push_back({0.0, wts[static_cast<std::size_t>(idx)].first});
      continue;
    } else {
      idx = std::uniform_int_distribution<int>(0, d - 1)(rng_);
    }
    chosen_.push_back(idx);
    if (boundary_) {
      coords_.push_back({0.0, boundary_preimages(f_, last.angle)[static_cast<std::size_t>(idx)]});
    } else {
      coords_.push_back(preimages_polar(f_, last)[static_cast<std::size_t>(idx)]);
    }
  }
}

double InverseOrbit::max_residual() const {
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < coords_.size(); ++n)
    worst = std::max(worst, std::abs(f_.eval(coords_[n + 1].to_complex()) - coords_[n].to_complex()));
  return worst;
}

std::string InverseOrbit::to_csv() const {
  std::string out = "n,re,im,height,angle\n";
  char buf[160];
  for (std::size_t n = 0; n < coords_.size(); ++n) {
    const cplx z = coords_[n].to_complex();
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", n, z.real(), z.imag(), coords_[n].height,
                  coords_[n].angle);
    out += buf;
  }
  return out;
}

std::vector<std::pair<double, double>> backward_weights(const InnerModel& f, double theta) {
  std::vector<std::pair<double, double>> out;
  double total = 0.0;
  for (double phi : boundary_preimages(f, theta)) {
    const double w = 1.0 / f.boundary_deriv_modulus(phi);
    out.emplace_back(phi, w);
    total += w;
  }
  if (!(std::abs(total - 1.0) <= 1e-10)) throw NumericalError("backward weights do not sum to 1");
  return out;
}

InverseOrbit sample_backward_orbit(const InnerModel& f, std::size_t n, std::uint64_t seed,
                                   std::optional<double> theta0) {
  double start = 0.0;
  if (theta0) {
    start = *theta0;
  } else {
    auto g = substream(seed, 1);
    start = kTwoPi * uniform01(g);
  }
  InverseOrbit o = InverseOrbit::boundary(f, start, BranchPolicy::Lebesgue, seed);
  o.extend(n);
  return o;
}

std::vector<TransverseWeight> transverse_weights(const InnerModel& f, cplx z, int n, long budget) {
  if (z == 0.0) throw PreconditionError("base point must be nonzero");
  if (n < 0) throw PreconditionError("depth must be nonnegative");
  if (!f.is_finite_blaschke()) throw PreconditionError("finite Blaschke product required");
  const double total = std::pow(static_cast<double>(f.degree()), n + 1);
  if (total > static_cast<double>(budget)) throw ResourceError("transverse tree exceeds the node budget", 0);
  const double base = -std::log(std::abs(z));
  std::vector<TransverseWeight> out{{z, base, 1.0, -1, 0}};
  std::size_t begin = 0;
  for (int g = 1; g <= n; ++g) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (cplx w : preimages_of(f, out[i].point)) {
        const double h = -std::log(std::abs(w));
        out.push_back({w, h, h / base, static_cast<long>(i), g});
      }
    begin = end;
  }
  return out;
}

// ---------------------------------------------------------------- exponential coordinates

PolarJet push_forward(const InnerModel& f, Polar w, std::size_t k) {
  cplx deriv = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const PolarJet j = f.jet(w);
    deriv *= j.deriv;
    w = j.value;
  }
  return {w, deriv};
}

namespace {

Polar exp_start(const InverseOrbit& u, double t, std::size_t n) {
  double log_d = 0.0;
  for (std::size_t k = 1; k <= n; ++k) log_d += std::log(u.model().boundary_deriv_modulus(u.coords()[k].angle));
  const double ratio = t * std::exp(-log_d);
  if (!(ratio < 1.0)) throw PreconditionError("exponential map point leaves the disk; t is too large");
  return {-std::log1p(-ratio), u.coords()[n].angle};
}

void check_exp_args(const InverseOrbit& u, double t, std::size_t n, double t_cap) {
  if (!u.on_boundary()) throw PreconditionError("exponential map needs a boundary orbit");
  if (n > u.length()) throw PreconditionError("orbit is shorter than the approximation depth");
  if (!(t > 0.0) || t > t_cap) throw PreconditionError("t must lie in (0, cap]");
}

}  // namespace

ExpMapResult exponential_map(const InverseOrbit& u, double t, std::size_t n_approx, double t_cap) {
  check_exp_args(u, t, n_approx, t_cap);
  const InnerModel& f = u.model();
  ExpMapResult r;
  r.point = push_forward(f, exp_start(u, t, n_approx), n_approx).value;
  if (n_approx >= 1) {
    const Polar prev = push_forward(f, exp_start(u, t, n_approx - 1), n_approx - 1).value;
    r.cauchy_increment = hyp_distance(r.point, prev);
  }
  return r;
}

double geodesic_intertwining_check(const InverseOrbit& u, double t, double s, std::size_t n_approx,
                                   std::optional<std::size_t> k, double t_cap) {
  check_exp_args(u, t, n_approx, t_cap);
  check_exp_args(u, t * std::exp(s), n_approx, t_cap);
  const std::size_t depth = k.value_or(n_approx / 2);
  if (depth > n_approx) throw PreconditionError("re-basing depth exceeds the approximation depth");
  const InnerModel& f = u.model();
  const Polar zk = push_forward(f, exp_start(u, t, n_approx), n_approx - depth).value;
  const double base_angle = u.coords()[depth].angle;
  const double scale = std::expm1(s);
  const double offset = std::remainder(zk.angle - base_angle, kTwoPi);
  const Polar flowed{zk.height + zk.height * scale, zk.angle + offset * scale};
  const Polar lhs = push_forward(f, flowed, depth).value;
  const Polar rhs = exponential_map(u, t * std::exp(s), n_approx, t_cap).point;
  return hyp_distance(lhs, rhs);
}

// ---------------------------------------------------------------- box masses

namespace {

double preimage_sum(const InnerModel& f, cplx z, int n) {
  std::vector<std::pair<cplx, cplx>> level{{z, 1.0}};
  for (int m = 0; m < n; ++m) {
    std::vector<std::pair<cplx, cplx>> next;
    next.reserve(level.size() * static_cast<std::size_t>(f.degree()));
    for (const auto& [v, d] : level)
      for (cplx w : preimages_of(f, v)) next.emplace_back(w, d * f.deriv(w));
    level = std::move(next);
  }
  const double omz = 1.0 - std::norm(z);
  double s = 0.0;
  for (const auto& [w, d] : level) {
    const double expansion = std::abs(d) * (1.0 - std::norm(w)) / omz;
    s += -std::log(std::abs(w)) / (expansion * expansion);
  }
  return s;
}

double box_integral(const InnerModel& f, const AnnularBox& box, int n, int cells_r, int cells_t, int threads) {
  using GL = boost::math::quadrature::gauss<double, 7>;
  const double dr = (box.r2 - box.r1) / cells_r;
  const double dt = (box.theta2 - box.theta1) / cells_t;
  std::vector<double> partial(static_cast<std::size_t>(cells_r), 0.0);
  parallel_chunks(static_cast<std::size_t>(cells_r), static_cast<std::size_t>(cells_r), threads,
                  [&](std::size_t c, std::size_t, std::size_t) {
                    const double a = box.r1 + dr * static_cast<double>(c);
                    partial[c] = GL::integrate(
                        [&](double r) {
                          double inner = 0.0;
                          for (int j = 0; j < cells_t; ++j) {
                            const double ta = box.theta1 + dt * j;
                            inner += GL::integrate(
                                [&](double th) { return preimage_sum(f, std::polar(r, th), n); }, ta, ta + dt);
                          }
                          const double omr = 1.0 - r * r;
                          return inner * 4.0 * r / (omr * omr);
                        },
                        a, a + dr);
                  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total / kTwoPi;
}

}  // namespace

BoxMassEstimate xi_box_mass(const InnerModel& f, const AnnularBox& box, int n, int cells_r, int cells_theta,
                            int threads) {
  if (!(0.0 < box.r1 && box.r1 < box.r2 && box.r2 < 1.0 && box.theta1 < box.theta2))
    throw PreconditionError("box must be an annular sector away from 0 and the circle");
  if (n < 0) throw PreconditionError("depth must be nonnegative");
  if (!f.is_finite_blaschke()) throw PreconditionError("finite Blaschke product required");
  if (std::pow(static_cast<double>(f.degree()), n) > 1e6) throw ResourceError("preimage sum exceeds budget", 0);
  const int th = resolve_threads(threads);
  const double coarse = box_integral(f, box, n, cells_r, cells_theta, th);
  const double fine = box_integral(f, box, n, 2 * cells_r, 2 * cells_theta, th);
  return {fine, std::abs(fine - coarse), n};
}

double box_boundary_mass(const AnnularBox& box) {
  auto prim = [](double r) { return -r - std::log1p(-r); };
  return (box.theta2 - box.theta1) / kTwoPi * (prim(box.r2) - prim(box.r1));
}

TotalMass total_mass_check(const InnerModel& f, double r0, long samples, std::uint64_t seed, int threads,
                           std::optional<double> target_std_error) {
  require_dynamic(f);
  if (!(r0 > 0.0 && r0 < 1.0)) throw PreconditionError("r0 must lie in (0, 1)");
  if (samples < 2) throw PreconditionError("need at least two samples");
  constexpr long kChunk = 1L << 16;
  const long chunks = (samples + kChunk - 1) / kChunk;
  const double u0 = -std::log1p(-r0);
  const double h0 = -std::log(r0);
  std::vector<double> sum(static_cast<std::size_t>(chunks), 0.0), sumsq(static_cast<std::size_t>(chunks), 0.0);
  parallel_chunks(static_cast<std::size_t>(chunks), static_cast<std::size_t>(chunks), resolve_threads(threads),
                  [&](std::size_t c, std::size_t, std::size_t) {
                    auto g = substream(seed, c);
                    const long lo = static_cast<long>(c) * kChunk, hi = std::min(samples, lo + kChunk);
                    double s = 0.0, ss = 0.0;
                    for (long j = lo; j < hi; ++j) {
                      const double theta = kTwoPi * (static_cast<double>(j) + uniform01(g)) / static_cast<double>(samples);
                      const double umax = u0 + std::log(4.0 * f.boundary_deriv_modulus(theta));
                      const double u = u0 + (umax - u0) * uniform01(g);
                      const double e = std::exp(-u);  // 1 - r
                      const double r = -std::expm1(-u);
                      const Polar z{-std::log1p(-e), theta};
                      double x = 0.0;
                      if (f.jet(z).value.height > h0) {
                        const double g_u = 4.0 * r * z.height / (e * (1.0 + r) * (1.0 + r));
                        x = (umax - u0) * g_u;
                      }
                      s += x;
                      ss += x * x;
                    }
                    sum[c] = s;
                    sumsq[c] = ss;
                  });
  double s = 0.0, ss = 0.0;
  for (long c = 0; c < chunks; ++c) {
    s += sum[static_cast<std::size_t>(c)];
    ss += sumsq[static_cast<std::size_t>(c)];
  }
  const double n = static_cast<double>(samples);
  const double mean = s / n;
  const double var = std::max(0.0, ss / n - mean * mean);
  TotalMass out{mean, std::sqrt(var / n), chi_jensen_oracle(f).value, samples};
  if (target_std_error && out.std_error > *target_std_error)
    throw ResourceError("sample budget exhausted before reaching the target standard error", 0);
  return out;
}

// ---------------------------------------------------------------- shadowing

ShadowingStat radial_shadowing_stat(const InverseOrbit& orbit, std::size_t N, int samples) {
  if (orbit.on_boundary()) throw PreconditionError("radial shadowing needs an interior orbit");
  if (N > orbit.length()) throw PreconditionError("orbit is shorter than N");
  const InnerModel& f = orbit.model();
  const auto& z = orbit.coords();

  // Deepest level whose pushforward keeps angle errors below ~1e-8.
  std::size_t n = 0;
  double log_d = 0.0;
  for (std::size_t k = 1; k <= N; ++k) {
    log_d += std::log(std::abs(f.jet(z[k]).deriv));
    if (log_d > std::log(1e8)) break;
    n = k;
  }
  ShadowingStat out;
  out.depth_used = n;
  double landing = z[n].angle;
  for (std::size_t k = 0; k < n; ++k) landing = std::arg(f.eval(std::polar(1.0, landing)));
  out.limit_angle = canonical_angle(landing);

  const double t0 = orbit_time(z[0]);
  const double t_target = orbit_time(z[n]);
  auto gamma = [&](double t) { return push_forward(f, {z[n].height * std::exp(-t), z[n].angle}, n).value; };
  if (!(t_target > t0)) return out;

  double hi = 1.0;
  while (orbit_time(gamma(hi)) < t_target && hi < 1e3) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (orbit_time(gamma(mid)) < t_target ? lo : hi) = mid;
  }
  std::vector<double> tau(static_cast<std::size_t>(samples) + 1), m(tau.size()), ang(tau.size());
  for (int i = 0; i <= samples; ++i) {
    const Polar g = gamma(hi * i / samples);
    tau[static_cast<std::size_t>(i)] = orbit_time(g);
    m[static_cast<std::size_t>(i)] = std::min(1.0, hyp_distance(g, Polar{g.height, out.limit_angle}));
    ang[static_cast<std::size_t>(i)] = std::remainder(g.angle - out.limit_angle, kTwoPi);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    const double w = std::abs(tau[i + 1] - tau[i]);
    num += w * 0.5 * (m[i] + m[i + 1]);
    den += w;
  }
  out.statistic = den > 0.0 ? num / den : 0.0;
  const double quarter = tau.front() + 0.75 * (tau.back() - tau.front());
  double amin = kTwoPi, amax = -kTwoPi;
  for (std::size_t i = 0; i < tau.size(); ++i)
    if (tau[i] >= quarter) {
      amin = std::min(amin, ang[i]);
      amax = std::max(amax, ang[i]);
    }
  out.inconclusive = (amax - amin) > 0.1;
  return out;
}

BadTimes BadTimes::dyadic(double T) {
  BadTimes b;
  for (int k = 1; std::ldexp(1.0, k) < T; ++k) b.intervals.emplace_back(std::ldexp(1.0, k), std::ldexp(1.0, k) + k);
  return b;
}

bool BadTimes::contains(double t) const {
  if (everything) return true;
  for (const auto& [a, b] : intervals)
    if (a <= t && t < b) return true;
  return false;
}

ShadowResult shadowing_simulation(const BadTimes& bad, double T, Adversary adversary, double x0, double y0,
                                  double max_step, int curve_points) {
  if (!(T > 0.0) || !(y0 > 0.0)) throw PreconditionError("need T > 0 and a start point in the half-plane");
  if (!(max_step > 1e-12)) throw NumericalError("step size underflow");
  // Velocity in (x, s = log y): ds = a dt, dx = b e^s dt, and h = b is the
  // horizontal speed measured in units of y.
  double a_bad = 0.0, b_bad = 0.0;
  switch (adversary) {
    case Adversary::UpRight: a_bad = b_bad = 1.0 / std::numbers::sqrt2; break;
    case Adversary::Right: b_bad = 1.0; break;
    case Adversary::Up: a_bad = 1.0; break;
  }
  std::vector<double> cuts{0.0, T};
  if (!bad.everything)
    for (const auto& [p, q] : bad.intervals) {
      if (p < T) cuts.push_back(p);
      if (q < T) cuts.push_back(q);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  struct Step {
    double t, dt, a, b;
  };
  std::vector<Step> steps;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo <= 0.0) continue;
    const bool is_bad = bad.contains(0.5 * (lo + hi));
    const long k = std::max(1L, static_cast<long>(std::ceil((hi - lo) / max_step)));
    const double dt = (hi - lo) / static_cast<double>(k);
    for (long j = 0; j < k; ++j)
      steps.push_back({lo + dt * static_cast<double>(j), dt, is_bad ? a_bad : -1.0, is_bad ? b_bad : 0.0});
  }

  // Forward RK4 for the endpoint.
  ShadowResult res;
  double x = x0, s = std::log(y0);
  for (const Step& st : steps) {
    auto fx = [&](double ss) { return st.b == 0.0 ? 0.0 : st.b * std::exp(ss); };
    const double k1x = fx(s), k1s = st.a;
    const double k2x = fx(s + 0.5 * st.dt * k1s), k3x = k2x;
    const double k4x = fx(s + st.dt * k1s);
    x += st.dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s += st.dt * st.a;
    if (!std::isfinite(x)) {
      res.diverged = true;
      break;
    }
  }
  res.limit_x = res.diverged ? std::numeric_limits<double>::infinity() : x;

  // D(t) = (x(T) - x(t))/y(t) solves D' = -a D - b with D(T) = 0; integrate backward.
  std::vector<double> m(steps.size() + 1);
  double D = 0.0;
  m[steps.size()] = 0.0;
  for (std::size_t i = steps.size(); i-- > 0;) {
    const Step& st = steps[i];
    auto rhs = [&](double d) { return -st.a * d - st.b; };
    const double h = -st.dt;
    const double k1 = rhs(D), k2 = rhs(D + 0.5 * h * k1), k3 = rhs(D + 0.5 * h * k2), k4 = rhs(D + h * k3);
    D += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    D = std::clamp(D, -1e12, 1e12);
    m[i] = std::min(1.0, std::asinh(std::abs(D)));
  }
  std::vector<double> cum(steps.size() + 1, 0.0);
  for (std::size_t i = 0; i < steps.size(); ++i) cum[i + 1] = cum[i] + 0.5 * steps[i].dt * (m[i] + m[i + 1]);
  res.average_distance = cum.back() / T;
  for (int c = 1; c <= curve_points; ++c) {
    const double tc = T * c / curve_points;
    const auto it = std::upper_bound(steps.begin(), steps.end(), tc, [](double v, const Step& st) { return v < st.t; });
    const std::size_t idx = static_cast<std::size_t>(it - steps.begin());
    res.curve.emplace_back(tc, cum[std::min(idx, cum.size() - 1)] / tc);
  }
  return res;
}

}  // namespace innerlab
