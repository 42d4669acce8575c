#include "innerlab/parabolic.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "innerlab/dedup.hpp"
#include "innerlab/errors.hpp"
#include "innerlab/parallel.hpp"
#include "innerlab/polyroots.hpp"
#include "innerlab/preimage.hpp"
#include "innerlab/textio.hpp"

namespace innerlab {

HalfPlaneInner::HalfPlaneInner(double beta, std::vector<HalfPlaneAtom> atoms) : beta_(beta), atoms_(std::move(atoms)) {
  if (!std::isfinite(beta_)) throw PreconditionError("beta must be finite");
  for (const HalfPlaneAtom& a : atoms_)
    if (!std::isfinite(a.x) || !(a.c > 0.0) || !std::isfinite(a.c))
      throw PreconditionError("atoms need a finite location and a positive finite mass");
}

double HalfPlaneInner::mass() const {
  double k = 0.0;
  for (const HalfPlaneAtom& a : atoms_) k += a.c * (1.0 + a.x * a.x);
  return k;
}

double HalfPlaneInner::atom_extent() const {
  double m = 0.0;
  for (const HalfPlaneAtom& a : atoms_) m = std::max(m, std::abs(a.x));
  return m;
}

Jet HalfPlaneInner::jet(cplx z) const {
  cplx v = z + beta_, d = 1.0;
  for (const HalfPlaneAtom& a : atoms_) {
    const cplx q = a.x - z;
    v += a.c * (1.0 + z * a.x) / q;
    d += a.c * (a.x * a.x + 1.0) / (q * q);
  }
  return {v, d};
}

double HalfPlaneInner::boundary_deriv(double x) const {
  double d = 1.0;
  for (const HalfPlaneAtom& a : atoms_) d += a.c * (a.x * a.x + 1.0) / ((a.x - x) * (a.x - x));
  return d;
}

double HalfPlaneInner::im_ratio(cplx z) const {
  double r = 1.0;
  for (const HalfPlaneAtom& a : atoms_) r += a.c * (1.0 + a.x * a.x) / std::norm(a.x - z);
  return r;
}

std::string HalfPlaneInner::serialize() const {
  std::string out = "kind=halfplane\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "beta=%.17g\n", beta_);
  out += buf;
  for (const HalfPlaneAtom& a : atoms_) {
    std::snprintf(buf, sizeof buf, "atom=%.17g,%.17g\n", a.x, a.c);
    out += buf;
  }
  return out;
}

HalfPlaneInner HalfPlaneInner::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  double beta = 0.0;
  bool kind_seen = false;
  std::vector<HalfPlaneAtom> atoms;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = textio::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = textio::trim(line.substr(0, eq));
    const std::string val = textio::trim(line.substr(eq + 1));
    if (key == "kind") {
      if (val != "halfplane") throw UsageError("not a half-plane model: kind=" + val);
      kind_seen = true;
    } else if (key == "beta") {
      beta = textio::parse_number(val, lineno);
    } else if (key == "atom") {
      const auto [x, c] = textio::parse_pair(val, lineno);
      atoms.push_back({x, c});
    } else {
      throw UsageError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!kind_seen) throw UsageError("half-plane model needs kind=halfplane");
  return HalfPlaneInner(beta, std::move(atoms));
}

Jet hp_eval_deriv(const HalfPlaneInner& f, cplx z) {
  const HalfPlanePoint p(z);
  return f.jet(p.value());
}

std::vector<cplx> hp_preimages(const HalfPlaneInner& f, cplx z) {
  const HalfPlanePoint p(z);
  const auto& atoms = f.atoms();
  // (w + beta - z) prod (x_k - w) + sum_k c_k (1 + w x_k) prod_{j != k} (x_j - w)
  Poly all{1.0};
  for (const HalfPlaneAtom& a : atoms) all = poly_mul(all, {a.x, -1.0});
  Poly poly = poly_mul(all, {f.beta() - z, 1.0});
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    Poly others{atoms[k].c};
    for (std::size_t j = 0; j < atoms.size(); ++j)
      if (j != k) others = poly_mul(others, {atoms[j].x, -1.0});
    const Poly term = poly_mul(others, {1.0, atoms[k].x});
    for (std::size_t i = 0; i < term.size(); ++i) poly[i] += term[i];
  }
  std::vector<cplx> roots = atoms.empty() ? std::vector<cplx>{z - f.beta()} : poly_roots(poly);
  double im_sum = 0.0;
  for (cplx& w : roots) {
    for (int it = 0; it < 8; ++it) {
      const Jet j = f.jet(w);
      const cplx r = j.value - z;
      if (std::abs(r) <= 1e-17 * std::max(1.0, std::abs(z)) || j.deriv == 0.0) break;
      const cplx next = w - r / j.deriv;
      if (!(std::abs(f.jet(next).value - z) < std::abs(r))) break;
      w = next;
    }
    if (!(std::abs(f.jet(w).value - z) < 1e-12 * std::max(1.0, std::abs(z))) || !(w.imag() > 0.0))
      throw NumericalError("half-plane preimage failed to converge");
    // Im F(w) = Im w * ratio(w) holds exactly, so Im w is recovered to full relative precision.
    w.imag(z.imag() / f.im_ratio(w));
    im_sum += w.imag();
  }
  if (!(std::abs(im_sum - z.imag()) <= 1e-9 * z.imag()))
    throw NumericalError("preimage heights do not sum to Im z");
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return roots;
}

// ---------------------------------------------------------------- strip counting

long StripProfile::count(double S) const {
  if (S > cutoff) throw PreconditionError("S exceeds the enumeration cutoff");
  const double floor = std::exp(-S);
  long n = 0;
  for (std::size_t i : counted)
    if (nodes[i].point.imag() >= floor) ++n;
  return n;
}

double StripProfile::cesaro(double S) const {
  if (S > cutoff) throw PreconditionError("S exceeds the enumeration cutoff");
  if (!(S > 0.0)) throw PreconditionError("S must be positive");
  const double floor = std::exp(-S);
  double s = 0.0;
  for (std::size_t i : counted) {
    const double y = nodes[i].point.imag();
    if (y >= floor) s += y - floor;
  }
  return s / S;
}

std::string StripProfile::to_csv() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "# base=%.17g,%.17g I=[%.17g,%.17g] R=%.17g\n", base.real(), base.imag(), lo, hi,
                cutoff);
  out += buf;
  out += "generation,re,im,Im_height,parent_index,counted\n";
  std::vector<char> is_counted(nodes.size(), 0);
  for (std::size_t i : counted) is_counted[i] = 1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const StripPoint& p = nodes[i];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%ld,%d\n", p.generation, p.point.real(), p.point.imag(),
                  -std::log(p.point.imag()), p.parent, is_counted[i]);
    out += buf;
  }
  return out;
}

StripProfile enumerate_strip(const HalfPlaneInner& f, cplx z, double lo, double hi, double R,
                             const StripOptions& opt) {
  const HalfPlanePoint base(z);
  if (!(R >= 0.0) || std::isinf(R)) throw PreconditionError("cutoff must be finite and nonnegative");
  if (!height_classify(f, z).infinite) throw PreconditionError("strip counting needs an infinite-height map");
  const int threads = resolve_threads(opt.threads);
  const double floor = std::exp(-R);
  const double M = f.atom_extent(), K = f.mass();
  const double core_lo = std::min(lo, -M), core_hi = std::max(hi, M), margin = M + 2.0;
  // A descendant of w returns to the core with Poisson mass at most ~K Im w/dist^2.
  auto far_field = [&](cplx w) {
    if (opt.re_safety <= 0.0) return false;
    const double x = w.real();
    const double dist = std::max(core_lo - x, x - core_hi);
    return dist > margin && opt.re_safety * K * w.imag() / (dist * dist) < floor;
  };

  StripProfile prof;
  prof.base = z;
  prof.lo = lo;
  prof.hi = hi;
  prof.cutoff = R;
  auto is_counted = [&](cplx w) {
    return w.real() >= lo && w.real() <= hi && w.imag() >= floor && w.imag() <= 1.0;
  };
  if (base.value().imag() < floor) {
    prof.complete.push_back(false);
    return prof;
  }
  DedupGrid grid(kDedupTolerance);
  grid.insert(z);
  prof.nodes.push_back({z, 0, -1});
  if (is_counted(z)) prof.counted.push_back(0);
  prof.complete.push_back(true);

  struct Candidate {
    cplx point;
    long parent;
  };
  std::size_t begin = 0;
  for (int g = 0;; ++g) {
    const std::size_t end = prof.nodes.size();
    const std::size_t width = end - begin;
    if (width == 0) break;
    const std::size_t chunks = width < 64 ? 1 : static_cast<std::size_t>(threads) * 4;
    std::vector<std::vector<Candidate>> found(chunks);
    std::vector<long> pruned(chunks, 0);
    std::vector<char> dropped(chunks, 0);
    parallel_chunks(width, chunks, threads, [&](std::size_t c, std::size_t a, std::size_t b) {
      for (std::size_t i = begin + a; i < begin + b; ++i) {
        const cplx w0 = prof.nodes[i].point;
        if (far_field(w0)) {
          ++pruned[c];
          continue;
        }
        for (cplx w : hp_preimages(f, w0)) {
          if (w.imag() >= floor) found[c].push_back({w, static_cast<long>(i)});
          else dropped[c] = 1;
        }
      }
    });
    bool complete = prof.complete.back();
    for (std::size_t c = 0; c < chunks; ++c) {
      prof.re_pruned += pruned[c];
      if (pruned[c] || dropped[c]) complete = false;
      for (const Candidate& cand : found[c]) {
        if (!grid.insert(cand.point)) {
          ++prof.collisions;
          complete = false;
          continue;
        }
        prof.nodes.push_back({cand.point, g + 1, cand.parent});
        if (is_counted(cand.point)) prof.counted.push_back(prof.nodes.size() - 1);
        if (static_cast<long>(prof.nodes.size()) > opt.node_budget)
          throw ResourceError("strip node budget exceeded during generation " + std::to_string(g + 1), g);
      }
    }
    prof.complete.push_back(complete);
    begin = end;
  }
  return prof;
}

// ---------------------------------------------------------------- chi_ell

double chi_ell(const HalfPlaneInner& f, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (f.atoms().empty()) return 0.0;
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  // With x = tan(phi), F'(x) - 1 = sum_k c_k cos^2(phi) / sin^2(phi - phi_k) and dx = dphi / cos^2(phi).
  std::vector<double> phis;
  std::vector<double> cs;
  for (const HalfPlaneAtom& a : f.atoms()) {
    phis.push_back(std::atan(a.x));
    cs.push_back(a.c);
  }
  std::vector<double> cuts = phis;
  cuts.push_back(-kHalfPi);
  cuts.push_back(kHalfPi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0, err_total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    // xc is the signed distance to the nearer endpoint: a - phi near a, b - phi near b.
    auto integrand = [&](double phi, double xc) {
      const bool near_a = xc < 0.0;
      const double cosphi = (b == kHalfPi && !near_a) ? std::sin(std::abs(xc))
                            : (a == -kHalfPi && near_a) ? std::sin(std::abs(xc))
                                                        : std::cos(phi);
      const double log_cos2 = 2.0 * std::log(cosphi);
      double lmax = -std::numeric_limits<double>::infinity();
      std::vector<double> ls(phis.size());
      for (std::size_t k = 0; k < phis.size(); ++k) {
        double delta = phi - phis[k];
        if (near_a && phis[k] == a) delta = -xc;
        else if (!near_a && phis[k] == b) delta = -xc;
        ls[k] = std::log(cs[k]) + log_cos2 - 2.0 * std::log(std::abs(std::sin(delta)));
        lmax = std::max(lmax, ls[k]);
      }
      double log_fp = 0.0;
      if (lmax > 30.0) {
        double acc = std::exp(-lmax);
        for (double l : ls) acc += std::exp(l - lmax);
        log_fp = lmax + std::log(acc);
      } else {
        double u = 0.0;
        for (double l : ls) u += std::exp(l);
        if (u < 1e-10) {
          // Near phi = +-pi/2 use log1p(u)/cos^2 = S (1 - u/2 + ...) with S = u/cos^2.
          double S = 0.0;
          for (double l : ls) S += std::exp(l - log_cos2);
          return S * (1.0 - 0.5 * u);
        }
        log_fp = std::log1p(u);
      }
      return log_fp / (cosphi * cosphi);
    };
    double err = 0.0, l1 = 0.0;
    const double v = ts.integrate(integrand, a, b, std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-3, &err, &l1);
    total += v;
    err_total += err;
  }
  if (!(err_total <= tol)) throw NumericalError("chi_ell quadrature error estimate exceeds the tolerance");
  return total;
}

// ---------------------------------------------------------------- classification

HeightClass height_classify(const HalfPlaneInner& f, cplx z0, long n_iters) {
  const HalfPlanePoint p(z0);
  const auto& atoms = f.atoms();
  bool symmetric = true;
  for (const HalfPlaneAtom& a : atoms) {
    const bool mirrored = std::any_of(atoms.begin(), atoms.end(), [&](const HalfPlaneAtom& b) {
      return std::abs(a.x + b.x) <= 1e-12 && std::abs(a.c - b.c) <= 1e-12 * std::max(1.0, a.c);
    });
    symmetric = symmetric && mirrored;
  }
  if (symmetric) {
    // F(z) = z + b - K/z + O(1/z^2) with b = beta - sum c_k x_k.
    double b = f.beta();
    for (const HalfPlaneAtom& a : atoms) b -= a.c * a.x;
    const bool infinite = std::abs(b) <= 1e-12 && f.mass() > 0.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "heuristic: expansion at infinity, b=%.3g K=%.3g", b, f.mass());
    return {infinite, "taylor", buf};
  }
  if (n_iters < 1000) throw PreconditionError("the iterate test needs at least 1000 iterations");
  cplx z = p.value();
  double early = 0.0;
  for (long n = 1; n <= n_iters; ++n) {
    z = f.jet(z).value;
    if (n == n_iters / 16) early = z.imag();
  }
  const double ratio = z.imag() / early;
  char buf[128];
  std::snprintf(buf, sizeof buf, "heuristic: Im growth ratio %.4g over iterates %ld..%ld", ratio, n_iters / 16,
                n_iters);
  return {ratio >= 2.0, "iterate", buf};
}

std::vector<StripRow> strip_counting_report(const StripProfile& profile, double chi, const std::vector<double>& Rs) {
  if (!(chi > 0.0)) throw PreconditionError("chi_ell must be positive");
  const double target = (profile.hi - profile.lo) / chi;
  std::vector<StripRow> rows;
  for (double R : Rs) {
    const double n = static_cast<double>(profile.count(R));
    const double c = profile.cesaro(R);
    const double neR = n * std::exp(-R);
    rows.push_back({R, n, neR, c, target, neR / target, c / target});
  }
  return rows;
}

}  // namespace innerlab
