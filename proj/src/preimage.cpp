#include "innerlab/preimage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "innerlab/dedup.hpp"
#include "innerlab/errors.hpp"
#include "innerlab/parallel.hpp"
#include "innerlab/polyroots.hpp"

namespace innerlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResidualTol = 1e-12;

double wrap_pi(double a) { return std::remainder(a, kTwoPi); }

std::string describe(const InnerModel& f, cplx z) {
  std::string s = f.serialize();
  std::replace(s.begin(), s.end(), '\n', ';');
  char buf[96];
  std::snprintf(buf, sizeof buf, " at z=%.17g,%.17g", z.real(), z.imag());
  return s + buf;
}

void polish(const InnerModel& f, cplx v, cplx& w) {
  for (int it = 0; it < 8; ++it) {
    const Jet j = f.jet(w);
    const cplx r = j.value - v;
    if (std::abs(r) <= 1e-17 || j.deriv == 0.0) return;
    const cplx next = w - r / j.deriv;
    if (!(std::abs(f.eval(next) - v) < std::abs(r))) return;
    w = next;
  }
}

// Unsorted roots of F(w) = v.
std::vector<cplx> solve(const InnerModel& f, cplx v) {
  if (!f.is_finite_blaschke()) throw PreconditionError("preimages require a finite Blaschke product");
  const std::size_t d = f.zeros().size();
  const PolyEval eval = [&](cplx w, cplx& p, cplx& dp) {
    cplx n, dn, den, dden;
    f.numer_denom(w, n, dn, den, dden);
    p = n - v * den;
    dp = dn - v * dden;
  };
  const double av = std::abs(v);
  const double rho = av > 0.0 ? std::clamp(std::pow(av, 1.0 / static_cast<double>(d)), 0.05, 1.0) : 0.5;
  const bool check_heights = f.centered() && av > 0.0 && av < 1.0;
  const double target = check_heights ? -std::log(av) : 0.0;

  for (const auto& [offset, scale] : {std::pair{0.4, 1.0}, std::pair{1.3, 0.9}, std::pair{2.1, 0.7}}) {
    std::vector<cplx> roots(d);
    for (std::size_t k = 0; k < d; ++k)
      roots[k] = std::polar(rho * scale, offset + (std::arg(v) + kTwoPi * static_cast<double>(k)) / static_cast<double>(d));
    aberth(eval, roots, 500);
    bool ok = true;
    for (cplx& w : roots) {
      polish(f, v, w);
      if (!(std::abs(f.eval(w) - v) < kResidualTol)) ok = false;
    }
    if (ok && check_heights) {
      double s = 0.0;
      for (cplx w : roots) s += -std::log(std::abs(w));
      if (!(std::abs(s - target) <= 1e-9 * std::max(1.0, target))) ok = false;
    }
    if (ok) return roots;
  }
  throw NumericalError("preimage solver did not converge for " + describe(f, v));
}

}  // namespace

std::vector<cplx> preimages_of(const InnerModel& f, cplx z) {
  if (!(std::abs(z) < 1.0)) throw PreconditionError("point is not inside the unit disk");
  std::vector<cplx> roots = solve(f, z);
  for (cplx w : roots)
    if (!(std::abs(w) < 1.0)) throw NumericalError("preimage left the disk for " + describe(f, z));
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    const double aa = std::arg(a), ab = std::arg(b);
    if (aa != ab) return aa < ab;
    return std::abs(a) < std::abs(b);
  });
  return roots;
}

std::vector<double> boundary_preimages(const InnerModel& f, double theta) {
  std::vector<cplx> roots = solve(f, std::polar(1.0, theta));
  std::vector<double> out;
  out.reserve(roots.size());
  for (cplx w : roots) {
    double phi = std::arg(w);
    for (int it = 0; it < 6; ++it) {
      const double err = wrap_pi(std::arg(f.eval(std::polar(1.0, phi))) - theta);
      const double step = err / f.boundary_deriv_modulus(phi);
      phi -= step;
      if (std::abs(step) < 1e-16) break;
    }
    out.push_back(canonical_angle(phi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Polar> preimages_polar(const InnerModel& f, const Polar& z) {
  std::vector<Polar> out;
  if (std::isinf(z.height)) {
    for (cplx w : preimages_of(f, 0.0)) out.push_back(Polar::from_complex(w));
  } else if (z.height > 1e-6) {
    for (cplx w : solve(f, z.to_complex())) out.push_back(Polar::from_complex(w));
  } else {
    // Start from the boundary preimages and the linearized height.
    for (double phi : boundary_preimages(f, z.angle)) out.push_back({z.height / f.boundary_deriv_modulus(phi), phi});
  }
  // Newton on log F(e^l) = log z in l = -height + i angle.
  for (Polar& w : out) {
    if (std::isinf(w.height)) continue;
    for (int it = 0; it < 30; ++it) {
      const PolarJet j = f.jet(w);
      if (std::isinf(j.value.height)) break;
      const cplx wc = w.to_complex();
      const cplx fval = j.value.to_complex();
      const cplx phi(z.height - j.value.height, wrap_pi(j.value.angle - z.angle));
      const cplx dphi = (std::abs(fval) > 0.0) ? wc * j.deriv / fval : cplx(0.0);
      if (dphi == 0.0) break;
      const cplx step = phi / dphi;
      double h = w.height + step.real();
      if (!(h > 0.0)) h = 0.5 * w.height;
      const double dh = std::abs(h - w.height);
      w.angle -= step.imag();
      w.height = h;
      if (dh <= 4e-16 * w.height && std::abs(step.imag()) <= 4e-16) break;
    }
    w.angle = canonical_angle(w.angle);
  }
  std::sort(out.begin(), out.end(), [](const Polar& a, const Polar& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    return a.height > b.height;
  });
  return out;
}

// ---------------------------------------------------------------- tree

std::span<const PreimageNode> PreimageTree::generation(int g) const {
  if (g < 0 || g >= generations()) return {};
  return std::span<const PreimageNode>(nodes_).subspan(offsets_[g], offsets_[g + 1] - offsets_[g]);
}

bool PreimageTree::fully_expanded(int g) const {
  return g >= 0 && g < static_cast<int>(complete_.size()) && complete_[g];
}

std::string PreimageTree::to_csv() const {
  std::string out = "# model: ";
  std::string m = model_.serialize();
  std::replace(m.begin(), m.end(), '\n', ';');
  out += m + "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "# base=%.17g,%.17g R=%.17g\n", base_.real(), base_.imag(), cutoff_);
  out += buf;
  out += "generation,re,im,height,radius,parent_index\n";
  for (const PreimageNode& n : nodes_) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%ld\n", n.generation, n.point.real(), n.point.imag(),
                  n.height, n.radius, n.parent);
    out += buf;
  }
  return out;
}

PreimageTree enumerate_ball(const InnerModel& f, cplx z, double R, const EnumerateOptions& opt) {
  if (!f.is_finite_blaschke() || !f.centered()) throw PreconditionError("enumeration requires a centered finite Blaschke product");
  if (f.is_rotation()) throw PreconditionError("a rotation has no expanding backward tree");
  if (z == 0.0) throw PreconditionError("base point must be nonzero");
  if (!(R > 0.0)) throw PreconditionError("cutoff radius must be positive");
  if (std::isinf(R) && opt.max_generation < 0) throw PreconditionError("an infinite cutoff needs a generation bound");
  const DiskPoint base(z);
  const int threads = resolve_threads(opt.threads);

  PreimageTree tree(f, z, R);
  DedupGrid grid(kDedupTolerance);
  const double r0 = disk_radius(base.value());
  if (r0 > R) {
    tree.complete_.push_back(false);
    tree.offsets_.push_back(0);
    return tree;
  }
  tree.nodes_.push_back({z, 0, -std::log(std::abs(z)), r0, -1});
  grid.insert(z);
  tree.offsets_.push_back(1);
  tree.complete_.push_back(true);

  struct Candidate {
    cplx point;
    long parent;
  };
  for (int g = 0; opt.max_generation < 0 || g < opt.max_generation; ++g) {
    const std::size_t begin = tree.offsets_[g], end = tree.offsets_[g + 1];
    const std::size_t width = end - begin;
    if (width == 0) break;
    const std::size_t chunks = width < 64 ? 1 : static_cast<std::size_t>(threads) * 4;
    std::vector<std::vector<Candidate>> found(chunks);
    std::vector<char> dropped(chunks, 0);
    parallel_chunks(width, chunks, threads, [&](std::size_t c, std::size_t lo, std::size_t hi) {
      auto& out = found[c];
      for (std::size_t i = begin + lo; i < begin + hi; ++i)
        for (cplx w : preimages_of(f, tree.nodes_[i].point)) {
          if (disk_radius(w) <= R) out.push_back({w, static_cast<long>(i)});
          else dropped[c] = 1;
        }
    });
    bool complete = tree.complete_[g];
    for (std::size_t c = 0; c < chunks; ++c) {
      if (dropped[c]) complete = false;
      for (const Candidate& cand : found[c]) {
        if (!grid.insert(cand.point)) {
          ++tree.collisions_;
          complete = false;
          continue;
        }
        const double h = -std::log(std::abs(cand.point));
        tree.nodes_.push_back({cand.point, g + 1, h, disk_radius(cand.point), cand.parent});
        if (static_cast<long>(tree.nodes_.size()) > opt.node_budget)
          throw ResourceError("node budget exceeded during generation " + std::to_string(g + 1), g);
      }
    }
    tree.offsets_.push_back(tree.nodes_.size());
    tree.complete_.push_back(complete);
  }
  return tree;
}

double verify_sum_of_heights(const PreimageTree& tree, int n) {
  if (!tree.fully_expanded(n)) throw PreconditionError("generation " + std::to_string(n) + " is not fully expanded");
  double s = 0.0;
  for (const PreimageNode& node : tree.generation(n)) s += node.height;
  return std::abs(s + std::log(std::abs(tree.base())));
}

}  // namespace innerlab
