#include "innerlab/innerfn.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "innerlab/errors.hpp"
#include "innerlab/textio.hpp"

namespace innerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Product of factors and its derivative via prefix/suffix products, so that a
// vanishing factor does not poison the derivative.
Jet product_rule(const std::vector<cplx>& f, const std::vector<cplx>& df) {
  const std::size_t m = f.size();
  std::vector<cplx> suffix(m + 1, 1.0);
  for (std::size_t i = m; i-- > 0;) suffix[i] = suffix[i + 1] * f[i];
  cplx prefix = 1.0, deriv = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    deriv += prefix * df[i] * suffix[i + 1];
    prefix *= f[i];
  }
  return {prefix, deriv};
}

Polar polar_of(cplx value, double height) {
  if (value == 0.0 || std::isinf(height)) return {kInf, 0.0};
  return {height, std::arg(value)};
}

}  // namespace

double canonical_angle(double theta) {
  double t = std::fmod(theta, 2.0 * std::numbers::pi);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  if (t >= 2.0 * std::numbers::pi) t = 0.0;
  return t;
}

// ---------------------------------------------------------------- InnerModel

InnerModel::InnerModel(cplx rotation, std::vector<cplx> zeros, std::vector<Atom> atoms)
    : rotation_(rotation), zeros_(std::move(zeros)), atoms_(std::move(atoms)) {
  if (!(std::abs(std::abs(rotation_) - 1.0) <= 1e-12)) throw PreconditionError("rotation must be unimodular");
  for (cplx a : zeros_)
    if (!(std::abs(a) < 1.0)) throw PreconditionError("zeros must lie inside the unit disk");
  for (const Atom& at : atoms_)
    if (!(at.weight > 0.0) || !std::isfinite(at.angle)) throw PreconditionError("atom weights must be positive");
  if (zeros_.empty() && atoms_.empty()) throw PreconditionError("a unimodular constant is not a self-map of the disk");
}

InnerModel InnerModel::power(int d) {
  if (d < 1) throw PreconditionError("degree must be positive");
  return InnerModel(1.0, std::vector<cplx>(static_cast<std::size_t>(d), 0.0));
}

InnerModel InnerModel::blaschke(std::vector<cplx> zeros) { return InnerModel(1.0, std::move(zeros)); }

bool InnerModel::centered() const {
  for (cplx a : zeros_)
    if (a == 0.0) return true;
  return false;
}

bool InnerModel::is_rotation() const { return atoms_.empty() && zeros_.size() == 1 && zeros_[0] == 0.0; }

Jet InnerModel::jet(cplx z) const {
  std::vector<cplx> f, df;
  f.reserve(zeros_.size() + atoms_.size() + 1);
  df.reserve(f.capacity());
  f.push_back(rotation_);
  df.push_back(0.0);
  for (cplx a : zeros_) {
    if (a == 0.0) {
      f.push_back(z);
      df.push_back(1.0);
    } else {
      const double r = std::abs(a);
      const cplx c = r / a;
      const cplx den = 1.0 - std::conj(a) * z;
      f.push_back(c * (a - z) / den);
      df.push_back(c * (r * r - 1.0) / (den * den));
    }
  }
  for (const Atom& at : atoms_) {
    const cplx zeta = std::polar(1.0, at.angle);
    const cplx gap = zeta - z;
    if (std::abs(gap) == 0.0) throw NumericalError("evaluation at an atom base point");
    const cplx s = std::exp(-at.weight * (zeta + z) / gap);
    f.push_back(s);
    df.push_back(s * (-2.0 * at.weight * zeta / (gap * gap)));
  }
  return product_rule(f, df);
}

cplx InnerModel::eval(cplx z) const { return jet(z).value; }
cplx InnerModel::deriv(cplx z) const { return jet(z).deriv; }
DiskPoint InnerModel::eval(const DiskPoint& z) const { return DiskPoint(eval(z.value())); }

PolarJet InnerModel::jet(const Polar& w) const {
  const cplx z = w.to_complex();
  const Jet j = jet(z);
  const double omz = w.one_minus_abs2();
  double height = 0.0;
  for (cplx a : zeros_) {
    if (a == 0.0) {
      height += w.height;
      continue;
    }
    const double e = std::min(1.0, (1.0 - std::norm(a)) * omz / std::norm(1.0 - std::conj(a) * z));
    height -= 0.5 * std::log1p(-e);
  }
  for (const Atom& at : atoms_) height += at.weight * omz / std::norm(std::polar(1.0, at.angle) - z);
  return {polar_of(j.value, height), j.deriv};
}

double InnerModel::boundary_deriv_modulus(double theta) const {
  const cplx zeta = std::polar(1.0, theta);
  double s = 0.0;
  for (cplx a : zeros_) s += (1.0 - std::norm(a)) / std::norm(zeta - a);
  for (const Atom& at : atoms_) {
    const double gap2 = std::norm(zeta - std::polar(1.0, at.angle));
    if (gap2 == 0.0) return kInf;
    s += 2.0 * at.weight / gap2;
  }
  return s;
}

void InnerModel::numer_denom(cplx z, cplx& n, cplx& dn, cplx& d, cplx& dd) const {
  if (!atoms_.empty()) throw PreconditionError("rational form requires a finite Blaschke product");
  std::vector<cplx> nf{rotation_}, ndf{0.0}, df, ddf;
  for (cplx a : zeros_) {
    if (a == 0.0) {
      nf.push_back(z);
      ndf.push_back(1.0);
    } else {
      const cplx c = std::abs(a) / a;
      nf.push_back(c * (a - z));
      ndf.push_back(-c);
      df.push_back(1.0 - std::conj(a) * z);
      ddf.push_back(-std::conj(a));
    }
  }
  const Jet num = product_rule(nf, ndf);
  const Jet den = product_rule(df, ddf);
  n = num.value;
  dn = num.deriv;
  d = den.value;
  dd = den.deriv;
}

std::string InnerModel::serialize() const {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "rotation=%.17g,%.17g\n", rotation_.real(), rotation_.imag());
  out += buf;
  for (cplx a : zeros_) {
    std::snprintf(buf, sizeof buf, "zero=%.17g,%.17g\n", a.real(), a.imag());
    out += buf;
  }
  for (const Atom& at : atoms_) {
    std::snprintf(buf, sizeof buf, "atom=%.17g,%.17g\n", at.angle, at.weight);
    out += buf;
  }
  return out;
}

InnerModel InnerModel::parse(std::string_view text) {
  using textio::parse_pair, textio::trim;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  cplx rotation = 1.0;
  std::vector<cplx> zeros;
  std::vector<Atom> atoms;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "kind") {
      if (val != "disk") throw UsageError("not a disk model: kind=" + val);
      continue;
    }
    const auto [x, y] = parse_pair(val, lineno);
    if (key == "rotation") rotation = {x, y};
    else if (key == "zero") zeros.emplace_back(x, y);
    else if (key == "atom") atoms.push_back({x, y});
    else throw UsageError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return InnerModel(rotation, std::move(zeros), std::move(atoms));
}

// ---------------------------------------------------------------- DiskMap

DiskMap::DiskMap(PolarFn fn) : fn_(std::move(fn)) {}

DiskMap::DiskMap(const InnerModel& f) : fn_([f](const Polar& w) { return f.jet(w); }) {}

DiskMap DiskMap::identity() {
  return DiskMap([](const Polar& w) { return PolarJet{w, 1.0}; });
}

DiskMap DiskMap::moebius(const Moebius& m) {
  if (m.kind() != MoebiusKind::DiskAut) throw UsageError("expected a disk automorphism");
  return DiskMap([m](const Polar& w) {
    const cplx z = w.to_complex();
    const cplx den = m.c() * z + m.d();
    const double x = std::min(1.0, w.one_minus_abs2() / std::norm(den));
    const cplx v = m.apply(z);
    return PolarJet{polar_of(v, -0.5 * std::log1p(-x)), 1.0 / (den * den)};
  });
}

Jet DiskMap::operator()(cplx z) const {
  const PolarJet pj = fn_(Polar::from_complex(z));
  return {pj.value.to_complex(), pj.deriv};
}

DiskMap compose(const DiskMap& f, const DiskMap& g) {
  return DiskMap([f, g](const Polar& w) {
    const PolarJet gj = g(w);
    const PolarJet fj = f(gj.value);
    return PolarJet{fj.value, fj.deriv * gj.deriv};
  });
}

DiskMap frostman_shift(const DiskMap& f, cplx a) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError("Frostman parameter must lie in the disk");
  if (a == 0.0) return f;
  return DiskMap([f, a](const Polar& w) {
    const PolarJet fj = f(w);
    const cplx v = fj.value.to_complex();
    const cplx den = 1.0 - std::conj(a) * v;
    const double x = std::min(1.0, (1.0 - std::norm(a)) * fj.value.one_minus_abs2() / std::norm(den));
    const cplx shifted = (v - a) / den;
    return PolarJet{polar_of(shifted, -0.5 * std::log1p(-x)), fj.deriv * (1.0 - std::norm(a)) / (den * den)};
  });
}

cplx iterate(const InnerModel& f, cplx z, long n, long cap) {
  if (n < 0) throw PreconditionError("iteration count must be nonnegative");
  if (n > cap) throw ResourceError("iteration count exceeds the configured cap");
  for (long k = 0; k < n; ++k) z = f.eval(z);
  return z;
}

}  // namespace innerlab
