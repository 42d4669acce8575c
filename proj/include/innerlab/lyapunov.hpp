#pragma once

// The Lyapunov exponent of Lebesgue measure, computed three ways.

#include <cstdint>
#include <string>

#include "innerlab/innerfn.hpp"

namespace innerlab {

enum class ChiMethod { Quadrature, Jensen, Birkhoff };

std::string to_string(ChiMethod m);

struct LyapunovEstimate {
  double value = 0.0;
  ChiMethod method = ChiMethod::Quadrature;
  double error = 0.0;  // error bound (quadrature), 0 (Jensen) or standard error (Birkhoff)
  bool converged = true;
  long restarts = 0;  // Birkhoff orbit restarts
};

/// (1/2pi) int log|F'(e^{i theta})| d theta.
LyapunovEstimate chi_quadrature(const InnerModel& f, double tol = 1e-12);

/// log|c_lead| + sum over nonzero critical points c in the disk of log(1/|c|).
LyapunovEstimate chi_jensen_oracle(const InnerModel& f);

/// Birkhoff average of log|F'| along the boundary orbit of e^{i theta0}.
LyapunovEstimate chi_birkhoff(const InnerModel& f, double theta0, long n, std::uint64_t seed = 1);

}  // namespace innerlab
