#pragma once

// Simultaneous polynomial root finding (Aberth–Ehrlich).

#include <functional>
#include <vector>

#include "innerlab/hypgeo.hpp"

namespace innerlab {

/// Evaluates p(z) and p'(z).
using PolyEval = std::function<void(cplx z, cplx& p, cplx& dp)>;

/// Runs Aberth iterations from `start` (one entry per root). Returns false if
/// the corrections have not settled after `max_iter` sweeps; the current
/// approximations are left in `roots` either way.
bool aberth(const PolyEval& eval, std::vector<cplx>& roots, int max_iter = 500, double tol = 1e-15);

/// Coefficients c[0] + c[1] z + ... (ascending powers).
using Poly = std::vector<cplx>;

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& a);
cplx poly_eval(const Poly& a, cplx z);
/// Drops leading coefficients with modulus below rel * max|c|.
void poly_trim(Poly& a, double rel = 1e-14);

/// All roots of a coefficient polynomial, Newton-polished on the polynomial.
std::vector<cplx> poly_roots(const Poly& a);

}  // namespace innerlab
