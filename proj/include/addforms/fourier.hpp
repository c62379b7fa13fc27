#pragma once

// Characters, expectation-normalised Fourier transform and convolution on a
// finite abelian group. Double precision; a verifier for the exact counting
// path in abelian.hpp, never a source of exact values.

#include "addforms/abelian.hpp"

#include <complex>
#include <vector>

namespace addforms {

using Complex = std::complex<double>;

/// A complex-valued function on G, indexed like the group elements.
struct GroupFunction {
  GroupPtr group;
  std::vector<Complex> values;
};

/// Fourier coefficients f^(xi), indexed like the group elements.
struct Spectrum {
  GroupPtr group;
  std::vector<Complex> coefficients;
};

/// chi_xi(x) = exp(2 pi i sum_t xi_t x_t / n_t).
Complex character(const GroupElement& xi, const GroupElement& x);

GroupFunction indicator(const GroupSubset& a);
GroupFunction constant_function(GroupPtr group, Complex value);

/// f^(xi) = E_x f(x) conj(chi_xi(x)). Direct O(|G|^2) evaluation; each
/// coefficient is summed in element order, so results do not depend on
/// `threads`.
Spectrum fourier_transform(const GroupFunction& f, unsigned threads = 1);

/// f(x) = sum_xi f^(xi) chi_xi(x).
GroupFunction inverse_fourier_transform(const Spectrum& s, unsigned threads = 1);

/// (f*g)(x) = E_y f(x - y) g(y).
GroupFunction convolve(const GroupFunction& f, const GroupFunction& g);

/// sum_xi |A^(xi)|^4, which equals the normalised additive energy E(A)/|G|^3.
double energy_fourier(const GroupSubset& a, unsigned threads = 1);

struct ParsevalSides {
  double spectral;  // sum_xi |f^(xi)|^2
  double spatial;   // E_x |f(x)|^2
};

ParsevalSides parseval_check(const GroupFunction& f, unsigned threads = 1);

}  // namespace addforms
