#include "addforms/fourier.hpp"

#include "addforms/error.hpp"
#include "addforms/execution.hpp"

#include <cmath>
#include <numbers>

namespace addforms {

namespace {

/// exp(2 pi i p / L) for p in [0, L), L = exponent of the group.
std::vector<Complex> root_table(std::uint32_t exponent) {
  std::vector<Complex> roots(exponent);
  for (std::uint32_t p = 0; p < exponent; ++p) {
    const long double angle = 2.0L * std::numbers::pi_v<long double> * p / exponent;
    roots[p] = Complex(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
  }
  return roots;
}

/// Phase index p with chi_xi(x) = roots[p].
std::uint32_t phase(const FiniteAbelianGroup& g, ElementIndex xi, ElementIndex x) {
  std::uint64_t p = 0;
  const std::uint64_t exponent = g.exponent();
  for (std::size_t t = 0; t < g.rank(); ++t) {
    const std::uint64_t n = g.moduli()[t];
    p += (std::uint64_t{g.residue(xi, t)} * g.residue(x, t) % n) * (exponent / n);
  }
  return static_cast<std::uint32_t>(p % exponent);
}

void require_length(const GroupPtr& group, std::size_t length) {
  if (!group || length != group->order()) fail(ErrorCode::invalid_argument, "function length must equal group order");
}

}  // namespace

Complex character(const GroupElement& xi, const GroupElement& x) {
  require_same_group(*xi.group(), *x.group());
  const auto& g = *xi.group();
  const long double angle =
      2.0L * std::numbers::pi_v<long double> * phase(g, xi.index(), x.index()) / g.exponent();
  return Complex(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
}

GroupFunction indicator(const GroupSubset& a) {
  GroupFunction f{a.group(), std::vector<Complex>(a.group()->order(), 0.0)};
  for (ElementIndex x : a.elements()) f.values[x] = 1.0;
  return f;
}

GroupFunction constant_function(GroupPtr group, Complex value) {
  const std::uint32_t order = group->order();
  return GroupFunction{std::move(group), std::vector<Complex>(order, value)};
}

Spectrum fourier_transform(const GroupFunction& f, unsigned threads) {
  require_length(f.group, f.values.size());
  const auto& g = *f.group;
  const auto roots = root_table(g.exponent());
  const std::uint32_t order = g.order();
  const std::uint32_t exponent = g.exponent();
  auto blocks = map_blocks(order, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<Complex> out(hi - lo);
    for (std::size_t xi = lo; xi < hi; ++xi) {
      Complex sum = 0.0;
      for (ElementIndex x = 0; x < order; ++x) {
        if (f.values[x] == Complex(0.0)) continue;
        const std::uint32_t p = phase(g, static_cast<ElementIndex>(xi), x);
        sum += f.values[x] * roots[p == 0 ? 0 : exponent - p];
      }
      out[xi - lo] = sum / static_cast<double>(order);
    }
    return out;
  });
  Spectrum s{f.group, {}};
  s.coefficients.reserve(order);
  for (auto& b : blocks) s.coefficients.insert(s.coefficients.end(), b.begin(), b.end());
  return s;
}

GroupFunction inverse_fourier_transform(const Spectrum& s, unsigned threads) {
  require_length(s.group, s.coefficients.size());
  const auto& g = *s.group;
  const auto roots = root_table(g.exponent());
  const std::uint32_t order = g.order();
  auto blocks = map_blocks(order, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<Complex> out(hi - lo);
    for (std::size_t x = lo; x < hi; ++x) {
      Complex sum = 0.0;
      for (ElementIndex xi = 0; xi < order; ++xi) {
        sum += s.coefficients[xi] * roots[phase(g, xi, static_cast<ElementIndex>(x))];
      }
      out[x - lo] = sum;
    }
    return out;
  });
  GroupFunction f{s.group, {}};
  f.values.reserve(order);
  for (auto& b : blocks) f.values.insert(f.values.end(), b.begin(), b.end());
  return f;
}

GroupFunction convolve(const GroupFunction& f, const GroupFunction& h) {
  require_length(f.group, f.values.size());
  require_length(h.group, h.values.size());
  require_same_group(*f.group, *h.group);
  const auto& g = *f.group;
  const std::uint32_t order = g.order();
  GroupFunction out{f.group, std::vector<Complex>(order, 0.0)};
  for (ElementIndex x = 0; x < order; ++x) {
    Complex sum = 0.0;
    for (ElementIndex y = 0; y < order; ++y) sum += f.values[g.subtract(x, y)] * h.values[y];
    out.values[x] = sum / static_cast<double>(order);
  }
  return out;
}

double energy_fourier(const GroupSubset& a, unsigned threads) {
  const Spectrum s = fourier_transform(indicator(a), threads);
  double total = 0.0;
  for (const Complex& c : s.coefficients) {
    const double m2 = std::norm(c);
    total += m2 * m2;
  }
  return total;
}

ParsevalSides parseval_check(const GroupFunction& f, unsigned threads) {
  const Spectrum s = fourier_transform(f, threads);
  ParsevalSides sides{0.0, 0.0};
  for (const Complex& c : s.coefficients) sides.spectral += std::norm(c);
  for (const Complex& v : f.values) sides.spatial += std::norm(v);
  sides.spatial /= static_cast<double>(f.values.size());
  return sides;
}

}  // namespace addforms
