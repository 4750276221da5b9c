#include <algorithm>
#include <cmath>
#include <limits>

#include "sqgad/error.hpp"
#include "sqgad/spectral.hpp"

namespace sqgad::spectral {

MultiplierSymbol MultiplierSymbol::axis_power(int axis, double gamma) {
  require(axis == 1 || axis == 2, ErrorCode::InvalidArgument, "axis must be 1 or 2");
  return {Kind::AxisPower, axis, gamma, 0.0, 0.0};
}

MultiplierSymbol MultiplierSymbol::isotropic_power(double s) {
  return {Kind::IsotropicPower, 1, s, 0.0, 0.0};
}

MultiplierSymbol MultiplierSymbol::mixed_power(double d1, double d2) {
  return {Kind::MixedPower, 1, d1, d2, 0.0};
}

MultiplierSymbol MultiplierSymbol::dissipation(const theory::DissipationParams& p) {
  p.validate();
  return {Kind::Dissipation, 1, p.alpha, p.beta, 0.0};
}

MultiplierSymbol MultiplierSymbol::heat_kernel(const theory::DissipationParams& p,
                                               double t) {
  p.validate();
  require(t >= 0.0, ErrorCode::InvalidArgument, "heat kernel time must be >= 0");
  return {Kind::HeatKernel, 1, p.alpha, p.beta, t};
}

double MultiplierSymbol::operator()(double xi1, double xi2) const {
  const double a1 = std::abs(xi1);
  const double a2 = std::abs(xi2);
  switch (kind) {
    case Kind::AxisPower: return std::pow(axis == 1 ? a1 : a2, e1);
    case Kind::IsotropicPower: return std::pow(std::hypot(a1, a2), e1);
    case Kind::MixedPower: return std::pow(a1, e1) * std::pow(a2, e2);
    case Kind::Dissipation: return std::pow(a1, 2.0 * e1) + std::pow(a2, 2.0 * e2);
    case Kind::HeatKernel:
      return std::exp(-t * (std::pow(a1, 2.0 * e1) + std::pow(a2, 2.0 * e2)));
  }
  return 0.0;
}

bool MultiplierSymbol::singular_at_origin() const {
  switch (kind) {
    case Kind::AxisPower:
    case Kind::IsotropicPower: return e1 < 0.0;
    case Kind::MixedPower: return e1 < 0.0 || e2 < 0.0;
    default: return false;
  }
}

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& m) {
  const GridSpec& g = f.grid();
  if (m.singular_at_origin() && f.at(0, 0) != Complex{})
    fail(ErrorCode::SingularSymbol,
         "negative-power symbol applied to a field with a nonzero mean mode");
  SpectralField out(g);
  for (int i1 = 0; i1 < g.n1; ++i1) {
    const double xi1 = g.wavenumber(1, i1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Complex c = f.at(i1, i2);
      if (c == Complex{}) continue;
      const double xi2 = g.wavenumber(2, i2);
      const double value = m(xi1, xi2);
      if (!std::isfinite(value))
        fail(ErrorCode::SingularSymbol,
             "negative-power symbol hit a nonzero coefficient on a zero "
             "wavenumber line");
      out.at(i1, i2) = value * c;
    }
  }
  return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
  const GridSpec& g = f.grid();
  SpectralField out(g);
  for (int i1 = 0; i1 < g.n1; ++i1) {
    if (g.is_nyquist(1, i1)) continue;
    for (int i2 = 0; i2 < g.n2; ++i2) {
      if (g.is_nyquist(2, i2)) continue;
      const double xi = axis == 1 ? g.wavenumber(1, i1) : g.wavenumber(2, i2);
      out.at(i1, i2) = Complex(0.0, xi) * f.at(i1, i2);
    }
  }
  return out;
}

Velocity riesz_velocity(const SpectralField& theta) {
  const GridSpec& g = theta.grid();
  Velocity v{SpectralField(g), SpectralField(g)};
  for (int i1 = 0; i1 < g.n1; ++i1) {
    if (g.is_nyquist(1, i1)) continue;
    const double xi1 = g.wavenumber(1, i1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      if (g.is_nyquist(2, i2)) continue;
      const double xi2 = g.wavenumber(2, i2);
      const double r = std::hypot(xi1, xi2);
      if (r == 0.0) continue;
      const Complex c = theta.at(i1, i2);
      v.u1.at(i1, i2) = Complex(0.0, -xi2 / r) * c;
      v.u2.at(i1, i2) = Complex(0.0, xi1 / r) * c;
    }
  }
  return v;
}

namespace {

template <class Weight>
double weighted_norm(const SpectralField& f, Weight&& weight) {
  const GridSpec& g = f.grid();
  long double sum = 0.0L;
  for (int i1 = 0; i1 < g.n1; ++i1) {
    const double xi1 = g.wavenumber(1, i1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const double mag2 = std::norm(f.at(i1, i2));
      if (mag2 == 0.0) continue;
      sum += static_cast<long double>(weight(xi1, g.wavenumber(2, i2)) * mag2);
    }
  }
  return std::sqrt(static_cast<double>(sum));
}

}  // namespace

double sobolev_norm(const SpectralField& f, double s) {
  require(s >= 0.0, ErrorCode::InvalidArgument, "Sobolev order must be >= 0");
  return weighted_norm(f, [s](double x1, double x2) {
    return std::pow(x1 * x1 + x2 * x2, s);
  });
}

double anisotropic_norm(const SpectralField& f, int axis, double gamma) {
  require(gamma >= 0.0, ErrorCode::InvalidArgument, "order must be >= 0");
  return weighted_norm(f, [axis, gamma](double x1, double x2) {
    return std::pow(std::abs(axis == 1 ? x1 : x2), 2.0 * gamma);
  });
}

double mixed_norm(const SpectralField& f, double d1, double d2) {
  require(d1 >= 0.0 && d2 >= 0.0, ErrorCode::InvalidArgument,
          "orders must be >= 0");
  return weighted_norm(f, [d1, d2](double x1, double x2) {
    return std::pow(std::abs(x1), 2.0 * d1) * std::pow(std::abs(x2), 2.0 * d2);
  });
}

double dissipation_form(const SpectralField& f,
                        const theory::DissipationParams& params) {
  const double n = weighted_norm(f, [&params](double x1, double x2) {
    return params.symbol(x1, x2);
  });
  return n * n;
}

double inner_product(const SpectralField& a, const SpectralField& b) {
  require(a.grid() == b.grid(), ErrorCode::InvalidArgument, "grid mismatch");
  long double sum = 0.0L;
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i)
    sum += static_cast<long double>((std::conj(ca[i]) * cb[i]).real());
  return static_cast<double>(sum);
}

double lp_norm(const PhysicalField& f, double p) {
  require(p >= 1.0, ErrorCode::InvalidArgument, "Lebesgue exponent must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  long double sum = 0.0L;
  for (double v : f.values) sum += std::pow(static_cast<long double>(std::abs(v)), p);
  const double cell = f.grid.area() / static_cast<double>(f.grid.size());
  return std::pow(static_cast<double>(sum) * cell, 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) {
  return lp_norm(to_physical(f), p);
}

SpectralField dealias(const SpectralField& f) {
  const GridSpec& g = f.grid();
  SpectralField out(g);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      if (g.retained(i1, i2)) out.at(i1, i2) = f.at(i1, i2);
  return out;
}

}  // namespace sqgad::spectral
