#include "sqgad/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sqgad/error.hpp"

namespace sqgad::quadrature {

void QuadratureSpec::validate() const {
  require(rel_tol > 0.0 || abs_tol > 0.0, ErrorCode::InvalidArgument,
          "at least one quadrature tolerance must be positive");
  require(rel_tol >= 0.0 && abs_tol >= 0.0, ErrorCode::InvalidArgument,
          "quadrature tolerances must be nonnegative");
  require(max_subdivisions > 0, ErrorCode::InvalidArgument,
          "max_subdivisions must be positive");
}

namespace {

struct Rule {
  std::array<double, 11> x{};   // Kronrod nodes on [0, 1], x[0] = 0
  std::array<double, 11> wk{};  // Kronrod weights
  std::array<double, 11> wg{};  // Gauss weights, zero on Kronrod-only nodes

  Rule() {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    const auto& ka = kronrod::abscissa();
    const auto& kw = kronrod::weights();
    const auto& gw = gauss::weights();
    for (std::size_t i = 0; i < 11; ++i) {
      x[i] = ka[i];
      wk[i] = kw[i];
      wg[i] = (i % 2 == 1) ? gw[i / 2] : 0.0;
    }
  }
};

const Rule& rule() {
  static const Rule r;
  return r;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel apply_rule(const Integrand& f, double a, double b) {
  const Rule& r = rule();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double f0 = f(c);
  double k = r.wk[0] * f0, g = r.wg[0] * f0;
  for (std::size_t i = 1; i < 11; ++i) {
    const double s = f(c - h * r.x[i]) + f(c + h * r.x[i]);
    k += r.wk[i] * s;
    g += r.wg[i] * s;
  }
  k *= h;
  g *= h;
  double err = std::abs(k - g);
  if (!std::isfinite(k)) err = std::numeric_limits<double>::infinity();
  // Below this the estimate is dominated by rounding.
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
  return {a, b, k, err};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, std::vector<double> breaks,
                           const QuadratureSpec& spec) {
  spec.validate();
  require(breaks.size() >= 2, ErrorCode::InvalidArgument, "need an interval");
  require(std::is_sorted(breaks.begin(), breaks.end()), ErrorCode::InvalidArgument,
          "breakpoints must be ascending");
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadratureResult out;
  if (breaks.size() < 2) return out;

  std::priority_queue<Panel> heap;
  long double value = 0.0L, error = 0.0L;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Panel p = apply_rule(f, breaks[i], breaks[i + 1]);
    value += p.value;
    error += p.error;
    heap.push(p);
  }
  out.evaluations = 21L * static_cast<long>(heap.size());
  const auto target = [&] {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(static_cast<double>(value)));
  };
  int splits = 0;
  while (static_cast<double>(error) > target()) {
    if (splits >= spec.max_subdivisions) {
      std::ostringstream os;
      os << "adaptive quadrature stopped after " << splits
         << " subdivisions with error estimate " << static_cast<double>(error)
         << " for value " << static_cast<double>(value);
      throw QuadratureError(static_cast<double>(value), static_cast<double>(error),
                            os.str());
    }
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::ostringstream os;
      os << "quadrature interval collapsed near x=" << mid << " with error estimate "
         << static_cast<double>(error);
      throw QuadratureError(static_cast<double>(value), static_cast<double>(error),
                            os.str());
    }
    heap.pop();
    const Panel left = apply_rule(f, worst.a, mid);
    const Panel right = apply_rule(f, mid, worst.b);
    value += (left.value + right.value) - worst.value;
    error += (left.error + right.error) - worst.error;
    heap.push(left);
    heap.push(right);
    out.evaluations += 42;
    ++splits;
  }
  // Recompute the totals from the panels to shed accumulated cancellation.
  value = 0.0L;
  error = 0.0L;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = static_cast<double>(value);
  out.error = static_cast<double>(error);
  if (!std::isfinite(out.value))
    throw QuadratureError(out.value, out.error, "integrand produced non-finite values");
  return out;
}

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSpec& spec) {
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate(f, std::vector<double>{b, a}, spec);
    r.value = -r.value;
    return r;
  }
  return integrate(f, std::vector<double>{a, b}, spec);
}

QuadratureResult integrate_2d(const Integrand2& f, const Region2& region,
                              const QuadratureSpec& spec) {
  spec.validate();
  QuadratureSpec inner = spec;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.abs_tol = 0.1 * spec.abs_tol;
  long evaluations = 0;
  // Inner error estimates, integrated along the outer variable alongside the value.
  std::vector<std::pair<double, double>> trace;
  const Integrand outer = [&](double x) {
    const double lo = region.lo(x), hi = region.hi(x);
    if (!(hi > lo)) {
      trace.emplace_back(x, 0.0);
      return 0.0;
    }
    std::vector<double> breaks{lo};
    if (region.inner_breaks) {
      for (double y : region.inner_breaks(x))
        if (y > lo && y < hi) breaks.push_back(y);
      std::sort(breaks.begin(), breaks.end());
    }
    breaks.push_back(hi);
    const auto r = integrate([&](double y) { return f(x, y); }, breaks, inner);
    evaluations += r.evaluations;
    trace.emplace_back(x, r.error);
    return r.value;
  };
  QuadratureResult out = integrate(outer, region.outer_breaks, spec);
  // Bound the integrated inner error by the largest inner estimate times the
  // outer length; cheap and conservative.
  double inner_max = 0.0;
  for (const auto& [x, e] : trace) inner_max = std::max(inner_max, e);
  const double length = region.outer_breaks.back() - region.outer_breaks.front();
  out.error += inner_max * length;
  out.evaluations = evaluations;
  return out;
}

std::vector<double> geometric_breaks(double a, double b, double scale) {
  std::vector<double> out{a};
  if (scale > 0.0 && std::isfinite(scale) && b > a) {
    double x = scale / 16.0;
    while (x <= a) x *= 2.0;
    for (; x < b; x *= 2.0) out.push_back(x);
  }
  out.push_back(b);
  return out;
}

}  // namespace sqgad::quadrature
