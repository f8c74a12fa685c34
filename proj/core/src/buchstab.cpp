#include "maierlab/buchstab.hpp"

#include <cmath>
#include <cstdlib>

#include "maierlab/numeric.hpp"

namespace maierlab {

double euler_gamma() { return std::strtod(kEulerGammaDigits, nullptr); }

BuchstabTable::BuchstabTable(double step, double u_max) {
  if (!(step > 0.0) || step > 1e-3)
    fail(errc::invalid_step, "step must satisfy 0 < h <= 1e-3");
  if (u_max < 2.0) fail(errc::invalid_step, "u_max must be >= 2");
  per_unit_ = static_cast<std::size_t>(std::llround(1.0 / step));
  h_ = 1.0 / static_cast<double>(per_unit_);
  std::size_t last = static_cast<std::size_t>(std::ceil((u_max - 1.0) / h_));
  u_max_ = 1.0 + static_cast<double>(last) * h_;
  omega_.resize(last + 1);

  const std::size_t n1 = per_unit_;  // index of u = 2
  for (std::size_t k = 0; k <= n1 && k <= last; ++k) omega_[k] = 1.0 / grid_u(k);
  if (last <= n1) return;

  // F(u) = u*omega(u). Two interleaved Simpson chains of panel width 2h;
  // integrand omega(s-1) is one full unit behind the frontier, hence on-grid.
  // omega loses a derivative at each integer u, so any panel whose interior
  // contains an integer grid index would drop the scheme below fourth order.
  // At those indices the chain restarts with a one-step cubic quadrature
  // whose nodes sit entirely on the smooth side of the kink.
  std::vector<double> f(last + 1);
  for (std::size_t k = 0; k <= n1; ++k) f[k] = 1.0;
  if (n1 + 1 <= last) {
    // F(2+h) = 1 + int_2^{2+h} ds/(s-1) exactly.
    f[n1 + 1] = 1.0 + std::log1p(h_);
    omega_[n1 + 1] = f[n1 + 1] / grid_u(n1 + 1);
  }
  for (std::size_t k = n1 + 2; k <= last; ++k) {
    if ((k - 1) % per_unit_ == 0 && k + 2 - n1 < k) {
      // Kink between k-2 and k: integrate [u_{k-1}, u_k] only, with the
      // forward cubic through the four delayed nodes just past the kink.
      f[k] = f[k - 1] + (h_ / 24.0) *
                            (9.0 * omega_[k - 1 - n1] + 19.0 * omega_[k - n1] -
                             5.0 * omega_[k + 1 - n1] + omega_[k + 2 - n1]);
    } else {
      f[k] = f[k - 2] + (h_ / 3.0) * (omega_[k - 2 - n1] +
                                      4.0 * omega_[k - 1 - n1] + omega_[k - n1]);
    }
    omega_[k] = f[k] / grid_u(k);
  }
}

double BuchstabTable::raw_omega(double u) const {
  if (u <= 2.0) return 1.0 / u;
  // 4-point Lagrange cubic. Keep the stencil on [2, u_max] so the corner at
  // u = 2 never degrades the order.
  double pos = (u - 1.0) / h_;
  std::size_t last = omega_.size() - 1;
  auto k = static_cast<std::ptrdiff_t>(pos);
  std::ptrdiff_t start = k - 1;
  std::ptrdiff_t min_start = static_cast<std::ptrdiff_t>(per_unit_);
  if (start < min_start) start = min_start;
  if (start > static_cast<std::ptrdiff_t>(last) - 3)
    start = static_cast<std::ptrdiff_t>(last) - 3;
  double result = 0.0;
  for (int a = 0; a < 4; ++a) {
    double term = omega_[static_cast<std::size_t>(start + a)];
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      term *= (pos - static_cast<double>(start + b)) / static_cast<double>(a - b);
    }
    result += term;
  }
  return result;
}

double BuchstabTable::omega(double u) const {
  if (u < 1.0 || u > u_max_ + 1e-12)
    fail(errc::out_of_range, "omega argument outside [1, u_max]");
  return raw_omega(std::min(u, u_max_));
}

std::vector<BuchstabTable::Crossing> BuchstabTable::find_crossings(
    double u_lo, double u_hi) const {
  if (u_lo < 1.0 || u_hi > u_max_ + 1e-12 || u_hi < u_lo)
    fail(errc::out_of_range, "crossing scan outside [1, u_max]");
  const double eg = std::exp(euler_gamma());
  auto fval = [&](double u) { return eg * raw_omega(u) - 1.0; };

  std::vector<Crossing> out;
  std::size_t k_lo = static_cast<std::size_t>(std::ceil((u_lo - 1.0) / h_));
  std::size_t k_hi = static_cast<std::size_t>(std::floor((u_hi - 1.0) / h_));
  if (k_hi >= omega_.size()) k_hi = omega_.size() - 1;
  double prev_u = grid_u(k_lo);
  double prev_f = fval(prev_u);
  for (std::size_t k = k_lo + 1; k <= k_hi; ++k) {
    double u = grid_u(k);
    double fv = fval(u);
    if ((prev_f < 0.0) != (fv < 0.0) && prev_f != 0.0) {
      double a = prev_u, b = u, fa = prev_f;
      while (b - a > 1e-9) {
        double mid = 0.5 * (a + b);
        double fm = fval(mid);
        if ((fa < 0.0) != (fm < 0.0))
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      out.push_back({0.5 * (a + b), fv < 0.0 ? -1 : 1});
    }
    prev_u = u;
    prev_f = fv;
  }
  return out;
}

std::pair<double, double> BuchstabTable::pick_u_pm(double u_min) const {
  if (u_min + 2.0 > u_max_)
    fail(errc::out_of_range, "need u_min + 2 <= u_max");
  auto crossings = find_crossings(u_min, u_max_);
  if (crossings.empty())
    fail(errc::range_too_short,
         "no sign change of exp(gamma)*omega(u) - 1 in range; grow u_max");
  const double eg = std::exp(euler_gamma());
  // Scan grid points, tracking the extremal value of f between breakpoints.
  double best_plus = 0.0, best_plus_f = 0.0;
  double best_minus = 0.0, best_minus_f = 0.0;
  std::size_t k_lo = static_cast<std::size_t>(std::ceil((u_min - 1.0) / h_));
  for (std::size_t k = k_lo; k < omega_.size(); ++k) {
    double u = grid_u(k);
    double fv = eg * omega_[k] - 1.0;
    if (fv > best_plus_f) {
      best_plus_f = fv;
      best_plus = u;
    }
    if (fv < best_minus_f) {
      best_minus_f = fv;
      best_minus = u;
    }
  }
  if (best_plus_f <= 0.0 || best_minus_f >= 0.0)
    fail(errc::range_too_short, "range does not exhibit both signs; grow u_max");
  return {best_plus, best_minus};
}

}  // namespace maierlab
