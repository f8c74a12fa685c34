#pragma once

#include <utility>
#include <vector>

#include "maierlab/errors.hpp"

namespace maierlab {

/// Dense table of the Buchstab function omega(u) on [1, u_max].
///
/// omega(u) = 1/u on [1,2]; for u >= 2 the table marches the integral form
/// u*omega(u) = 1 + int_2^u omega(s-1) ds with composite Simpson panels, so
/// the kink at u = 2 never enters a derivative. The grid step is snapped to
/// 1/round(1/h) so delayed samples land exactly on grid points.
class BuchstabTable {
 public:
  BuchstabTable(double step, double u_max);

  double step() const { return h_; }
  double u_max() const { return u_max_; }

  /// omega(u) for 1 <= u <= u_max. Exact 1/u branch below 2, 4-point cubic
  /// interpolation above (stencils never straddle the corner at u = 2).
  double omega(double u) const;

  struct Crossing {
    double u;
    int sign_right;  // sign of exp(gamma)*omega - 1 just right of the root
  };

  /// All sign changes of exp(gamma)*omega(u) - 1 on [u_lo, u_hi], each
  /// refined by bisection to 1e-9.
  std::vector<Crossing> find_crossings(double u_lo, double u_hi) const;

  /// Grid points u+ and u- at or beyond u_min with exp(gamma)*omega(u+) > 1
  /// and exp(gamma)*omega(u-) < 1, extremal between consecutive crossings.
  std::pair<double, double> pick_u_pm(double u_min) const;

  const std::vector<double>& values() const { return omega_; }
  double grid_u(std::size_t k) const { return 1.0 + static_cast<double>(k) * h_; }

 private:
  double raw_omega(double u) const;

  double h_;
  double u_max_;
  std::size_t per_unit_;           // 1/h, integral
  std::vector<double> omega_;      // omega at u_k = 1 + k*h
};

}  // namespace maierlab
