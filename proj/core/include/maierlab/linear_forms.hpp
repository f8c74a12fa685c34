#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maierlab/errors.hpp"

namespace maierlab {

/// One integer affine-linear form c1*x1 + ... + cd*xd + c0.
struct LinearForm {
  std::vector<std::int64_t> coefficients;
  std::int64_t constant = 0;

  LinearForm(std::vector<std::int64_t> coeffs, std::int64_t c0);

  int dimension() const { return static_cast<int>(coefficients.size()); }

  /// Value at an integer point, overflow-checked.
  std::int64_t evaluate(std::span<const std::int64_t> point) const;

  /// Value mod m, reduced to [0, m). m > 0.
  std::int64_t evaluate_mod(std::span<const std::int64_t> point,
                            std::int64_t m) const;
};

/// Coefficient vector with the constant dropped.
std::vector<std::int64_t> homogeneous_part(const LinearForm& form);

/// An ordered tuple of t forms sharing an ambient dimension d.
class LinearSystem {
 public:
  explicit LinearSystem(std::vector<LinearForm> forms);

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(forms_.size()); }
  const std::vector<LinearForm>& forms() const { return forms_; }
  const LinearForm& form(int i) const { return forms_[static_cast<size_t>(i)]; }

  std::vector<std::int64_t> evaluate(std::span<const std::int64_t> point) const;

  /// Text format: one form per line, e.g. "3 + 1*x1 + 2*x2".
  static LinearSystem parse_text(std::string_view text);
  /// JSON array-of-arrays: [[c1,...,cd,c0], ...].
  static LinearSystem parse_json(std::string_view json_text);
  /// Loads a file, sniffing JSON vs text by the first non-space byte.
  static LinearSystem load(const std::string& path);

  std::string to_text() const;

 private:
  std::vector<LinearForm> forms_;
  int dimension_;
};

/// The k-term progression system (x, x+y, ..., x+(k-1)y) in d=2.
LinearSystem k_term_ap(int k);

/// True iff every pair of homogeneous parts is linearly independent over Q.
bool is_finite_complexity(const LinearSystem& system);

struct Complexity {
  bool finite = false;
  int value = 0;  // meaningful only when finite

  static Complexity infinite() { return {false, 0}; }
  bool operator==(const Complexity&) const = default;
};

/// Smallest s >= 0 such that for every form i the remaining homogeneous
/// parts split into s+1 nonempty classes none of whose affine spans contains
/// part i. Exhaustive set-partition search; forms beyond max_partition_size
/// other forms per pivot are rejected.
Complexity complexity(const LinearSystem& system, int max_partition_size = 8);

}  // namespace maierlab
