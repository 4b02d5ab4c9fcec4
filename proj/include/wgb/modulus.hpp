#pragma once

#include <string>
#include <vector>

namespace wgb {

/// A modulus of continuity g: nondecreasing, subadditive, g(0+) = 0.
/// Either a power t^p with p in (0, 1], or a piecewise-linear table through
/// (0, 0) and the given knots, constant after the last knot.
class Modulus {
 public:
  static Modulus power(double p);
  static Modulus table(std::vector<double> knots, std::vector<double> values);
  /// Parses "power:<p>" or "table:<file>" (file: CSV rows `t,g`, '#' comments).
  static Modulus parse(const std::string& spec);

  double operator()(double t) const;
  /// lim_{t->0+} g(t)/t (+inf when g is not Lipschitz at 0).
  double slope_at_zero() const;

  bool is_power() const { return kind_ == Kind::power; }
  double exponent() const { return p_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  bool is_zero() const;

  /// "power:<p>" or "table:<n knots>".
  std::string label() const;

  /// Checks monotonicity on a 10^3 grid and subadditivity on 10^3 pairs;
  /// throws DomainError on failure.
  void validate() const;

 private:
  enum class Kind { power, table };
  Kind kind_ = Kind::power;
  double p_ = 1.0;
  std::vector<double> knots_, values_;
};

}  // namespace wgb
