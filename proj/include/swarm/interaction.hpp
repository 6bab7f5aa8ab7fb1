#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace swarm {

/// Parameters of the saturated Lennard-Jones profile
///   f(z) = min(a / z^(2c) - b / z^c, saturation).
struct LennardJonesParams {
  double a = 0.5;
  double b = 0.5;
  int c = 12;
  double saturation = 1.0;

  // Empty when a, b > 0, c >= 1 and saturation > 0; otherwise a description
  // of the first violated bound.
  std::optional<std::string> violation() const;

  // (a/b)^(1/c): zero of the unsaturated profile.
  double root() const;
};

enum class ProfileKind {
  lennard_jones,            // full range, never exactly zero
  truncated_lennard_jones,  // identical up to R_a, exactly zero beyond
  linear_spring,            // k (R - z), no saturation
  custom,
};

/// Scalar force profile f(z) with its derivative f'(z) and potential
/// P(z) = -integral_R^z f(y) dy. Immutable after construction.
class InteractionFunction {
 public:
  static InteractionFunction lennard_jones(const LennardJonesParams& params, double R, double R_a);
  static InteractionFunction truncated_lennard_jones(const LennardJonesParams& params, double R,
                                                     double R_a);
  static InteractionFunction linear_spring(double R, double R_a, double stiffness = 1.0);
  // The potential may be left empty; potential() then throws.
  static InteractionFunction custom(std::string name, std::function<double(double)> force,
                                    std::function<double(double)> derivative,
                                    std::function<double(double)> potential, double R,
                                    double R_a);

  // All three throw DomainError for z <= 0.
  double force(double z) const;
  double derivative(double z) const;
  double potential(double z) const;

  // Force without the domain check; z must be positive. Used in the
  // per-step inner loop after the caller has excluded coincident agents.
  double force_unchecked(double z) const;

  ProfileKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const LennardJonesParams& params() const { return params_; }
  double R() const { return R_; }
  double R_a() const { return R_a_; }

  // Left end of the unsaturated branch; 0 when the profile never saturates.
  double saturation_knot() const { return knot_; }

 private:
  InteractionFunction() = default;

  double lj_raw(double z) const;
  double lj_saturated(double z) const;
  double lj_raw_derivative(double z) const;
  // -integral_R^z of the unsaturated profile, free of cancellation near R.
  double lj_neg_integral(double z) const;

  ProfileKind kind_ = ProfileKind::lennard_jones;
  std::string name_;
  LennardJonesParams params_;
  double R_ = 1.0;
  double R_a_ = 1.0;
  double stiffness_ = 1.0;
  double knot_ = 0.0;
  std::function<double(double)> custom_force_;
  std::function<double(double)> custom_derivative_;
  std::function<double(double)> custom_potential_;
};

// Convenience wrappers over InteractionFunction for the LJ profile.
double lj_force(double z, const LennardJonesParams& params);
double lj_derivative(double z, const LennardJonesParams& params);

enum class VanishingStatus { exact_zero, approximately_zero, not_vanishing };

const char* to_string(VanishingStatus status);

/// Sampled check of the four interaction-function conditions: root at R,
/// repulsive below R and attractive above, continuous up to R_a, vanishing
/// beyond R_a.
struct Assumption1Report {
  double grid_step = 0.0;
  std::size_t samples = 0;

  double force_at_R = 0.0;
  bool root_at_R = false;  // |f(R)| <= 1e-12

  bool sign_pattern = false;
  std::size_t sign_violations = 0;
  std::optional<double> first_sign_violation;

  bool continuous = false;
  double max_localized_jump = 0.0;  // largest jump left after bisection refinement
  std::optional<double> discontinuity_at;

  VanishingStatus vanishing = VanishingStatus::not_vanishing;
  double far_field_max = 0.0;  // max |f| on (R_a, 2 R_a]
  double far_field_argmax = 0.0;
  double near_field_max = 0.0;  // max |f| on (0, R_a]

  // Conditions a1-a3; the vanishing condition is informational.
  bool required_pass() const { return root_at_R && sign_pattern && continuous; }
};

/// Samples f on (0, 2 R_a] every grid_step. Never throws on findings.
Assumption1Report validate_assumption1(const InteractionFunction& fn, double grid_step);

// Far-field residual below this fraction of the near-field scale is reported
// as approximately zero.
inline constexpr double kApproximatelyZeroFraction = 0.1;

}  // namespace swarm
