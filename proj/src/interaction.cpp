#include "swarm/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {
namespace {

// x^k for a small positive integer k by repeated squaring.
double ipow(double x, int k) {
  double result = 1.0;
  while (k > 0) {
    if (k & 1) result *= x;
    x *= x;
    k >>= 1;
  }
  return result;
}

void require_positive(double z, const char* what) {
  if (!(z > 0.0)) {
    throw DomainError(std::string(what) + " is defined for z > 0, got " + std::to_string(z));
  }
}

}  // namespace

std::optional<std::string> LennardJonesParams::violation() const {
  if (!(a > 0.0)) return "interaction.a must be positive";
  if (!(b > 0.0)) return "interaction.b must be positive";
  if (c < 1) return "interaction.c must be a positive integer";
  if (!(saturation > 0.0)) return "interaction.saturation must be positive";
  return std::nullopt;
}

double LennardJonesParams::root() const { return std::pow(a / b, 1.0 / c); }

InteractionFunction InteractionFunction::lennard_jones(const LennardJonesParams& params, double R,
                                                       double R_a) {
  if (params.c < 1) throw InvalidInput("Lennard-Jones exponent c must be >= 1");
  if (!(params.saturation > 0.0)) throw InvalidInput("saturation must be positive");
  if (!(R > 0.0) || !(R_a > 0.0)) throw InvalidInput("R and R_a must be positive");

  InteractionFunction fn;
  fn.kind_ = ProfileKind::lennard_jones;
  fn.name_ = "lennard_jones";
  fn.params_ = params;
  fn.R_ = R;
  fn.R_a_ = R_a;

  // Saturation knot: the unsaturated profile decreases from +inf near 0, so
  // bracket the crossing of `saturation` and bisect.
  const double sat = params.saturation;
  double hi = 1.0;
  for (int k = 0; k < 200 && fn.lj_raw(hi) >= sat; ++k) hi *= 2.0;
  double lo = hi;
  bool bracketed = false;
  for (int k = 0; k < 2000; ++k) {
    lo *= 0.5;
    if (lo == 0.0) break;
    if (fn.lj_raw(lo) >= sat) {
      bracketed = true;
      break;
    }
  }
  if (bracketed) {
    while (hi - lo > 1e-14) {
      const double mid = 0.5 * (lo + hi);
      if (fn.lj_raw(mid) >= sat) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    fn.knot_ = 0.5 * (lo + hi);
  }
  return fn;
}

InteractionFunction InteractionFunction::truncated_lennard_jones(const LennardJonesParams& params,
                                                                 double R, double R_a) {
  InteractionFunction fn = lennard_jones(params, R, R_a);
  fn.kind_ = ProfileKind::truncated_lennard_jones;
  fn.name_ = "truncated_lennard_jones";
  return fn;
}

InteractionFunction InteractionFunction::linear_spring(double R, double R_a, double stiffness) {
  if (!(R > 0.0) || !(R_a > 0.0)) throw InvalidInput("R and R_a must be positive");
  InteractionFunction fn;
  fn.kind_ = ProfileKind::linear_spring;
  fn.name_ = "linear_spring";
  fn.R_ = R;
  fn.R_a_ = R_a;
  fn.stiffness_ = stiffness;
  return fn;
}

InteractionFunction InteractionFunction::custom(std::string name,
                                                std::function<double(double)> force,
                                                std::function<double(double)> derivative,
                                                std::function<double(double)> potential,
                                                double R, double R_a) {
  if (!force) throw InvalidInput("custom interaction needs a force");
  InteractionFunction fn;
  fn.kind_ = ProfileKind::custom;
  fn.name_ = std::move(name);
  fn.R_ = R;
  fn.R_a_ = R_a;
  fn.custom_force_ = std::move(force);
  fn.custom_derivative_ = std::move(derivative);
  fn.custom_potential_ = std::move(potential);
  return fn;
}

double InteractionFunction::lj_raw(double z) const {
  const double w = ipow(1.0 / z, params_.c);
  return params_.a * w * w - params_.b * w;
}

double InteractionFunction::lj_saturated(double z) const {
  const double raw = lj_raw(z);
  // inf - inf once z^-c overflows; the limit is +inf, hence saturated.
  if (std::isnan(raw)) return params_.saturation;
  return std::min(raw, params_.saturation);
}

double InteractionFunction::lj_raw_derivative(double z) const {
  const double c = params_.c;
  const double w = ipow(1.0 / z, params_.c);
  return (-2.0 * c * params_.a * w * w + c * params_.b * w) / z;
}

double InteractionFunction::lj_neg_integral(double z) const {
  // z^p - R^p and ln z - ln R in relative-error-safe form.
  const double s = std::log1p((z - R_) / R_);
  auto power_delta = [&](double p) { return std::pow(R_, p) * std::expm1(p * s); };
  const int c = params_.c;
  const double p1 = 1.0 - 2.0 * c;
  const double repulsive = params_.a / p1 * power_delta(p1);
  double attractive = params_.b * s;
  if (c != 1) {
    const double p2 = 1.0 - static_cast<double>(c);
    attractive = params_.b / p2 * power_delta(p2);
  }
  return -(repulsive - attractive);
}

double InteractionFunction::force_unchecked(double z) const {
  switch (kind_) {
    case ProfileKind::lennard_jones:
      return lj_saturated(z);
    case ProfileKind::truncated_lennard_jones:
      return z > R_a_ ? 0.0 : lj_saturated(z);
    case ProfileKind::linear_spring:
      return stiffness_ * (R_ - z);
    case ProfileKind::custom:
      return custom_force_(z);
  }
  return 0.0;
}

double InteractionFunction::force(double z) const {
  require_positive(z, "interaction force");
  return force_unchecked(z);
}

double InteractionFunction::derivative(double z) const {
  require_positive(z, "interaction derivative");
  switch (kind_) {
    case ProfileKind::truncated_lennard_jones:
      if (z > R_a_) return 0.0;
      [[fallthrough]];
    case ProfileKind::lennard_jones:
      return lj_saturated(z) == params_.saturation ? 0.0 : lj_raw_derivative(z);
    case ProfileKind::linear_spring:
      return -stiffness_;
    case ProfileKind::custom:
      if (!custom_derivative_) throw InvalidInput(name_ + " has no derivative");
      return custom_derivative_(z);
  }
  return 0.0;
}

double InteractionFunction::potential(double z) const {
  require_positive(z, "interaction potential");
  switch (kind_) {
    case ProfileKind::lennard_jones:
    case ProfileKind::truncated_lennard_jones: {
      if (kind_ == ProfileKind::truncated_lennard_jones) z = std::min(z, R_a_);
      if (z >= knot_ && R_ >= knot_) return lj_neg_integral(z);
      // Linear on the saturated branch, anchored at the knot.
      auto anchored = [&](double y) {
        return y < knot_ ? params_.saturation * (knot_ - y)
                         : lj_neg_integral(y) - lj_neg_integral(knot_);
      };
      return anchored(z) - anchored(R_);
    }
    case ProfileKind::linear_spring:
      return 0.5 * stiffness_ * (z - R_) * (z - R_);
    case ProfileKind::custom:
      if (!custom_potential_) throw InvalidInput(name_ + " has no potential");
      return custom_potential_(z);
  }
  return 0.0;
}

double lj_force(double z, const LennardJonesParams& params) {
  return InteractionFunction::lennard_jones(params, 1.0, 1.0).force(z);
}

double lj_derivative(double z, const LennardJonesParams& params) {
  return InteractionFunction::lennard_jones(params, 1.0, 1.0).derivative(z);
}

const char* to_string(VanishingStatus status) {
  switch (status) {
    case VanishingStatus::exact_zero:
      return "exact-zero";
    case VanishingStatus::approximately_zero:
      return "approximately-zero";
    case VanishingStatus::not_vanishing:
      return "not-vanishing";
  }
  return "unknown";
}

Assumption1Report validate_assumption1(const InteractionFunction& fn, double grid_step) {
  if (!(grid_step > 0.0)) throw InvalidInput("grid_step must be positive");
  Assumption1Report report;
  report.grid_step = grid_step;

  const double R = fn.R();
  const double R_a = fn.R_a();

  report.force_at_R = fn.force(R);
  report.root_at_R = std::abs(report.force_at_R) <= 1e-12;

  const auto count = static_cast<std::size_t>(std::floor(2.0 * R_a / grid_step + 1e-9));
  report.samples = count;

  std::vector<double> near_z;
  std::vector<double> near_f;
  for (std::size_t k = 1; k <= count; ++k) {
    const double z = static_cast<double>(k) * grid_step;
    const double f = fn.force(z);
    if (z <= R_a) {
      near_z.push_back(z);
      near_f.push_back(f);
      report.near_field_max = std::max(report.near_field_max, std::abs(f));
      const bool ok = z < R ? f > 0.0 : (z > R ? f < 0.0 : true);
      if (!ok) {
        ++report.sign_violations;
        if (!report.first_sign_violation) report.first_sign_violation = z;
      }
    } else if (std::abs(f) > report.far_field_max || report.far_field_argmax == 0.0) {
      report.far_field_max = std::abs(f);
      report.far_field_argmax = z;
    }
  }
  report.sign_pattern = report.sign_violations == 0;

  // A jump between neighbouring samples is Lipschitz-consistent if it
  // shrinks away under bisection; a discontinuity keeps its size.
  const double jump_tol = 1e-9 * std::max(1.0, report.near_field_max);
  for (std::size_t k = 0; k + 1 < near_z.size(); ++k) {
    double lo = near_z[k];
    double hi = near_z[k + 1];
    double f_lo = near_f[k];
    double f_hi = near_f[k + 1];
    for (int level = 0; level < 40; ++level) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = fn.force(mid);
      if (std::abs(f_mid - f_lo) >= std::abs(f_hi - f_mid)) {
        hi = mid;
        f_hi = f_mid;
      } else {
        lo = mid;
        f_lo = f_mid;
      }
    }
    const double jump = std::abs(f_hi - f_lo);
    if (jump > report.max_localized_jump) {
      report.max_localized_jump = jump;
      if (jump > jump_tol) report.discontinuity_at = 0.5 * (lo + hi);
    }
  }
  report.continuous = report.max_localized_jump <= jump_tol;

  if (report.far_field_max == 0.0) {
    report.vanishing = VanishingStatus::exact_zero;
  } else if (report.far_field_max <= kApproximatelyZeroFraction * report.near_field_max) {
    report.vanishing = VanishingStatus::approximately_zero;
  } else {
    report.vanishing = VanishingStatus::not_vanishing;
  }
  return report;
}

}  // namespace swarm
