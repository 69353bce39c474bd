#pragma once

#include <utility>
#include <vector>

#include "pmiprof/profile.hpp"

namespace pmiprof {

struct CanonicalCorrelations {
  Vector rhos;           // in [0, 1), sorted descending
  bool clamped = false;  // true when near-singular values were clipped at 1 - 1e-12
};

// Singular values of Sigma_X^{-1/2} Sigma_XY Sigma_Y^{-1/2}.
CanonicalCorrelations canonical_correlations(const Matrix& cov, int dim_x, int dim_y);

// -1/2 sum log(1 - rho_i^2), in nats.
double gaussian_mi(const Vector& rhos);
double gaussian_mi(const std::vector<double>& rhos);

// Generalized chi-squared sampler of the Gaussian profile:
//   T = MI + sum_i (rho_i / 2) (Q_i - Q'_i),  Q, Q' iid chi^2_1.
// Each chi^2_1 pair costs exactly two normal draws.
PmiSampleBatch sample_gaussian_profile(const Vector& rhos, Seed seed, Eigen::Index n);

struct VarianceBounds {
  double v_min = 0.0;  // a single nonzero correlation
  double v_max = 0.0;  // all correlations equal
};

// Profile-variance extremes among m-correlation Gaussians with the given MI:
// v_min = 1 - exp(-2 mi), v_max = m (1 - exp(-2 mi / m)).
VarianceBounds profile_variance_bounds(double mi, int m);

// Atomic profile of a discrete joint PMF; the weighted mean is the exact MI.
struct DiscreteProfile {
  std::vector<std::pair<double, double>> atoms;  // (location, weight), locations ascending
  double mean() const;
};

DiscreteProfile discrete_profile(const Matrix& joint_pmf);

}  // namespace pmiprof
