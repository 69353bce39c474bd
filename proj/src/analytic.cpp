#include "pmiprof/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "pmiprof/mathutil.hpp"

namespace pmiprof {

namespace {
constexpr double kRhoCap = 1.0 - 1e-12;
}

CanonicalCorrelations canonical_correlations(const Matrix& cov, int dim_x, int dim_y) {
  if (cov.rows() != cov.cols() || cov.rows() != dim_x + dim_y)
    throw DimensionError("canonical_correlations: cov/split mismatch");
  Eigen::LLT<Matrix> lx(cov.topLeftCorner(dim_x, dim_x));
  Eigen::LLT<Matrix> ly(cov.bottomRightCorner(dim_y, dim_y));
  if (lx.info() != Eigen::Success || ly.info() != Eigen::Success)
    throw NumericError("canonical_correlations: marginal blocks not positive definite");
  // M = Lx^-1 Sigma_XY Ly^-T
  Matrix M = lx.matrixL().solve(cov.topRightCorner(dim_x, dim_y));
  M = ly.matrixL().solve(M.transpose()).transpose();
  Eigen::JacobiSVD<Matrix> svd(M);
  CanonicalCorrelations out;
  out.rhos = svd.singularValues();
  for (Eigen::Index i = 0; i < out.rhos.size(); ++i) {
    // rank deficiency pushes singular values to 1 (up to roundoff) and gets
    // clamped; anything materially above 1 cannot come from a PSD matrix
    if (out.rhos[i] > 1.0 + 1e-6)
      throw NumericError("canonical_correlations: input is not positive semi-definite");
    if (out.rhos[i] > kRhoCap) {
      out.rhos[i] = kRhoCap;
      out.clamped = true;
    }
  }
  return out;
}

double gaussian_mi(const Vector& rhos) {
  double mi = 0.0;
  for (Eigen::Index i = 0; i < rhos.size(); ++i) {
    const double r = rhos[i];
    if (!(r >= 0.0 ? r < 1.0 : r > -1.0)) throw NumericError("gaussian_mi: |rho| must be < 1");
    mi -= 0.5 * std::log1p(-r * r);
  }
  return mi;
}

double gaussian_mi(const std::vector<double>& rhos) {
  return gaussian_mi(Eigen::Map<const Vector>(rhos.data(), Eigen::Index(rhos.size())));
}

PmiSampleBatch sample_gaussian_profile(const Vector& rhos, Seed seed, Eigen::Index n) {
  if (n < 1) throw NumericError("sample_gaussian_profile: n must be >= 1");
  const double mi = gaussian_mi(rhos);
  Rng rng(seed);
  PmiSampleBatch batch;
  batch.values.resize(n);
  batch.source = "gaussian_profile";
  batch.seed = seed;
  for (Eigen::Index i = 0; i < n; ++i) {
    double t = mi;
    for (Eigen::Index r = 0; r < rhos.size(); ++r) {
      const double q1 = rng.normal();
      const double q2 = rng.normal();
      t += 0.5 * rhos[r] * (q1 * q1 - q2 * q2);
    }
    batch.values[i] = t;
  }
  return batch;
}

VarianceBounds profile_variance_bounds(double mi, int m) {
  if (mi < 0.0) throw NumericError("profile_variance_bounds: mi must be >= 0");
  if (m < 1) throw NumericError("profile_variance_bounds: m must be >= 1");
  VarianceBounds b;
  b.v_min = -std::expm1(-2.0 * mi);
  b.v_max = double(m) * (-std::expm1(-2.0 * mi / double(m)));
  return b;
}

double DiscreteProfile::mean() const {
  double s = 0.0;
  for (const auto& [loc, w] : atoms) s += loc * w;
  return s;
}

DiscreteProfile discrete_profile(const Matrix& joint_pmf) {
  if (joint_pmf.rows() < 1 || joint_pmf.cols() < 1)
    throw NumericError("discrete_profile: empty PMF");
  double total = 0.0;
  for (Eigen::Index i = 0; i < joint_pmf.rows(); ++i)
    for (Eigen::Index j = 0; j < joint_pmf.cols(); ++j) {
      if (!(joint_pmf(i, j) >= 0.0)) throw NumericError("discrete_profile: negative entry");
      total += joint_pmf(i, j);
    }
  if (std::abs(total - 1.0) > 1e-9) throw NumericError("discrete_profile: entries must sum to 1");

  const Vector px = joint_pmf.rowwise().sum();
  const Vector py = joint_pmf.colwise().sum();
  std::vector<std::pair<double, double>> atoms;
  for (Eigen::Index i = 0; i < joint_pmf.rows(); ++i)
    for (Eigen::Index j = 0; j < joint_pmf.cols(); ++j) {
      const double p = joint_pmf(i, j);
      if (p <= 0.0) continue;  // zero-probability cells carry no atom
      atoms.emplace_back(std::log(p) - std::log(px[i]) - std::log(py[j]), p);
    }
  std::sort(atoms.begin(), atoms.end());

  DiscreteProfile out;
  for (const auto& [loc, w] : atoms) {
    if (!out.atoms.empty() &&
        std::abs(loc - out.atoms.back().first) <= 1e-12 * std::max(1.0, std::abs(loc))) {
      out.atoms.back().second += w;
    } else {
      out.atoms.emplace_back(loc, w);
    }
  }
  return out;
}

}  // namespace pmiprof
