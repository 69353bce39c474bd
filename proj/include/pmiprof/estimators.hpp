#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pmiprof/distributions.hpp"

namespace pmiprof {

struct PreprocessResult {
  PairedSample sample;
  // columns left unscaled because they were constant (0-based, x then y)
  std::vector<int> constant_x_cols;
  std::vector<int> constant_y_cols;
};

// Standardize every column to zero mean and unit sample (n-1) variance.
PreprocessResult preprocess(const PairedSample& sample);

// KSG estimator, variant 1: max-norm neighborhoods, psi(k) + psi(N) -
// <psi(n_x + 1) + psi(n_y + 1)>. Points at exactly the neighborhood radius
// count as inside.
double ksg(const PairedSample& sample, int k);

// Plug-in discrete MI over an equal-width binning of each dimension
// ([min, max] per column); empty cells contribute zero.
double histogram_mi(const PairedSample& sample, int bins_per_dim);

// Gaussian MLE plug-in: gaussian_mi of the sample-covariance canonical
// correlations. Near-singular correlations are clamped; *clamped reports it.
double cca_mi(const PairedSample& sample, bool* clamped = nullptr);

// Scalar critic on X x Y. cross_block exists so quadratic-form critics can
// fill whole blocks of the InfoNCE grid at matrix speed; the default loops.
class Critic {
 public:
  virtual ~Critic() = default;
  virtual double value(const CVecRef& x, const CVecRef& y) const = 0;
  virtual void cross_block(const CMatRef& xs, const CMatRef& ys, Eigen::Ref<Matrix> out) const;
};

// f(x, y) = pmi(dist, x, y) + shift + cx(x); the oracle critic family used
// throughout the misspecification studies.
class ExactPmiCritic final : public Critic {
 public:
  explicit ExactPmiCritic(DistPtr dist, double shift = 0.0,
                          std::function<double(const CVecRef&)> cx = nullptr);
  double value(const CVecRef& x, const CVecRef& y) const override;

 private:
  DistPtr dist_;
  double shift_;
  std::function<double(const CVecRef&)> cx_;
};

// Exact PMI of a paired Gaussian (unit variances, corr(X_i, Y_i) = rho_i):
//   f(x, y) = MI + sum_i [rho_i u_i x_i y_i - (rho_i^2 u_i / 2)(x_i^2 + y_i^2)],
// with u_i = 1/(1 - rho_i^2). cross_block runs as a rank-k update.
class GaussianPmiCritic final : public Critic {
 public:
  explicit GaussianPmiCritic(std::vector<double> rhos, double shift = 0.0,
                             std::function<double(const CVecRef&)> cx = nullptr);
  double value(const CVecRef& x, const CVecRef& y) const override;
  void cross_block(const CMatRef& xs, const CMatRef& ys, Eigen::Ref<Matrix> out) const override;

 private:
  std::vector<double> rhos_;
  double mi_, shift_;
  std::function<double(const CVecRef&)> cx_;
};

// Simple Monte Carlo estimator: mean of the critic over the pairs.
double mc_oracle(const PairedSample& sample, const Critic& critic);

// Donsker-Varadhan: mean_pairs[f] - log mean_product[exp f]. Product samples
// pair xs with a seed-derived permutation of ys.
double dv_bound(const PairedSample& sample, const Critic& critic, Seed seed);

// NWJ: mean_pairs[f] - mean_product[exp(f - 1)].
double nwj_bound(const PairedSample& sample, const Critic& critic, Seed seed);

// InfoNCE with the whole sample as one batch.
double infonce_bound(const PairedSample& sample, const Critic& critic);

struct SaturationRow {
  int batch_size = 0;
  double mc = 0.0;
  double dv = 0.0;
  double nwj = 0.0;
  double infonce = 0.0;
};

// Batch-size study on the `dim_pairs`-pair Gaussian with the exact PMI
// critic: dv/nwj/infonce are averaged over disjoint batches of each size,
// mc uses the full sample.
std::vector<SaturationRow> saturation_study(int dim_pairs, double rho,
                                            const std::vector<int>& batch_sizes, Seed seed,
                                            Eigen::Index n_total = 100000);

}  // namespace pmiprof
