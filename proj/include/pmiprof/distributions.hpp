#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pmiprof/common.hpp"
#include "pmiprof/rng.hpp"

namespace pmiprof {

// A batch of paired draws, one record per row.
struct PairedSample {
  Matrix xs;
  Matrix ys;
  Eigen::Index size() const { return xs.rows(); }
};

// One-block distribution with a sampler and a tractable log density; used for
// product constructions, contamination noise and marginal extraction.
class MarginalDistribution {
 public:
  virtual ~MarginalDistribution() = default;
  virtual int dim() const = 0;
  virtual bool discrete() const { return false; }
  virtual void sample_point(Rng& rng, VecRef out) const = 0;
  virtual double log_pdf(const CVecRef& v) const = 0;
  virtual std::string describe() const = 0;

  Matrix sample(Rng& rng, Eigen::Index n) const;
};

using MarginalPtr = std::shared_ptr<const MarginalDistribution>;

// The core contract: a joint distribution over X x Y that can be sampled and
// whose joint and marginal log densities are numerically evaluable. Anything
// implementing this can be bent, mixed, profiled and benchmarked.
class JointDistribution {
 public:
  virtual ~JointDistribution() = default;

  virtual int dim_x() const = 0;
  virtual int dim_y() const = 0;
  virtual bool discrete_x() const { return false; }
  virtual bool discrete_y() const { return false; }
  // False for embedded distributions that can be sampled but carry no density
  // with respect to the ambient Lebesgue measure.
  virtual bool has_density() const { return true; }

  virtual void sample_pair(Rng& rng, VecRef x, VecRef y) const = 0;
  virtual double log_pdf_joint(const CVecRef& x, const CVecRef& y) const = 0;
  virtual double log_pdf_x(const CVecRef& x) const = 0;
  virtual double log_pdf_y(const CVecRef& y) const = 0;

  // Optional capability; null when a standalone marginal cannot be built.
  virtual MarginalPtr marginal_x() const { return nullptr; }
  virtual MarginalPtr marginal_y() const { return nullptr; }

  virtual std::string describe() const = 0;

  PairedSample sample(Rng& rng, Eigen::Index n) const;
  PairedSample sample(Seed seed, Eigen::Index n) const;

  void check_point(const CVecRef& x, const CVecRef& y) const;
};

using DistPtr = std::shared_ptr<const JointDistribution>;

// ---------------------------------------------------------------------------
// Marginal building blocks
// ---------------------------------------------------------------------------

class GaussianMarginal final : public MarginalDistribution {
 public:
  GaussianMarginal(Vector mean, Matrix cov);
  int dim() const override { return int(mean_.size()); }
  void sample_point(Rng& rng, VecRef out) const override;
  double log_pdf(const CVecRef& v) const override;
  std::string describe() const override { return "normal"; }

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }

 private:
  Vector mean_;
  Matrix cov_;
  Matrix chol_;
  double log_norm_;
};

class StudentMarginal final : public MarginalDistribution {
 public:
  StudentMarginal(Vector location, Matrix dispersion, double dof);
  int dim() const override { return int(loc_.size()); }
  void sample_point(Rng& rng, VecRef out) const override;
  double log_pdf(const CVecRef& v) const override;
  std::string describe() const override { return "student"; }

 private:
  Vector loc_;
  Matrix disp_;
  Matrix chol_;
  double dof_;
  double log_norm_;
};

class UniformMarginal final : public MarginalDistribution {
 public:
  UniformMarginal(Vector lower, Vector upper);
  int dim() const override { return int(lower_.size()); }
  void sample_point(Rng& rng, VecRef out) const override;
  double log_pdf(const CVecRef& v) const override;
  std::string describe() const override { return "uniform"; }

 private:
  Vector lower_, upper_;
  double log_density_;
};

// Discrete labels 0..K-1 carried as a length-1 vector.
class CategoricalMarginal final : public MarginalDistribution {
 public:
  explicit CategoricalMarginal(std::vector<double> probs);
  int dim() const override { return 1; }
  bool discrete() const override { return true; }
  void sample_point(Rng& rng, VecRef out) const override;
  double log_pdf(const CVecRef& v) const override;
  std::string describe() const override { return "categorical"; }

  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// ---------------------------------------------------------------------------
// Primitive joint distributions
// ---------------------------------------------------------------------------

class MultivariateNormal final : public JointDistribution {
 public:
  // cov must be symmetric with minimum eigenvalue > 1e-12; the Cholesky
  // factors of the joint and both marginal blocks are computed once here.
  MultivariateNormal(Vector mean, Matrix cov, int dim_x, int dim_y);

  int dim_x() const override { return m_; }
  int dim_y() const override { return n_; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  MarginalPtr marginal_x() const override;
  MarginalPtr marginal_y() const override;
  std::string describe() const override { return "mvn"; }

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }

 private:
  Vector mean_;
  Matrix cov_;
  int m_, n_;
  Matrix chol_joint_, chol_x_, chol_y_;
  double log_norm_joint_, log_norm_x_, log_norm_y_;
};

class MultivariateStudent final : public JointDistribution {
 public:
  MultivariateStudent(Vector location, Matrix dispersion, double dof, int dim_x, int dim_y);

  int dim_x() const override { return m_; }
  int dim_y() const override { return n_; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  MarginalPtr marginal_x() const override;
  MarginalPtr marginal_y() const override;
  std::string describe() const override { return "student"; }

 private:
  Vector loc_;
  Matrix disp_;
  double dof_;
  int m_, n_;
  Matrix chol_joint_;
  double log_norm_joint_;
};

// Constant density on a closed axis-aligned box, -inf outside.
class UniformBox final : public JointDistribution {
 public:
  UniformBox(Vector lower, Vector upper, int dim_x, int dim_y);

  int dim_x() const override { return m_; }
  int dim_y() const override { return n_; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  MarginalPtr marginal_x() const override;
  MarginalPtr marginal_y() const override;
  std::string describe() const override { return "uniform_box"; }

 private:
  Vector lower_, upper_;
  int m_, n_;
};

// Continuous X, discrete Y tied through a latent component: X <- Z -> Y.
// Component k pairs a continuous distribution on X with a probability row
// over the |Y| labels.
class DiscreteContinuousMixture final : public JointDistribution {
 public:
  struct Component {
    MarginalPtr x_part;
    std::vector<double> y_probs;
  };

  DiscreteContinuousMixture(std::vector<double> weights, std::vector<Component> components);

  int dim_x() const override { return components_[0].x_part->dim(); }
  int dim_y() const override { return 1; }
  bool discrete_y() const override { return true; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  MarginalPtr marginal_y() const override;
  std::string describe() const override { return "discrete_mixture"; }

 private:
  int label_of(const CVecRef& y) const;
  std::vector<double> weights_;
  std::vector<Component> components_;
  int n_labels_;
};

// Discrete X uniform on {0..m-1}, Y | X=x ~ Uniform(x, x+2); `replication`
// independent copies concatenated. Supported on a strip, so densities are
// evaluated only where defined (sampled points are interior a.s.).
class GaoStaircase final : public JointDistribution {
 public:
  GaoStaircase(int m, int replication = 1);

  int dim_x() const override { return k_; }
  int dim_y() const override { return k_; }
  bool discrete_x() const override { return true; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  std::string describe() const override { return "gao_staircase"; }

  int m() const { return m_; }
  int replication() const { return k_; }

 private:
  int overlap_count(double y) const;
  int m_, k_;
};

// X ~ Exp(1); Y | X=x ~ p*delta_0 + (1-p)*Poisson(x). The Y marginal is
// p*1[y=0] + (1-p)*2^{-(1+y)}.
class ZeroInflatedPoissonization final : public JointDistribution {
 public:
  explicit ZeroInflatedPoissonization(double p);

  int dim_x() const override { return 1; }
  int dim_y() const override { return 1; }
  bool discrete_y() const override { return true; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  std::string describe() const override { return "zip"; }

  double p() const { return p_; }

 private:
  double p_;
};

// X ~ Uniform(0,1), Y = X + Uniform(-eps, eps); both densities closed form.
class UniformAdditiveNoise final : public JointDistribution {
 public:
  explicit UniformAdditiveNoise(double epsilon);

  int dim_x() const override { return 1; }
  int dim_y() const override { return 1; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  std::string describe() const override { return "uniform_additive_noise"; }

  double epsilon() const { return eps_; }

 private:
  double eps_;
};

// Bivariate normal (rho = 0.8) with X pushed through a swiss-roll curve in
// R^2. Injective, so the information content is preserved, but the result has
// no density with respect to Lebesgue measure on R^3: sample-only.
class SwissRollEmbedding final : public JointDistribution {
 public:
  explicit SwissRollEmbedding(double rho = 0.8);

  int dim_x() const override { return 2; }
  int dim_y() const override { return 1; }
  bool has_density() const override { return false; }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef&, const CVecRef&) const override;
  double log_pdf_x(const CVecRef&) const override;
  double log_pdf_y(const CVecRef&) const override;
  std::string describe() const override { return "swiss_roll"; }

  double exact_mi() const;

 private:
  double rho_;
};

// ---------------------------------------------------------------------------
// Closed forms and constructors
// ---------------------------------------------------------------------------

// Mutual information of the Gao staircase with m >= 1 discrete states (per
// replication). The published form has the fraction inverted and goes
// negative at m=2; the value below matches brute-force Monte Carlo.
double gao_mi(int m);

// Series form of the zero-inflated Poissonization mutual information,
// truncated when terms drop below 1e-12. Exact at p=0; for p in (0,1) it is
// an upper bound on the true MI (see tests).
double zip_mi(double p);

// Closed-form MI of UniformAdditiveNoise.
double uniform_additive_mi(double epsilon);

// Gaussian with unit variances, corr(X_i, Y_i) = rhos[i] for the leading
// pairs and everything else independent.
std::shared_ptr<const MultivariateNormal> paired_gaussian(const std::vector<double>& rhos,
                                                          int dim_x, int dim_y);

// Single shared latent factor loading lambda on every coordinate of X and Y.
std::shared_ptr<const MultivariateNormal> dense_factor_gaussian(int m, double lambda);

}  // namespace pmiprof
