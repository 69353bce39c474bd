#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pmiprof/distributions.hpp"

namespace pmiprof {

// Independent X and Y blocks; PMI is identically zero.
class ProductDistribution final : public JointDistribution {
 public:
  ProductDistribution(MarginalPtr x_part, MarginalPtr y_part);

  int dim_x() const override { return x_part_->dim(); }
  int dim_y() const override { return y_part_->dim(); }
  bool discrete_x() const override { return x_part_->discrete(); }
  bool discrete_y() const override { return y_part_->discrete(); }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  MarginalPtr marginal_x() const override { return x_part_; }
  MarginalPtr marginal_y() const override { return y_part_; }
  std::string describe() const override { return "product"; }

 private:
  MarginalPtr x_part_, y_part_;
};

// Finite mixture with positive weights summing to 1. Densities go through
// log-sum-exp; sampling draws the component index first. Nested mixtures are
// flattened at construction so density cost stays linear in the leaf count.
class MixtureDistribution final : public JointDistribution {
 public:
  MixtureDistribution(std::vector<double> weights, std::vector<DistPtr> components);

  int dim_x() const override { return components_[0]->dim_x(); }
  int dim_y() const override { return components_[0]->dim_y(); }
  bool discrete_x() const override { return components_[0]->discrete_x(); }
  bool discrete_y() const override { return components_[0]->discrete_y(); }
  void sample_pair(Rng& rng, VecRef x, VecRef y) const override;
  double log_pdf_joint(const CVecRef& x, const CVecRef& y) const override;
  double log_pdf_x(const CVecRef& x) const override;
  double log_pdf_y(const CVecRef& y) const override;
  MarginalPtr marginal_x() const override;
  MarginalPtr marginal_y() const override;
  std::string describe() const override;

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DistPtr>& components() const { return components_; }

 private:
  std::vector<double> weights_;
  std::vector<DistPtr> components_;
  std::vector<double> log_weights_;
};

// Mixture of one-block marginals (used for mixture marginal extraction).
class MixtureMarginal final : public MarginalDistribution {
 public:
  MixtureMarginal(std::vector<double> weights, std::vector<MarginalPtr> parts);
  int dim() const override { return parts_[0]->dim(); }
  bool discrete() const override { return parts_[0]->discrete(); }
  void sample_point(Rng& rng, VecRef out) const override;
  double log_pdf(const CVecRef& v) const override;
  std::string describe() const override { return "mixture"; }

 private:
  std::vector<double> weights_;
  std::vector<MarginalPtr> parts_;
};

DistPtr mixture(std::vector<double> weights, std::vector<DistPtr> components);

// Failing-channel construction: with probability alpha the output is replaced
// by input-independent noise, giving
//   (1-alpha) * base + alpha * (base X-marginal x noise_y).
// Requires the base to expose a standalone X marginal.
DistPtr contaminate(DistPtr base, double alpha, MarginalPtr noise_y);

// The two unit-box mixtures that make the mixture-MI bounds tight:
// "diagonal" hits log 2 from zero-MI components, and a fifty-fifty blend of
// both modes has zero MI from log-2 components.
DistPtr disjoint_uniform_pair(const std::string& mode);

}  // namespace pmiprof
