#include "pmiprof/mix.hpp"

#include <cmath>

#include "pmiprof/mathutil.hpp"

namespace pmiprof {

ProductDistribution::ProductDistribution(MarginalPtr x_part, MarginalPtr y_part)
    : x_part_(std::move(x_part)), y_part_(std::move(y_part)) {
  if (!x_part_ || !y_part_) throw DimensionError("ProductDistribution: null part");
}

void ProductDistribution::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  x_part_->sample_point(rng, x);
  y_part_->sample_point(rng, y);
}

double ProductDistribution::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  return x_part_->log_pdf(x) + y_part_->log_pdf(y);
}

double ProductDistribution::log_pdf_x(const CVecRef& x) const { return x_part_->log_pdf(x); }

double ProductDistribution::log_pdf_y(const CVecRef& y) const { return y_part_->log_pdf(y); }

MixtureDistribution::MixtureDistribution(std::vector<double> weights, std::vector<DistPtr> comps) {
  if (comps.empty()) throw NumericError("mixture: empty component list");
  if (weights.size() != comps.size()) throw DimensionError("mixture: weights/components mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw NumericError("mixture: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw NumericError("mixture: weights must sum to 1");

  // flatten nested mixtures, multiplying weights through
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!comps[i]) throw DimensionError("mixture: null component");
    if (auto nested = std::dynamic_pointer_cast<const MixtureDistribution>(comps[i])) {
      for (std::size_t j = 0; j < nested->components_.size(); ++j) {
        weights_.push_back(weights[i] * nested->weights_[j]);
        components_.push_back(nested->components_[j]);
      }
    } else {
      weights_.push_back(weights[i]);
      components_.push_back(comps[i]);
    }
  }

  const auto& head = components_[0];
  for (const auto& c : components_) {
    if (c->dim_x() != head->dim_x() || c->dim_y() != head->dim_y())
      throw DimensionError("mixture: component dimensions disagree");
    if (c->discrete_x() != head->discrete_x() || c->discrete_y() != head->discrete_y())
      throw DimensionError("mixture: discrete/continuous blocks disagree");
  }
  log_weights_.reserve(weights_.size());
  for (double w : weights_) log_weights_.push_back(std::log(w));
}

void MixtureDistribution::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  const int z = rng.categorical(weights_);
  components_[std::size_t(z)]->sample_pair(rng, x, y);
}

double MixtureDistribution::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  std::vector<double> terms(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k)
    terms[k] = log_weights_[k] + components_[k]->log_pdf_joint(x, y);
  return logsumexp(terms);
}

double MixtureDistribution::log_pdf_x(const CVecRef& x) const {
  std::vector<double> terms(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k)
    terms[k] = log_weights_[k] + components_[k]->log_pdf_x(x);
  return logsumexp(terms);
}

double MixtureDistribution::log_pdf_y(const CVecRef& y) const {
  std::vector<double> terms(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k)
    terms[k] = log_weights_[k] + components_[k]->log_pdf_y(y);
  return logsumexp(terms);
}

MarginalPtr MixtureDistribution::marginal_x() const {
  std::vector<MarginalPtr> parts;
  parts.reserve(components_.size());
  for (const auto& c : components_) {
    auto p = c->marginal_x();
    if (!p) return nullptr;
    parts.push_back(std::move(p));
  }
  return std::make_shared<MixtureMarginal>(weights_, std::move(parts));
}

MarginalPtr MixtureDistribution::marginal_y() const {
  std::vector<MarginalPtr> parts;
  parts.reserve(components_.size());
  for (const auto& c : components_) {
    auto p = c->marginal_y();
    if (!p) return nullptr;
    parts.push_back(std::move(p));
  }
  return std::make_shared<MixtureMarginal>(weights_, std::move(parts));
}

std::string MixtureDistribution::describe() const {
  return "mixture[" + std::to_string(components_.size()) + "]";
}

MixtureMarginal::MixtureMarginal(std::vector<double> weights, std::vector<MarginalPtr> parts)
    : weights_(std::move(weights)), parts_(std::move(parts)) {
  if (parts_.empty() || weights_.size() != parts_.size())
    throw DimensionError("MixtureMarginal: weights/parts mismatch");
  for (const auto& p : parts_) {
    if (!p || p->dim() != parts_[0]->dim()) throw DimensionError("MixtureMarginal: dim mismatch");
  }
}

void MixtureMarginal::sample_point(Rng& rng, VecRef out) const {
  const int z = rng.categorical(weights_);
  parts_[std::size_t(z)]->sample_point(rng, out);
}

double MixtureMarginal::log_pdf(const CVecRef& v) const {
  std::vector<double> terms(parts_.size());
  for (std::size_t k = 0; k < parts_.size(); ++k)
    terms[k] = std::log(weights_[k]) + parts_[k]->log_pdf(v);
  return logsumexp(terms);
}

DistPtr mixture(std::vector<double> weights, std::vector<DistPtr> components) {
  return std::make_shared<MixtureDistribution>(std::move(weights), std::move(components));
}

DistPtr contaminate(DistPtr base, double alpha, MarginalPtr noise_y) {
  if (!base) throw DimensionError("contaminate: null base");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw NumericError("contaminate: alpha outside [0,1]");
  if (!noise_y || noise_y->dim() != base->dim_y())
    throw DimensionError("contaminate: noise dimension != dim_y");
  auto margx = base->marginal_x();
  if (!margx) throw NumericError("contaminate: base lacks X-marginal extraction");
  auto noise_channel = std::make_shared<ProductDistribution>(margx, noise_y);
  if (alpha == 0.0) return base;
  if (alpha == 1.0) return noise_channel;
  return mixture({1.0 - alpha, alpha}, {std::move(base), std::move(noise_channel)});
}

DistPtr disjoint_uniform_pair(const std::string& mode) {
  auto box = [](double xlo, double xhi, double ylo, double yhi) -> DistPtr {
    Vector lo(2), hi(2);
    lo << xlo, ylo;
    hi << xhi, yhi;
    return std::make_shared<UniformBox>(lo, hi, 1, 1);
  };
  if (mode == "diagonal") {
    return mixture({0.5, 0.5}, {box(0, 1, 0, 1), box(1, 2, 1, 2)});
  }
  if (mode == "antidiagonal") {
    return mixture({0.5, 0.5}, {box(0, 1, 1, 2), box(1, 2, 0, 1)});
  }
  throw SpecError("disjoint_uniform_pair: mode must be 'diagonal' or 'antidiagonal'");
}

}  // namespace pmiprof
