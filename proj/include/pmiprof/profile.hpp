#pragma once

#include <functional>
#include <string>

#include "pmiprof/distributions.hpp"

namespace pmiprof {

// PMI values evaluated at joint draws; the pushforward sample of the profile.
// Its mean is the Monte Carlo MI estimate.
struct PmiSampleBatch {
  Vector values;
  std::string source;
  Seed seed = 0;
};

struct MiEstimate {
  double value = 0.0;
  double stderr_ = 0.0;  // sample sd / sqrt(n); 0 for exact values
  Eigen::Index n = 0;
};

struct ProfileHistogram {
  Vector bin_edges;       // B+1 sorted edges; outermost may be +-inf
  Vector bin_probs;       // B entries, sum 1
  Vector per_bin_stderr;  // sqrt(p(1-p)/n), each <= 1/sqrt(4n)
  Eigen::Index n = 0;
};

struct ProfileCdf {
  Vector thresholds;
  Vector cdf_values;
};

// log p(x,y) - log p(x) - log p(y)
double pmi(const JointDistribution& dist, const CVecRef& x, const CVecRef& y);

// Draw n joint samples and evaluate PMI at each; every value must be finite.
PmiSampleBatch sample_profile(const JointDistribution& dist, Seed seed, Eigen::Index n);

// Mean and standard error of the batch (n >= 2).
MiEstimate mi_mc(const PmiSampleBatch& batch);

// As above but robust to heavy-tailed profiles: median of `blocks` block
// means, stderr from the asymptotic median variance.
MiEstimate mi_mc_median_of_means(const PmiSampleBatch& batch, int blocks = 20);

ProfileHistogram histogram(const PmiSampleBatch& batch, const Vector& bin_edges);
// Default binning: 64 equal-width bins over [mean - 5 sd, mean + 5 sd] plus
// two overflow bins.
ProfileHistogram histogram(const PmiSampleBatch& batch);

ProfileCdf cdf(const PmiSampleBatch& batch, const Vector& thresholds);

// Pushforward by u of the likelihood ratio: u(exp(values[i])). u = log
// recovers the PMI batch itself.
Vector generalized_profile(const PmiSampleBatch& batch, const std::function<double(double)>& u);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(const Vector& a, const Vector& b);
double ks_distance(const PmiSampleBatch& a, const PmiSampleBatch& b);

}  // namespace pmiprof
