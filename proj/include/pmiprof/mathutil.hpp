#pragma once

#include <span>
#include <vector>

#include "pmiprof/common.hpp"

namespace pmiprof {

// Standard normal quantile, Wichura's AS241 (PPND16).
double normal_quantile(double p);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// log(sum_i exp(v_i)) guarded against overflow; -inf for an empty/all -inf set.
double logsumexp(std::span<const double> v);
double logsumexp(const Vector& v);

// Digamma function for x > 0 (ascending recurrence + asymptotic series).
double digamma(double x);

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // unbiased, n-1 denominator
  Eigen::Index n = 0;
};

MeanVar mean_var(const Vector& v);

// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

double median(std::vector<double> values);

}  // namespace pmiprof
