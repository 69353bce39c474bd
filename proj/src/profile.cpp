#include "pmiprof/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmiprof/mathutil.hpp"

namespace pmiprof {

double pmi(const JointDistribution& dist, const CVecRef& x, const CVecRef& y) {
  return dist.log_pdf_joint(x, y) - dist.log_pdf_x(x) - dist.log_pdf_y(y);
}

PmiSampleBatch sample_profile(const JointDistribution& dist, Seed seed, Eigen::Index n) {
  if (n < 1) throw NumericError("sample_profile: n must be >= 1");
  if (!dist.has_density())
    throw NumericError("sample_profile: distribution has no evaluable density");
  Rng rng(seed);
  PmiSampleBatch batch;
  batch.values.resize(n);
  batch.source = dist.describe();
  batch.seed = seed;
  Vector x(dist.dim_x()), y(dist.dim_y());
  for (Eigen::Index i = 0; i < n; ++i) {
    dist.sample_pair(rng, x, y);
    const double v = pmi(dist, x, y);
    if (!std::isfinite(v))
      throw NumericError("sample_profile: non-finite PMI at a sampled point (" + batch.source + ")");
    batch.values[i] = v;
  }
  return batch;
}

MiEstimate mi_mc(const PmiSampleBatch& batch) {
  if (batch.values.size() < 2) throw NumericError("mi_mc: need at least 2 samples");
  const MeanVar mv = mean_var(batch.values);
  return {mv.mean, std::sqrt(mv.var / double(mv.n)), mv.n};
}

MiEstimate mi_mc_median_of_means(const PmiSampleBatch& batch, int blocks) {
  const Eigen::Index n = batch.values.size();
  if (blocks < 2 || n < blocks) throw NumericError("mi_mc_median_of_means: too few samples");
  const Eigen::Index per = n / blocks;
  std::vector<double> means;
  means.reserve(std::size_t(blocks));
  for (int b = 0; b < blocks; ++b)
    means.push_back(batch.values.segment(b * per, per).mean());
  Vector bm = Eigen::Map<Vector>(means.data(), Eigen::Index(means.size()));
  const MeanVar mv = mean_var(bm);
  // 1.2533 = sqrt(pi/2), the asymptotic efficiency factor of the median
  return {median(means), 1.2533141373155003 * std::sqrt(mv.var / double(blocks)), n};
}

ProfileHistogram histogram(const PmiSampleBatch& batch, const Vector& bin_edges) {
  if (bin_edges.size() < 2) throw NumericError("histogram: need at least 2 bin edges");
  for (Eigen::Index i = 0; i + 1 < bin_edges.size(); ++i)
    if (!(bin_edges[i] < bin_edges[i + 1])) throw NumericError("histogram: edges must be sorted");
  const Eigen::Index bins = bin_edges.size() - 1;
  const Eigen::Index n = batch.values.size();
  if (n < 1) throw NumericError("histogram: empty batch");

  ProfileHistogram h;
  h.bin_edges = bin_edges;
  h.bin_probs = Vector::Zero(bins);
  h.n = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = batch.values[i];
    // values outside the edge range are clamped into the boundary bins
    auto it = std::upper_bound(bin_edges.data(), bin_edges.data() + bin_edges.size(), v);
    Eigen::Index idx = std::clamp<Eigen::Index>(it - bin_edges.data() - 1, 0, bins - 1);
    h.bin_probs[idx] += 1.0;
  }
  h.bin_probs /= double(n);
  h.per_bin_stderr = (h.bin_probs.array() * (1.0 - h.bin_probs.array()) / double(n)).sqrt();
  return h;
}

ProfileHistogram histogram(const PmiSampleBatch& batch) {
  const MeanVar mv = mean_var(batch.values);
  const double sd = std::sqrt(std::max(mv.var, 1e-24));
  const double lo = mv.mean - 5.0 * sd, hi = mv.mean + 5.0 * sd;
  const int inner = 64;
  Vector edges(inner + 3);
  edges[0] = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= inner; ++i) edges[i + 1] = lo + (hi - lo) * double(i) / double(inner);
  edges[inner + 2] = std::numeric_limits<double>::infinity();
  return histogram(batch, edges);
}

ProfileCdf cdf(const PmiSampleBatch& batch, const Vector& thresholds) {
  for (Eigen::Index i = 0; i + 1 < thresholds.size(); ++i)
    if (!(thresholds[i] <= thresholds[i + 1])) throw NumericError("cdf: thresholds must be sorted");
  std::vector<double> sorted(batch.values.data(), batch.values.data() + batch.values.size());
  std::sort(sorted.begin(), sorted.end());
  ProfileCdf out;
  out.thresholds = thresholds;
  out.cdf_values.resize(thresholds.size());
  for (Eigen::Index i = 0; i < thresholds.size(); ++i) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), thresholds[i]);
    out.cdf_values[i] = double(it - sorted.begin()) / double(sorted.size());
  }
  return out;
}

Vector generalized_profile(const PmiSampleBatch& batch, const std::function<double(double)>& u) {
  Vector out(batch.values.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = u(std::exp(batch.values[i]));
  return out;
}

double ks_distance(const Vector& a, const Vector& b) {
  if (a.size() == 0 || b.size() == 0) throw NumericError("ks_distance: empty batch");
  std::vector<double> sa(a.data(), a.data() + a.size());
  std::vector<double> sb(b.data(), b.data() + b.size());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = double(sa.size()), nb = double(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  return d;
}

double ks_distance(const PmiSampleBatch& a, const PmiSampleBatch& b) {
  return ks_distance(a.values, b.values);
}

}  // namespace pmiprof
