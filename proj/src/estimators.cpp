#include "pmiprof/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "pmiprof/analytic.hpp"
#include "pmiprof/mathutil.hpp"
#include "pmiprof/profile.hpp"

namespace pmiprof {

namespace {

void require_paired(const PairedSample& s, Eigen::Index min_n, const char* what) {
  if (s.xs.rows() != s.ys.rows()) throw DimensionError(std::string(what) + ": row count mismatch");
  if (s.xs.rows() < min_n) throw NumericError(std::string(what) + ": too few samples");
  if (!s.xs.allFinite() || !s.ys.allFinite())
    throw NumericError(std::string(what) + ": non-finite entries");
}

std::vector<int> permutation(Eigen::Index n, Seed seed) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  return idx;
}

}  // namespace

PreprocessResult preprocess(const PairedSample& sample) {
  require_paired(sample, 2, "preprocess");
  PreprocessResult out;
  out.sample = sample;
  auto standardize = [](Matrix& m, std::vector<int>& constant_cols) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double mean = m.col(c).mean();
      m.col(c).array() -= mean;
      const double sd = std::sqrt(m.col(c).squaredNorm() / double(m.rows() - 1));
      if (sd > 0.0) {
        m.col(c) /= sd;
      } else {
        constant_cols.push_back(int(c));
      }
    }
  };
  standardize(out.sample.xs, out.constant_x_cols);
  standardize(out.sample.ys, out.constant_y_cols);
  return out;
}

double ksg(const PairedSample& sample, int k) {
  const Eigen::Index n = sample.size();
  if (k < 1) throw NumericError("ksg: k must be >= 1");
  require_paired(sample, k + 1, "ksg");

  double acc = 0.0;
  std::vector<double> dx(static_cast<std::size_t>(n)), dy(static_cast<std::size_t>(n)), dj(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      dx[std::size_t(j)] = (sample.xs.row(j) - sample.xs.row(i)).cwiseAbs().maxCoeff();
      dy[std::size_t(j)] = (sample.ys.row(j) - sample.ys.row(i)).cwiseAbs().maxCoeff();
      dj[std::size_t(j)] = std::max(dx[std::size_t(j)], dy[std::size_t(j)]);
    }
    dj[std::size_t(i)] = std::numeric_limits<double>::infinity();  // exclude self
    std::vector<double> tmp(dj);
    std::nth_element(tmp.begin(), tmp.begin() + (k - 1), tmp.end());
    const double eps = tmp[std::size_t(k - 1)];
    long nx = 0, ny = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if (dx[std::size_t(j)] <= eps) ++nx;
      if (dy[std::size_t(j)] <= eps) ++ny;
    }
    acc += digamma(double(nx + 1)) + digamma(double(ny + 1));
  }
  return digamma(double(k)) + digamma(double(n)) - acc / double(n);
}

namespace {

struct CellKey {
  std::vector<int> idx;
  bool operator==(const CellKey& o) const { return idx == o.idx; }
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::size_t h = 0xCBF29CE484222325ull;
    for (int v : k.idx) {
      h ^= std::size_t(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

CellKey bin_row(const Matrix& m, Eigen::Index row, const std::vector<double>& lo,
                const std::vector<double>& width, int bins) {
  CellKey key;
  key.idx.resize(std::size_t(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    int b = width[std::size_t(c)] > 0.0
                ? int((m(row, c) - lo[std::size_t(c)]) / width[std::size_t(c)])
                : 0;
    key.idx[std::size_t(c)] = std::clamp(b, 0, bins - 1);
  }
  return key;
}

}  // namespace

double histogram_mi(const PairedSample& sample, int bins_per_dim) {
  if (bins_per_dim < 2) throw NumericError("histogram_mi: need at least 2 bins");
  require_paired(sample, 1, "histogram_mi");
  const Eigen::Index n = sample.size();

  auto ranges = [&](const Matrix& m, std::vector<double>& lo, std::vector<double>& width) {
    lo.resize(std::size_t(m.cols()));
    width.resize(std::size_t(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      lo[std::size_t(c)] = m.col(c).minCoeff();
      width[std::size_t(c)] = (m.col(c).maxCoeff() - lo[std::size_t(c)]) / double(bins_per_dim);
    }
  };
  std::vector<double> lox, wx, loy, wy;
  ranges(sample.xs, lox, wx);
  ranges(sample.ys, loy, wy);

  std::unordered_map<CellKey, long, CellKeyHash> cx, cy;
  struct PairCount {
    CellKey x, y;
  };
  std::unordered_map<CellKey, long, CellKeyHash> joint;  // key = x ++ y indices
  for (Eigen::Index i = 0; i < n; ++i) {
    CellKey kx = bin_row(sample.xs, i, lox, wx, bins_per_dim);
    CellKey ky = bin_row(sample.ys, i, loy, wy, bins_per_dim);
    CellKey kj = kx;
    kj.idx.insert(kj.idx.end(), ky.idx.begin(), ky.idx.end());
    ++cx[kx];
    ++cy[ky];
    ++joint[kj];
  }

  const Eigen::Index mx = sample.xs.cols();
  double mi = 0.0;
  for (const auto& [kj, c] : joint) {
    CellKey kx{std::vector<int>(kj.idx.begin(), kj.idx.begin() + mx)};
    CellKey ky{std::vector<int>(kj.idx.begin() + mx, kj.idx.end())};
    const double p = double(c) / double(n);
    const double px = double(cx.at(kx)) / double(n);
    const double py = double(cy.at(ky)) / double(n);
    mi += p * std::log(p / (px * py));
  }
  return mi;
}

double cca_mi(const PairedSample& sample, bool* clamped) {
  const Eigen::Index n = sample.size();
  const Eigen::Index d = sample.xs.cols() + sample.ys.cols();
  if (n <= d) throw NumericError("cca_mi: need more samples than total dimension");
  require_paired(sample, 2, "cca_mi");

  Matrix all(n, d);
  all << sample.xs, sample.ys;
  const Vector mean = all.colwise().mean();
  all.rowwise() -= mean.transpose();
  const Matrix cov = all.transpose() * all / double(n - 1);
  const CanonicalCorrelations cc = canonical_correlations(cov, int(sample.xs.cols()),
                                                          int(sample.ys.cols()));
  if (clamped) *clamped = cc.clamped;
  return gaussian_mi(cc.rhos);
}

// ---------------------------------------------------------------------------
// Critics and variational bounds
// ---------------------------------------------------------------------------

void Critic::cross_block(const CMatRef& xs, const CMatRef& ys, Eigen::Ref<Matrix> out) const {
  for (Eigen::Index i = 0; i < xs.rows(); ++i)
    for (Eigen::Index j = 0; j < ys.rows(); ++j) out(i, j) = value(xs.row(i), ys.row(j));
}

ExactPmiCritic::ExactPmiCritic(DistPtr dist, double shift,
                               std::function<double(const CVecRef&)> cx)
    : dist_(std::move(dist)), shift_(shift), cx_(std::move(cx)) {
  if (!dist_) throw DimensionError("ExactPmiCritic: null distribution");
}

double ExactPmiCritic::value(const CVecRef& x, const CVecRef& y) const {
  double v = pmi(*dist_, x, y) + shift_;
  if (cx_) v += cx_(x);
  return v;
}

GaussianPmiCritic::GaussianPmiCritic(std::vector<double> rhos, double shift,
                                     std::function<double(const CVecRef&)> cx)
    : rhos_(std::move(rhos)), shift_(shift), cx_(std::move(cx)) {
  mi_ = gaussian_mi(rhos_);
}

double GaussianPmiCritic::value(const CVecRef& x, const CVecRef& y) const {
  double v = mi_ + shift_;
  for (std::size_t i = 0; i < rhos_.size(); ++i) {
    const double r = rhos_[i];
    const double u = 1.0 / (1.0 - r * r);
    const double xi = x[Eigen::Index(i)], yi = y[Eigen::Index(i)];
    v += r * u * xi * yi - 0.5 * r * r * u * (xi * xi + yi * yi);
  }
  if (cx_) v += cx_(x);
  return v;
}

void GaussianPmiCritic::cross_block(const CMatRef& xs, const CMatRef& ys,
                                    Eigen::Ref<Matrix> out) const {
  const Eigen::Index b = xs.rows(), n = ys.rows();
  const Eigen::Index k = Eigen::Index(rhos_.size());
  Vector rowterm = Vector::Constant(b, mi_ + shift_);
  Vector colterm = Vector::Zero(n);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double r = rhos_[std::size_t(i)];
    const double u = 1.0 / (1.0 - r * r);
    rowterm.array() -= 0.5 * r * r * u * xs.col(i).array().square();
    colterm.array() -= 0.5 * r * r * u * ys.col(i).array().square();
  }
  if (cx_) {
    for (Eigen::Index i = 0; i < b; ++i) rowterm[i] += cx_(xs.row(i));
  }
  out = rowterm.replicate(1, n);
  out.array().rowwise() += colterm.transpose().array();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double r = rhos_[std::size_t(i)];
    const double u = 1.0 / (1.0 - r * r);
    out.noalias() += (r * u) * (xs.col(i) * ys.col(i).transpose());
  }
}

double mc_oracle(const PairedSample& sample, const Critic& critic) {
  require_paired(sample, 1, "mc_oracle");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i)
    acc += critic.value(sample.xs.row(i), sample.ys.row(i));
  return acc / double(sample.size());
}

namespace {

// f on pairs and on the permuted (product-of-marginals) pairing
void critic_terms(const PairedSample& s, const Critic& critic, Seed seed, Vector& paired,
                  Vector& product) {
  const Eigen::Index n = s.size();
  paired.resize(n);
  product.resize(n);
  const std::vector<int> perm = permutation(n, seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    paired[i] = critic.value(s.xs.row(i), s.ys.row(i));
    product[i] = critic.value(s.xs.row(i), s.ys.row(perm[std::size_t(i)]));
  }
}

}  // namespace

double dv_bound(const PairedSample& sample, const Critic& critic, Seed seed) {
  require_paired(sample, 2, "dv_bound");
  Vector paired, product;
  critic_terms(sample, critic, seed, paired, product);
  const double log_mean_exp = logsumexp(product) - std::log(double(product.size()));
  return paired.mean() - log_mean_exp;
}

double nwj_bound(const PairedSample& sample, const Critic& critic, Seed seed) {
  require_paired(sample, 2, "nwj_bound");
  Vector paired, product;
  critic_terms(sample, critic, seed, paired, product);
  const double log_mean_exp = logsumexp(product) - std::log(double(product.size()));
  return paired.mean() - std::exp(log_mean_exp - 1.0);
}

double infonce_bound(const PairedSample& sample, const Critic& critic) {
  require_paired(sample, 2, "infonce_bound");
  const Eigen::Index n = sample.size();
  const Eigen::Index block = std::min<Eigen::Index>(n, 256);
  Matrix buf(block, n);
  const double log_n = std::log(double(n));
  double acc = 0.0;
  for (Eigen::Index start = 0; start < n; start += block) {
    const Eigen::Index b = std::min(block, n - start);
    auto out = buf.topRows(b);
    critic.cross_block(sample.xs.middleRows(start, b), sample.ys, out);
    for (Eigen::Index r = 0; r < b; ++r) {
      const double diag = out(r, start + r);
      const double m = out.row(r).maxCoeff();
      const double lse = m + std::log((out.row(r).array() - m).exp().sum());
      acc += diag - (lse - log_n);
    }
  }
  return acc / double(n);
}

std::vector<SaturationRow> saturation_study(int dim_pairs, double rho,
                                            const std::vector<int>& batch_sizes, Seed seed,
                                            Eigen::Index n_total) {
  const std::vector<double> rhos(std::size_t(dim_pairs), rho);
  const auto dist = paired_gaussian(rhos, dim_pairs, dim_pairs);
  const GaussianPmiCritic critic(rhos);
  const PairedSample full = dist->sample(derive(seed, "sample", 0), n_total);
  const double mc_full = mc_oracle(full, critic);

  std::vector<SaturationRow> rows;
  for (int b : batch_sizes) {
    if (b < 2 || Eigen::Index(b) > n_total) throw NumericError("saturation_study: bad batch size");
    SaturationRow row;
    row.batch_size = b;
    row.mc = mc_full;
    const Eigen::Index batches = n_total / b;
    double dv = 0.0, nwj = 0.0, nce = 0.0;
    for (Eigen::Index i = 0; i < batches; ++i) {
      PairedSample slice{full.xs.middleRows(i * b, b), full.ys.middleRows(i * b, b)};
      const Seed s = derive(seed, "perm", std::uint64_t(i));
      dv += dv_bound(slice, critic, s);
      nwj += nwj_bound(slice, critic, s);
      nce += infonce_bound(slice, critic);
    }
    row.dv = dv / double(batches);
    row.nwj = nwj / double(batches);
    row.infonce = nce / double(batches);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pmiprof
