#include "pmiprof/bayes.hpp"

#include <cmath>

#include "pmiprof/mathutil.hpp"

namespace pmiprof {

namespace {

struct ComponentState {
  Vector mean;
  Matrix cov;
  Matrix chol;       // of cov
  double log_norm;   // Gaussian normalizing constant
};

void refresh_chol(ComponentState& c) {
  Eigen::LLT<Matrix> llt(c.cov);
  if (llt.info() != Eigen::Success) throw NumericError("fit_posterior: draw covariance not PD");
  c.chol = llt.matrixL();
  const double d = double(c.mean.size());
  c.log_norm = -0.5 * (d * 1.8378770664093454836 +
                       2.0 * c.chol.diagonal().array().log().sum());
}

double comp_log_pdf(const ComponentState& c, const CVecRef& v) {
  Vector z = c.chol.template triangularView<Eigen::Lower>().solve(v - c.mean);
  return c.log_norm - 0.5 * z.squaredNorm();
}

// Inverse-Wishart(nu, Psi) through W ~ Wishart(nu, Psi^-1), Sigma = W^-1.
// Bartlett: W = (C A)(C A)^T for any square root C of Psi^-1; C = L^-T works.
Matrix inverse_wishart(Rng& rng, double nu, const Matrix& psi) {
  const Eigen::Index d = psi.rows();
  Eigen::LLT<Matrix> llt(psi);
  if (llt.info() != Eigen::Success) throw NumericError("fit_posterior: Psi not PD");
  Matrix C = Matrix(llt.matrixL())
                 .template triangularView<Eigen::Lower>()
                 .solve(Matrix::Identity(d, d))
                 .transpose();
  Matrix A = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    A(i, i) = std::sqrt(rng.chi_squared(nu - double(i)));
    for (Eigen::Index j = 0; j < i; ++j) A(i, j) = rng.normal();
  }
  const Matrix B = C * A;
  const Matrix W = B * B.transpose();
  return W.llt().solve(Matrix::Identity(d, d));
}

std::vector<double> dirichlet(Rng& rng, const std::vector<double>& alpha) {
  std::vector<double> w(alpha.size());
  double total = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    w[k] = rng.gamma(alpha[k], 1.0);
    if (w[k] < 1e-300) w[k] = 1e-300;
    total += w[k];
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

std::vector<PosteriorDraw> fit_posterior(const PairedSample& data, const GmmPrior& prior,
                                         const ChainConfig& config) {
  const Eigen::Index n = data.size();
  const Eigen::Index d = data.xs.cols() + data.ys.cols();
  if (n < prior.K) throw NumericError("fit_posterior: need at least K data points");
  if (!data.xs.allFinite() || !data.ys.allFinite())
    throw NumericError("fit_posterior: non-finite data");
  if (config.warmup < 0 || config.draws < 1) throw NumericError("fit_posterior: bad chain config");

  Matrix V(n, d);
  V << data.xs, data.ys;

  const int K = prior.K;
  const double kappa0 = prior.niw_kappa;
  const double nu0 = prior.niw_nu > 0.0 ? prior.niw_nu : double(d) + 2.0;
  const Matrix psi0 = prior.niw_psi.size() ? prior.niw_psi : Matrix::Identity(d, d);
  const Vector m0 = Vector::Zero(d);

  Rng rng(config.seed);

  std::vector<int> z(static_cast<std::size_t>(n));
  for (auto& zi : z) zi = int(rng.next_u64() % std::uint64_t(K));

  std::vector<ComponentState> comps(static_cast<std::size_t>(K));
  std::vector<double> weights(std::size_t(K), 1.0 / double(K));

  auto update_components = [&]() {
    std::vector<long> counts(std::size_t(K), 0);
    std::vector<Vector> sums(std::size_t(K), Vector::Zero(d));
    for (Eigen::Index i = 0; i < n; ++i) {
      ++counts[std::size_t(z[std::size_t(i)])];
      sums[std::size_t(z[std::size_t(i)])] += V.row(i).transpose();
    }
    for (int k = 0; k < K; ++k) {
      const long c = counts[std::size_t(k)];
      const double kn = kappa0 + double(c);
      const double nun = nu0 + double(c);
      Vector mn = m0;
      Matrix psin = psi0;
      if (c > 0) {
        const Vector xbar = sums[std::size_t(k)] / double(c);
        Matrix scatter = Matrix::Zero(d, d);
        for (Eigen::Index i = 0; i < n; ++i) {
          if (z[std::size_t(i)] != k) continue;
          const Vector dev = V.row(i).transpose() - xbar;
          scatter.noalias() += dev * dev.transpose();
        }
        mn = (kappa0 * m0 + double(c) * xbar) / kn;
        const Vector dm = xbar - m0;
        psin = psi0 + scatter + (kappa0 * double(c) / kn) * (dm * dm.transpose());
      }
      ComponentState& st = comps[std::size_t(k)];
      st.cov = inverse_wishart(rng, nun, psin);
      Eigen::LLT<Matrix> llt(st.cov);
      Vector zvec(d);
      for (Eigen::Index i = 0; i < d; ++i) zvec[i] = rng.normal();
      st.mean = mn + Matrix(llt.matrixL()) * zvec / std::sqrt(kn);
      refresh_chol(st);
    }

    std::vector<double> alpha(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
      alpha[std::size_t(k)] = prior.dirichlet_concentration + double(counts[std::size_t(k)]);
    weights = dirichlet(rng, alpha);
  };

  auto update_labels = [&]() {
    std::vector<double> logp(static_cast<std::size_t>(K));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int k = 0; k < K; ++k)
        logp[std::size_t(k)] =
            std::log(weights[std::size_t(k)]) + comp_log_pdf(comps[std::size_t(k)], V.row(i));
      const double lse = logsumexp(logp);
      std::vector<double> probs(static_cast<std::size_t>(K));
      for (int k = 0; k < K; ++k) probs[std::size_t(k)] = std::exp(logp[std::size_t(k)] - lse);
      z[std::size_t(i)] = rng.categorical(probs);
    }
  };

  std::vector<PosteriorDraw> out;
  out.reserve(std::size_t(config.draws));
  const int total = config.warmup + config.draws;
  for (int sweep = 0; sweep < total; ++sweep) {
    update_components();
    update_labels();
    if (sweep >= config.warmup) {
      PosteriorDraw draw;
      draw.weights = weights;
      for (int k = 0; k < K; ++k) {
        draw.means.push_back(comps[std::size_t(k)].mean);
        draw.covariances.push_back(comps[std::size_t(k)].cov);
      }
      out.push_back(std::move(draw));
    }
  }
  return out;
}

DistPtr draw_to_distribution(const PosteriorDraw& draw, int dim_x, int dim_y) {
  std::vector<DistPtr> comps;
  std::vector<double> w = draw.weights;
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  comps.reserve(draw.means.size());
  for (std::size_t k = 0; k < draw.means.size(); ++k) {
    comps.push_back(std::make_shared<MultivariateNormal>(draw.means[k], draw.covariances[k],
                                                         dim_x, dim_y));
  }
  return mixture(std::move(w), std::move(comps));
}

MiPosterior mi_posterior(const std::vector<PosteriorDraw>& draws, int dim_x, int dim_y,
                         Eigen::Index mc_samples_per_draw, Seed seed) {
  if (draws.empty()) throw NumericError("mi_posterior: no draws");
  MiPosterior out;
  out.draws.reserve(draws.size());
  for (std::size_t m = 0; m < draws.size(); ++m) {
    const auto dist = draw_to_distribution(draws[m], dim_x, dim_y);
    const auto batch = sample_profile(*dist, derive(seed, "draw", m), mc_samples_per_draw);
    out.draws.push_back(batch.values.mean());
  }
  double acc = 0.0;
  for (double v : out.draws) acc += v;
  out.mean = acc / double(out.draws.size());
  out.p10 = quantile(out.draws, 0.10);
  out.p90 = quantile(out.draws, 0.90);
  return out;
}

std::vector<ProfileHistogram> profile_posterior(const std::vector<PosteriorDraw>& draws, int dim_x,
                                                int dim_y, Eigen::Index mc_samples_per_draw,
                                                const Vector& bin_edges, Seed seed) {
  if (draws.empty()) throw NumericError("profile_posterior: no draws");
  std::vector<ProfileHistogram> out;
  out.reserve(draws.size());
  for (std::size_t m = 0; m < draws.size(); ++m) {
    const auto dist = draw_to_distribution(draws[m], dim_x, dim_y);
    const auto batch = sample_profile(*dist, derive(seed, "draw", m), mc_samples_per_draw);
    out.push_back(histogram(batch, bin_edges));
  }
  return out;
}

PairedSample posterior_predictive(const PosteriorDraw& draw, int dim_x, int dim_y, Eigen::Index n,
                                  Seed seed) {
  return draw_to_distribution(draw, dim_x, dim_y)->sample(seed, n);
}

double predictive_ks(const PairedSample& predictive, const PairedSample& held_out) {
  if (predictive.xs.cols() != held_out.xs.cols() || predictive.ys.cols() != held_out.ys.cols())
    throw DimensionError("predictive_ks: dimension mismatch");
  double worst = 0.0;
  for (Eigen::Index c = 0; c < predictive.xs.cols(); ++c)
    worst = std::max(worst, ks_distance(predictive.xs.col(c), held_out.xs.col(c)));
  for (Eigen::Index c = 0; c < predictive.ys.cols(); ++c)
    worst = std::max(worst, ks_distance(predictive.ys.col(c), held_out.ys.col(c)));
  return worst;
}

}  // namespace pmiprof
