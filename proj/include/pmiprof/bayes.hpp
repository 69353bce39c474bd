#pragma once

#include <vector>

#include "pmiprof/mix.hpp"
#include "pmiprof/profile.hpp"

namespace pmiprof {

// Sparse Gaussian mixture prior. The Dirichlet concentration defaults to 1/K
// per component, which truncates the number of occupied clusters. The
// covariance prior is conjugate Normal-Inverse-Wishart: kappa0 = 1/9 puts the
// mean prior at roughly N(0, 3^2 I) when Sigma is near identity, nu0 = D + 2
// and Psi0 = I give prior mean Sigma = I.
struct GmmPrior {
  int K = 10;
  double dirichlet_concentration = 0.1;  // per component
  double mean_prior_scale = 3.0;
  double niw_kappa = 1.0 / 9.0;
  double niw_nu = 0.0;  // <= 0 means D + 2 chosen at fit time
  Matrix niw_psi;       // empty means identity

  static GmmPrior defaults(int K = 10) {
    GmmPrior p;
    p.K = K;
    p.dirichlet_concentration = 1.0 / double(K);
    return p;
  }
};

struct PosteriorDraw {
  std::vector<double> weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;
};

struct ChainConfig {
  int warmup = 1000;
  int draws = 1000;
  Seed seed = 42;
};

// Blocked Gibbs chain over (z, pi, {mu_k, Sigma_k}); clusters with few or no
// members fall back to their exact prior conditional. Returns `draws`
// posterior samples after `warmup` discarded sweeps, no thinning.
std::vector<PosteriorDraw> fit_posterior(const PairedSample& data, const GmmPrior& prior,
                                         const ChainConfig& config);

// The mixture distribution a draw parameterizes, with the given X/Y split.
DistPtr draw_to_distribution(const PosteriorDraw& draw, int dim_x, int dim_y);

struct MiPosterior {
  std::vector<double> draws;
  double mean = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
};

// Monte Carlo MI of every posterior draw (mc_samples_per_draw profile samples
// each) and the summary used for credible intervals.
MiPosterior mi_posterior(const std::vector<PosteriorDraw>& draws, int dim_x, int dim_y,
                         Eigen::Index mc_samples_per_draw, Seed seed);

// One profile histogram per draw over shared bin edges.
std::vector<ProfileHistogram> profile_posterior(const std::vector<PosteriorDraw>& draws, int dim_x,
                                                int dim_y, Eigen::Index mc_samples_per_draw,
                                                const Vector& bin_edges, Seed seed);

// n predictive samples from a single draw.
PairedSample posterior_predictive(const PosteriorDraw& draw, int dim_x, int dim_y, Eigen::Index n,
                                  Seed seed);

// Largest per-coordinate two-sample KS distance between a predictive sample
// and held-out data; the misspecification diagnostic.
double predictive_ks(const PairedSample& predictive, const PairedSample& held_out);

}  // namespace pmiprof
