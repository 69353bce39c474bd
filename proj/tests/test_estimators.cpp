#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmiprof/analytic.hpp"
#include "pmiprof/estimators.hpp"
#include "pmiprof/mix.hpp"
#include "pmiprof/profile.hpp"

using namespace pmiprof;

namespace {

DistPtr x_distribution() {
  Matrix sp(2, 2), sm(2, 2);
  sp << 0.3, 0.27, 0.27, 0.3;
  sm << 0.3, -0.27, -0.27, 0.3;
  return mixture({0.5, 0.5}, {std::make_shared<MultivariateNormal>(Vector::Zero(2), sp, 1, 1),
                              std::make_shared<MultivariateNormal>(Vector::Zero(2), sm, 1, 1)});
}

struct ZeroCritic final : Critic {
  double value(const CVecRef&, const CVecRef&) const override { return 0.0; }
};

struct ConstCritic final : Critic {
  explicit ConstCritic(double c) : c_(c) {}
  double value(const CVecRef&, const CVecRef&) const override { return c_; }
  double c_;
};

constexpr double kMi08 = 0.5108256237659907;  // -log(1 - 0.64) / 2

}  // namespace

TEST_CASE("preprocess standardizes columns (sample std) and flags constants") {
  PairedSample s;
  s.xs.resize(2, 1);
  s.xs << 0.0, 2.0;
  s.ys.resize(2, 1);
  s.ys << 5.0, 5.0;
  const auto r = preprocess(s);
  // mean 1, sample std sqrt(2): [0, 2] -> [-1/sqrt(2), 1/sqrt(2)]
  CHECK(r.sample.xs(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.sample.xs(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // constant column: centered but left unscaled, and reported
  CHECK(r.sample.ys(0, 0) == 0.0);
  REQUIRE(r.constant_y_cols.size() == 1);
  CHECK(r.constant_y_cols[0] == 0);

  // already standardized input is a fixed point
  const auto g = paired_gaussian({0.5}, 1, 1);
  const auto raw = g->sample(Seed(1), 500);
  const auto once = preprocess(raw);
  const auto twice = preprocess(once.sample);
  CHECK((twice.sample.xs - once.sample.xs).cwiseAbs().maxCoeff() < 1e-12);

  PairedSample tiny;
  tiny.xs.resize(1, 1);
  tiny.ys.resize(1, 1);
  CHECK_THROWS_AS(preprocess(tiny), NumericError);
}

TEST_CASE("ksg on gaussians and the X distribution") {
  const auto indep = paired_gaussian({0.0}, 1, 1);
  const auto s0 = preprocess(indep->sample(Seed(2), 5000)).sample;
  CHECK(std::abs(ksg(s0, 10)) <= 0.05);

  const auto dep = paired_gaussian({0.8}, 1, 1);
  const auto s1 = preprocess(dep->sample(Seed(3), 5000)).sample;
  CHECK(ksg(s1, 10) == doctest::Approx(kMi08).epsilon(0.1 / kMi08));

  const auto sx = preprocess(x_distribution()->sample(Seed(4), 5000)).sample;
  CHECK(ksg(sx, 10) == doctest::Approx(0.41).epsilon(0.1 / 0.41));

  PairedSample few;
  few.xs = Matrix::Random(5, 1);
  few.ys = Matrix::Random(5, 1);
  CHECK_THROWS_AS(ksg(few, 10), NumericError);
}

TEST_CASE("histogram_mi saturation, independence and gaussian bias behavior") {
  // perfectly dependent pairs saturate the 10-bin entropy
  const Eigen::Index n = 100000;
  Rng rng(5);
  PairedSample dep;
  dep.xs.resize(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) dep.xs(i, 0) = rng.uniform();
  dep.ys = dep.xs;
  CHECK(histogram_mi(dep, 10) == doctest::Approx(std::log(10.0)).epsilon(0.05 / std::log(10.0)));

  PairedSample ind;
  ind.xs.resize(n, 1);
  ind.ys.resize(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    ind.xs(i, 0) = rng.uniform();
    ind.ys(i, 0) = rng.uniform();
  }
  const double hi = histogram_mi(ind, 10);
  CHECK(hi >= 0.0);  // plug-in bias is positive
  CHECK(hi <= 0.02);

  const auto g = paired_gaussian({0.8}, 1, 1);
  const auto s = g->sample(Seed(6), 5000);
  CHECK(std::abs(histogram_mi(s, 10) - kMi08) <= 0.15);
}

TEST_CASE("cca_mi recovers gaussian MI and fails on the X distribution") {
  const auto g = paired_gaussian({0.8}, 1, 1);
  CHECK(std::abs(cca_mi(g->sample(Seed(7), 5000)) - kMi08) <= 0.05);

  // marginally normal but jointly not: linear correlation carries nothing
  CHECK(cca_mi(x_distribution()->sample(Seed(8), 5000)) <= 0.05);

  // shuffling ys destroys the dependence
  auto s = g->sample(Seed(9), 5000);
  std::vector<int> idx(5000);
  for (int i = 0; i < 5000; ++i) idx[std::size_t(i)] = i;
  Rng rng(10);
  rng.shuffle(idx);
  Matrix shuffled = s.ys;
  for (int i = 0; i < 5000; ++i) shuffled.row(i) = s.ys.row(idx[std::size_t(i)]);
  s.ys = shuffled;
  CHECK(cca_mi(s) <= 0.01 + 0.01);
}

TEST_CASE("gaussian critic agrees with the generic exact-PMI critic") {
  const auto dist = paired_gaussian({0.8, 0.5}, 2, 2);
  const ExactPmiCritic generic(dist);
  const GaussianPmiCritic fast({0.8, 0.5});
  const auto s = dist->sample(Seed(11), 200);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    CHECK(generic.value(s.xs.row(i), s.ys.row(i)) ==
          doctest::Approx(fast.value(s.xs.row(i), s.ys.row(i))).epsilon(1e-9));

  // cross_block against scalar evaluation
  Matrix block(s.size(), s.size());
  fast.cross_block(s.xs, s.ys, block);
  for (Eigen::Index i = 0; i < 20; ++i)
    for (Eigen::Index j = 0; j < 20; ++j)
      CHECK(block(i, j) == doctest::Approx(fast.value(s.xs.row(i), s.ys.row(j))).epsilon(1e-9));
}

TEST_CASE("dv bound: zero critic, tightness at PMI, exact shift invariance") {
  const auto dist = paired_gaussian({0.8}, 1, 1);
  const auto s = dist->sample(Seed(12), 100000);

  CHECK(dv_bound(s, ZeroCritic{}, Seed(1)) == 0.0);

  const GaussianPmiCritic exact({0.8});
  const double at_pmi = dv_bound(s, exact, Seed(1));
  CHECK(std::abs(at_pmi - kMi08) <= 0.02);

  const GaussianPmiCritic shifted({0.8}, 7.0);
  CHECK(std::abs(dv_bound(s, shifted, Seed(1)) - at_pmi) < 1e-9);
}

TEST_CASE("nwj bound: constants, tightness, closed-form shift response") {
  const auto dist = paired_gaussian({0.8}, 1, 1);
  const auto s = dist->sample(Seed(13), 100000);

  CHECK(nwj_bound(s, ConstCritic{1.0}, Seed(1)) == doctest::Approx(0.0).epsilon(1e-12));

  const GaussianPmiCritic plus_one({0.8}, 1.0);
  CHECK(std::abs(nwj_bound(s, plus_one, Seed(1)) - kMi08) <= 0.02);

  const double c = 0.5;
  const GaussianPmiCritic plus_one_c({0.8}, 1.0 + c);
  const double expected = kMi08 + c - (std::exp(c) - 1.0);
  CHECK(std::abs(nwj_bound(s, plus_one_c, Seed(1)) - expected) <= 0.02);
}

TEST_CASE("infonce: functional degree of freedom cancels exactly") {
  const auto dist = paired_gaussian({0.8}, 1, 1);
  const auto s = dist->sample(Seed(14), 10000);

  // critic depending on x only evaluates to zero
  struct XOnly final : Critic {
    double value(const CVecRef& x, const CVecRef&) const override {
      return std::sin(x[0] * x[0]);
    }
  };
  CHECK(std::abs(infonce_bound(s, XOnly{})) < 1e-9);

  const GaussianPmiCritic exact({0.8});
  const double at_pmi = infonce_bound(s, exact);
  CHECK(std::abs(at_pmi - kMi08) <= 0.03);

  // the paper's own perturbation: adding sin(x^2) changes nothing
  const GaussianPmiCritic perturbed({0.8}, 0.0,
                                    [](const CVecRef& x) { return std::sin(x[0] * x[0]); });
  CHECK(std::abs(infonce_bound(s, perturbed) - at_pmi) < 1e-9);
}

TEST_CASE("mc oracle is the sample mean of the critic") {
  const auto dist = paired_gaussian({0.8}, 1, 1);
  const auto s = dist->sample(Seed(15), 100000);
  CHECK(mc_oracle(s, ZeroCritic{}) == 0.0);

  const GaussianPmiCritic exact({0.8});
  const double base = mc_oracle(s, exact);
  const auto batch = sample_profile(*dist, Seed(16), 100000);
  const auto est = mi_mc(batch);
  CHECK(std::abs(base - kMi08) <= 3.0 * est.stderr_);

  const GaussianPmiCritic shifted({0.8}, 0.25);
  CHECK(mc_oracle(s, shifted) == doctest::Approx(base + 0.25).epsilon(1e-12));
}

TEST_CASE("saturation study: InfoNCE ceiling and MC accuracy at 25 pairs") {
  const auto rows = saturation_study(25, 0.8, {64, 256}, Seed(17), 20000);
  REQUIRE(rows.size() == 2);
  const double truth = gaussian_mi(std::vector<double>(25, 0.8));
  for (const auto& r : rows) {
    CHECK(r.infonce <= std::log(double(r.batch_size)) + 0.01);
    CHECK(std::abs(r.mc - truth) <= 0.15);  // 3 sigma at n = 20000, sd ~ 4
  }
  // the ceiling rises with batch size
  CHECK(rows[1].infonce > rows[0].infonce);
}

TEST_CASE("classical estimators are invariant to per-column monotone affine maps") {
  const auto dist = paired_gaussian({0.7, 0.4}, 2, 2);
  const auto raw = dist->sample(Seed(18), 2000);

  PairedSample mapped = raw;
  const double ax[2] = {2.5, -0.5};
  const double bx[2] = {1.0, -3.0};
  for (int c = 0; c < 2; ++c) {
    mapped.xs.col(c) = ax[c] * raw.xs.col(c).array() + bx[c];
    mapped.ys.col(c) = ax[1 - c] * raw.ys.col(c).array() + bx[1 - c];
  }
  const auto a = preprocess(raw).sample;
  const auto b = preprocess(mapped).sample;

  CHECK(ksg(a, 10) == doctest::Approx(ksg(b, 10)).epsilon(1e-9));
  CHECK(histogram_mi(a, 10) == doctest::Approx(histogram_mi(b, 10)).epsilon(1e-9));
  CHECK(cca_mi(a) == doctest::Approx(cca_mi(b)).epsilon(1e-9));
}

TEST_CASE("estimator determinism given the seed") {
  const auto dist = paired_gaussian({0.6}, 1, 1);
  const auto s = dist->sample(Seed(19), 5000);
  const ExactPmiCritic critic(dist);
  CHECK(dv_bound(s, critic, Seed(42)) == dv_bound(s, critic, Seed(42)));
  CHECK(nwj_bound(s, critic, Seed(42)) == nwj_bound(s, critic, Seed(42)));
  CHECK(dv_bound(s, critic, Seed(42)) != dv_bound(s, critic, Seed(43)));
}
