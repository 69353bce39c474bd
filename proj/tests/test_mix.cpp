#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmiprof/mix.hpp"
#include "pmiprof/profile.hpp"

using namespace pmiprof;

namespace {

Vector v1(double a) {
  Vector v(1);
  v << a;
  return v;
}

DistPtr x_distribution() {
  Matrix sp(2, 2), sm(2, 2);
  sp << 0.3, 0.27, 0.27, 0.3;
  sm << 0.3, -0.27, -0.27, 0.3;
  return mixture({0.5, 0.5}, {std::make_shared<MultivariateNormal>(Vector::Zero(2), sp, 1, 1),
                              std::make_shared<MultivariateNormal>(Vector::Zero(2), sm, 1, 1)});
}

}  // namespace

TEST_CASE("single-component and duplicate-component mixtures collapse") {
  const auto comp = paired_gaussian({0.6}, 1, 1);
  const auto single = mixture({1.0}, {comp});
  const auto dup = mixture({0.3, 0.7}, {comp, comp});
  Rng rng(1);
  for (int i = 0; i < 30; ++i) {
    const Vector x = v1(rng.normal()), y = v1(rng.normal());
    CHECK(single->log_pdf_joint(x, y) == doctest::Approx(comp->log_pdf_joint(x, y)).epsilon(1e-12));
    CHECK(dup->log_pdf_joint(x, y) == doctest::Approx(comp->log_pdf_joint(x, y)).epsilon(1e-12));
    CHECK(dup->log_pdf_x(x) == doctest::Approx(comp->log_pdf_x(x)).epsilon(1e-12));
  }
}

TEST_CASE("X distribution marginal matches the component gaussian marginal") {
  const auto x = x_distribution();
  // every component has the same N(0, 0.3) marginal (0.3 is the covariance
  // scale; jointly rescaling X and Y cannot change the MI, so both readings
  // of the constant produce the published value)
  GaussianMarginal ref(Vector::Zero(1), Matrix::Constant(1, 1, 0.3));
  for (double t : {-2.0, -0.7, 0.0, 0.4, 1.3}) {
    CHECK(x->log_pdf_x(v1(t)) == doctest::Approx(ref.log_pdf(v1(t))).epsilon(1e-9));
    CHECK(x->log_pdf_y(v1(t)) == doctest::Approx(ref.log_pdf(v1(t))).epsilon(1e-9));
  }
}

TEST_CASE("mixture construction errors") {
  const auto c = paired_gaussian({0.5}, 1, 1);
  CHECK_THROWS_AS(mixture({}, {}), NumericError);
  CHECK_THROWS_AS(mixture({0.5, 0.4}, {c, c}), NumericError);          // sum != 1
  CHECK_THROWS_AS(mixture({-0.5, 1.5}, {c, c}), NumericError);         // negative
  CHECK_THROWS_AS(mixture({0.5, 0.5}, {c, paired_gaussian({0.5}, 2, 2)}), DimensionError);
}

TEST_CASE("nested mixtures are flattened with multiplied weights") {
  const auto a = paired_gaussian({0.2}, 1, 1);
  const auto b = paired_gaussian({0.7}, 1, 1);
  const auto inner = mixture({0.5, 0.5}, {a, b});
  const auto outer = mixture({0.4, 0.6}, {inner, a});
  const auto* m = dynamic_cast<const MixtureDistribution*>(outer.get());
  REQUIRE(m != nullptr);
  CHECK(m->components().size() == 3);
  CHECK(m->weights()[0] == doctest::Approx(0.2));
  CHECK(m->weights()[1] == doctest::Approx(0.2));
  CHECK(m->weights()[2] == doctest::Approx(0.6));
}

TEST_CASE("product distribution has identically zero PMI") {
  auto gx = std::make_shared<GaussianMarginal>(v1(1.0), Matrix::Constant(1, 1, 2.0));
  auto gy = std::make_shared<GaussianMarginal>(v1(-2.0), Matrix::Constant(1, 1, 0.5));
  ProductDistribution prod(gx, gy);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Vector x = v1(rng.normal(1, 2)), y = v1(rng.normal(-2, 1));
    CHECK(std::abs(pmi(prod, x, y)) < 1e-12);
  }
}

TEST_CASE("contaminate endpoints and channel bound") {
  const auto base = paired_gaussian({0.8, 0.8}, 2, 2);
  auto noise = std::make_shared<GaussianMarginal>(Vector::Zero(2),
                                                  Matrix(25.0 * Matrix::Identity(2, 2)));

  CHECK(contaminate(base, 0.0, noise).get() == base.get());

  const auto pure_noise = contaminate(base, 1.0, noise);
  const auto b1 = sample_profile(*pure_noise, Seed(5), 20000);
  CHECK(b1.values.cwiseAbs().maxCoeff() < 1e-12);

  // Monte Carlo estimate respects I(X;Y') <= (1-alpha) I(X;Y)
  const double base_mi = -std::log(1.0 - 0.64);
  const auto chan = contaminate(base, 0.2, noise);
  const auto est = mi_mc(sample_profile(*chan, Seed(7), 100000));
  CHECK(est.value <= 0.8 * base_mi + 3.0 * est.stderr_);

  CHECK_THROWS_AS(contaminate(base, 1.5, noise), NumericError);
  auto bad_noise = std::make_shared<GaussianMarginal>(Vector::Zero(1), Matrix::Identity(1, 1));
  CHECK_THROWS_AS(contaminate(base, 0.2, bad_noise), DimensionError);
}

TEST_CASE("disjoint uniform pair: creating and destroying information") {
  const auto diag = disjoint_uniform_pair("diagonal");
  const auto est = mi_mc(sample_profile(*diag, Seed(11), 100000));
  // PMI is constant log 2 on the support, so the estimate is exact up to
  // floating point and the stderr is roundoff noise
  CHECK(std::abs(est.value - std::log(2.0)) <= 3.0 * est.stderr_ + 1e-12);

  // each component alone is a product: MI 0
  const auto* m = dynamic_cast<const MixtureDistribution*>(diag.get());
  REQUIRE(m != nullptr);
  for (const auto& comp : m->components()) {
    const auto b = sample_profile(*comp, Seed(13), 5000);
    CHECK(b.values.cwiseAbs().maxCoeff() < 1e-12);
  }

  // fifty-fifty blend of diagonal and antidiagonal has zero MI
  const auto blend = mixture({0.5, 0.5}, {diag, disjoint_uniform_pair("antidiagonal")});
  const auto est0 = mi_mc(sample_profile(*blend, Seed(17), 100000));
  CHECK(std::abs(est0.value) <= 3.0 * std::max(est0.stderr_, 1e-15));

  CHECK_THROWS_AS(disjoint_uniform_pair("sideways"), SpecError);
}

TEST_CASE("mixture MI bounds hold with MC-estimated component MIs") {
  const auto a = paired_gaussian({0.8}, 1, 1);
  const auto b = paired_gaussian({0.3}, 1, 1);
  Vector mu(2);
  mu << 2.0, -1.0;
  const auto c = std::make_shared<MultivariateNormal>(mu, Matrix::Identity(2, 2), 1, 1);
  const std::vector<double> w{0.5, 0.3, 0.2};
  const auto mix = mixture(w, {a, b, c});

  const auto est = mi_mc(sample_profile(*mix, Seed(19), 100000));
  double weighted = 0.0, mcse = est.stderr_;
  const std::vector<DistPtr> comps{a, b, c};
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto ck = mi_mc(sample_profile(*comps[k], Seed(23 + k), 50000));
    weighted += w[k] * ck.value;
    mcse += w[k] * ck.stderr_;
  }
  CHECK(est.value >= -3.0 * est.stderr_);
  CHECK(est.value <= weighted + std::log(3.0) + 3.0 * mcse);
}

TEST_CASE("log-sum-exp keeps far-field mixture densities finite") {
  Vector mu = Vector::Zero(2);
  Vector far = Vector::Constant(2, 40.0);
  const auto near_comp = std::make_shared<MultivariateNormal>(mu, Matrix::Identity(2, 2), 1, 1);
  const auto far_comp = std::make_shared<MultivariateNormal>(far, Matrix::Identity(2, 2), 1, 1);
  const auto m = mixture({0.5, 0.5}, {near_comp, far_comp});
  // 40 sigma from the near component: its density underflows but the mixture stays finite
  const double lp = m->log_pdf_joint(v1(40.0), v1(40.0));
  CHECK(std::isfinite(lp));
  CHECK(lp == doctest::Approx(std::log(0.5) + far_comp->log_pdf_joint(v1(40.0), v1(40.0))).epsilon(1e-9));
}

TEST_CASE("mixture marginal extraction composes") {
  const auto x = x_distribution();
  auto marg = x->marginal_x();
  REQUIRE(marg != nullptr);
  for (double t : {-1.0, 0.0, 0.8}) {
    CHECK(marg->log_pdf(v1(t)) == doctest::Approx(x->log_pdf_x(v1(t))).epsilon(1e-12));
  }
}
