#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmiprof/analytic.hpp"
#include "pmiprof/mathutil.hpp"
#include "pmiprof/profile.hpp"

using namespace pmiprof;

TEST_CASE("canonical correlations of structured covariances") {
  const auto cc0 = canonical_correlations(Matrix::Identity(5, 5), 2, 3);
  CHECK(cc0.rhos.cwiseAbs().maxCoeff() < 1e-12);

  Matrix c2(2, 2);
  c2 << 1.0, 0.8, 0.8, 1.0;
  const auto cc1 = canonical_correlations(c2, 1, 1);
  CHECK(cc1.rhos.size() == 1);
  CHECK(cc1.rhos[0] == doctest::Approx(0.8).epsilon(1e-12));

  const auto big = paired_gaussian(std::vector<double>(25, 0.8), 25, 25);
  const auto cc25 = canonical_correlations(big->covariance(), 25, 25);
  CHECK(cc25.rhos.size() == 25);
  CHECK(cc25.rhos.minCoeff() == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(cc25.rhos.maxCoeff() == doctest::Approx(0.8).epsilon(1e-9));

  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(canonical_correlations(bad, 1, 1), NumericError);
}

TEST_CASE("gaussian_mi closed form") {
  CHECK(gaussian_mi(Vector::Zero(4)) == 0.0);
  CHECK(gaussian_mi(std::vector<double>{0.8}) == doctest::Approx(0.5108256238).epsilon(1e-9));
  CHECK(gaussian_mi(std::vector<double>(25, 0.8)) == doctest::Approx(12.77).epsilon(0.001));
  Vector r(1);
  r << 1.0;
  CHECK_THROWS_AS(gaussian_mi(r), NumericError);
}

TEST_CASE("generalized chi-squared sampler: degenerate, moments, equivalence") {
  Vector zero(2);
  zero << 0.0, 0.0;
  const auto flat = sample_gaussian_profile(zero, Seed(1), 1000);
  CHECK(flat.values.cwiseAbs().maxCoeff() == 0.0);

  Vector r(1);
  r << 0.8;
  const auto batch = sample_gaussian_profile(r, Seed(2), 100000);
  const auto est = mi_mc(batch);
  CHECK(std::abs(est.value - 0.5108256238) < 3.0 * est.stderr_);
  CHECK(mean_var(batch.values).var == doctest::Approx(0.64).epsilon(0.02 / 0.64));

  // Monte Carlo profile of the matching normal distribution is the same law
  const auto mvn = paired_gaussian({0.8}, 1, 1);
  const auto mc = sample_profile(*mvn, Seed(3), 100000);
  CHECK(ks_distance(batch.values, mc.values) < 0.012);
}

TEST_CASE("sampler symmetry: skewness of a large batch is near zero") {
  Vector r(3);
  r << 0.7, 0.5, 0.3;
  const auto batch = sample_gaussian_profile(r, Seed(4), 1000000);
  const auto mv = mean_var(batch.values);
  const double sd = std::sqrt(mv.var);
  const double skew = ((batch.values.array() - mv.mean) / sd).cube().mean();
  CHECK(std::abs(skew) < 0.01);
}

TEST_CASE("profile variance bounds") {
  const auto z = profile_variance_bounds(0.0, 5);
  CHECK(z.v_min == 0.0);
  CHECK(z.v_max == 0.0);

  const double mi = 0.5108256238;
  const auto b1 = profile_variance_bounds(mi, 1);
  CHECK(b1.v_min == doctest::Approx(0.64).epsilon(1e-9));
  CHECK(b1.v_max == doctest::Approx(0.64).epsilon(1e-9));

  const auto b5 = profile_variance_bounds(mi, 5);
  CHECK(b5.v_min == doctest::Approx(0.64).epsilon(1e-9));
  CHECK(b5.v_max == doctest::Approx(5.0 * (1.0 - std::exp(-2.0 * mi / 5.0))).epsilon(1e-12));
  CHECK(b5.v_max == doctest::Approx(0.925).epsilon(0.001));
}

TEST_CASE("randomized correlation vectors with fixed MI stay inside the bounds") {
  // draw random rho vectors with product(1 - rho_i^2) = exp(-2 mi)
  const double mi = 0.5;
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + int(rng.next_u64() % 8);
    // random split of the total "log mass" across coordinates
    std::vector<double> cuts(static_cast<std::size_t>(m));
    double total = 0.0;
    for (auto& c : cuts) {
      c = rng.exponential(1.0);
      total += c;
    }
    double var = 0.0;
    for (double c : cuts) {
      const double share = 2.0 * mi * c / total;
      var += -std::expm1(-share);  // rho_i^2
    }
    const auto b = profile_variance_bounds(mi, m);
    CHECK(var >= b.v_min - 1e-12);
    CHECK(var <= b.v_max + 1e-12);
  }
}

TEST_CASE("discrete profile atoms and exact means") {
  Matrix uni = Matrix::Constant(2, 2, 0.25);
  const auto p0 = discrete_profile(uni);
  CHECK(p0.atoms.size() == 1);
  CHECK(p0.atoms[0].first == doctest::Approx(0.0));
  CHECK(p0.atoms[0].second == doctest::Approx(1.0));

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = diag(1, 1) = 0.5;
  const auto p1 = discrete_profile(diag);
  CHECK(p1.atoms.size() == 1);
  CHECK(p1.atoms[0].first == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Matrix m(2, 2);
  m << 0.4, 0.1, 0.1, 0.4;
  const auto p2 = discrete_profile(m);
  REQUIRE(p2.atoms.size() == 2);
  CHECK(p2.atoms[0].first == doctest::Approx(std::log(0.4)).epsilon(1e-12));  // log(0.1/0.25)
  CHECK(p2.atoms[0].second == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(p2.atoms[1].first == doctest::Approx(std::log(1.6)).epsilon(1e-12));
  CHECK(p2.atoms[1].second == doctest::Approx(0.8).epsilon(1e-12));

  // brute-force double sum
  double mi = 0.0;
  const Vector px = m.rowwise().sum(), py = m.colwise().sum();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) mi += m(i, j) * std::log(m(i, j) / (px[i] * py[j]));
  CHECK(p2.mean() == doctest::Approx(mi).epsilon(1e-14));

  Matrix bad = Matrix::Constant(2, 2, 0.3);
  CHECK_THROWS_AS(discrete_profile(bad), NumericError);
}

TEST_CASE("discrete profile mean equals brute-force MI on random PMFs") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int nr = 2 + int(rng.next_u64() % 7);
    const int nc = 2 + int(rng.next_u64() % 7);
    Matrix pmf(nr, nc);
    double total = 0.0;
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) {
        pmf(i, j) = rng.uniform() < 0.2 ? 0.0 : rng.exponential(1.0);
        total += pmf(i, j);
      }
    if (total == 0.0) pmf(0, 0) = total = 1.0;
    pmf /= total;

    double mi = 0.0;
    const Vector px = pmf.rowwise().sum(), py = pmf.colwise().sum();
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j)
        if (pmf(i, j) > 0.0) mi += pmf(i, j) * std::log(pmf(i, j) / (px[i] * py[j]));

    CHECK(std::abs(discrete_profile(pmf).mean() - mi) < 1e-12);
  }
}
