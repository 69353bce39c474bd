#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pmiprof/analytic.hpp"
#include "pmiprof/benchmark.hpp"

using namespace pmiprof;

TEST_CASE("registry holds the 26-task suite plus the two documented extras") {
  const auto tasks = register_builtin_tasks();
  CHECK(tasks.size() == 28);
  int extras = 0;
  std::set<std::string> names;
  for (const auto& t : tasks) {
    names.insert(t.name);
    if (t.notes.find("extra") != std::string::npos) ++extras;
  }
  CHECK(names.size() == tasks.size());
  CHECK(extras == 2);
  CHECK(tasks.size() - std::size_t(extras) == 26);
  for (const char* expected :
       {"X", "AI", "Waves", "Galaxy", "Swiss-roll", "Additive-noise", "Normal-dense-50",
        "Normal-sparse-25", "Concentric-25-5", "Student-2x2-dof1", "Spiral-5", "Inlier-25-0.5",
        "Gao-staircase", "Labeled-cluster"})
    CHECK(names.count(expected) == 1);
  CHECK_THROWS_AS(find_task(tasks, "nope"), SpecError);
}

TEST_CASE("every task constructs, samples, and (when supported) evaluates densities") {
  const auto tasks = register_builtin_tasks();
  for (const auto& t : tasks) {
    INFO(t.name);
    const auto s = t.dist->sample(derive(1, t.name, 0), 1000);
    CHECK(s.xs.rows() == 1000);
    CHECK(s.xs.allFinite());
    CHECK(s.ys.allFinite());
    if (!t.supports_density) continue;
    for (Eigen::Index i = 0; i < 50; ++i) {
      const double j = t.dist->log_pdf_joint(s.xs.row(i), s.ys.row(i));
      const double x = t.dist->log_pdf_x(s.xs.row(i));
      const double y = t.dist->log_pdf_y(s.ys.row(i));
      CHECK(std::isfinite(j));
      CHECK(std::isfinite(x));
      CHECK(std::isfinite(y));
    }
  }
}

TEST_CASE("published ground truths are reproduced") {
  const auto tasks = register_builtin_tasks();
  const auto check = [&](const char* name, double expected, double tol, Eigen::Index n) {
    const auto est = ground_truth(find_task(tasks, name), n, Seed(42));
    INFO(name, " -> ", est.value);
    CHECK(std::abs(est.value - expected) <= tol);
  };
  check("X", 0.41, 0.03, 200000);
  check("AI", 0.78, 0.03, 200000);
  check("Galaxy", 0.49, 0.03, 200000);
  check("Waves", 1.31, 0.10, 200000);
}

TEST_CASE("exact forms: dense/sparse normals, additive noise, swiss roll, gao") {
  const auto tasks = register_builtin_tasks();

  const auto& sparse = find_task(tasks, "Normal-sparse-25");
  REQUIRE(sparse.exact_mi.has_value());
  CHECK(*sparse.exact_mi == doctest::Approx(2.0 * 0.5108256238).epsilon(1e-9));

  const auto& dense = find_task(tasks, "Normal-dense-5");
  REQUIRE(dense.exact_mi.has_value());
  CHECK(*dense.exact_mi == doctest::Approx(1.0).epsilon(0.02));  // lambda pinned near 1 nat

  CHECK(*find_task(tasks, "Additive-noise").exact_mi == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(*find_task(tasks, "Swiss-roll").exact_mi == doctest::Approx(0.5108256238).epsilon(1e-9));
  CHECK(*find_task(tasks, "Gao-staircase").exact_mi ==
        doctest::Approx(std::log(5.0) - 0.8 * std::log(2.0)).epsilon(1e-12));

  // internal consistency: MC ground truth of an exact task agrees
  const auto mc = mi_mc(sample_profile(*sparse.dist, Seed(3), 100000));
  CHECK(std::abs(mc.value - *sparse.exact_mi) <= 3.0 * mc.stderr_);
}

TEST_CASE("ground truth is stable across seeds") {
  const auto tasks = register_builtin_tasks();
  const auto& task = find_task(tasks, "X");
  const auto a = ground_truth(task, 200000, Seed(1));
  const auto b = ground_truth(task, 200000, Seed(2));
  CHECK(std::abs(a.value - b.value) <= 3.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_));
}

TEST_CASE("labeled cluster reproduces the published mixed-type value") {
  const auto tasks = register_builtin_tasks();
  const auto est = ground_truth(find_task(tasks, "Labeled-cluster"), 200000, Seed(42));
  CHECK(est.value == doctest::Approx(0.224).epsilon(0.01 / 0.224));
}

TEST_CASE("benchmark runner: shape, determinism, failure cells") {
  const auto all = register_builtin_tasks();
  std::vector<BenchmarkTask> tasks = {find_task(all, "X"), find_task(all, "Swiss-roll")};

  const auto out = run_benchmark(tasks, {"cca", "mc"}, 500, 3, Seed(9), 2, 20000);
  CHECK(out.cells.size() == 2 * 3 * 2);
  CHECK(out.summary.size() == 4);

  // the oracle-critic estimator cannot run on a density-free task: NaN cells
  int nan_cells = 0;
  for (const auto& c : out.cells) {
    if (c.task == "Swiss-roll" && c.estimator == "mc") {
      CHECK(std::isnan(c.estimate));
      ++nan_cells;
    }
  }
  CHECK(nan_cells == 3);

  // bit-for-bit reproducibility, independent of thread count
  const auto again = run_benchmark(tasks, {"cca", "mc"}, 500, 3, Seed(9), 1, 20000);
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    const bool both_nan = std::isnan(out.cells[i].estimate) && std::isnan(again.cells[i].estimate);
    CHECK((both_nan || out.cells[i].estimate == again.cells[i].estimate));
  }

  // spread is rounded upward at two decimals
  for (const auto& s : out.summary) {
    if (std::isnan(s.std_rounded_up)) continue;
    CHECK(s.std_rounded_up * 100.0 == doctest::Approx(std::round(s.std_rounded_up * 100.0)));
  }
}

TEST_CASE("classical estimators behave as published on X over seeds") {
  const auto all = register_builtin_tasks();
  std::vector<BenchmarkTask> tasks = {find_task(all, "X")};
  const auto out = run_benchmark(tasks, {"ksg", "cca"}, 5000, 10, Seed(42), 0, 20000);
  double ksg_mean = 0.0, cca_mean = 0.0;
  for (const auto& s : out.summary) {
    if (s.estimator == "ksg") ksg_mean = s.mean;
    if (s.estimator == "cca") cca_mean = s.mean;
  }
  CHECK(std::abs(ksg_mean - 0.41) <= 0.1);
  CHECK(cca_mean <= 0.05);
}

TEST_CASE("noise sweep: channel bound and inlier/outlier ordering") {
  const auto rows = noise_sweep("alpha-outlier", {0.0, 0.2, 0.4}, {}, Seed(12), 50000, 0);
  REQUIRE(rows.size() == 3);
  const double base = -std::log(1.0 - 0.64);
  CHECK(rows[0].mi == doctest::Approx(base).epsilon(0.02));
  for (const auto& r : rows) {
    CHECK(r.sigma2 == 25.0);
    CHECK(r.mi <= r.bound + 3.0 * r.mcse);
  }

  const auto inl = noise_sweep("alpha-inlier", {0.3}, {}, Seed(12), 50000, 0);
  const auto outl = noise_sweep("alpha-outlier", {0.3}, {}, Seed(12), 50000, 0);
  // outliers cost less information: the outlier curve hugs the bound
  CHECK(outl[0].bound - outl[0].mi < inl[0].bound - inl[0].mi);

  CHECK_THROWS_AS(noise_sweep("bogus", {}, {}, Seed(1), 1000, 0), SpecError);
}
