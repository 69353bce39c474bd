#include "pmiprof/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "pmiprof/analytic.hpp"
#include "pmiprof/bend.hpp"
#include "pmiprof/estimators.hpp"
#include "pmiprof/mathutil.hpp"
#include "pmiprof/mix.hpp"

namespace pmiprof {

namespace {

DistPtr x_distribution() {
  Matrix sp(2, 2), sm(2, 2);
  sp << 0.3, 0.27, 0.27, 0.3;
  sm << 0.3, -0.27, -0.27, 0.3;
  return mixture({0.5, 0.5}, {std::make_shared<MultivariateNormal>(Vector::Zero(2), sp, 1, 1),
                              std::make_shared<MultivariateNormal>(Vector::Zero(2), sm, 1, 1)});
}

DistPtr ai_distribution() {
  auto comp = [](double mx, double my, double sxx, double sxy, double syy) -> DistPtr {
    Vector mu(2);
    mu << mx, my;
    Matrix cov(2, 2);
    cov << sxx, sxy, sxy, syy;
    return std::make_shared<MultivariateNormal>(mu, cov, 1, 1);
  };
  return mixture(std::vector<double>(6, 1.0 / 6.0),
                 {comp(1.0, 0.0, 0.01, 0.0, 0.2), comp(1.0, 1.0, 0.05, 0.0, 0.001),
                  comp(1.0, -1.0, 0.05, 0.0, 0.001), comp(-0.8, -0.2, 0.03, 0.0, 0.001),
                  comp(-1.2, 0.0, 0.04, 0.085, 0.2), comp(-0.4, 0.0, 0.04, -0.085, 0.2)});
}

// 12 components at mean spacing 1.5, labels cycling modulo 4, then the sine
// shear and the range-normalizing affine maps on each block.
DistPtr waves_distribution() {
  std::vector<DistPtr> comps;
  Matrix c(3, 3);
  c.setZero();
  c.diagonal() << 0.1, 1.0, 0.1;
  for (int i = 0; i < 12; ++i) {
    Vector mu(3);
    mu << 1.5 * double(i), 0.0, 1.5 * double(i % 4);
    comps.push_back(std::make_shared<MultivariateNormal>(mu, c, 2, 1));
  }
  auto base = mixture(std::vector<double>(12, 1.0 / 12.0), std::move(comps));
  auto f = compose({waves_injection(), affine_map(0.1, -0.8, 2)});
  auto g = affine_map(0.5, 0.0, 1);
  return bend(std::move(base), std::move(f), std::move(g));
}

DistPtr galaxy_distribution() {
  Matrix c = Matrix::Identity(3, 3);
  Vector mu = Vector::Constant(3, 1.5);
  auto base = mixture({0.5, 0.5}, {std::make_shared<MultivariateNormal>(mu, c, 2, 1),
                                   std::make_shared<MultivariateNormal>(Vector(-mu), c, 2, 1)});
  return bend(std::move(base), spiral_map(0.5, 2), nullptr);
}

DistPtr concentric_distribution(int m, int K) {
  std::vector<DistPtr> comps;
  for (int k = 1; k <= K; ++k) {
    Vector mu = Vector::Zero(m + 1);
    mu[m] = double(k);
    Matrix c = Matrix::Identity(m + 1, m + 1) * double(k) * double(k);
    c(m, m) = 1e-4;
    comps.push_back(std::make_shared<MultivariateNormal>(mu, c, m, 1));
  }
  return mixture(std::vector<double>(std::size_t(K), 1.0 / double(K)), std::move(comps));
}

DistPtr sparse_normal(int m) {
  return paired_gaussian({0.8, 0.8}, m, m);
}

// lambda pinned so the 5-dimensional dense task carries about 1 nat
constexpr double kDenseLambda = 0.8523;

DistPtr student_task(int m, double dof) {
  auto base = std::make_shared<MultivariateStudent>(Vector::Zero(2 * m),
                                                    Matrix::Identity(2 * m, 2 * m), dof, m, m);
  return bend(base, asinh_map(m), asinh_map(m));
}

DistPtr spiral_task(int m) {
  return bend(sparse_normal(m), spiral_map(0.5, m), nullptr);
}

DistPtr inlier_task(int m, double alpha) {
  auto base = sparse_normal(m);
  return contaminate(base, alpha, base->marginal_y());
}

DistPtr labeled_cluster_distribution() {
  using Component = DiscreteContinuousMixture::Component;
  Vector mu1 = Vector::Constant(2, 1.0), mu2 = Vector::Constant(2, -1.0);
  Matrix disp = 0.2 * Matrix::Identity(2, 2);
  Matrix c3(2, 2);
  c3 << 0.1, 0.095, 0.095, 0.1;
  std::vector<Component> comps;
  comps.push_back({std::make_shared<StudentMarginal>(mu1, disp, 8.0), {0.05, 0.95}});
  comps.push_back({std::make_shared<StudentMarginal>(mu2, disp, 8.0), {0.95, 0.05}});
  comps.push_back({std::make_shared<GaussianMarginal>(Vector::Zero(2), c3), {0.5, 0.5}});
  return std::make_shared<DiscreteContinuousMixture>(std::vector<double>{0.25, 0.25, 0.5},
                                                     std::move(comps));
}

BenchmarkTask make_task(std::string name, DistPtr dist, std::optional<double> exact = {},
                        std::string notes = {}) {
  BenchmarkTask t;
  t.name = std::move(name);
  t.dim_x = dist->dim_x();
  t.dim_y = dist->dim_y();
  t.supports_density = dist->has_density();
  t.exact_mi = exact;
  t.notes = std::move(notes);
  t.dist = std::move(dist);
  return t;
}

}  // namespace

std::vector<BenchmarkTask> register_builtin_tasks() {
  std::vector<BenchmarkTask> tasks;

  // one-dimensional variables
  tasks.push_back(make_task("Additive-noise", std::make_shared<UniformAdditiveNoise>(0.75),
                            uniform_additive_mi(0.75), "external-definition"));
  {
    auto t = make_task("Student-1x1-dof1", student_task(1, 1.0));
    t.mi_first_moment_caveat = true;
    tasks.push_back(std::move(t));
  }
  tasks.push_back(make_task("X", x_distribution()));
  tasks.push_back(make_task("AI", ai_distribution()));

  // embeddings
  {
    auto sr = std::make_shared<SwissRollEmbedding>(0.8);
    const double exact = sr->exact_mi();
    tasks.push_back(make_task("Swiss-roll", sr, exact, "external-definition; sample-only"));
  }

  // many-versus-one
  tasks.push_back(make_task("Waves", waves_distribution()));
  tasks.push_back(make_task("Galaxy", galaxy_distribution()));
  for (const auto& [m, K] : std::vector<std::pair<int, int>>{{3, 5}, {3, 10}, {5, 5}, {5, 10}, {25, 5}})
    tasks.push_back(make_task("Concentric-" + std::to_string(m) + "-" + std::to_string(K),
                              concentric_distribution(m, K)));

  // multivariate normal
  for (int m : {5, 25, 50}) {
    auto dense = dense_factor_gaussian(m, kDenseLambda);
    const double exact = gaussian_mi(canonical_correlations(dense->covariance(), m, m).rhos);
    tasks.push_back(make_task("Normal-dense-" + std::to_string(m), dense, exact));
  }
  for (int m : {5, 25}) {
    tasks.push_back(make_task("Normal-sparse-" + std::to_string(m), sparse_normal(m),
                              gaussian_mi(std::vector<double>{0.8, 0.8})));
  }

  // asinh-transformed Student
  {
    auto t = make_task("Student-2x2-dof1", student_task(2, 1.0));
    t.mi_first_moment_caveat = true;
    tasks.push_back(std::move(t));
  }
  tasks.push_back(make_task("Student-3x3-dof2", student_task(3, 2.0)));
  tasks.push_back(make_task("Student-5x5-dof2", student_task(5, 2.0)));

  // spiral
  tasks.push_back(make_task("Spiral-3", spiral_task(3)));
  tasks.push_back(make_task("Spiral-5", spiral_task(5)));

  // inliers
  for (int m : {5, 25})
    for (double a : {0.2, 0.5}) {
      std::string label = a == 0.2 ? "0.2" : "0.5";
      tasks.push_back(make_task("Inlier-" + std::to_string(m) + "-" + label, inlier_task(m, a)));
    }

  // mixed-type extras
  tasks.push_back(
      make_task("Gao-staircase", std::make_shared<GaoStaircase>(5, 1), gao_mi(5), "extra"));
  tasks.push_back(make_task("Labeled-cluster", labeled_cluster_distribution(), {}, "extra"));

  return tasks;
}

const BenchmarkTask& find_task(const std::vector<BenchmarkTask>& tasks, const std::string& name) {
  for (const auto& t : tasks)
    if (t.name == name) return t;
  throw SpecError("unknown benchmark task: " + name);
}

MiEstimate ground_truth(const BenchmarkTask& task, Eigen::Index n, Seed seed) {
  if (task.exact_mi) return {*task.exact_mi, 0.0, 0};
  const Seed s = derive(seed, "ground-truth:" + task.name, 0);
  const auto batch = sample_profile(*task.dist, s, n);
  return task.mi_first_moment_caveat ? mi_mc_median_of_means(batch, 20) : mi_mc(batch);
}

namespace {

double run_estimator(const std::string& name, const BenchmarkTask& task,
                     const PairedSample& raw, Seed cell_seed) {
  if (name == "ksg" || name == "hist" || name == "cca") {
    const PairedSample std_sample = preprocess(raw).sample;
    if (name == "ksg") return ksg(std_sample, 10);
    if (name == "hist") return histogram_mi(std_sample, 10);
    return cca_mi(std_sample);
  }
  const ExactPmiCritic critic(task.dist);
  if (name == "mc") return mc_oracle(raw, critic);
  if (name == "dv") return dv_bound(raw, critic, derive(cell_seed, "perm", 0));
  if (name == "nwj") return nwj_bound(raw, critic, derive(cell_seed, "perm", 0));
  if (name == "infonce") return infonce_bound(raw, critic);
  throw SpecError("unknown estimator: " + name);
}

}  // namespace

RunOutput run_benchmark(const std::vector<BenchmarkTask>& tasks,
                        const std::vector<std::string>& estimators, Eigen::Index n, int seeds,
                        Seed root, int jobs, Eigen::Index ground_truth_n) {
  struct Cell {
    const BenchmarkTask* task;
    int seed_index;
  };
  std::vector<Cell> cells;
  for (const auto& t : tasks)
    for (int s = 0; s < seeds; ++s) cells.push_back({&t, s});

  RunOutput out;
  out.cells.resize(cells.size() * estimators.size());

  const int hw = int(std::thread::hardware_concurrency());
  const int nthreads = std::max(1, std::min<int>(jobs > 0 ? jobs : (hw > 0 ? hw : 1),
                                                 int(cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      const auto& cell = cells[c];
      const Seed cell_seed = derive(root, cell.task->name, std::uint64_t(cell.seed_index));
      const PairedSample raw = cell.task->dist->sample(cell_seed, n);
      for (std::size_t e = 0; e < estimators.size(); ++e) {
        RunResult r;
        r.task = cell.task->name;
        r.estimator = estimators[e];
        r.seed_index = cell.seed_index;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          r.estimate = run_estimator(estimators[e], *cell.task, raw, cell_seed);
        } catch (const std::exception&) {
          r.estimate = std::numeric_limits<double>::quiet_NaN();
        }
        r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.cells[c * estimators.size() + e] = std::move(r);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& task : tasks) {
    const MiEstimate gt = ground_truth(task, ground_truth_n, root);
    for (const auto& est : estimators) {
      std::vector<double> vals;
      for (const auto& cell : out.cells)
        if (cell.task == task.name && cell.estimator == est && std::isfinite(cell.estimate))
          vals.push_back(cell.estimate);
      RunSummary s;
      s.task = task.name;
      s.estimator = est;
      s.ground_truth = gt;
      if (!vals.empty()) {
        Vector v = Eigen::Map<Vector>(vals.data(), Eigen::Index(vals.size()));
        const MeanVar mv = mean_var(v);
        s.mean = mv.mean;
        // round the spread upwards at two decimals so it is never understated
        s.std_rounded_up = std::ceil(std::sqrt(mv.var) * 100.0) / 100.0;
      } else {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        s.std_rounded_up = std::numeric_limits<double>::quiet_NaN();
      }
      out.summary.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<NoiseSweepRow> noise_sweep(const std::string& kind, std::vector<double> grid,
                                       const std::vector<std::string>& estimators, Seed seed,
                                       Eigen::Index n_mc, Eigen::Index n_est) {
  const auto base = paired_gaussian({0.8, 0.8}, 2, 2);
  const double base_mi = gaussian_mi(std::vector<double>{0.8, 0.8});

  if (grid.empty()) {
    if (kind == "sigma") {
      for (int e = -7; e <= 8; ++e) grid.push_back(std::pow(2.0, e));
    } else {
      for (int i = 0; i <= 5; ++i) grid.push_back(0.1 * i);
    }
  }

  std::vector<NoiseSweepRow> rows;
  std::uint64_t point = 0;
  for (double g : grid) {
    NoiseSweepRow row;
    if (kind == "alpha-inlier") {
      row.alpha = g;
      row.sigma2 = 1.0;
    } else if (kind == "alpha-outlier") {
      row.alpha = g;
      row.sigma2 = 25.0;
    } else if (kind == "sigma") {
      row.alpha = 0.2;
      row.sigma2 = g;
    } else {
      throw SpecError("noise_sweep: kind must be alpha-inlier, alpha-outlier or sigma");
    }
    auto noise = std::make_shared<GaussianMarginal>(Vector::Zero(2),
                                                    Matrix(row.sigma2 * Matrix::Identity(2, 2)));
    const auto dist = contaminate(base, row.alpha, noise);
    const Seed s = derive(seed, kind, point++);
    const auto batch = sample_profile(*dist, derive(s, "mc", 0), n_mc);
    const MiEstimate mi = mi_mc(batch);
    row.mi = mi.value;
    row.mcse = mi.stderr_;
    row.bound = (1.0 - row.alpha) * base_mi;
    if (!estimators.empty()) {
      const PairedSample raw = dist->sample(derive(s, "data", 0), n_est);
      BenchmarkTask tmp = make_task("noise-sweep", dist);
      for (const auto& est : estimators) {
        try {
          row.estimates[est] = run_estimator(est, tmp, raw, derive(s, "est", 0));
        } catch (const std::exception&) {
          row.estimates[est] = std::numeric_limits<double>::quiet_NaN();
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pmiprof
