#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pmiprof/profile.hpp"

namespace pmiprof {

struct BenchmarkTask {
  std::string name;
  DistPtr dist;
  int dim_x = 0;
  int dim_y = 0;
  // populated when a closed form exists (pure Gaussians, additive noise, ...)
  std::optional<double> exact_mi;
  bool supports_density = true;
  // heavy-tailed profile moments (dof-1 Student); ground truth switches to
  // median-of-means over 20 blocks
  bool mi_first_moment_caveat = false;
  std::string notes;
};

// The 26-task suite plus the two documented mixed-type extras
// ("Gao-staircase", "Labeled-cluster").
std::vector<BenchmarkTask> register_builtin_tasks();

const BenchmarkTask& find_task(const std::vector<BenchmarkTask>& tasks, const std::string& name);

// Exact when a closed form exists (stderr 0), otherwise Monte Carlo through
// the profile with n samples.
MiEstimate ground_truth(const BenchmarkTask& task, Eigen::Index n = 200000, Seed seed = 42);

struct RunResult {
  std::string task;
  std::string estimator;
  int seed_index = 0;
  double estimate = 0.0;  // NaN when the estimator failed on this cell
  double wall_time_s = 0.0;
};

struct RunSummary {
  std::string task;
  std::string estimator;
  double mean = 0.0;
  double std_rounded_up = 0.0;  // over seeds, rounded up at two decimals
  MiEstimate ground_truth;
};

struct RunOutput {
  std::vector<RunResult> cells;
  std::vector<RunSummary> summary;
};

// Estimators by name: "ksg" (k=10), "hist" (10 bins), "cca" run on
// standardized data; "mc", "dv", "nwj", "infonce" use the task's exact-PMI
// critic on raw data. Every cell derives its own stream from
// (root, task name, seed index); failed cells record NaN and the run
// continues. jobs <= 0 uses all cores.
RunOutput run_benchmark(const std::vector<BenchmarkTask>& tasks,
                        const std::vector<std::string>& estimators, Eigen::Index n, int seeds,
                        Seed root, int jobs = 0, Eigen::Index ground_truth_n = 200000);

struct NoiseSweepRow {
  double alpha = 0.0;
  double sigma2 = 1.0;
  double mi = 0.0;     // Monte Carlo I(X; Y')
  double mcse = 0.0;
  double bound = 0.0;  // (1 - alpha) I(X; Y)
  std::map<std::string, double> estimates;
};

// Failing-channel study on the two-pair rho=0.8 Gaussian with N(0, sigma^2 I)
// noise. kind: "alpha-inlier" (sigma^2 = 1), "alpha-outlier" (sigma^2 = 25),
// or "sigma" (alpha = 0.2, grid over sigma^2). Empty grid uses the defaults
// {0, 0.1, ..., 0.5} and {2^-7 .. 2^8}.
std::vector<NoiseSweepRow> noise_sweep(const std::string& kind, std::vector<double> grid,
                                       const std::vector<std::string>& estimators, Seed seed,
                                       Eigen::Index n_mc = 100000, Eigen::Index n_est = 5000);

}  // namespace pmiprof
