#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pmiprof/analytic.hpp"
#include "pmiprof/bayes.hpp"
#include "pmiprof/benchmark.hpp"
#include "pmiprof/estimators.hpp"
#include "pmiprof/io.hpp"
#include "pmiprof/mathutil.hpp"
#include "pmiprof/profile.hpp"
#include "pmiprof/spec_json.hpp"

using namespace pmiprof;
using nlohmann::json;

namespace {

std::string g_command_line;

Seed default_seed() {
  if (const char* env = std::getenv("PMIPROF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw SpecError("PMIPROF_SEED is not a valid unsigned integer");
    }
  }
  return 42;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split_list(s)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw SpecError("expected a comma-separated list of numbers, got '" + s + "'");
    }
  }
  return out;
}

std::unique_ptr<Critic> make_critic(const std::string& spec, double shift) {
  struct ConstCritic final : Critic {
    explicit ConstCritic(double c) : c_(c) {}
    double value(const CVecRef&, const CVecRef&) const override { return c_; }
    double c_;
  };
  if (spec == "zero") return std::make_unique<ConstCritic>(shift);
  if (spec.rfind("const:", 0) == 0)
    return std::make_unique<ConstCritic>(std::stod(spec.substr(6)) + shift);
  if (spec.rfind("exact-pmi:", 0) == 0)
    return std::make_unique<ExactPmiCritic>(load_distribution(spec.substr(10)), shift);
  throw SpecError("critic must be zero, const:<c>, or exact-pmi:<spec.json|task:NAME>");
}

// --manifest override: [{"name": ..., "spec": <dist spec>, "exact_mi": ...}, ...]
std::vector<BenchmarkTask> load_task_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open task manifest: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SpecError(std::string("invalid JSON manifest: ") + e.what());
  }
  if (!j.is_array()) throw SpecError("task manifest must be an array");
  std::vector<BenchmarkTask> tasks;
  for (const auto& tj : j) {
    BenchmarkTask t;
    t.name = tj.at("name").get<std::string>();
    t.dist = distribution_from_json(tj.at("spec"));
    t.dim_x = t.dist->dim_x();
    t.dim_y = t.dist->dim_y();
    t.supports_density = t.dist->has_density();
    if (tj.contains("exact_mi")) t.exact_mi = tj.at("exact_mi").get<double>();
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::vector<BenchmarkTask> select_tasks(const std::string& names, const std::string& manifest) {
  const auto all = manifest.empty() ? register_builtin_tasks() : load_task_manifest(manifest);
  if (names == "all") return all;
  std::vector<BenchmarkTask> out;
  for (const auto& n : split_list(names)) out.push_back(find_task(all, n));
  return out;
}

int cmd_sample(const std::string& dist_spec, Eigen::Index n, Seed seed, const std::string& out) {
  const auto dist = load_distribution(dist_spec);
  const auto s = dist->sample(seed, n);
  write_sample_csv(out, s);
  write_manifest(g_command_line, seed, {out});
  return 0;
}

int cmd_pmi(const std::string& dist_spec, const std::string& data, const std::string& out) {
  const auto dist = load_distribution(dist_spec);
  const auto s = read_sample_csv(data);
  Vector vals(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) vals[i] = pmi(*dist, s.xs.row(i), s.ys.row(i));
  if (out.empty()) {
    for (Eigen::Index i = 0; i < vals.size(); ++i) std::cout << format_double(vals[i]) << "\n";
  } else {
    write_vector_csv(out, "pmi", vals);
    write_manifest(g_command_line, 0, {out});
  }
  return 0;
}

int cmd_profile(const std::string& dist_spec, Eigen::Index n, Seed seed, const std::string& out,
                const std::string& hist_out) {
  const auto dist = load_distribution(dist_spec);
  const auto batch = sample_profile(*dist, seed, n);
  write_vector_csv(out, "value", batch.values);

  const auto est = mi_mc(batch);
  const auto mv = mean_var(batch.values);
  json meta;
  meta["source"] = batch.source;
  meta["seed"] = seed;
  meta["n"] = n;
  meta["mean"] = est.value;
  meta["stderr"] = est.stderr_;
  meta["variance"] = mv.var;
  const std::string meta_path = out + ".meta.json";
  std::ofstream mf(meta_path);
  mf << meta.dump(2) << "\n";

  std::vector<std::string> files{out, meta_path};
  if (!hist_out.empty()) {
    const auto h = histogram(batch);
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index b = 0; b + 1 < h.bin_edges.size(); ++b)
      rows.push_back({format_double(h.bin_edges[b]), format_double(h.bin_edges[b + 1]),
                      format_double(h.bin_probs[b]), format_double(h.per_bin_stderr[b])});
    write_csv(hist_out, {"left_edge", "right_edge", "prob", "stderr"}, rows);
    files.push_back(hist_out);
  }
  write_manifest(g_command_line, seed, files);
  return 0;
}

int cmd_estimate(const std::string& method, const std::string& data, int k, int bins,
                 const std::string& critic_spec, double critic_shift, Seed seed,
                 const std::string& format) {
  const auto raw = read_sample_csv(data);
  double value = 0.0;
  if (method == "ksg" || method == "hist" || method == "cca") {
    const auto pre = preprocess(raw);
    for (int c : pre.constant_x_cols)
      std::cerr << "warning: constant x column " << c + 1 << " left unscaled\n";
    for (int c : pre.constant_y_cols)
      std::cerr << "warning: constant y column " << c + 1 << " left unscaled\n";
    if (method == "ksg") {
      value = ksg(pre.sample, k);
    } else if (method == "hist") {
      value = histogram_mi(pre.sample, bins);
    } else {
      bool clamped = false;
      value = cca_mi(pre.sample, &clamped);
      if (clamped) std::cerr << "warning: near-singular sample covariance, correlations clamped\n";
    }
  } else if (method == "mc" || method == "dv" || method == "nwj" || method == "infonce") {
    if (critic_spec.empty()) throw SpecError("--critic is required for " + method);
    const auto critic = make_critic(critic_spec, critic_shift);
    if (method == "mc") value = mc_oracle(raw, *critic);
    if (method == "dv") value = dv_bound(raw, *critic, derive(seed, "perm", 0));
    if (method == "nwj") value = nwj_bound(raw, *critic, derive(seed, "perm", 0));
    if (method == "infonce") value = infonce_bound(raw, *critic);
  } else {
    throw SpecError("unknown method: " + method);
  }
  if (format == "json") {
    json j{{"method", method}, {"estimate", value}, {"n", raw.size()}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << format_double(value) << "\n";
  }
  return 0;
}

int cmd_benchmark_run(const std::string& tasks_arg, const std::string& estimators_arg,
                      Eigen::Index n, int seeds, Seed seed, const std::string& out, int jobs,
                      bool timing, const std::string& manifest, Eigen::Index gt_n,
                      const std::string& format) {
  const auto tasks = select_tasks(tasks_arg, manifest);
  const auto estimators = split_list(estimators_arg);
  if (estimators.empty()) throw SpecError("no estimators selected");
  const auto res = run_benchmark(tasks, estimators, n, seeds, seed, jobs, gt_n);

  if (format == "json") {
    json cells = json::array(), summary = json::array();
    for (const auto& c : res.cells) {
      json row{{"task", c.task},
               {"estimator", c.estimator},
               {"seed_index", c.seed_index},
               {"estimate", c.estimate}};
      if (timing) row["wall_time_s"] = c.wall_time_s;
      cells.push_back(std::move(row));
    }
    for (const auto& s : res.summary)
      summary.push_back({{"task", s.task},
                         {"estimator", s.estimator},
                         {"mean", s.mean},
                         {"std", s.std_rounded_up},
                         {"ground_truth", s.ground_truth.value},
                         {"ground_truth_stderr", s.ground_truth.stderr_}});
    std::ofstream o(out);
    if (!o) throw SpecError("cannot write: " + out);
    o << json{{"cells", cells}, {"summary", summary}}.dump(2) << "\n";
    write_manifest(g_command_line, seed, {out});
    return 0;
  }

  std::vector<std::string> header{"task", "estimator", "seed_index", "estimate"};
  if (timing) header.push_back("wall_time_s");
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : res.cells) {
    std::vector<std::string> row{c.task, c.estimator, std::to_string(c.seed_index),
                                 format_double(c.estimate)};
    if (timing) row.push_back(format_double(c.wall_time_s));
    rows.push_back(std::move(row));
  }
  write_csv(out, header, rows);

  const std::string summary_path = out + ".summary.csv";
  std::vector<std::vector<std::string>> srows;
  for (const auto& s : res.summary)
    srows.push_back({s.task, s.estimator, format_double(s.mean), format_double(s.std_rounded_up),
                     format_double(s.ground_truth.value), format_double(s.ground_truth.stderr_)});
  write_csv(summary_path,
            {"task", "estimator", "mean", "std", "ground_truth", "ground_truth_stderr"}, srows);
  write_manifest(g_command_line, seed, {out, summary_path});
  return 0;
}

int cmd_noise_sweep(const std::string& kind, const std::string& grid_arg,
                    const std::string& estimators_arg, Seed seed, Eigen::Index n_mc,
                    Eigen::Index n_est, const std::string& out, const std::string& format) {
  const auto grid = grid_arg.empty() ? std::vector<double>{} : parse_doubles(grid_arg);
  const auto estimators = split_list(estimators_arg);
  const auto rows = noise_sweep(kind, grid, estimators, seed, n_mc, n_est);

  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json jr{{"alpha", r.alpha},
              {"sigma2", r.sigma2},
              {"mi", r.mi},
              {"mcse", r.mcse},
              {"bound", r.bound}};
      for (const auto& [k, v] : r.estimates) jr[k] = v;
      arr.push_back(std::move(jr));
    }
    std::ofstream o(out);
    if (!o) throw SpecError("cannot write: " + out);
    o << arr.dump(2) << "\n";
  } else {
    std::vector<std::string> header{"alpha", "sigma2", "mi", "mcse", "bound"};
    for (const auto& e : estimators) header.push_back(e);
    std::vector<std::vector<std::string>> csv;
    for (const auto& r : rows) {
      std::vector<std::string> row{format_double(r.alpha), format_double(r.sigma2),
                                   format_double(r.mi), format_double(r.mcse),
                                   format_double(r.bound)};
      for (const auto& e : estimators) row.push_back(format_double(r.estimates.at(e)));
      csv.push_back(std::move(row));
    }
    write_csv(out, header, csv);
  }
  write_manifest(g_command_line, seed, {out});
  return 0;
}

int cmd_bayes(const std::string& data_path, int K, int warmup, int draws,
              Eigen::Index mc_per_draw, Seed seed, const std::string& out, const std::string& ppc,
              double holdout_fraction) {
  const auto full = read_sample_csv(data_path);
  PairedSample train = full;
  PairedSample held;
  if (holdout_fraction > 0.0) {
    const auto n_hold = Eigen::Index(double(full.size()) * holdout_fraction);
    const auto n_train = full.size() - n_hold;
    if (n_train < 2 || n_hold < 2) throw SpecError("--holdout-fraction leaves too few rows");
    train.xs = full.xs.topRows(n_train);
    train.ys = full.ys.topRows(n_train);
    held.xs = full.xs.bottomRows(n_hold);
    held.ys = full.ys.bottomRows(n_hold);
  }

  const auto posterior =
      fit_posterior(train, GmmPrior::defaults(K), {warmup, draws, derive(seed, "chain", 0)});
  const int dim_x = int(full.xs.cols()), dim_y = int(full.ys.cols());
  const auto mi = mi_posterior(posterior, dim_x, dim_y, mc_per_draw, derive(seed, "mi", 0));

  json j;
  j["n_train"] = train.size();
  j["k"] = K;
  j["warmup"] = warmup;
  j["draws"] = draws;
  j["mc_per_draw"] = mc_per_draw;
  j["mi"] = {{"mean", mi.mean}, {"p10", mi.p10}, {"p90", mi.p90}, {"draws", mi.draws}};
  json params = json::array();
  for (const auto& d : posterior) {
    json comps = json::array();
    for (std::size_t k = 0; k < d.weights.size(); ++k) {
      json c;
      c["weight"] = d.weights[k];
      c["mean"] = std::vector<double>(d.means[k].data(), d.means[k].data() + d.means[k].size());
      std::vector<std::vector<double>> cov;
      for (Eigen::Index r = 0; r < d.covariances[k].rows(); ++r)
        cov.emplace_back(d.covariances[k].row(r).data(),
                         d.covariances[k].row(r).data() + d.covariances[k].cols());
      c["cov"] = cov;
      comps.push_back(std::move(c));
    }
    params.push_back(std::move(comps));
  }
  j["posterior"] = std::move(params);

  std::vector<std::string> files{out};
  if (!ppc.empty()) {
    const auto pred = posterior_predictive(posterior.back(), dim_x, dim_y,
                                           held.size() > 0 ? held.size() : train.size(),
                                           derive(seed, "ppc", 0));
    write_sample_csv(ppc, pred);
    files.push_back(ppc);
    if (held.size() > 0) j["ppc_ks"] = predictive_ks(pred, held);
  }

  std::ofstream o(out);
  if (!o) throw SpecError("cannot write: " + out);
  o << j.dump(2) << "\n";
  write_manifest(g_command_line, seed, files);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream cmd;
  for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
  g_command_line = cmd.str();

  CLI::App app{"Bend-and-mix joint distributions: PMI profiles, Monte Carlo MI, estimator "
               "benchmarks and Bayesian mixture estimates"};
  app.require_subcommand(1);

  Seed seed = 0;
  bool seed_given = false;

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a paired sample from a distribution spec");
  std::string s_dist, s_out = "sample.csv";
  Eigen::Index s_n = 5000;
  sample->add_option("--dist", s_dist, "spec file or task:NAME")->required();
  sample->add_option("--n", s_n, "number of draws");
  sample->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  sample->add_option("--out", s_out, "output CSV");

  // pmi
  auto* pmic = app.add_subcommand("pmi", "Evaluate PMI at points from a CSV file");
  std::string p_dist, p_data, p_out;
  pmic->add_option("--dist", p_dist)->required();
  pmic->add_option("--data", p_data, "points CSV with header x1..,y1..")->required();
  pmic->add_option("--out", p_out, "output CSV (stdout when omitted)");

  // profile
  auto* prof = app.add_subcommand("profile", "Sample the PMI profile by Monte Carlo");
  std::string f_dist, f_out = "profile.csv", f_hist;
  Eigen::Index f_n = 100000;
  prof->add_option("--dist", f_dist)->required();
  prof->add_option("--n", f_n);
  prof->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  prof->add_option("--out", f_out);
  prof->add_option("--hist-out", f_hist, "also export the default histogram");

  // analytic
  auto* analytic = app.add_subcommand("analytic", "Closed-form Gaussian results");
  analytic->require_subcommand(1);
  std::string a_rhos = "0.8", a_out = "gaussian_profile.csv";
  Eigen::Index a_n = 100000;
  double a_mi = 0.5;
  int a_m = 1;
  auto* ami = analytic->add_subcommand("gaussian-mi", "MI from canonical correlations");
  ami->add_option("--rhos", a_rhos, "comma-separated canonical correlations");
  auto* aprof =
      analytic->add_subcommand("gaussian-profile", "Sample the generalized chi-squared profile");
  aprof->add_option("--rhos", a_rhos);
  aprof->add_option("--n", a_n);
  aprof->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  aprof->add_option("--out", a_out);
  auto* abounds = analytic->add_subcommand("variance-bounds", "Profile-variance extremes");
  abounds->add_option("--mi", a_mi)->required();
  abounds->add_option("--m", a_m)->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "Run an MI estimator on a data CSV");
  std::string e_method, e_data, e_critic, e_format = "csv";
  int e_k = 10, e_bins = 10;
  double e_shift = 0.0;
  est->add_option("--method", e_method, "ksg|hist|cca|dv|nwj|infonce|mc")->required();
  est->add_option("--data", e_data)->required();
  est->add_option("--k", e_k, "KSG neighbors");
  est->add_option("--bins", e_bins, "histogram bins per dimension");
  est->add_option("--critic", e_critic, "zero | const:<c> | exact-pmi:<spec.json|task:NAME>");
  est->add_option("--critic-shift", e_shift, "added to the critic");
  est->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  est->add_option("--format", e_format)->check(CLI::IsMember({"csv", "json"}));

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Task registry operations");
  bench->require_subcommand(1);
  auto* blist = bench->add_subcommand("list", "List registered tasks");
  std::string b_manifest;
  blist->add_option("--manifest", b_manifest, "task manifest JSON override");
  auto* bgt = bench->add_subcommand("ground-truth", "Ground-truth MI of one task");
  std::string g_task;
  Eigen::Index g_n = 200000;
  bgt->add_option("--task", g_task)->required();
  bgt->add_option("--n", g_n);
  bgt->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  bgt->add_option("--manifest", b_manifest);
  auto* brun = bench->add_subcommand("run", "Seeded estimator runs over tasks");
  std::string r_tasks = "all", r_estimators = "ksg,hist,cca", r_out = "results.csv",
              r_format = "csv";
  Eigen::Index r_n = 5000, r_gt_n = 200000;
  int r_seeds = 10, r_jobs = 0;
  bool r_timing = false;
  brun->add_option("--tasks", r_tasks, "all or comma-separated names");
  brun->add_option("--estimators", r_estimators);
  brun->add_option("--n", r_n, "sample size per run");
  brun->add_option("--seeds", r_seeds, "number of repeated datasets");
  brun->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  brun->add_option("--out", r_out);
  brun->add_option("--jobs", r_jobs, "worker threads (0 = all cores)");
  brun->add_flag("--timing", r_timing, "include wall times (breaks byte determinism)");
  brun->add_option("--manifest", b_manifest);
  brun->add_option("--gt-n", r_gt_n, "Monte Carlo samples for ground truths");
  brun->add_option("--format", r_format)->check(CLI::IsMember({"csv", "json"}));

  // noise-sweep
  auto* sweep = app.add_subcommand("noise-sweep", "Failing-channel contamination study");
  std::string w_kind, w_grid, w_estimators, w_out = "sweep.csv", w_format = "csv";
  Eigen::Index w_nmc = 100000, w_nest = 5000;
  sweep->add_option("--kind", w_kind, "alpha-inlier|alpha-outlier|sigma")->required();
  sweep->add_option("--grid", w_grid, "comma-separated grid override");
  sweep->add_option("--estimators", w_estimators, "optional estimator columns");
  sweep->add_option("--n-mc", w_nmc, "Monte Carlo samples per grid point");
  sweep->add_option("--n-est", w_nest, "sample size per estimator run");
  sweep->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  sweep->add_option("--out", w_out);
  sweep->add_option("--format", w_format)->check(CLI::IsMember({"csv", "json"}));

  // bayes
  auto* bayes = app.add_subcommand("bayes", "Gaussian-mixture posterior over the MI");
  std::string y_data, y_out = "posterior.json", y_ppc;
  int y_k = 10, y_warmup = 1000, y_draws = 1000;
  Eigen::Index y_mc = 1000;
  double y_holdout = 0.0;
  bayes->add_option("--data", y_data)->required();
  bayes->add_option("--k", y_k, "mixture components");
  bayes->add_option("--warmup", y_warmup);
  bayes->add_option("--draws", y_draws);
  bayes->add_option("--mc-per-draw", y_mc);
  bayes->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
  bayes->add_option("--out", y_out);
  bayes->add_option("--ppc", y_ppc, "write a posterior-predictive sample CSV");
  bayes->add_option("--holdout-fraction", y_holdout, "tail fraction held out for checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!seed_given) seed = default_seed();

    if (*sample) return cmd_sample(s_dist, s_n, seed, s_out);
    if (*pmic) return cmd_pmi(p_dist, p_data, p_out);
    if (*prof) return cmd_profile(f_dist, f_n, seed, f_out, f_hist);
    if (*ami) {
      std::printf("%.4f\n", gaussian_mi(parse_doubles(a_rhos)));
      return 0;
    }
    if (*aprof) {
      const auto rhos = parse_doubles(a_rhos);
      const auto batch = sample_gaussian_profile(
          Eigen::Map<const Vector>(rhos.data(), Eigen::Index(rhos.size())), seed, a_n);
      write_vector_csv(a_out, "value", batch.values);
      write_manifest(g_command_line, seed, {a_out});
      return 0;
    }
    if (*abounds) {
      const auto b = profile_variance_bounds(a_mi, a_m);
      std::printf("v_min=%s v_max=%s\n", format_double(b.v_min).c_str(),
                  format_double(b.v_max).c_str());
      return 0;
    }
    if (*est) return cmd_estimate(e_method, e_data, e_k, e_bins, e_critic, e_shift, seed, e_format);
    if (*blist) {
      const auto tasks =
          b_manifest.empty() ? register_builtin_tasks() : load_task_manifest(b_manifest);
      for (const auto& t : tasks) {
        std::string tail;
        if (t.exact_mi) tail += "  exact";
        if (!t.notes.empty()) tail += "  [" + t.notes + "]";
        std::printf("%-20s dims %dx%d%s\n", t.name.c_str(), t.dim_x, t.dim_y, tail.c_str());
      }
      return 0;
    }
    if (*bgt) {
      const auto tasks =
          b_manifest.empty() ? register_builtin_tasks() : load_task_manifest(b_manifest);
      const auto gt = ground_truth(find_task(tasks, g_task), g_n, seed);
      std::printf("%s mi=%s stderr=%s\n", g_task.c_str(), format_double(gt.value).c_str(),
                  format_double(gt.stderr_).c_str());
      return 0;
    }
    if (*brun)
      return cmd_benchmark_run(r_tasks, r_estimators, r_n, r_seeds, seed, r_out, r_jobs, r_timing,
                               b_manifest, r_gt_n, r_format);
    if (*sweep)
      return cmd_noise_sweep(w_kind, w_grid, w_estimators, seed, w_nmc, w_nest, w_out, w_format);
    if (*bayes) return cmd_bayes(y_data, y_k, y_warmup, y_draws, y_mc, seed, y_out, y_ppc, y_holdout);

    std::cerr << "error: no subcommand dispatched\n";
    return 2;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
