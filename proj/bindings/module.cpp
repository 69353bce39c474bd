#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "pmiprof/analytic.hpp"
#include "pmiprof/bayes.hpp"
#include "pmiprof/benchmark.hpp"
#include "pmiprof/estimators.hpp"
#include "pmiprof/mathutil.hpp"
#include "pmiprof/profile.hpp"
#include "pmiprof/spec_json.hpp"

namespace py = pybind11;
using namespace pmiprof;

namespace {

PairedSample make_sample(const Matrix& xs, const Matrix& ys) {
  if (xs.rows() != ys.rows()) throw DimensionError("x and y need the same number of rows");
  return {xs, ys};
}

py::dict estimate_to_dict(const MiEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["stderr"] = e.stderr_;
  d["n"] = e.n;
  return d;
}

}  // namespace

struct PyDist {
  DistPtr ptr;
};

PYBIND11_MODULE(_core, m) {
  m.doc() = "Composable joint distributions with tractable densities, PMI profiles and "
            "mutual-information estimators";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  py::class_<PyDist>(m, "Distribution")
      .def_property_readonly("dim_x", [](const PyDist& d) { return d.ptr->dim_x(); })
      .def_property_readonly("dim_y", [](const PyDist& d) { return d.ptr->dim_y(); })
      .def_property_readonly("discrete_x", [](const PyDist& d) { return d.ptr->discrete_x(); })
      .def_property_readonly("discrete_y", [](const PyDist& d) { return d.ptr->discrete_y(); })
      .def_property_readonly("has_density", [](const PyDist& d) { return d.ptr->has_density(); })
      .def("sample",
           [](const PyDist& d, Seed seed, Eigen::Index n) {
             const auto s = d.ptr->sample(seed, n);
             return py::make_tuple(s.xs, s.ys);
           },
           py::arg("seed"), py::arg("n"))
      .def("log_pdf_joint",
           [](const PyDist& d, const Vector& x, const Vector& y) {
             return d.ptr->log_pdf_joint(x, y);
           },
           py::arg("x"), py::arg("y"))
      .def("log_pdf_x", [](const PyDist& d, const Vector& x) { return d.ptr->log_pdf_x(x); },
           py::arg("x"))
      .def("log_pdf_y", [](const PyDist& d, const Vector& y) { return d.ptr->log_pdf_y(y); },
           py::arg("y"))
      .def("pmi",
           [](const PyDist& d, const Vector& x, const Vector& y) { return pmi(*d.ptr, x, y); },
           py::arg("x"), py::arg("y"))
      .def("__repr__",
           [](const PyDist& d) { return "<pmiprof.Distribution " + d.ptr->describe() + ">"; });

  m.def("make_distribution",
        [](const std::string& spec_json) {
          return PyDist{distribution_from_json(nlohmann::json::parse(spec_json))};
        },
        py::arg("spec_json"), "Build a distribution from a JSON spec string");
  m.def("load_distribution",
        [](const std::string& p) { return PyDist{load_distribution(p)}; },
        py::arg("path_or_task"),
        "Load a spec file, or task:NAME for a builtin benchmark task");

  m.def("derive_seed",
        [](Seed root, const std::vector<std::pair<std::string, std::uint64_t>>& path) {
          StreamKey key;
          key.path = path;
          return derive(root, key);
        },
        py::arg("root"), py::arg("path"));
  m.def("standard_normal", &standard_normal, py::arg("seed"), py::arg("n"));

  m.def("sample_profile",
        [](const PyDist& d, Seed seed, Eigen::Index n) {
          return sample_profile(*d.ptr, seed, n).values;
        },
        py::arg("dist"), py::arg("seed"), py::arg("n"),
        "PMI values at n joint draws; the mean is the Monte Carlo MI");
  m.def("mi_mc",
        [](const Vector& values) {
          PmiSampleBatch b;
          b.values = values;
          return estimate_to_dict(mi_mc(b));
        },
        py::arg("values"));
  m.def("histogram",
        [](const Vector& values, std::optional<Vector> edges) {
          PmiSampleBatch b;
          b.values = values;
          const auto h = edges ? histogram(b, *edges) : histogram(b);
          return py::make_tuple(h.bin_edges, h.bin_probs, h.per_bin_stderr);
        },
        py::arg("values"), py::arg("edges") = py::none());
  m.def("ks_distance",
        [](const Vector& a, const Vector& b) { return ks_distance(a, b); }, py::arg("a"),
        py::arg("b"));

  m.def("gaussian_mi",
        [](const std::vector<double>& rhos) { return gaussian_mi(rhos); }, py::arg("rhos"));
  m.def("canonical_correlations",
        [](const Matrix& cov, int dim_x, int dim_y) {
          return canonical_correlations(cov, dim_x, dim_y).rhos;
        },
        py::arg("cov"), py::arg("dim_x"), py::arg("dim_y"));
  m.def("sample_gaussian_profile",
        [](const std::vector<double>& rhos, Seed seed, Eigen::Index n) {
          const Vector r = Eigen::Map<const Vector>(rhos.data(), Eigen::Index(rhos.size()));
          return sample_gaussian_profile(r, seed, n).values;
        },
        py::arg("rhos"), py::arg("seed"), py::arg("n"));
  m.def("profile_variance_bounds",
        [](double mi, int m) {
          const auto b = profile_variance_bounds(mi, m);
          return py::make_tuple(b.v_min, b.v_max);
        },
        py::arg("mi"), py::arg("m"));
  m.def("discrete_profile",
        [](const Matrix& pmf) {
          const auto p = discrete_profile(pmf);
          return p.atoms;
        },
        py::arg("joint_pmf"), "Atoms (location, weight) of a discrete PMF's profile");

  m.def("preprocess",
        [](const Matrix& xs, const Matrix& ys) {
          const auto r = preprocess(make_sample(xs, ys));
          return py::make_tuple(r.sample.xs, r.sample.ys);
        },
        py::arg("xs"), py::arg("ys"));
  m.def("ksg",
        [](const Matrix& xs, const Matrix& ys, int k) { return ksg(make_sample(xs, ys), k); },
        py::arg("xs"), py::arg("ys"), py::arg("k") = 10);
  m.def("histogram_mi",
        [](const Matrix& xs, const Matrix& ys, int bins) {
          return histogram_mi(make_sample(xs, ys), bins);
        },
        py::arg("xs"), py::arg("ys"), py::arg("bins") = 10);
  m.def("cca_mi",
        [](const Matrix& xs, const Matrix& ys) { return cca_mi(make_sample(xs, ys)); },
        py::arg("xs"), py::arg("ys"));
  m.def("variational_bound",
        [](const std::string& method, const Matrix& xs, const Matrix& ys, const PyDist& dist,
           double shift, Seed seed) {
          const auto s = make_sample(xs, ys);
          const ExactPmiCritic critic(dist.ptr, shift);
          if (method == "mc") return mc_oracle(s, critic);
          if (method == "dv") return dv_bound(s, critic, seed);
          if (method == "nwj") return nwj_bound(s, critic, seed);
          if (method == "infonce") return infonce_bound(s, critic);
          throw SpecError("method must be mc, dv, nwj or infonce");
        },
        py::arg("method"), py::arg("xs"), py::arg("ys"), py::arg("dist"), py::arg("shift") = 0.0,
        py::arg("seed") = 0,
        "Evaluate a variational bound with the exact-PMI critic of `dist` (+ shift)");

  m.def("benchmark_tasks", []() {
    std::vector<std::string> names;
    for (const auto& t : register_builtin_tasks()) names.push_back(t.name);
    return names;
  });
  m.def("task_info",
        [](const std::string& name) {
          const auto tasks = register_builtin_tasks();
          const auto& t = find_task(tasks, name);
          py::dict d;
          d["name"] = t.name;
          d["dim_x"] = t.dim_x;
          d["dim_y"] = t.dim_y;
          d["supports_density"] = t.supports_density;
          if (t.exact_mi) d["exact_mi"] = *t.exact_mi;
          if (!t.notes.empty()) d["notes"] = t.notes;
          return d;
        },
        py::arg("name"));
  m.def("ground_truth",
        [](const std::string& name, Eigen::Index n, Seed seed) {
          const auto tasks = register_builtin_tasks();
          return estimate_to_dict(ground_truth(find_task(tasks, name), n, seed));
        },
        py::arg("name"), py::arg("n") = 200000, py::arg("seed") = 42);

  m.def("bayes_mi",
        [](const Matrix& xs, const Matrix& ys, int k, int warmup, int draws,
           Eigen::Index mc_per_draw, Seed seed) {
          const auto data = make_sample(xs, ys);
          const auto post = fit_posterior(data, GmmPrior::defaults(k),
                                          {warmup, draws, derive(seed, "chain", 0)});
          const auto mi = mi_posterior(post, int(xs.cols()), int(ys.cols()), mc_per_draw,
                                       derive(seed, "mi", 0));
          py::dict d;
          d["mean"] = mi.mean;
          d["p10"] = mi.p10;
          d["p90"] = mi.p90;
          d["draws"] = mi.draws;
          return d;
        },
        py::arg("xs"), py::arg("ys"), py::arg("k") = 10, py::arg("warmup") = 1000,
        py::arg("draws") = 1000, py::arg("mc_per_draw") = 1000, py::arg("seed") = 42,
        "Gaussian-mixture Gibbs posterior over the mutual information");
}
