#include "pmiprof/spec_json.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "pmiprof/benchmark.hpp"
#include "pmiprof/mix.hpp"

namespace pmiprof {

namespace {

using nlohmann::json;

Vector vec(const json& j) {
  if (!j.is_array()) throw SpecError("expected a numeric array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = j[i].get<double>();
  return v;
}

Matrix mat(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw SpecError("expected a matrix");
  Matrix m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) throw SpecError("ragged matrix rows");
    for (std::size_t c = 0; c < j[r].size(); ++c) m(Eigen::Index(r), Eigen::Index(c)) = j[r][c].get<double>();
  }
  return m;
}

std::pair<int, int> split(const json& j) {
  if (!j.is_array() || j.size() != 2) throw SpecError("split must be [m, n]");
  return {j[0].get<int>(), j[1].get<int>()};
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw SpecError(std::string("missing field: ") + name);
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("bad field: ") + name);
  }
}

DistPtr primitive_from_json(const json& j) {
  const auto type = field<std::string>(j, "type");
  try {
    if (type == "mvn") {
      auto [m, n] = split(j.at("split"));
      return std::make_shared<MultivariateNormal>(vec(j.at("mean")), mat(j.at("cov")), m, n);
    }
    if (type == "student") {
      auto [m, n] = split(j.at("split"));
      return std::make_shared<MultivariateStudent>(vec(j.at("location")), mat(j.at("dispersion")),
                                                   field<double>(j, "dof"), m, n);
    }
    if (type == "uniform_box") {
      auto [m, n] = split(j.at("split"));
      return std::make_shared<UniformBox>(vec(j.at("lower")), vec(j.at("upper")), m, n);
    }
    if (type == "gao_staircase") {
      return std::make_shared<GaoStaircase>(field<int>(j, "m"), j.value("replication", 1));
    }
    if (type == "zip") {
      return std::make_shared<ZeroInflatedPoissonization>(field<double>(j, "p"));
    }
    if (type == "uniform_additive_noise") {
      return std::make_shared<UniformAdditiveNoise>(field<double>(j, "epsilon"));
    }
    if (type == "swiss_roll") {
      return std::make_shared<SwissRollEmbedding>(j.value("rho", 0.8));
    }
    if (type == "disjoint_uniform") {
      return disjoint_uniform_pair(field<std::string>(j, "mode"));
    }
    if (type == "discrete_mixture") {
      std::vector<DiscreteContinuousMixture::Component> comps;
      for (const auto& c : j.at("components")) {
        DiscreteContinuousMixture::Component comp;
        comp.x_part = marginal_from_json(c.at("x"));
        comp.y_probs = c.at("y_probs").get<std::vector<double>>();
        comps.push_back(std::move(comp));
      }
      return std::make_shared<DiscreteContinuousMixture>(
          field<std::vector<double>>(j, "weights"), std::move(comps));
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed '") + type + "' spec: " + e.what());
  }
  throw SpecError("unknown distribution type: " + type);
}

}  // namespace

MarginalPtr marginal_from_json(const json& j) {
  const auto type = field<std::string>(j, "type");
  try {
    if (type == "normal")
      return std::make_shared<GaussianMarginal>(vec(j.at("mean")), mat(j.at("cov")));
    if (type == "student")
      return std::make_shared<StudentMarginal>(vec(j.at("location")), mat(j.at("dispersion")),
                                               field<double>(j, "dof"));
    if (type == "uniform")
      return std::make_shared<UniformMarginal>(vec(j.at("lower")), vec(j.at("upper")));
    if (type == "categorical")
      return std::make_shared<CategoricalMarginal>(field<std::vector<double>>(j, "probs"));
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed '") + type + "' marginal: " + e.what());
  }
  throw SpecError("unknown marginal type: " + type);
}

MapPtr map_from_json(const json& j) {
  const auto type = field<std::string>(j, "type");
  try {
    if (type == "affine") {
      Vector shift = vec(j.at("shift"));
      Vector scale = j.at("scale").is_array()
                         ? vec(j.at("scale"))
                         : Vector::Constant(shift.size(), j.at("scale").get<double>());
      return affine_map(std::move(scale), std::move(shift));
    }
    if (type == "asinh") return asinh_map(field<int>(j, "dim"));
    if (type == "spiral") return spiral_map(field<double>(j, "v"), field<int>(j, "dim"));
    if (type == "waves") return waves_injection();
    if (type == "compose") {
      std::vector<MapPtr> maps;
      for (const auto& mj : j.at("maps")) maps.push_back(map_from_json(mj));
      return compose(std::move(maps));
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed '") + type + "' map: " + e.what());
  }
  throw SpecError("unknown map type: " + type);
}

DistPtr distribution_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("distribution spec must be an object");
  if (j.contains("task")) {
    const auto tasks = register_builtin_tasks();
    return find_task(tasks, j.at("task").get<std::string>()).dist;
  }
  if (j.contains("mixture")) {
    const auto& m = j.at("mixture");
    std::vector<DistPtr> comps;
    for (const auto& c : m.at("components")) comps.push_back(distribution_from_json(c));
    return mixture(field<std::vector<double>>(m, "weights"), std::move(comps));
  }
  if (j.contains("bend")) {
    const auto& b = j.at("bend");
    MapPtr f, g;
    if (b.contains("f") && !b.at("f").is_null()) f = map_from_json(b.at("f"));
    if (b.contains("g") && !b.at("g").is_null()) g = map_from_json(b.at("g"));
    return bend(distribution_from_json(b.at("base")), std::move(f), std::move(g));
  }
  if (j.contains("product")) {
    const auto& p = j.at("product");
    return std::make_shared<ProductDistribution>(marginal_from_json(p.at("x")),
                                                 marginal_from_json(p.at("y")));
  }
  if (j.contains("contaminate")) {
    const auto& c = j.at("contaminate");
    return contaminate(distribution_from_json(c.at("base")), field<double>(c, "alpha"),
                       marginal_from_json(c.at("noise")));
  }
  if (j.contains("type")) return primitive_from_json(j);
  throw SpecError("unrecognized distribution spec");
}

DistPtr load_distribution(const std::string& path_or_task) {
  if (path_or_task.rfind("task:", 0) == 0) {
    const auto tasks = register_builtin_tasks();
    return find_task(tasks, path_or_task.substr(5)).dist;
  }
  std::ifstream in(path_or_task);
  if (!in) throw SpecError("cannot open spec file: " + path_or_task);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SpecError("invalid JSON in " + path_or_task + ": " + e.what());
  }
  return distribution_from_json(j);
}

}  // namespace pmiprof
