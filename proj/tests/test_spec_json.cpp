#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pmiprof/profile.hpp"
#include "pmiprof/spec_json.hpp"

using namespace pmiprof;
using nlohmann::json;

TEST_CASE("mvn spec round trip") {
  const json j = {{"type", "mvn"},
                  {"mean", {0.0, 0.0}},
                  {"cov", {{1.0, 0.8}, {0.8, 1.0}}},
                  {"split", {1, 1}}};
  const auto d = distribution_from_json(j);
  CHECK(d->dim_x() == 1);
  const auto ref = paired_gaussian({0.8}, 1, 1);
  Vector x(1), y(1);
  x << 0.3;
  y << -0.5;
  CHECK(d->log_pdf_joint(x, y) == doctest::Approx(ref->log_pdf_joint(x, y)).epsilon(1e-12));
}

TEST_CASE("mixture, bend, product, contaminate composites parse") {
  const json mix_spec = {
      {"mixture",
       {{"weights", {0.5, 0.5}},
        {"components",
         {{{"type", "uniform_box"}, {"lower", {0.0, 0.0}}, {"upper", {1.0, 1.0}}, {"split", {1, 1}}},
          {{"type", "uniform_box"}, {"lower", {1.0, 1.0}}, {"upper", {2.0, 2.0}}, {"split", {1, 1}}}}}}}};
  const auto mix = distribution_from_json(mix_spec);
  Vector p(1);
  p << 0.5;
  CHECK(pmi(*mix, p, p) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const json bend_spec = {
      {"bend",
       {{"base",
         {{"type", "mvn"}, {"mean", {0, 0}}, {"cov", {{1.0, 0.8}, {0.8, 1.0}}}, {"split", {1, 1}}}},
        {"f", {{"type", "asinh"}, {"dim", 1}}},
        {"g", nullptr}}}};
  const auto bent = distribution_from_json(bend_spec);
  CHECK(bent->dim_x() == 1);
  const auto batch = sample_profile(*bent, Seed(3), 2000);
  CHECK(batch.values.allFinite());

  const json prod_spec = {
      {"product",
       {{"x", {{"type", "normal"}, {"mean", {0.0}}, {"cov", {{1.0}}}}},
        {"y", {{"type", "categorical"}, {"probs", {0.25, 0.75}}}}}}};
  const auto prod = distribution_from_json(prod_spec);
  CHECK(prod->discrete_y());

  const json cont_spec = {
      {"contaminate",
       {{"base",
         {{"type", "mvn"}, {"mean", {0, 0}}, {"cov", {{1.0, 0.8}, {0.8, 1.0}}}, {"split", {1, 1}}}},
        {"alpha", 0.2},
        {"noise", {{"type", "normal"}, {"mean", {0.0}}, {"cov", {{25.0}}}}}}}};
  const auto cont = distribution_from_json(cont_spec);
  CHECK(cont->dim_y() == 1);
}

TEST_CASE("primitives parse: gao, zip, additive, swiss roll, student, discrete mixture") {
  CHECK(distribution_from_json({{"type", "gao_staircase"}, {"m", 5}})->discrete_x());
  CHECK(distribution_from_json({{"type", "zip"}, {"p", 0.3}})->discrete_y());
  CHECK(distribution_from_json({{"type", "uniform_additive_noise"}, {"epsilon", 0.75}})->dim_y() == 1);
  CHECK_FALSE(distribution_from_json({{"type", "swiss_roll"}})->has_density());
  const json student = {{"type", "student"},
                        {"location", {0, 0}},
                        {"dispersion", {{1.0, 0.0}, {0.0, 1.0}}},
                        {"dof", 2.0},
                        {"split", {1, 1}}};
  CHECK(distribution_from_json(student)->dim_x() == 1);

  const json dm = {{"type", "discrete_mixture"},
                   {"weights", {0.5, 0.5}},
                   {"components",
                    {{{"x", {{"type", "normal"}, {"mean", {-1.0}}, {"cov", {{1.0}}}}},
                      {"y_probs", {0.9, 0.1}}},
                     {{"x", {{"type", "normal"}, {"mean", {1.0}}, {"cov", {{1.0}}}}},
                      {"y_probs", {0.1, 0.9}}}}}};
  const auto d = distribution_from_json(dm);
  CHECK(d->discrete_y());
  CHECK(d->dim_x() == 1);
}

TEST_CASE("map specs parse, including composition") {
  const json chain = {{"type", "compose"},
                      {"maps",
                       {{{"type", "waves"}},
                        {{"type", "affine"}, {"scale", 0.1}, {"shift", {-0.8, -0.8}}}}}};
  const auto f = map_from_json(chain);
  CHECK(f->dim() == 2);
  Vector v(2);
  v << 0.0, 0.0;
  CHECK(f->forward(v)[0] == doctest::Approx(-0.8));

  CHECK(map_from_json({{"type", "spiral"}, {"v", 0.5}, {"dim", 3}})->dim() == 3);
}

TEST_CASE("task references and files resolve; errors are SpecError") {
  const auto d = distribution_from_json({{"task", "X"}});
  CHECK(d->dim_x() == 1);

  const std::string path = "spec_json_test.json";
  {
    std::ofstream out(path);
    out << R"({"type": "mvn", "mean": [0,0], "cov": [[1,0],[0,1]], "split": [1,1]})";
  }
  CHECK(load_distribution(path)->dim_x() == 1);
  CHECK(load_distribution("task:AI")->dim_x() == 1);

  CHECK_THROWS_AS(load_distribution("no_such_file.json"), SpecError);
  CHECK_THROWS_AS(load_distribution("task:definitely-not-a-task"), SpecError);
  CHECK_THROWS_AS(distribution_from_json({{"type", "warp-drive"}}), SpecError);
  CHECK_THROWS_AS(distribution_from_json({{"type", "mvn"}}), SpecError);
  CHECK_THROWS_AS(distribution_from_json(json::array()), SpecError);
}
