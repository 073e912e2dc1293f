#include <doctest.h>

#include <random>

#include "bcreg/error.hpp"
#include "bcreg/serialize.hpp"
#include "oracles.hpp"

using namespace bcreg;

TEST_CASE("artifact round trip is bit exact") {
  std::mt19937_64 gen(12);
  Dataset d;
  d.X = oracle::random_matrix(gen, 30, 40);
  d.y = d.X.leftCols(3).rowwise().sum() + 0.3 * oracle::random_vector(gen, 30);
  const auto st = standardize(d);
  EnsembleConfig cfg;
  cfg.master_seed = 31337;
  cfg.interval_level = 0.9;
  const Ensemble ens = fit_ensemble(st.data.X, st.data.y, cfg, st.stats);

  const std::string text = ensemble_to_json(ens, cfg);
  const Artifact back = ensemble_from_json(text);
  CHECK(ensemble_to_json(back.ensemble, back.config) == text);
  CHECK(back.config.interval_level == 0.9);
  CHECK(back.config.master_seed == 31337);
  REQUIRE(back.ensemble.size() == ens.size());
  CHECK(back.ensemble.weights() == ens.weights());
  for (std::size_t l = 0; l < ens.size(); ++l) {
    const auto& a = ens.members()[l];
    const auto& b = back.ensemble.members()[l];
    CHECK(a.projection.rows() == b.projection.rows());
    CHECK(a.posterior.mu() == b.posterior.mu());
    CHECK(a.posterior.chol_A() == b.posterior.chol_A());
    CHECK(a.posterior.b1() == b.posterior.b1());
  }
  const Eigen::MatrixXd Xn = oracle::random_matrix(gen, 6, 40);
  const auto p1 = predict_raw(ens, Xn, 0.9);
  const auto p2 = predict_raw(back.ensemble, Xn, 0.9);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].mean == p2[i].mean);
    CHECK(p1[i].lo == p2[i].lo);
    CHECK(p1[i].hi == p2[i].hi);
  }
}

TEST_CASE("malformed artifacts are rejected") {
  auto code = [](const std::string& text) {
    try {
      ensemble_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code("not json") == ErrorCode::FormatError);
  CHECK(code(R"({"format":"other","schema_version":1})") == ErrorCode::FormatError);
  CHECK(code(R"({"format":"bcreg-ensemble","schema_version":99})") == ErrorCode::FormatError);
}
