#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "bcreg/data.hpp"
#include "bcreg/error.hpp"
#include "oracles.hpp"

using namespace bcreg;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "bcreg_test_data";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("standardize hand example and moments") {
  Dataset d;
  d.X.resize(3, 2);
  d.X << 1, 10, 2, 20, 3, 60;
  d.y = Eigen::Vector3d(1, 2, 6);
  const auto res = standardize(d);
  CHECK(res.stats.x_scale[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(res.data.X.col(0) == Eigen::Vector3d(-1, 0, 1));
  CHECK(res.stats.y_mean == 3.0);
  CHECK(res.data.y == Eigen::Vector3d(-2, -1, 3));
  CHECK(std::abs(res.data.X.col(1).mean()) < 1e-12);
  CHECK(std::abs(res.data.X.col(1).squaredNorm() / 2 - 1.0) < 1e-12);
}

TEST_CASE("standardize is idempotent") {
  std::mt19937_64 gen(1);
  Dataset d;
  d.X = oracle::random_matrix(gen, 30, 7) * 3.0 + Eigen::MatrixXd::Constant(30, 7, 5.0);
  d.y = oracle::random_vector(gen, 30);
  const auto once = standardize(d);
  const auto twice = standardize(once.data);
  CHECK((once.data.X - twice.data.X).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((once.data.y - twice.data.y).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((twice.stats.x_scale.array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("constant column is flagged and zeroed") {
  Dataset d;
  d.X.resize(4, 2);
  d.X << 1, 7, 2, 7, 3, 7, 5, 7;
  d.y = Eigen::Vector4d(1, 2, 3, 4);
  const auto res = standardize(d);
  REQUIRE(res.stats.constant_columns.size() == 1);
  CHECK(res.stats.constant_columns[0] == 1);
  CHECK(res.stats.x_scale[1] == 1.0);
  CHECK(res.data.X.col(1).isZero(0.0));
  CHECK(res.warnings.size() == 1);
}

TEST_CASE("apply_transform and its inverse") {
  std::mt19937_64 gen(2);
  Dataset d;
  d.X = oracle::random_matrix(gen, 10, 4) * 2.0;
  d.y = oracle::random_vector(gen, 10);
  const auto res = standardize(d);
  CHECK(apply_transform(res.stats, res.stats.x_mean).isZero(0.0));
  const Eigen::VectorXd x = oracle::random_vector(gen, 4);
  CHECK((inverse_transform(res.stats, apply_transform(res.stats, x)) - x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(code_of([&] { apply_transform(res.stats, Eigen::VectorXd::Zero(3)); }) == ErrorCode::DimensionMismatch);
  // Row-wise transform matches the vector transform.
  CHECK((apply_transform_rows(res.stats, d.X).row(3).transpose() - apply_transform(res.stats, d.X.row(3).transpose()))
            .isZero(0.0));
}

TEST_CASE("dataset validation") {
  Dataset d;
  d.X = Eigen::MatrixXd::Ones(1, 2);
  d.y = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(d.validate(), Error);
  d.X = Eigen::MatrixXd::Ones(3, 2);
  d.y = Eigen::VectorXd::Ones(3);
  d.X(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(standardize(d), Error);
}

TEST_CASE("load_csv by name and by index") {
  const auto path = write_temp("basic.csv", "y,x1,x2\n1.5,2,3\n-0.5,4e-1,+6\n2,\"7\",8.25\n");
  const Dataset by_name = load_csv(path, std::string("y"));
  CHECK(by_name.n() == 3);
  CHECK(by_name.p() == 2);
  CHECK(by_name.feature_names == std::vector<std::string>{"x1", "x2"});
  CHECK(by_name.X(1, 0) == 0.4);
  CHECK(by_name.X(2, 0) == 7.0);
  const Dataset by_index = load_csv(path, std::size_t{0});
  CHECK(by_index.X == by_name.X);
  CHECK(by_index.y == by_name.y);
  const Dataset middle = load_csv(path, parse_response_selector("x1"));
  CHECK(middle.y == Eigen::Vector3d(2, 0.4, 7));
}

TEST_CASE("headerless CSV and CRLF line endings") {
  const auto path = write_temp("nohdr.csv", "1,2,3\r\n4,5,6\r\n7,8,9\r\n");
  const Dataset d = load_csv(path, std::size_t{2}, CsvOptions{false});
  CHECK(d.y == Eigen::Vector3d(3, 6, 9));
  CHECK(d.X.col(1) == Eigen::Vector3d(2, 5, 8));
  CHECK(d.feature_names.empty());
}

TEST_CASE("CSV error reporting") {
  SUBCASE("NA cell names its location") {
    const auto path = write_temp("na.csv", "y,x1\n1,2\n3,NA\n");
    try {
      load_csv(path, std::string("y"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonNumericCell);
      CHECK(is_input_error(e.code()));
      CHECK(std::string(e.what()).find("line 3, column 2") != std::string::npos);
    }
  }
  SUBCASE("ragged row") {
    const auto path = write_temp("ragged.csv", "y,x1\n1,2\n3\n");
    CHECK(code_of([&] { load_csv(path, std::string("y")); }) == ErrorCode::ParseError);
  }
  SUBCASE("unterminated quote") {
    const auto path = write_temp("quote.csv", "y,x1\n1,\"2\n");
    CHECK(code_of([&] { load_csv(path, std::string("y")); }) == ErrorCode::ParseError);
  }
  SUBCASE("missing response") {
    const auto path = write_temp("resp.csv", "y,x1\n1,2\n3,4\n");
    CHECK(code_of([&] { load_csv(path, std::string("z")); }) == ErrorCode::MissingResponse);
    CHECK(code_of([&] { load_csv(path, std::size_t{5}); }) == ErrorCode::MissingResponse);
  }
  SUBCASE("missing file") {
    CHECK(code_of([&] { load_csv("/nonexistent/file.csv", std::string("y")); }) == ErrorCode::IoError);
  }
}
