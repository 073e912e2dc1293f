#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "bcreg/error.hpp"
#include "bcreg/projection.hpp"
#include "oracles.hpp"

using namespace bcreg;

namespace {

double max_gram_deviation(const ProjectionMatrix& phi) {
  const Eigen::MatrixXd G = phi.rows() * phi.rows().transpose();
  return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

// Chi-square statistic of n raw draws against the three-point law.
double raw_law_chi2(double psi, std::size_t draws, std::uint64_t seed) {
  Engine eng = make_stream(seed);
  const double mag = std::sqrt(1.0 / psi);
  double counts[3] = {0, 0, 0};
  for (std::size_t k = 0; k < draws; ++k) {
    const double v = draw_raw_entry(eng, psi);
    if (v == -mag) counts[0] += 1;
    else if (v == 0.0) counts[1] += 1;
    else if (v == mag) counts[2] += 1;
    else FAIL("entry outside the support");
  }
  const double probs[3] = {psi * psi, 2 * psi * (1 - psi), (1 - psi) * (1 - psi)};
  double chi2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double e = probs[c] * static_cast<double>(draws);
    chi2 += (counts[c] - e) * (counts[c] - e) / e;
  }
  return chi2;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(draw_projection({9, 8, 0.5, 1}), Error);
  CHECK_THROWS_AS(draw_projection({0, 8, 0.5, 1}), Error);
  CHECK_THROWS_AS(draw_projection({3, 8, 0.1, 1}), Error);
  CHECK_THROWS_AS(draw_projection({3, 8, 1.0, 1}), Error);
  try {
    draw_projection({3, 8, 0.05, 1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
}

TEST_CASE("rows are orthonormal for the small example spec") {
  const auto phi = draw_projection({3, 8, 0.5, 7});
  CHECK(phi.rows().rows() == 3);
  CHECK(phi.rows().cols() == 8);
  CHECK(max_gram_deviation(phi) < 1e-10);
}

TEST_CASE("orthonormality across random specs including square and sparse") {
  std::mt19937_64 gen(11);
  // Near psi = 1 almost every entry is -sqrt(1/psi), so nearly square
  // specs there exhaust the redraw budget; see the RankDeficient case below.
  std::uniform_real_distribution<double> psi_dist(0.15, 0.9);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t p = 1 + gen() % 60;
    const std::size_t m = 1 + gen() % p;
    const auto phi = draw_projection({m, p, psi_dist(gen), gen()});
    CHECK(max_gram_deviation(phi) < 1e-10);
  }
  // Square projections with a concentrated entry law force the redraw path.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto phi = draw_projection({12, 12, 0.15, seed});
    CHECK(max_gram_deviation(phi) < 1e-10);
  }
}

TEST_CASE("nearly constant entry law on a square spec is rank deficient") {
  try {
    draw_projection({20, 20, 0.9999, 1});
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("Bessel bound on random vectors") {
  const auto phi = draw_projection({3, 8, 0.5, 7});
  std::mt19937_64 gen(3);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd x = oracle::random_vector(gen, 8);
    CHECK(phi.apply(x).norm() <= x.norm() * (1.0 + 1e-10));
  }
}

TEST_CASE("same spec gives a bit-identical matrix") {
  const ProjectionSpec spec{17, 400, 0.37, 123456789};
  const auto a = draw_projection(spec);
  const auto b = draw_projection(spec);
  CHECK(a.rows() == b.rows());
  const auto c = draw_projection({17, 400, 0.37, 123456790});
  CHECK(a.rows() != c.rows());
}

TEST_CASE("raw entry frequencies at psi = 0.5 within 3 binomial SE") {
  const std::size_t N = 1'000'000;
  Engine eng = make_stream(99);
  double neg = 0, zero = 0, pos = 0;
  for (std::size_t k = 0; k < N; ++k) {
    const double v = draw_raw_entry(eng, 0.5);
    (v < 0 ? neg : (v == 0 ? zero : pos)) += 1;
  }
  const double probs[3] = {0.25, 0.5, 0.25};
  const double counts[3] = {neg, zero, pos};
  for (int c = 0; c < 3; ++c) {
    const double se = std::sqrt(probs[c] * (1 - probs[c]) / N);
    CHECK(std::abs(counts[c] / N - probs[c]) < 3 * se);
  }
  CHECK(std::abs(draw_raw_entry(eng, 0.5)) != 1.0);
}

TEST_CASE("raw entry law chi-square goodness of fit at 0.001") {
  const double critical = boost::math::quantile(boost::math::complement(boost::math::chi_squared(2.0), 0.001));
  for (double psi : {0.2, 0.5, 0.9}) {
    CAPTURE(psi);
    CHECK(raw_law_chi2(psi, 1'000'000, 2024) < critical);
  }
}

TEST_CASE("compress against identity, zero and a scalar-loop oracle") {
  const auto phi = draw_projection({3, 8, 0.4, 5});
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(8, 8);
  CHECK(compress(phi, I) == Eigen::MatrixXd(phi.rows().transpose()));
  CHECK(compress(phi, Eigen::MatrixXd::Zero(4, 8)).isZero(0.0));

  const auto phi2 = draw_projection({2, 8, 0.6, 9});
  std::mt19937_64 gen(17);
  const Eigen::MatrixXd X = oracle::random_matrix(gen, 5, 8);
  const Eigen::MatrixXd Z = compress(phi2, X);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 2; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 8; ++k) dot += X(i, k) * phi2.rows()(j, k);
      CHECK(std::abs(Z(i, j) - dot) < 1e-12);
    }
  }
  CHECK_THROWS_AS(compress(phi2, Eigen::MatrixXd::Zero(5, 7)), Error);
  CHECK_THROWS_AS(phi2.apply(Eigen::VectorXd::Zero(7)), Error);
}

TEST_CASE("substreams are independent of opening order") {
  Engine a = make_stream(5, {1, 2});
  Engine b0 = make_stream(5, {9});
  (void)b0();
  Engine b = make_stream(5, {1, 2});
  CHECK(a() == b());
  Engine c = make_stream(5, {2, 1});
  Engine d = make_stream(5, {1, 2});
  CHECK(c() != d());
}
