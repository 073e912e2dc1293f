#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bcreg/data.hpp"
#include "bcreg/ensemble.hpp"

namespace bcreg {

enum class ScenarioId { M1, M2, M3, M4, M5, M6, HD1, HD2 };

std::string_view to_string(ScenarioId id);
/// Accepts "M1".."M6", "HD1", "HD2" (case-insensitive). Error(UnknownScenario).
ScenarioId parse_scenario_id(std::string_view text);

struct Scenario {
  ScenarioId id = ScenarioId::M1;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t n_test = 0;
  Eigen::VectorXd beta0;
  double sigma2 = 1.0;
  double rho = 0.5;  // 0 for HD1/HD2
};

inline constexpr std::size_t kDefaultHighDimP = 15000;

/// Simulation settings. M1-M6: p = 100, test size n. HD1/HD2: n = 110,
/// p = hd_p (15000, 20000 or 25000 in the study), test size 110.
Scenario scenario(ScenarioId id, std::size_t hd_p = kDefaultHighDimP);

/// Rows i.i.d. Gaussian with cor(x_j, x_k) = rho^|j-k|, generated by the
/// AR(1) recursion x_1 = e_1, x_j = rho x_{j-1} + sqrt(1 - rho^2) e_j.
Eigen::MatrixXd gen_design(std::size_t n, std::size_t p, double rho, Engine& eng);
Eigen::MatrixXd gen_design(std::size_t n, std::size_t p, double rho, std::uint64_t seed);

/// y = X beta0 + sigma z with z drawn from the given stream.
Eigen::VectorXd gen_response(const Eigen::Ref<const Eigen::MatrixXd>& X,
                             const Eigen::Ref<const Eigen::VectorXd>& beta0, double sigma2,
                             Engine& eng);
Eigen::VectorXd gen_response(const Eigen::Ref<const Eigen::MatrixXd>& X,
                             const Eigen::Ref<const Eigen::VectorXd>& beta0, double sigma2,
                             std::uint64_t seed);

enum class Method { BCR, Ridge };
std::string_view to_string(Method m);
Method parse_method(std::string_view text);

double mspe(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& y);
/// Fraction of y inside [lo, hi].
double coverage(const Eigen::Ref<const Eigen::VectorXd>& lo, const Eigen::Ref<const Eigen::VectorXd>& hi,
                const Eigen::Ref<const Eigen::VectorXd>& y);

/// Standard deviation of B bootstrap resample means of `values`.
double bootstrap_se(std::span<const double> values, std::size_t B, std::uint64_t seed);

inline constexpr std::size_t kBootstrapResamples = 500;

struct ReplicateResult {
  double mspe = 0.0;
  double coverage = 0.0;
  std::vector<double> interval_lengths;
  double fit_seconds = 0.0;
};

/// Standardizes `train` with its own statistics, maps `test` with the same
/// statistics, fits the method and scores it on the original response scale.
ReplicateResult evaluate_split(const Dataset& train, const Dataset& test, Method method,
                               const EnsembleConfig& cfg);

struct MetricsReport {
  std::string scenario;
  std::string method;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t n_test = 0;
  std::size_t n_replicates = 0;
  std::uint64_t seed = 0;
  double mspe_mean = 0.0;
  double mspe_boot_se = 0.0;
  double coverage = 0.0;
  double pi_len_median = 0.0;
  double pi_len_q025 = 0.0;
  double pi_len_q975 = 0.0;
  std::vector<double> replicate_mspe;
  std::vector<double> replicate_coverage;
  /// Timing is informational and excluded from report files.
  double wall_time_s = 0.0;
};

struct SimulationOptions {
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Reuse replicate 0's data and fit seed for every replicate.
  bool identical_replicates = false;
  /// Window / psi / level overrides for BCR. master_seed and threads are
  /// set per replicate.
  EnsembleConfig ensemble;
};

/// Runs R >= 2 replicates: a fresh training set of size n and an
/// independent held-out set of size n_test per replicate, all from
/// substreams of `seed` keyed by replicate index.
MetricsReport run_replicates(const Scenario& sc, Method method, const SimulationOptions& opts);

/// Order-statistic quantile with linear interpolation (R type 7).
double empirical_quantile(std::vector<double> values, double prob);

}  // namespace bcreg
