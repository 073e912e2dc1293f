#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bcreg/conjugate.hpp"
#include "bcreg/data.hpp"
#include "bcreg/mixture.hpp"
#include "bcreg/projection.hpp"

namespace bcreg {

/// Model-averaging configuration. Unset window fields take the defaults
/// m_min = ceil(2 ln p), m_max = min(n, p), s = m_max - m_min.
struct EnsembleConfig {
  std::optional<std::size_t> m_min;
  std::optional<std::size_t> m_max;
  std::optional<std::size_t> s;
  double psi_low = 0.1;
  double psi_high = 1.0;
  std::uint64_t master_seed = 0;
  double interval_level = 0.95;
  /// Sigma_beta = prior_variance * I for every member.
  double prior_variance = 1.0;
  /// Worker threads for member fitting (0 = hardware concurrency). Never
  /// affects results.
  unsigned threads = 1;
};

struct ModelWindow {
  std::size_t m_min = 1;
  std::size_t m_max = 1;
  std::size_t s = 1;

  friend bool operator==(const ModelWindow&, const ModelWindow&) = default;
};

std::size_t default_m_min(std::size_t p);

/// Applies defaults and checks the window. Throws Error(WindowEmpty) when
/// m_min > m_max, Error(InvalidSpec) for m_max > p, s == 0, a psi range
/// outside [0.1, 1] or a level outside (0, 1).
ModelWindow resolve_window(const EnsembleConfig& cfg, std::size_t n, std::size_t p);

/// Projection spec of member l (zero-based): m = m_min + l mod width,
/// psi ~ U(psi_low, psi_high) and projection seed both drawn from
/// substreams keyed by (master_seed, l).
ProjectionSpec member_spec(const EnsembleConfig& cfg, const ModelWindow& window, std::size_t p,
                           std::size_t l);

struct EnsembleMember {
  std::size_t index = 0;  ///< position in the original plan
  ProjectionMatrix projection;
  CompressedPosterior posterior;
};

struct DroppedMember {
  std::size_t index = 0;
  std::string reason;
};

/// log-sum-exp normalization of log model evidences under equal priors.
Eigen::VectorXd normalize_log_weights(std::span<const double> log_evidence);

/// Fitted model average. Immutable after construction.
class Ensemble {
 public:
  /// Weights are computed here from the members' cached log marginals.
  /// Throws Error(AllMembersDegenerate) for an empty member list.
  Ensemble(std::vector<EnsembleMember> members, StandardizationStats stats, ModelWindow window,
           std::vector<DroppedMember> dropped = {});

  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& log_weights_raw() const noexcept { return log_weights_raw_; }
  const StandardizationStats& stats() const noexcept { return stats_; }
  const ModelWindow& window() const noexcept { return window_; }
  const std::vector<DroppedMember>& dropped() const noexcept { return dropped_; }
  std::size_t p() const noexcept { return members_.front().projection.p(); }
  std::size_t size() const noexcept { return members_.size(); }

 private:
  std::vector<EnsembleMember> members_;
  Eigen::VectorXd log_weights_raw_;
  Eigen::VectorXd weights_;
  StandardizationStats stats_;
  ModelWindow window_;
  std::vector<DroppedMember> dropped_;
};

/// Fits every member on already standardized (X, y). Members whose
/// projection stays rank deficient after the redraw budget or whose
/// posterior is degenerate (NonPositiveB1) are dropped and reported in
/// Ensemble::dropped(); other member errors propagate tagged with the index.
/// `stats` is stored for mapping raw inputs later; it does not touch X.
Ensemble fit_ensemble(const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const Eigen::Ref<const Eigen::VectorXd>& y, const EnsembleConfig& cfg,
                      std::optional<StandardizationStats> stats = std::nullopt);

// All x_new below are in the standardized predictor scale.

StudentTMixture predictive_mixture(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new);
double predict_mean(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new);
double predictive_log_density(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new,
                              double y_val);
Interval predictive_interval(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new,
                             double level);
/// Model-averaged E[gamma | D] = sum_l w_l Phi_l^T mu_l.
Eigen::VectorXd gamma_mean(const Ensemble& ens);

struct Prediction {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Mean and equal-tailed interval for each row of a standardized block.
/// Compresses the block once per member; rows are independent.
std::vector<Prediction> predict_batch(const Ensemble& ens, const Eigen::Ref<const Eigen::MatrixXd>& X_new,
                                      double level, unsigned threads = 1);

/// Same as predict_batch but takes raw (unstandardized) rows and returns
/// predictions on the original response scale using ens.stats().
std::vector<Prediction> predict_raw(const Ensemble& ens, const Eigen::Ref<const Eigen::MatrixXd>& X_raw,
                                    double level, unsigned threads = 1);

}  // namespace bcreg
