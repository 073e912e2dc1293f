#include "bcreg/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "bcreg/error.hpp"
#include "bcreg/parallel.hpp"

namespace bcreg {

std::size_t default_m_min(std::size_t p) {
  return static_cast<std::size_t>(std::ceil(2.0 * std::log(static_cast<double>(p))));
}

ModelWindow resolve_window(const EnsembleConfig& cfg, std::size_t n, std::size_t p) {
  if (n < 1 || p < 1) throw Error(ErrorCode::InvalidSpec, "window needs n >= 1 and p >= 1");
  ModelWindow w;
  w.m_min = cfg.m_min.value_or(std::max<std::size_t>(1, default_m_min(p)));
  w.m_max = cfg.m_max.value_or(std::min(n, p));
  if (w.m_min < 1) throw Error(ErrorCode::InvalidSpec, "m_min must be positive");
  if (w.m_max > p) {
    throw Error(ErrorCode::InvalidSpec, "m_max = " + std::to_string(w.m_max) + " exceeds p = " + std::to_string(p));
  }
  if (w.m_min > w.m_max) {
    throw Error(ErrorCode::WindowEmpty, "model window [" + std::to_string(w.m_min) + ", " +
                                            std::to_string(w.m_max) + "] is empty");
  }
  // The default count m_max - m_min is zero for a one-point window; keep one model.
  w.s = cfg.s.value_or(std::max<std::size_t>(1, w.m_max - w.m_min));
  if (w.s < 1) throw Error(ErrorCode::InvalidSpec, "s must be at least 1");
  if (!(cfg.psi_low >= 0.1 && cfg.psi_high <= 1.0 && cfg.psi_low < cfg.psi_high)) {
    throw Error(ErrorCode::InvalidSpec, "psi range must satisfy 0.1 <= low < high <= 1");
  }
  if (!(cfg.interval_level > 0.0 && cfg.interval_level < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "interval level must lie in (0, 1)");
  }
  if (!(cfg.prior_variance > 0.0) || !std::isfinite(cfg.prior_variance)) {
    throw Error(ErrorCode::InvalidSpec, "prior variance must be positive");
  }
  return w;
}

ProjectionSpec member_spec(const EnsembleConfig& cfg, const ModelWindow& window, std::size_t p, std::size_t l) {
  const std::size_t width = window.m_max - window.m_min + 1;
  ProjectionSpec spec;
  spec.m = window.m_min + l % width;
  spec.p = p;
  Engine psi_eng = make_stream(cfg.master_seed, {stream_tag::kMemberPsi, static_cast<std::uint64_t>(l)});
  // psi must land strictly inside (0.1, 1); the endpoints are excluded by the
  // open uniform but rounding can still hit them.
  do {
    spec.psi = cfg.psi_low + (cfg.psi_high - cfg.psi_low) * uniform_open(psi_eng);
  } while (!(spec.psi > 0.1 && spec.psi < 1.0));
  Engine seed_eng = make_stream(cfg.master_seed, {stream_tag::kMemberSeed, static_cast<std::uint64_t>(l)});
  spec.seed = seed_eng();
  return spec;
}

Eigen::VectorXd normalize_log_weights(std::span<const double> log_evidence) {
  if (log_evidence.empty()) throw Error(ErrorCode::InvalidArgument, "no log evidences to normalize");
  const double max_le = *std::max_element(log_evidence.begin(), log_evidence.end());
  if (!std::isfinite(max_le)) throw Error(ErrorCode::InvalidArgument, "log evidences must be finite");
  Eigen::VectorXd w(static_cast<Eigen::Index>(log_evidence.size()));
  double total = 0.0;
  for (std::size_t l = 0; l < log_evidence.size(); ++l) {
    w[static_cast<Eigen::Index>(l)] = std::exp(log_evidence[l] - max_le);
    total += w[static_cast<Eigen::Index>(l)];
  }
  return w / total;
}

Ensemble::Ensemble(std::vector<EnsembleMember> members, StandardizationStats stats, ModelWindow window,
                   std::vector<DroppedMember> dropped)
    : members_(std::move(members)), stats_(std::move(stats)), window_(window), dropped_(std::move(dropped)) {
  if (members_.empty()) {
    throw Error(ErrorCode::AllMembersDegenerate, "ensemble has no usable members");
  }
  const std::size_t p = members_.front().projection.p();
  std::vector<double> le;
  le.reserve(members_.size());
  for (const auto& mem : members_) {
    if (mem.projection.p() != p || mem.posterior.m() != mem.projection.m()) {
      throw Error(ErrorCode::DimensionMismatch, "member " + std::to_string(mem.index) +
                                                    " has inconsistent projection/posterior sizes");
    }
    le.push_back(mem.posterior.log_marginal());
  }
  if (stats_.p() != p) {
    throw Error(ErrorCode::DimensionMismatch, "standardization stats cover " + std::to_string(stats_.p()) +
                                                  " predictors, ensemble has p = " + std::to_string(p));
  }
  log_weights_raw_ = Eigen::Map<const Eigen::VectorXd>(le.data(), static_cast<Eigen::Index>(le.size()));
  weights_ = normalize_log_weights(le);
}

Ensemble fit_ensemble(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::Ref<const Eigen::VectorXd>& y,
                      const EnsembleConfig& cfg, std::optional<StandardizationStats> stats) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  if (static_cast<std::size_t>(y.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "design has " + std::to_string(n) + " rows but response has " +
                                                  std::to_string(y.size()));
  }
  const ModelWindow window = resolve_window(cfg, n, p);

  std::vector<std::optional<EnsembleMember>> slots(window.s);
  std::vector<std::string> drop_reason(window.s);
  parallel_for(window.s, cfg.threads, [&](std::size_t l) {
    const ProjectionSpec spec = member_spec(cfg, window, p, l);
    try {
      ProjectionMatrix phi = draw_projection(spec);
      const Eigen::MatrixXd Z = compress(phi, X);
      CompressedPosterior post = fit_posterior(Z, y, PriorSpec::isotropic(spec.m, cfg.prior_variance));
      slots[l].emplace(EnsembleMember{l, std::move(phi), std::move(post)});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonPositiveB1 || e.code() == ErrorCode::RankDeficient) {
        drop_reason[l] = e.what();
        return;
      }
      throw e.with_context("member " + std::to_string(l));
    }
  });

  std::vector<EnsembleMember> members;
  std::vector<DroppedMember> dropped;
  members.reserve(window.s);
  for (std::size_t l = 0; l < window.s; ++l) {
    if (slots[l]) {
      members.push_back(std::move(*slots[l]));
    } else {
      dropped.push_back(DroppedMember{l, drop_reason[l]});
    }
  }
  if (members.empty()) {
    throw Error(ErrorCode::AllMembersDegenerate, "all " + std::to_string(window.s) + " members were degenerate");
  }
  return Ensemble(std::move(members), stats ? std::move(*stats) : StandardizationStats::identity(p), window,
                  std::move(dropped));
}

namespace {

void check_p(const Ensemble& ens, Eigen::Index len) {
  if (static_cast<std::size_t>(len) != ens.p()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(len) + " predictors, model expects " +
                                                  std::to_string(ens.p()));
  }
}

std::vector<double> weight_vector(const Ensemble& ens) {
  const auto& w = ens.weights();
  return std::vector<double>(w.data(), w.data() + w.size());
}

}  // namespace

StudentTMixture predictive_mixture(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new) {
  check_p(ens, x_new.size());
  std::vector<StudentT> comps;
  comps.reserve(ens.size());
  for (const auto& mem : ens.members()) {
    comps.push_back(predictive(mem.posterior, mem.projection.apply(x_new)));
  }
  return StudentTMixture(weight_vector(ens), std::move(comps));
}

double predict_mean(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new) {
  check_p(ens, x_new.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < ens.size(); ++l) {
    const auto& mem = ens.members()[l];
    acc += ens.weights()[static_cast<Eigen::Index>(l)] * mem.projection.apply(x_new).dot(mem.posterior.mu());
  }
  return acc;
}

double predictive_log_density(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new, double y_val) {
  return predictive_mixture(ens, x_new).log_pdf(y_val);
}

Interval predictive_interval(const Ensemble& ens, const Eigen::Ref<const Eigen::VectorXd>& x_new, double level) {
  return predictive_mixture(ens, x_new).equal_tailed_interval(level);
}

Eigen::VectorXd gamma_mean(const Ensemble& ens) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ens.p()));
  for (std::size_t l = 0; l < ens.size(); ++l) {
    const auto& mem = ens.members()[l];
    g.noalias() += ens.weights()[static_cast<Eigen::Index>(l)] * (mem.projection.rows().transpose() * mem.posterior.mu());
  }
  return g;
}

std::vector<Prediction> predict_batch(const Ensemble& ens, const Eigen::Ref<const Eigen::MatrixXd>& X_new,
                                      double level, unsigned threads) {
  check_p(ens, X_new.cols());
  const Eigen::Index rows = X_new.rows();
  const std::size_t s = ens.size();
  // components[i * s + l] is member l's predictive at row i.
  std::vector<StudentT> components(static_cast<std::size_t>(rows) * s);
  parallel_for(s, threads, [&](std::size_t l) {
    const auto& mem = ens.members()[l];
    const Eigen::MatrixXd Z = compress(mem.projection, X_new);
    for (Eigen::Index i = 0; i < rows; ++i) {
      components[static_cast<std::size_t>(i) * s + l] = predictive(mem.posterior, Z.row(i).transpose());
    }
  });
  const std::vector<double> w = weight_vector(ens);
  std::vector<Prediction> out(static_cast<std::size_t>(rows));
  parallel_for(static_cast<std::size_t>(rows), threads, [&](std::size_t i) {
    std::vector<StudentT> comps(components.begin() + static_cast<std::ptrdiff_t>(i * s),
                                components.begin() + static_cast<std::ptrdiff_t>((i + 1) * s));
    const StudentTMixture mix(w, std::move(comps));
    const Interval iv = mix.equal_tailed_interval(level);
    out[i] = Prediction{mix.mean(), iv.lo, iv.hi};
  });
  return out;
}

std::vector<Prediction> predict_raw(const Ensemble& ens, const Eigen::Ref<const Eigen::MatrixXd>& X_raw,
                                    double level, unsigned threads) {
  check_p(ens, X_raw.cols());
  const Eigen::MatrixXd Xs = apply_transform_rows(ens.stats(), X_raw);
  std::vector<Prediction> out = predict_batch(ens, Xs, level, threads);
  const double shift = ens.stats().y_mean;
  for (auto& pr : out) {
    pr.mean += shift;
    pr.lo += shift;
    pr.hi += shift;
  }
  return out;
}

}  // namespace bcreg
