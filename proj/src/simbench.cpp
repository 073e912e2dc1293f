#include "bcreg/simbench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "bcreg/error.hpp"
#include "bcreg/parallel.hpp"
#include "bcreg/ridge.hpp"

namespace bcreg {

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::M1: return "M1";
    case ScenarioId::M2: return "M2";
    case ScenarioId::M3: return "M3";
    case ScenarioId::M4: return "M4";
    case ScenarioId::M5: return "M5";
    case ScenarioId::M6: return "M6";
    case ScenarioId::HD1: return "HD1";
    case ScenarioId::HD2: return "HD2";
  }
  return "?";
}

ScenarioId parse_scenario_id(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto id : {ScenarioId::M1, ScenarioId::M2, ScenarioId::M3, ScenarioId::M4, ScenarioId::M5, ScenarioId::M6,
                  ScenarioId::HD1, ScenarioId::HD2}) {
    if (up == to_string(id)) return id;
  }
  throw Error(ErrorCode::UnknownScenario, "unknown scenario \"" + std::string(text) + "\"");
}

Scenario scenario(ScenarioId id, std::size_t hd_p) {
  Scenario sc;
  sc.id = id;
  sc.sigma2 = 1.0;
  sc.rho = 0.5;
  auto leading = [](std::size_t p, std::size_t k, double v) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    b.head(static_cast<Eigen::Index>(k)).setConstant(v);
    return b;
  };
  switch (id) {
    case ScenarioId::M1:
    case ScenarioId::M2:
      sc.p = 100;
      sc.beta0 = leading(100, 5, 1.2);
      break;
    case ScenarioId::M3:
    case ScenarioId::M4:
      sc.p = 100;
      sc.beta0 = leading(100, 15, 1.0);
      break;
    case ScenarioId::M5:
    case ScenarioId::M6:
      sc.p = 100;
      sc.beta0 = Eigen::VectorXd::Constant(100, 0.2);
      break;
    case ScenarioId::HD1:
      sc.p = hd_p;
      sc.beta0 = leading(hd_p, 5, 1.0);
      break;
    case ScenarioId::HD2:
      sc.p = hd_p;
      sc.beta0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(hd_p), 0.1);
      break;
  }
  if ((id == ScenarioId::HD1 && hd_p < 5) || hd_p < 1) {
    throw Error(ErrorCode::InvalidSpec, "high-dimensional p too small");
  }
  switch (id) {
    case ScenarioId::M1:
    case ScenarioId::M3:
    case ScenarioId::M5:
      sc.n = 70;
      sc.n_test = 70;
      break;
    case ScenarioId::M2:
    case ScenarioId::M4:
    case ScenarioId::M6:
      sc.n = 110;
      sc.n_test = 110;
      break;
    case ScenarioId::HD1:
    case ScenarioId::HD2:
      sc.n = 110;
      sc.n_test = 110;
      // Independent predictors: the published ridge baselines equal 0.01 p + 1.
      sc.rho = 0.0;
      break;
  }
  return sc;
}

Eigen::MatrixXd gen_design(std::size_t n, std::size_t p, double rho, Engine& eng) {
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::InvalidArgument, "|rho| must be below 1");
  const double innovation = std::sqrt(1.0 - rho * rho);
  const auto nn = static_cast<Eigen::Index>(n);
  const auto pp = static_cast<Eigen::Index>(p);
  RowMatrix X(nn, pp);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (pp == 0) break;
    double prev = normal(eng);
    X(i, 0) = prev;
    for (Eigen::Index j = 1; j < pp; ++j) {
      prev = rho * prev + innovation * normal(eng);
      X(i, j) = prev;
    }
  }
  return X;
}

Eigen::MatrixXd gen_design(std::size_t n, std::size_t p, double rho, std::uint64_t seed) {
  Engine eng = make_stream(seed);
  return gen_design(n, p, rho, eng);
}

Eigen::VectorXd gen_response(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::Ref<const Eigen::VectorXd>& beta0,
                             double sigma2, Engine& eng) {
  if (X.cols() != beta0.size()) {
    throw Error(ErrorCode::DimensionMismatch, "beta0 has length " + std::to_string(beta0.size()) + ", X has " +
                                                  std::to_string(X.cols()) + " columns");
  }
  if (!(sigma2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma2 must be non-negative");
  const double sigma = std::sqrt(sigma2);
  std::normal_distribution<double> normal;
  Eigen::VectorXd y = X * beta0;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sigma * normal(eng);
  return y;
}

Eigen::VectorXd gen_response(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::Ref<const Eigen::VectorXd>& beta0,
                             double sigma2, std::uint64_t seed) {
  Engine eng = make_stream(seed);
  return gen_response(X, beta0, sigma2, eng);
}

std::string_view to_string(Method m) { return m == Method::BCR ? "BCR" : "ridge"; }

Method parse_method(std::string_view text) {
  std::string low(text);
  std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
  if (low == "bcr") return Method::BCR;
  if (low == "ridge" || low == "rr") return Method::Ridge;
  throw Error(ErrorCode::InvalidArgument, "unknown method \"" + std::string(text) + "\" (expected BCR or ridge)");
}

double mspe(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (pred.size() != y.size() || y.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "prediction and response lengths differ");
  }
  return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

double coverage(const Eigen::Ref<const Eigen::VectorXd>& lo, const Eigen::Ref<const Eigen::VectorXd>& hi,
                const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (lo.size() != y.size() || hi.size() != y.size() || y.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "interval and response lengths differ");
  }
  Eigen::Index inside = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) inside += (y[i] >= lo[i] && y[i] <= hi[i]) ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(y.size());
}

double bootstrap_se(std::span<const double> values, std::size_t B, std::uint64_t seed) {
  if (values.size() < 2) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least two values");
  if (B < 2) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least two resamples");
  Engine eng = make_stream(seed, {stream_tag::kBootstrap});
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> means(B);
  for (auto& mean : means) {
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) acc += values[pick(eng)];
    mean = acc / static_cast<double>(values.size());
  }
  // Shifted by the first mean so an all-equal sample gives exactly zero.
  double sum = 0.0, sum2 = 0.0;
  for (double m : means) {
    sum += m - means[0];
    sum2 += (m - means[0]) * (m - means[0]);
  }
  const double ss = std::max(0.0, sum2 - sum * sum / static_cast<double>(B));
  return std::sqrt(ss / static_cast<double>(B - 1));
}

double empirical_quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ReplicateResult evaluate_split(const Dataset& train, const Dataset& test, Method method, const EnsembleConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  StandardizeResult st = standardize(train);
  const Dataset test_std = apply_transform(st.stats, test);
  const Eigen::Index n_test = test.y.size();
  Eigen::VectorXd pred(n_test), lo(n_test), hi(n_test);

  if (method == Method::BCR) {
    const double y_mean = st.stats.y_mean;
    const Ensemble ens = fit_ensemble(st.data.X, st.data.y, cfg, std::move(st.stats));
    const auto preds = predict_batch(ens, test_std.X, cfg.interval_level, cfg.threads);
    for (Eigen::Index i = 0; i < n_test; ++i) {
      const auto& pr = preds[static_cast<std::size_t>(i)];
      pred[i] = pr.mean + y_mean;
      lo[i] = pr.lo + y_mean;
      hi[i] = pr.hi + y_mean;
    }
  } else {
    const RidgeResult rr = ridge_fit_predict(st.data.X, st.data.y, test_std.X, default_lambda_grid(), cfg.interval_level);
    pred = rr.pred.array() + st.stats.y_mean;
    lo = rr.lo.array() + st.stats.y_mean;
    hi = rr.hi.array() + st.stats.y_mean;
  }

  ReplicateResult out;
  out.mspe = mspe(pred, test.y);
  out.coverage = coverage(lo, hi, test.y);
  out.interval_lengths.resize(static_cast<std::size_t>(n_test));
  for (Eigen::Index i = 0; i < n_test; ++i) out.interval_lengths[static_cast<std::size_t>(i)] = hi[i] - lo[i];
  out.fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

MetricsReport run_replicates(const Scenario& sc, Method method, const SimulationOptions& opts) {
  if (opts.replicates < 2) throw Error(ErrorCode::InvalidArgument, "need at least two replicates");
  const auto start = std::chrono::steady_clock::now();
  std::vector<ReplicateResult> results(opts.replicates);

  parallel_for(opts.replicates, opts.threads, [&](std::size_t r) {
    const std::uint64_t key = opts.identical_replicates ? 0 : static_cast<std::uint64_t>(r);
    Engine e_xtr = make_stream(opts.seed, {stream_tag::kTrainDesign, key});
    Engine e_ytr = make_stream(opts.seed, {stream_tag::kTrainNoise, key});
    Engine e_xte = make_stream(opts.seed, {stream_tag::kTestDesign, key});
    Engine e_yte = make_stream(opts.seed, {stream_tag::kTestNoise, key});
    Engine e_fit = make_stream(opts.seed, {stream_tag::kEnsemble, key});
    Dataset train, test;
    train.X = gen_design(sc.n, sc.p, sc.rho, e_xtr);
    train.y = gen_response(train.X, sc.beta0, sc.sigma2, e_ytr);
    test.X = gen_design(sc.n_test, sc.p, sc.rho, e_xte);
    test.y = gen_response(test.X, sc.beta0, sc.sigma2, e_yte);
    EnsembleConfig cfg = opts.ensemble;
    cfg.master_seed = e_fit();
    cfg.threads = 1;
    try {
      results[r] = evaluate_split(train, test, method, cfg);
    } catch (const Error& e) {
      throw e.with_context("replicate " + std::to_string(r));
    }
  });

  MetricsReport rep;
  rep.scenario = std::string(to_string(sc.id));
  rep.method = std::string(to_string(method));
  rep.n = sc.n;
  rep.p = sc.p;
  rep.n_test = sc.n_test;
  rep.n_replicates = opts.replicates;
  rep.seed = opts.seed;
  std::vector<double> lengths;
  for (const auto& res : results) {
    rep.replicate_mspe.push_back(res.mspe);
    rep.replicate_coverage.push_back(res.coverage);
    lengths.insert(lengths.end(), res.interval_lengths.begin(), res.interval_lengths.end());
  }
  const auto R = static_cast<double>(opts.replicates);
  rep.mspe_mean = std::accumulate(rep.replicate_mspe.begin(), rep.replicate_mspe.end(), 0.0) / R;
  rep.coverage = std::accumulate(rep.replicate_coverage.begin(), rep.replicate_coverage.end(), 0.0) / R;
  rep.mspe_boot_se = bootstrap_se(rep.replicate_mspe, kBootstrapResamples, opts.seed);
  rep.pi_len_median = empirical_quantile(lengths, 0.5);
  rep.pi_len_q025 = empirical_quantile(lengths, 0.025);
  rep.pi_len_q975 = empirical_quantile(lengths, 0.975);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace bcreg
