#include "bcreg/serialize.hpp"

#include <json.hpp>

#include "bcreg/error.hpp"
#include "bcreg/report.hpp"

namespace bcreg {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "bcreg-ensemble";

json vec_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd json_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json opt_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::size_t> json_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::size_t>();
}

}  // namespace

std::string ensemble_to_json(const Ensemble& ens, const EnsembleConfig& cfg) {
  json root;
  root["format"] = kFormatName;
  root["schema_version"] = kArtifactSchemaVersion;
  root["p"] = ens.p();
  root["config"] = {{"m_min", opt_json(cfg.m_min)},
                    {"m_max", opt_json(cfg.m_max)},
                    {"s", opt_json(cfg.s)},
                    {"psi_low", cfg.psi_low},
                    {"psi_high", cfg.psi_high},
                    {"master_seed", cfg.master_seed},
                    {"interval_level", cfg.interval_level},
                    {"prior_variance", cfg.prior_variance}};
  root["window"] = {{"m_min", ens.window().m_min}, {"m_max", ens.window().m_max}, {"s", ens.window().s}};
  const auto& st = ens.stats();
  root["stats"] = {{"x_mean", vec_json(st.x_mean)},
                   {"x_scale", vec_json(st.x_scale)},
                   {"y_mean", st.y_mean},
                   {"constant_columns", st.constant_columns}};
  json members = json::array();
  for (const auto& mem : ens.members()) {
    const auto& spec = mem.projection.spec();
    const auto& post = mem.posterior;
    const Eigen::Index m = static_cast<Eigen::Index>(post.m());
    std::vector<double> packed;
    packed.reserve(static_cast<std::size_t>(m * (m + 1) / 2));
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) packed.push_back(post.chol_A()(i, j));
    }
    members.push_back({{"index", mem.index},
                       {"projection", {{"m", spec.m}, {"p", spec.p}, {"psi", spec.psi}, {"seed", spec.seed}}},
                       {"mu", vec_json(post.mu())},
                       {"chol_A_lower", packed},
                       {"a1", post.a1()},
                       {"b1", post.b1()},
                       {"n", post.n()},
                       {"log_marginal", post.log_marginal()}});
  }
  root["members"] = std::move(members);
  json dropped = json::array();
  for (const auto& d : ens.dropped()) dropped.push_back({{"index", d.index}, {"reason", d.reason}});
  root["dropped"] = std::move(dropped);
  root["log_weights_raw"] = vec_json(ens.log_weights_raw());
  root["weights"] = vec_json(ens.weights());
  return root.dump(1) + "\n";
}

Artifact ensemble_from_json(const std::string& text) {
  try {
    const json root = json::parse(text);
    if (root.at("format").get<std::string>() != kFormatName) {
      throw Error(ErrorCode::FormatError, "not a bcreg ensemble artifact");
    }
    const int version = root.at("schema_version").get<int>();
    if (version != kArtifactSchemaVersion) {
      throw Error(ErrorCode::FormatError, "unsupported artifact schema version " + std::to_string(version));
    }
    EnsembleConfig cfg;
    const json& jc = root.at("config");
    cfg.m_min = json_opt(jc.at("m_min"));
    cfg.m_max = json_opt(jc.at("m_max"));
    cfg.s = json_opt(jc.at("s"));
    cfg.psi_low = jc.at("psi_low").get<double>();
    cfg.psi_high = jc.at("psi_high").get<double>();
    cfg.master_seed = jc.at("master_seed").get<std::uint64_t>();
    cfg.interval_level = jc.at("interval_level").get<double>();
    cfg.prior_variance = jc.at("prior_variance").get<double>();

    ModelWindow window;
    window.m_min = root.at("window").at("m_min").get<std::size_t>();
    window.m_max = root.at("window").at("m_max").get<std::size_t>();
    window.s = root.at("window").at("s").get<std::size_t>();

    StandardizationStats stats;
    stats.x_mean = json_vec(root.at("stats").at("x_mean"));
    stats.x_scale = json_vec(root.at("stats").at("x_scale"));
    stats.y_mean = root.at("stats").at("y_mean").get<double>();
    stats.constant_columns = root.at("stats").at("constant_columns").get<std::vector<std::size_t>>();
    stats.validate();

    std::vector<EnsembleMember> members;
    for (const json& jm : root.at("members")) {
      ProjectionSpec spec;
      spec.m = jm.at("projection").at("m").get<std::size_t>();
      spec.p = jm.at("projection").at("p").get<std::size_t>();
      spec.psi = jm.at("projection").at("psi").get<double>();
      spec.seed = jm.at("projection").at("seed").get<std::uint64_t>();
      const auto m = static_cast<Eigen::Index>(spec.m);
      const auto packed = jm.at("chol_A_lower").get<std::vector<double>>();
      if (packed.size() != static_cast<std::size_t>(m * (m + 1) / 2)) {
        throw Error(ErrorCode::FormatError, "chol_A_lower has the wrong length");
      }
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
      std::size_t k = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) L(i, j) = packed[k++];
      }
      CompressedPosterior post(json_vec(jm.at("mu")), std::move(L), jm.at("a1").get<double>(),
                               jm.at("b1").get<double>(), jm.at("n").get<std::size_t>(),
                               jm.at("log_marginal").get<double>());
      members.push_back(EnsembleMember{jm.at("index").get<std::size_t>(), draw_projection(spec), std::move(post)});
    }
    std::vector<DroppedMember> dropped;
    for (const json& jd : root.at("dropped")) {
      dropped.push_back(DroppedMember{jd.at("index").get<std::size_t>(), jd.at("reason").get<std::string>()});
    }
    Ensemble ens(std::move(members), std::move(stats), window, std::move(dropped));
    // Weights are recomputed from the stored log marginals; a mismatch means
    // the file was edited or written by an incompatible build.
    if (json_vec(root.at("weights")) != ens.weights()) {
      throw Error(ErrorCode::FormatError, "stored weights disagree with stored log marginals");
    }
    return Artifact{std::move(ens), cfg};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed artifact: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FormatError) throw;
    throw Error(ErrorCode::FormatError, std::string("invalid artifact: ") + e.what());
  }
}

void save_ensemble(const Ensemble& ens, const EnsembleConfig& cfg, const std::filesystem::path& path) {
  write_text_file(path, ensemble_to_json(ens, cfg));
}

Artifact load_ensemble(const std::filesystem::path& path) { return ensemble_from_json(read_text_file(path)); }

}  // namespace bcreg
