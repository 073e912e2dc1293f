#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcreg/conjugate.hpp"
#include "bcreg/data.hpp"
#include "bcreg/ensemble.hpp"
#include "bcreg/error.hpp"
#include "bcreg/projection.hpp"
#include "bcreg/report.hpp"
#include "bcreg/serialize.hpp"
#include "bcreg/simbench.hpp"

namespace py = pybind11;
using namespace bcreg;

namespace {

// Raw-scale ensemble together with the configuration that produced it.
struct PyModel {
  Ensemble ensemble;
  EnsembleConfig config;
};

PyModel fit_model(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::uint64_t seed,
                  std::optional<std::size_t> m_min, std::optional<std::size_t> m_max, std::optional<std::size_t> s,
                  double psi_low, double psi_high, double level, double prior_variance, unsigned threads) {
  EnsembleConfig cfg;
  cfg.master_seed = seed;
  cfg.m_min = m_min;
  cfg.m_max = m_max;
  cfg.s = s;
  cfg.psi_low = psi_low;
  cfg.psi_high = psi_high;
  cfg.interval_level = level;
  cfg.prior_variance = prior_variance;
  cfg.threads = threads;
  const StandardizeResult st = standardize(Dataset{X, y, {}});
  py::gil_scoped_release release;
  return PyModel{fit_ensemble(st.data.X, st.data.y, cfg, st.stats), cfg};
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["scenario"] = r.scenario;
  d["method"] = r.method;
  d["n"] = r.n;
  d["p"] = r.p;
  d["n_test"] = r.n_test;
  d["n_replicates"] = r.n_replicates;
  d["seed"] = r.seed;
  d["mspe_mean"] = r.mspe_mean;
  d["mspe_boot_se"] = r.mspe_boot_se;
  d["coverage"] = r.coverage;
  d["pi_len_median"] = r.pi_len_median;
  d["pi_len_q025"] = r.pi_len_q025;
  d["pi_len_q975"] = r.pi_len_q975;
  d["replicate_mspe"] = r.replicate_mspe;
  d["replicate_coverage"] = r.replicate_coverage;
  d["wall_time_s"] = r.wall_time_s;
  d["json"] = report_to_json(r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian compressed regression core";

  static py::exception<Error> exc(m, "BcregError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(exc.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "draw_projection",
      [](std::size_t rows, std::size_t p, double psi, std::uint64_t seed) {
        return Eigen::MatrixXd(draw_projection({rows, p, psi, seed}).rows());
      },
      py::arg("m"), py::arg("p"), py::arg("psi"), py::arg("seed"),
      "Orthonormal m x p projection drawn from the three-point entry law.");

  m.def(
      "log_marginal",
      [](const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, const Eigen::VectorXd& sigma_beta_diag) {
        return log_marginal(Z, y, PriorSpec{sigma_beta_diag});
      },
      py::arg("Z"), py::arg("y"), py::arg("sigma_beta_diag"));

  m.def(
      "posterior",
      [](const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, double prior_variance) {
        const auto post = fit_posterior(Z, y, PriorSpec::isotropic(static_cast<std::size_t>(Z.cols()), prior_variance));
        py::dict d;
        d["mu"] = post.mu();
        d["a1"] = post.a1();
        d["b1"] = post.b1();
        d["log_marginal"] = post.log_marginal();
        d["scale_matrix"] = post.scale_matrix();
        return d;
      },
      py::arg("Z"), py::arg("y"), py::arg("prior_variance") = 1.0,
      "Conjugate posterior summaries for a compressed design.");

  m.def(
      "predictive",
      [](const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, const Eigen::VectorXd& z_new, double prior_variance) {
        const auto post = fit_posterior(Z, y, PriorSpec::isotropic(static_cast<std::size_t>(Z.cols()), prior_variance));
        const StudentT t = predictive(post, z_new);
        return py::make_tuple(t.loc, t.scale2, t.dof);
      },
      py::arg("Z"), py::arg("y"), py::arg("z_new"), py::arg("prior_variance") = 1.0,
      "(loc, scale^2, dof) of the Student-t posterior predictive.");

  py::class_<PyModel>(m, "Model")
      .def_property_readonly("weights", [](const PyModel& s) { return s.ensemble.weights(); })
      .def_property_readonly("size", [](const PyModel& s) { return s.ensemble.size(); })
      .def_property_readonly("p", [](const PyModel& s) { return s.ensemble.p(); })
      .def_property_readonly("window",
                             [](const PyModel& s) {
                               const auto& w = s.ensemble.window();
                               return py::make_tuple(w.m_min, w.m_max, w.s);
                             })
      .def_property_readonly("member_dims",
                             [](const PyModel& s) {
                               std::vector<std::size_t> dims;
                               for (const auto& mem : s.ensemble.members()) dims.push_back(mem.projection.m());
                               return dims;
                             })
      .def(
          "predict",
          [](const PyModel& s, const Eigen::MatrixXd& X, std::optional<double> level, unsigned threads) {
            std::vector<Prediction> preds;
            {
              py::gil_scoped_release release;
              preds = predict_raw(s.ensemble, X, level.value_or(s.config.interval_level), threads);
            }
            const auto k = static_cast<Eigen::Index>(preds.size());
            Eigen::VectorXd mean(k), lo(k), hi(k);
            for (Eigen::Index i = 0; i < k; ++i) {
              mean[i] = preds[i].mean;
              lo[i] = preds[i].lo;
              hi[i] = preds[i].hi;
            }
            return py::make_tuple(mean, lo, hi);
          },
          py::arg("X"), py::arg("level") = py::none(), py::arg("threads") = 1,
          "(mean, lo, hi) on the original response scale.")
      .def("to_json", [](const PyModel& s) { return ensemble_to_json(s.ensemble, s.config); })
      .def_static(
          "from_json",
          [](const std::string& text) {
            Artifact a = ensemble_from_json(text);
            return PyModel{std::move(a.ensemble), a.config};
          },
          py::arg("text"));

  m.def("fit", &fit_model, py::arg("X"), py::arg("y"), py::arg("seed") = 0, py::arg("m_min") = py::none(),
        py::arg("m_max") = py::none(), py::arg("s") = py::none(), py::arg("psi_low") = 0.1, py::arg("psi_high") = 1.0,
        py::arg("level") = 0.95, py::arg("prior_variance") = 1.0, py::arg("threads") = 1,
        "Standardize (X, y) and fit a model-averaged ensemble.");

  m.def(
      "simulate",
      [](const std::string& scenario_name, const std::string& method, std::size_t replicates, std::uint64_t seed,
         unsigned threads, std::size_t hd_p) {
        SimulationOptions opts;
        opts.replicates = replicates;
        opts.seed = seed;
        opts.threads = threads;
        const Scenario sc = scenario(parse_scenario_id(scenario_name), hd_p);
        const Method meth = parse_method(method);
        MetricsReport r;
        {
          py::gil_scoped_release release;
          r = run_replicates(sc, meth, opts);
        }
        return report_dict(r);
      },
      py::arg("scenario"), py::arg("method") = "BCR", py::arg("replicates") = 100, py::arg("seed") = 0,
      py::arg("threads") = 1, py::arg("hd_p") = kDefaultHighDimP, "Run a benchmark scenario; returns the metrics.");
}
