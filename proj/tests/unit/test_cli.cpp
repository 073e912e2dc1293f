#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "bcreg/data.hpp"
#include "bcreg/ensemble.hpp"
#include "bcreg/report.hpp"
#include "bcreg/serialize.hpp"

namespace fs = std::filesystem;
using namespace bcreg;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("bcreg_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(BCREG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

// 10 x 4 toy with an exact linear signal plus small noise in column y.
std::string toy_csv(bool noiseless = false) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> nd;
  std::ostringstream os;
  os.precision(17);
  os << "a,b,c,d,y\n";
  for (int i = 0; i < 10; ++i) {
    double x[4];
    for (double& v : x) v = nd(gen);
    const double y = 2 * x[0] - x[1] + 0.5 * x[3] + (noiseless ? 0.0 : 0.1 * nd(gen));
    os << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << ',' << y << '\n';
  }
  return os.str();
}

}  // namespace

TEST_CASE("fit then predict matches in-process predictions bit for bit") {
  TempDir dir;
  write(dir / "train.csv", toy_csv());
  REQUIRE(run("fit --data " + dir / "train.csv" + " --response y --seed 1 --out " + dir / "model.json") == 0);
  REQUIRE(run("predict --model " + dir / "model.json" + " --data " + dir / "train.csv" +
              " --response y --out " + dir / "pred.csv") == 0);

  const Artifact art = load_ensemble(dir / "model.json");
  const Dataset d = load_csv(dir / "train.csv", std::string("y"));
  const auto expected = predict_raw(art.ensemble, d.X, 0.95);
  const CsvTable pred = read_csv(dir / "pred.csv");
  REQUIRE(pred.header == std::vector<std::string>{"mean", "lo", "hi"});
  REQUIRE(pred.values.rows() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(pred.values(i, 0) == expected[i].mean);
    CHECK(pred.values(i, 1) == expected[i].lo);
    CHECK(pred.values(i, 2) == expected[i].hi);
    CHECK(pred.values(i, 1) <= pred.values(i, 2));
  }

  // Refit in process: same seed gives the same ensemble.
  const StandardizeResult st = standardize(d);
  EnsembleConfig cfg;
  cfg.master_seed = 1;
  const Ensemble direct = fit_ensemble(st.data.X, st.data.y, cfg, st.stats);
  const auto direct_pred = predict_raw(direct, d.X, 0.95);
  for (int i = 0; i < 10; ++i) CHECK(direct_pred[i].mean == expected[i].mean);
}

TEST_CASE("noiseless toy: a training row is predicted near its response") {
  TempDir dir;
  write(dir / "train.csv", toy_csv(true));
  REQUIRE(run("fit --data " + dir / "train.csv" + " --response y --seed 3 --m-min 4 --m-max 4 --s 8 --out " +
              dir / "model.json") == 0);
  REQUIRE(run("predict --model " + dir / "model.json" + " --data " + dir / "train.csv" + " --response 4 --out " +
              dir / "pred.csv") == 0);
  const Dataset d = load_csv(dir / "train.csv", std::string("y"));
  const CsvTable pred = read_csv(dir / "pred.csv");
  for (int i = 0; i < 10; ++i) {
    const double mean = pred.values(i, 0);
    // Half-width of the 95% interval is about two predictive scales.
    const double half = 0.5 * (pred.values(i, 2) - pred.values(i, 1));
    CHECK(std::abs(mean - d.y[i]) <= half);
  }
}

TEST_CASE("same seed twice gives byte-identical artifacts regardless of threads") {
  TempDir dir;
  write(dir / "train.csv", toy_csv());
  REQUIRE(run("fit --data " + dir / "train.csv" + " --response y --seed 9 --threads 1 --out " + dir / "a.json") == 0);
  REQUIRE(run("fit --data " + dir / "train.csv" + " --response y --seed 9 --threads 3 --out " + dir / "b.json") == 0);
  CHECK(read_text_file(dir / "a.json") == read_text_file(dir / "b.json"));
}

TEST_CASE("exit codes") {
  TempDir dir;
  write(dir / "train.csv", toy_csv());
  CHECK(run("fit --data " + dir / "missing.csv" + " --response y --out " + dir / "m.json") == 2);
  write(dir / "bad.csv", "a,y\n1,2\nNA,3\n");
  CHECK(run("fit --data " + dir / "bad.csv" + " --response y --out " + dir / "m.json") == 2);
  CHECK(run("fit --data " + dir / "train.csv" + " --response zz --out " + dir / "m.json") == 2);
  CHECK(run("fit --data " + dir / "train.csv" + " --response y --m-min 5 --m-max 3 --out " + dir / "m.json") == 5);
  CHECK(run("fit --data " + dir / "train.csv" + " --response y --psi-low 0.05 --out " + dir / "m.json") == 5);
  CHECK(run("fit --bogus-flag") == 5);
  // A constant response leaves no residual scale: every member degenerates.
  write(dir / "flat.csv", "a,b,y\n1,2,0\n2,1,0\n3,5,0\n4,4,0\n");
  CHECK(run("fit --data " + dir / "flat.csv" + " --response y --out " + dir / "m.json") == 3);

  REQUIRE(run("fit --data " + dir / "train.csv" + " --response y --seed 1 --out " + dir / "model.json") == 0);
  write(dir / "narrow.csv", "a,b,c\n1,2,3\n");
  CHECK(run("predict --model " + dir / "model.json" + " --data " + dir / "narrow.csv") == 4);
  write(dir / "junk.json", "{\"format\": 1}");
  CHECK(run("predict --model " + dir / "junk.json" + " --data " + dir / "narrow.csv") == 2);

  CHECK(run("simulate --scenario M9 --replicates 2 --out " + dir / "sim") == 5);
  CHECK(run("simulate --scenario M5 --method lasso --replicates 2 --out " + dir / "sim") == 5);
  CHECK(run("--help") == 0);
}

TEST_CASE("config file sits below flags") {
  TempDir dir;
  write(dir / "train.csv", toy_csv());
  write(dir / "cfg.json", "{\"seed\": 9, \"response\": \"y\", \"m-min\": 2, \"m_max\": 3}");
  REQUIRE(run("fit --config " + dir / "cfg.json" + " --data " + dir / "train.csv" + " --out " + dir / "a.json") == 0);
  REQUIRE(run("fit --data " + dir / "train.csv" + " --response y --seed 9 --m-min 2 --m-max 3 --out " + dir / "b.json") ==
          0);
  CHECK(read_text_file(dir / "a.json") == read_text_file(dir / "b.json"));
  REQUIRE(run("fit --config " + dir / "cfg.json" + " --seed 10 --data " + dir / "train.csv" + " --out " + dir / "c.json") ==
          0);
  CHECK(load_ensemble(dir / "c.json").config.master_seed == 10);
  write(dir / "broken.json", "{seed: }");
  CHECK(run("fit --config " + dir / "broken.json" + " --data " + dir / "train.csv" + " --out " + dir / "d.json") == 5);
  write(dir / "typo.json", "{\"sede\": 1}");
  CHECK(run("fit --config " + dir / "typo.json" + " --data " + dir / "train.csv" + " --out " + dir / "d.json") == 5);
}

TEST_CASE("simulate smoke run and report") {
  TempDir dir;
  REQUIRE(run("simulate --scenario M5 --method BCR,ridge --replicates 2 --seed 11 --out " + dir / "a") == 0);
  REQUIRE(run("simulate --scenario M5 --method BCR,ridge --replicates 2 --seed 11 --threads 2 --out " + dir / "b") == 0);
  const std::string ja = read_text_file(dir / "a.json");
  CHECK(ja == read_text_file(dir / "b.json"));
  CHECK(read_text_file(dir / "a.csv") == read_text_file(dir / "b.csv"));
  CHECK(ja.find("\"schema_version\": 1") != std::string::npos);
  const auto reports = reports_from_json(ja);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].method == "BCR");
  CHECK(reports[1].method == "ridge");
  CHECK(reports[0].n_replicates == 2);
  REQUIRE(run("report --data " + dir / "a.json" + " --out " + dir / "table.txt") == 0);
  CHECK(read_text_file(dir / "table.txt").find("M5") != std::string::npos);
}
