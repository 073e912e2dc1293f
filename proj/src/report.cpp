#include "bcreg/report.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "bcreg/error.hpp"

namespace bcreg {

using nlohmann::json;

namespace {

// Fixed-width text for CSV and tables; JSON keeps full precision.
std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

json to_object(const MetricsReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenario"] = r.scenario;
  j["method"] = r.method;
  j["n"] = r.n;
  j["p"] = r.p;
  j["n_test"] = r.n_test;
  j["n_replicates"] = r.n_replicates;
  j["seed"] = r.seed;
  j["mspe_mean"] = r.mspe_mean;
  j["mspe_boot_se"] = r.mspe_boot_se;
  j["table_scale_note"] = "published tables list MSPE x 0.1, i.e. mspe_mean / 10";
  j["coverage"] = r.coverage;
  j["pi_len_median"] = r.pi_len_median;
  j["pi_len_q025"] = r.pi_len_q025;
  j["pi_len_q975"] = r.pi_len_q975;
  j["replicate_mspe"] = r.replicate_mspe;
  j["replicate_coverage"] = r.replicate_coverage;
  return j;
}

MetricsReport from_object(const json& j) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw Error(ErrorCode::FormatError, "unsupported report schema version");
  }
  MetricsReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.p = j.at("p").get<std::size_t>();
  r.n_test = j.at("n_test").get<std::size_t>();
  r.n_replicates = j.at("n_replicates").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.mspe_mean = j.at("mspe_mean").get<double>();
  r.mspe_boot_se = j.at("mspe_boot_se").get<double>();
  r.coverage = j.at("coverage").get<double>();
  r.pi_len_median = j.at("pi_len_median").get<double>();
  r.pi_len_q025 = j.at("pi_len_q025").get<double>();
  r.pi_len_q975 = j.at("pi_len_q975").get<double>();
  r.replicate_mspe = j.at("replicate_mspe").get<std::vector<double>>();
  r.replicate_coverage = j.at("replicate_coverage").get<std::vector<double>>();
  return r;
}

}  // namespace

std::string report_to_json(const MetricsReport& r) { return to_object(r).dump(2) + "\n"; }

std::string reports_to_json(const std::vector<MetricsReport>& reports) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(to_object(r));
  return j.dump(2) + "\n";
}

std::vector<MetricsReport> reports_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    std::vector<MetricsReport> out;
    if (j.is_object() && j.contains("reports")) {
      if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
        throw Error(ErrorCode::FormatError, "unsupported report schema version");
      }
      for (const auto& item : j.at("reports")) out.push_back(from_object(item));
    } else {
      out.push_back(from_object(j));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed report: ") + e.what());
  }
}

MetricsReport report_from_json(const std::string& text) {
  auto all = reports_from_json(text);
  if (all.size() != 1) throw Error(ErrorCode::FormatError, "expected exactly one report");
  return std::move(all.front());
}

std::string report_csv_header() {
  return "scenario,method,n,p,n_test,replicates,seed,mspe_mean,mspe_boot_se,coverage,pi_len_median,pi_len_q025,"
         "pi_len_q975";
}

std::string report_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  os << r.scenario << ',' << r.method << ',' << r.n << ',' << r.p << ',' << r.n_test << ',' << r.n_replicates << ','
     << r.seed << ',' << fmt(r.mspe_mean, 17) << ',' << fmt(r.mspe_boot_se, 17) << ',' << fmt(r.coverage, 17) << ','
     << fmt(r.pi_len_median, 17) << ',' << fmt(r.pi_len_q025, 17) << ',' << fmt(r.pi_len_q975, 17);
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string format_report_table(const std::vector<MetricsReport>& reports) {
  std::ostringstream os;
  os << "# MSPE x 0.1 (bootstrap SE x 0.1), coverage of nominal intervals, median interval length (2.5%, 97.5%)\n";
  os << "scenario  method   n     p      mspe/10 (se/10)       coverage  pi_len median (q025, q975)\n";
  for (const auto& r : reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-9s %-8s %-5zu %-6zu %-8.3f (%.4f)       %-8.3f  %.2f (%.2f, %.2f)\n",
                  r.scenario.c_str(), r.method.c_str(), r.n, r.p, r.mspe_mean / 10.0, r.mspe_boot_se / 10.0,
                  r.coverage, r.pi_len_median, r.pi_len_q025, r.pi_len_q975);
    os << line;
  }
  return os.str();
}

}  // namespace bcreg
