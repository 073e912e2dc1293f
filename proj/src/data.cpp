#include "bcreg/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "bcreg/error.hpp"

namespace bcreg {

void Dataset::validate() const {
  if (X.rows() < 2) throw Error(ErrorCode::InvalidArgument, "dataset needs at least two rows");
  if (y.size() != X.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "X has " + std::to_string(X.rows()) + " rows, y has " +
                                                  std::to_string(y.size()));
  }
  if (!feature_names.empty() && feature_names.size() != p()) {
    throw Error(ErrorCode::DimensionMismatch, "feature name count does not match p");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "dataset contains NaN or infinite values");
  }
}

StandardizationStats StandardizationStats::identity(std::size_t p) {
  const auto pp = static_cast<Eigen::Index>(p);
  return StandardizationStats{Eigen::VectorXd::Zero(pp), Eigen::VectorXd::Ones(pp), 0.0, {}};
}

void StandardizationStats::validate() const {
  if (x_mean.size() != x_scale.size()) {
    throw Error(ErrorCode::DimensionMismatch, "x_mean and x_scale differ in length");
  }
  for (Eigen::Index j = 0; j < x_scale.size(); ++j) {
    if (!(x_scale[j] > 0.0)) throw Error(ErrorCode::InvalidSpec, "x_scale entries must be positive");
  }
}

StandardizeResult standardize(const Dataset& d) {
  d.validate();
  const Eigen::Index n = d.X.rows();
  const Eigen::Index p = d.X.cols();
  StandardizeResult out;
  out.stats.x_mean = d.X.colwise().mean().transpose();
  out.stats.x_scale.resize(p);
  out.stats.y_mean = d.y.mean();
  out.data.feature_names = d.feature_names;
  out.data.X.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    auto col = out.data.X.col(j);
    col = d.X.col(j).array() - out.stats.x_mean[j];
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    const double ref = std::max(1.0, d.X.col(j).cwiseAbs().maxCoeff());
    if (!(sd > 1e-12 * ref)) {
      out.stats.x_scale[j] = 1.0;
      out.stats.constant_columns.push_back(static_cast<std::size_t>(j));
      col.setZero();
      out.warnings.push_back("column " + std::to_string(j) +
                             (d.feature_names.empty() ? std::string() : " (" + d.feature_names[j] + ")") +
                             " is constant; it is zeroed");
    } else {
      out.stats.x_scale[j] = sd;
      col /= sd;
    }
  }
  out.data.y = d.y.array() - out.stats.y_mean;
  return out;
}

Eigen::VectorXd apply_transform(const StandardizationStats& stats, const Eigen::Ref<const Eigen::VectorXd>& x_new) {
  if (x_new.size() != stats.x_mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector has length " + std::to_string(x_new.size()) +
                                                  ", transform expects " + std::to_string(stats.x_mean.size()));
  }
  return ((x_new - stats.x_mean).array() / stats.x_scale.array()).matrix();
}

Eigen::VectorXd inverse_transform(const StandardizationStats& stats, const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (z.size() != stats.x_mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector has length " + std::to_string(z.size()) +
                                                  ", transform expects " + std::to_string(stats.x_mean.size()));
  }
  return (z.array() * stats.x_scale.array()).matrix() + stats.x_mean;
}

Eigen::MatrixXd apply_transform_rows(const StandardizationStats& stats, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.cols() != stats.x_mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "block has " + std::to_string(X.cols()) +
                                                  " columns, transform expects " + std::to_string(stats.x_mean.size()));
  }
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    out.col(j) = (X.col(j).array() - stats.x_mean[j]) / stats.x_scale[j];
  }
  return out;
}

Dataset apply_transform(const StandardizationStats& stats, const Dataset& d) {
  Dataset out;
  out.X = apply_transform_rows(stats, d.X);
  out.y = d.y.array() - stats.y_mean;
  out.feature_names = d.feature_names;
  return out;
}

// ---- CSV ----------------------------------------------------------------

namespace {

std::string location(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

/// Splits one logical record; quoted fields may contain delimiters, doubled
/// quotes and line breaks, so the reader hands over the stream.
bool read_record(std::istream& in, char delim, std::size_t& line, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool any = false;
  const std::size_t start_line = line;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw Error(ErrorCode::ParseError, "stray quote at " + location(line, fields.size() + 1));
      }
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\n') {
      ++line;
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      ++line;
      break;
    } else {
      if (field_was_quoted) {
        throw Error(ErrorCode::ParseError, "text after closing quote at " + location(line, fields.size() + 1));
      }
      field.push_back(c);
    }
  }
  if (in_quotes) throw Error(ErrorCode::ParseError, "unterminated quote starting on line " + std::to_string(start_line));
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, std::size_t line, std::size_t col) {
  const std::string s = trim(raw);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::NonNumericCell, "non-numeric cell \"" + s + "\" at " + location(line, col));
  }
  return value;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields[0]).empty();
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  // Skip a UTF-8 byte order mark.
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
    if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
      in.seekg(0);
    }
  }

  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> fields;
  std::size_t line = 1;
  std::size_t width = 0;
  bool header_pending = opts.header;
  for (;;) {
    const std::size_t record_line = line;
    if (!read_record(in, opts.delimiter, line, fields)) break;
    if (blank(fields)) continue;
    if (header_pending) {
      for (auto& f : fields) table.header.push_back(trim(f));
      width = fields.size();
      header_pending = false;
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(record_line) + " has " +
                                             std::to_string(fields.size()) + " fields, expected " +
                                             std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) row[j] = parse_number(fields[j], record_line, j + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, path.string() + " contains no data rows");

  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

ResponseSelector parse_response_selector(const std::string& text) {
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
  if (!text.empty() && ec == std::errc() && ptr == text.data() + text.size()) return index;
  return text;
}

std::size_t resolve_column(const CsvTable& table, const ResponseSelector& sel) {
  const auto width = static_cast<std::size_t>(table.values.cols());
  if (const auto* idx = std::get_if<std::size_t>(&sel)) {
    // A header literally named like the index wins.
    const std::string as_text = std::to_string(*idx);
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (table.header[j] == as_text) return j;
    }
    if (*idx >= width) {
      throw Error(ErrorCode::MissingResponse, "response index " + as_text + " out of range for " +
                                                  std::to_string(width) + " columns");
    }
    return *idx;
  }
  const auto& name = std::get<std::string>(sel);
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (table.header[j] == name) return j;
  }
  throw Error(ErrorCode::MissingResponse, "no column named \"" + name + "\"");
}

Dataset load_csv(const std::filesystem::path& path, const ResponseSelector& response, const CsvOptions& opts) {
  const CsvTable table = read_csv(path, opts);
  const std::size_t r = resolve_column(table, response);
  const Eigen::Index n = table.values.rows();
  const Eigen::Index width = table.values.cols();
  Dataset d;
  d.y = table.values.col(static_cast<Eigen::Index>(r));
  d.X.resize(n, width - 1);
  Eigen::Index out = 0;
  for (Eigen::Index j = 0; j < width; ++j) {
    if (static_cast<std::size_t>(j) == r) continue;
    d.X.col(out++) = table.values.col(j);
    if (!table.header.empty()) d.feature_names.push_back(table.header[static_cast<std::size_t>(j)]);
  }
  if (d.X.cols() < 1) throw Error(ErrorCode::ParseError, path.string() + " has no predictor columns");
  if (n < 2) throw Error(ErrorCode::ParseError, path.string() + " needs at least two data rows");
  return d;
}

}  // namespace bcreg
