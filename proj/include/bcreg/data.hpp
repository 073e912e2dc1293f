#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace bcreg {

struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> feature_names;  // empty or length p

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }

  /// n >= 2, y.size() == n, all entries finite, names empty or length p.
  void validate() const;
};

/// Column centering/scaling of X and centering of y. Constant columns keep
/// scale 1 and are listed in `constant_columns`.
struct StandardizationStats {
  Eigen::VectorXd x_mean;
  Eigen::VectorXd x_scale;
  double y_mean = 0.0;
  std::vector<std::size_t> constant_columns;

  static StandardizationStats identity(std::size_t p);
  std::size_t p() const { return static_cast<std::size_t>(x_mean.size()); }
  void validate() const;
};

struct StandardizeResult {
  Dataset data;
  StandardizationStats stats;
  std::vector<std::string> warnings;
};

/// Centers y, centers X's columns and scales them to unit sample standard
/// deviation (denominator n - 1). Constant columns are zeroed.
StandardizeResult standardize(const Dataset& d);

/// (x - x_mean) / x_scale elementwise; Error(DimensionMismatch) on length.
Eigen::VectorXd apply_transform(const StandardizationStats& stats,
                                const Eigen::Ref<const Eigen::VectorXd>& x_new);
Eigen::VectorXd inverse_transform(const StandardizationStats& stats,
                                  const Eigen::Ref<const Eigen::VectorXd>& z);
/// Row-wise apply_transform for an n x p block.
Eigen::MatrixXd apply_transform_rows(const StandardizationStats& stats,
                                     const Eigen::Ref<const Eigen::MatrixXd>& X);
/// Maps a held-out dataset with training statistics (X transformed, y - y_mean).
Dataset apply_transform(const StandardizationStats& stats, const Dataset& d);

// ---- CSV ----------------------------------------------------------------

struct CsvOptions {
  bool header = true;
  char delimiter = ',';
};

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  Eigen::MatrixXd values;
};

/// Reads an all-numeric CSV (RFC 4180 quoting, '.' decimal separator).
/// Errors: IoError, ParseError (ragged rows, bad quoting), NonNumericCell;
/// messages carry 1-based line and column numbers.
CsvTable read_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Column selected by header name or zero-based index.
using ResponseSelector = std::variant<std::string, std::size_t>;

/// "3" selects index 3 unless a header column is literally named "3".
ResponseSelector parse_response_selector(const std::string& text);

std::size_t resolve_column(const CsvTable& table, const ResponseSelector& sel);

/// Loads a Dataset: the response column is y, every other column a
/// predictor in file order. Error(MissingResponse) if the selector matches
/// nothing.
Dataset load_csv(const std::filesystem::path& path, const ResponseSelector& response,
                 const CsvOptions& opts = {});

}  // namespace bcreg
