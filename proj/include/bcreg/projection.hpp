#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "bcreg/rng.hpp"

namespace bcreg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ProjectionSpec {
  std::size_t m = 1;  ///< target dimension
  std::size_t p = 1;  ///< ambient dimension
  double psi = 0.5;   ///< sparsity parameter, open interval (0.1, 1)
  std::uint64_t seed = 0;

  /// Throws Error(InvalidSpec) unless 1 <= m <= p and 0.1 < psi < 1.
  void validate() const;

  friend bool operator==(const ProjectionSpec&, const ProjectionSpec&) = default;
};

/// One raw entry of the projection before orthonormalization:
/// -sqrt(1/psi) w.p. psi^2, 0 w.p. 2 psi (1 - psi), +sqrt(1/psi) w.p. (1 - psi)^2.
double draw_raw_entry(Engine& eng, double psi);

/// Maximum number of redraws of a single row that came out numerically
/// dependent on the rows above it.
inline constexpr int kMaxRowRedraws = 100;
/// Relative residual norm below which a row counts as dependent.
inline constexpr double kPivotFloor = 1e-8;

/// m x p random compression matrix with orthonormal rows. Immutable.
class ProjectionMatrix {
 public:
  const ProjectionSpec& spec() const noexcept { return spec_; }
  const RowMatrix& rows() const noexcept { return rows_; }
  std::size_t m() const noexcept { return spec_.m; }
  std::size_t p() const noexcept { return spec_.p; }

  /// Phi x for a single length-p vector.
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  friend ProjectionMatrix draw_projection(const ProjectionSpec& spec);
  ProjectionMatrix(ProjectionSpec spec, RowMatrix rows) : spec_(spec), rows_(std::move(rows)) {}

  ProjectionSpec spec_;
  RowMatrix rows_;
};

/// Draws the raw three-point entries row by row (row i from substream
/// (seed, i, attempt)) and orthonormalizes with modified Gram-Schmidt plus
/// one reorthogonalization pass. A row whose residual norm falls below
/// kPivotFloor times its raw norm is redrawn from a fresh substream; after
/// kMaxRowRedraws failures this throws Error(RankDeficient).
ProjectionMatrix draw_projection(const ProjectionSpec& spec);

/// Z = X Phi^T (n x m). Throws Error(DimensionMismatch) if X.cols() != p.
Eigen::MatrixXd compress(const ProjectionMatrix& phi, const Eigen::Ref<const Eigen::MatrixXd>& X);

}  // namespace bcreg
