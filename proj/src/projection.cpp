#include "bcreg/projection.hpp"

#include <cmath>
#include <string>

#include "bcreg/error.hpp"

namespace bcreg {

void ProjectionSpec::validate() const {
  if (m < 1 || p < 1 || m > p) {
    throw Error(ErrorCode::InvalidSpec, "projection needs 1 <= m <= p, got m=" + std::to_string(m) +
                                            " p=" + std::to_string(p));
  }
  if (!(psi > 0.1 && psi < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "psi must lie in (0.1, 1), got " + std::to_string(psi));
  }
}

double draw_raw_entry(Engine& eng, double psi) {
  const double u = uniform_open(eng);
  const double magnitude = std::sqrt(1.0 / psi);
  const double p_neg = psi * psi;
  const double p_zero = 2.0 * psi * (1.0 - psi);
  if (u < p_neg) return -magnitude;
  if (u < p_neg + p_zero) return 0.0;
  return magnitude;
}

namespace {

void fill_raw_row(Engine& eng, double psi, Eigen::Ref<Eigen::RowVectorXd> row) {
  // Inline copy of draw_raw_entry with the constants hoisted; the row loop
  // dominates projection cost at large p.
  const double magnitude = std::sqrt(1.0 / psi);
  const double p_neg = psi * psi;
  const double p_nonpos = p_neg + 2.0 * psi * (1.0 - psi);
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    const double u = uniform_open(eng);
    row[j] = u < p_neg ? -magnitude : (u < p_nonpos ? 0.0 : magnitude);
  }
}

}  // namespace

ProjectionMatrix draw_projection(const ProjectionSpec& spec) {
  spec.validate();
  const auto m = static_cast<Eigen::Index>(spec.m);
  const auto p = static_cast<Eigen::Index>(spec.p);
  RowMatrix q(m, p);
  Eigen::RowVectorXd v(p);

  for (Eigen::Index i = 0; i < m; ++i) {
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxRowRedraws && !accepted; ++attempt) {
      Engine eng = make_stream(spec.seed, {stream_tag::kProjectionRow, static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(attempt)});
      fill_raw_row(eng, spec.psi, v);
      const double raw_norm = v.norm();
      if (raw_norm == 0.0) continue;
      // Modified Gram-Schmidt, two passes.
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < i; ++j) {
          const double c = q.row(j).dot(v);
          v.noalias() -= c * q.row(j);
        }
      }
      const double residual = v.norm();
      if (residual < kPivotFloor * raw_norm) continue;
      q.row(i) = v / residual;
      accepted = true;
    }
    if (!accepted) {
      throw Error(ErrorCode::RankDeficient,
                  "row " + std::to_string(i) + " stayed dependent after " +
                      std::to_string(kMaxRowRedraws) + " redraws (m=" + std::to_string(spec.m) +
                      ", p=" + std::to_string(spec.p) + ")");
    }
  }
  return ProjectionMatrix(spec, std::move(q));
}

Eigen::VectorXd ProjectionMatrix::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (static_cast<std::size_t>(x.size()) != spec_.p) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector has length " + std::to_string(x.size()) + ", projection expects " +
                    std::to_string(spec_.p));
  }
  return rows_ * x;
}

Eigen::MatrixXd compress(const ProjectionMatrix& phi, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (static_cast<std::size_t>(X.cols()) != phi.p()) {
    throw Error(ErrorCode::DimensionMismatch,
                "design has " + std::to_string(X.cols()) + " columns, projection expects " +
                    std::to_string(phi.p()));
  }
  Eigen::MatrixXd Z(X.rows(), static_cast<Eigen::Index>(phi.m()));
  Z.noalias() = X * phi.rows().transpose();
  return Z;
}

}  // namespace bcreg
