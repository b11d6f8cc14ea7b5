#pragma once

// Ordinary least squares over one-hot genotype designs.
//
// Every design column is a 0/1 indicator, so a row is fully described by the
// list of its active columns. The normal equations are accumulated from those
// lists and solved with a column-pivoted QR, whose rank decides whether the
// coefficients are identifiable.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fla/error.hpp"
#include "fla/sequence_space.hpp"

namespace fla {

struct OlsFit {
  Eigen::VectorXd beta;  // beta[0] is the intercept
  double rmse = 0.0;
  double r_squared = 0.0;
  double total_variance = 0.0;
};

/// `active(row, cols)` appends the active column ids of `row` (column 0, the
/// intercept, must be included).
/// Active lists must be ascending.
template <typename Active>
OlsFit fit_indicator_ols(std::size_t rows, std::size_t columns, Active&& active, std::span<const double> y) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(columns), static_cast<Eigen::Index>(columns));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(columns));
  std::vector<std::uint32_t> cols;
  for (std::size_t r = 0; r < rows; ++r) {
    cols.clear();
    active(r, cols);
    for (std::size_t a = 0; a < cols.size(); ++a) {
      rhs[cols[a]] += y[r];
      for (std::size_t b = a; b < cols.size(); ++b) gram(cols[a], cols[b]) += 1.0;
    }
  }
  // Active lists are ascending, so only the upper triangle was filled.
  Eigen::MatrixXd full = gram.selfadjointView<Eigen::Upper>();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(full);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < columns)
    throw Error(ErrorCode::DegenerateFit, "design has rank " + std::to_string(qr.rank()) + " < " +
                                              std::to_string(columns) + " columns");
  OlsFit fit;
  fit.beta = qr.solve(rhs);

  double mean = 0;
  for (std::size_t r = 0; r < rows; ++r) mean += y[r];
  mean /= static_cast<double>(rows);
  double ss_res = 0, ss_tot = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    cols.clear();
    active(r, cols);
    double pred = 0;
    for (auto c : cols) pred += fit.beta[c];
    ss_res += (y[r] - pred) * (y[r] - pred);
    ss_tot += (y[r] - mean) * (y[r] - mean);
  }
  fit.rmse = std::sqrt(ss_res / static_cast<double>(rows));
  fit.total_variance = ss_tot / static_cast<double>(rows);
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
  return fit;
}

/// Column layout for main effects (reference allele = index 0 per locus) and,
/// optionally, all pairwise products of main-effect columns.
class OneHotDesign {
 public:
  OneHotDesign(const SequenceSpace& space, bool pairwise) : space_(&space), pairwise_(pairwise) {
    std::uint32_t next = 1;
    for (std::size_t i = 0; i < space.loci(); ++i) {
      main_offset_.push_back(next);
      next += space.radix(i) - 1;
    }
    main_columns_ = next - 1;
    if (pairwise) {
      const auto n = space.loci();
      pair_offset_.assign(n * n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          pair_offset_[i * n + j] = next;
          next += (space.radix(i) - 1) * (space.radix(j) - 1);
        }
    }
    columns_ = next;
  }

  std::size_t columns() const { return columns_; }
  std::size_t main_columns() const { return main_columns_; }

  void active(GenotypeCode code, std::vector<std::uint32_t>& cols, std::vector<std::uint32_t>& scratch) const {
    cols.push_back(0);
    scratch.clear();
    const auto n = space_->loci();
    for (std::size_t i = 0; i < n; ++i) {
      const auto m = space_->radix(i);
      const auto d = static_cast<std::uint32_t>(code % m);
      code /= m;
      scratch.push_back(d);
      if (d != 0) cols.push_back(main_offset_[i] + d - 1);
    }
    if (!pairwise_) return;
    for (std::size_t i = 0; i < n; ++i) {
      if (scratch[i] == 0) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (scratch[j] == 0) continue;
        const auto mj = space_->radix(j);
        cols.push_back(pair_offset_[i * n + j] + (scratch[i] - 1) * (mj - 1) + (scratch[j] - 1));
      }
    }
  }

 private:
  const SequenceSpace* space_;
  bool pairwise_;
  std::vector<std::uint32_t> main_offset_;
  std::vector<std::uint32_t> pair_offset_;
  std::size_t main_columns_ = 0;
  std::size_t columns_ = 0;
};

}  // namespace fla
