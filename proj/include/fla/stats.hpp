#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fla::stats {

inline constexpr double kDegenerate = 1e-12;

/// Streaming sums for a Pearson correlation. Mergeable, so partial results can
/// be combined block by block. Uses shifted sums to limit cancellation.
class Correlation {
 public:
  void add(double x, double y) {
    if (n_ == 0) {
      shift_x_ = x;
      shift_y_ = y;
    }
    const double dx = x - shift_x_;
    const double dy = y - shift_y_;
    ++n_;
    sx_ += dx;
    sy_ += dy;
    sxx_ += dx * dx;
    syy_ += dy * dy;
    sxy_ += dx * dy;
  }

  void merge(const Correlation& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    // Re-express o's sums around this shift.
    const double ax = o.shift_x_ - shift_x_;
    const double ay = o.shift_y_ - shift_y_;
    const auto m = static_cast<double>(o.n_);
    sxx_ += o.sxx_ + 2 * ax * o.sx_ + m * ax * ax;
    syy_ += o.syy_ + 2 * ay * o.sy_ + m * ay * ay;
    sxy_ += o.sxy_ + ax * o.sy_ + ay * o.sx_ + m * ax * ay;
    sx_ += o.sx_ + m * ax;
    sy_ += o.sy_ + m * ay;
    n_ += o.n_;
  }

  std::size_t count() const { return n_; }

  double var_x() const { return n_ ? sxx_ / n_ - (sx_ / n_) * (sx_ / n_) : 0.0; }
  double var_y() const { return n_ ? syy_ / n_ - (sy_ / n_) * (sy_ / n_) : 0.0; }

  /// Undefined when fewer than two points or either variance is degenerate.
  std::optional<double> pearson() const {
    if (n_ < 2) return std::nullopt;
    const double n = static_cast<double>(n_);
    const double cxx = sxx_ - sx_ * sx_ / n;
    const double cyy = syy_ - sy_ * sy_ / n;
    const double cxy = sxy_ - sx_ * sy_ / n;
    if (cxx / n <= kDegenerate || cyy / n <= kDegenerate) return std::nullopt;
    return std::clamp(cxy / std::sqrt(cxx * cyy), -1.0, 1.0);
  }

 private:
  std::size_t n_ = 0;
  double shift_x_ = 0, shift_y_ = 0;
  double sx_ = 0, sy_ = 0, sxx_ = 0, syy_ = 0, sxy_ = 0;
};

inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  Correlation c;
  for (std::size_t i = 0; i < x.size(); ++i) c.add(x[i], y[i]);
  return c.pearson();
}

inline double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Population variance, two-pass.
inline double variance(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace fla::stats
