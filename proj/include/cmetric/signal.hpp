#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cmetric {

struct SmoothedSeries {
  std::int64_t first_frame = 0;
  double frame_rate_hz = 10.0;
  int window = 11;
  int poly_degree = 2;
  std::vector<double> values;
  std::vector<double> d1;  // per second
  std::vector<double> d2;  // per second squared

  std::size_t size() const noexcept { return values.size(); }
  std::int64_t last_frame() const noexcept { return first_frame + static_cast<std::int64_t>(values.size()) - 1; }
  double sle_at(std::int64_t frame) const;
  double sie_at(std::int64_t frame) const;
};

// Least-squares polynomial coefficients for samples at integer offsets
// lo..hi around the evaluation point. Row k maps samples to the x^k coefficient.
Eigen::MatrixXd local_fit_coefficients(int lo, int hi, int poly_degree);

SmoothedSeries smooth_and_differentiate(std::span<const double> values, int window, int poly_degree,
                                        double frame_rate_hz, std::int64_t first_frame = 0);

std::vector<double> sle(const SmoothedSeries& s);
std::vector<double> sie(const SmoothedSeries& s);

enum class ExtremumKind { minimum, maximum };

struct ExtremePoint {
  std::int64_t frame = 0;
  ExtremumKind kind = ExtremumKind::minimum;
  double sharpness = 0.0;
};

const char* to_string(ExtremumKind kind) noexcept;

// Sign changes of d1 between consecutive frames with |d1| > zero_tol. Each is
// placed at the frame of smallest |d1| in between (earliest on ties).
std::vector<ExtremePoint> find_extreme_points(const SmoothedSeries& s, int epsilon, double zero_tol);

// Frame of maximum SLE in [ta, tb], earliest on ties.
std::int64_t argmax_sle(const SmoothedSeries& s, std::int64_t ta, std::int64_t tb);

// Frames excluding the first and last poly_degree ones, which come from
// one-sided fits. Falls back to the whole range on very short series.
std::pair<std::int64_t, std::int64_t> confident_interval(const SmoothedSeries& s);

}  // namespace cmetric
