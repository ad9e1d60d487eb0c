#include "cmetric/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmetric/error.hpp"
#include "cmetric/simd.hpp"

namespace cmetric {

namespace {

std::size_t offset_of(const SmoothedSeries& s, std::int64_t frame) {
  if (frame < s.first_frame || frame > s.last_frame())
    throw Error(ErrorKind::range, "frame " + std::to_string(frame) + " outside the series");
  return static_cast<std::size_t>(frame - s.first_frame);
}

// Applies one coefficient row to the samples starting at `start`.
double apply(const double* values, const Eigen::VectorXd& row) {
  double out = 0.0;
  simd::correlate(values, static_cast<std::size_t>(row.size()), row.data(), static_cast<std::size_t>(row.size()), &out);
  return out;
}

}  // namespace

double SmoothedSeries::sle_at(std::int64_t frame) const { return std::abs(d1[offset_of(*this, frame)]); }
double SmoothedSeries::sie_at(std::int64_t frame) const { return std::abs(d2[offset_of(*this, frame)]); }

Eigen::MatrixXd local_fit_coefficients(int lo, int hi, int poly_degree) {
  if (hi < lo || poly_degree < 0) throw Error(ErrorKind::parameter, "bad local fit support");
  const int m = hi - lo + 1;
  const int p = std::min(poly_degree, m - 1);
  Eigen::MatrixXd v(m, p + 1);
  for (int r = 0; r < m; ++r) {
    double x = 1.0;
    for (int c = 0; c <= p; ++c) {
      v(r, c) = x;
      x *= static_cast<double>(lo + r);
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(poly_degree + 1, m);
  out.topRows(p + 1) = v.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(m, m));
  return out;
}

SmoothedSeries smooth_and_differentiate(std::span<const double> values, int window, int poly_degree,
                                        double frame_rate_hz, std::int64_t first_frame) {
  if (window < 3 || window % 2 == 0) throw Error(ErrorKind::parameter, "window must be an odd integer >= 3");
  if (poly_degree < 1) throw Error(ErrorKind::parameter, "poly_degree must be >= 1");
  if (window < poly_degree + 2) throw Error(ErrorKind::parameter, "window must be >= poly_degree + 2");
  if (!std::isfinite(frame_rate_hz) || frame_rate_hz <= 0.0) throw Error(ErrorKind::parameter, "frame rate must be positive");
  const std::size_t n = values.size();
  if (n < static_cast<std::size_t>(window))
    throw Error(ErrorKind::series_too_short, "series of " + std::to_string(n) + " frames is shorter than the window " +
                                                 std::to_string(window));

  SmoothedSeries s;
  s.first_frame = first_frame;
  s.frame_rate_hz = frame_rate_hz;
  s.window = window;
  s.poly_degree = poly_degree;
  s.values.assign(n, 0.0);
  s.d1.assign(n, 0.0);
  s.d2.assign(n, 0.0);

  const int h = window / 2;
  const int rows = std::min(poly_degree, 2) + 1;
  std::vector<double>* outs[3] = {&s.values, &s.d1, &s.d2};

  const Eigen::MatrixXd centre = local_fit_coefficients(-h, h, poly_degree);
  for (int r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = centre.row(r).transpose();
    simd::correlate(values.data(), n, row.data(), static_cast<std::size_t>(window), outs[r]->data() + h);
  }

  const auto last = static_cast<int>(n) - 1;
  for (int i = 0; i <= last; ++i) {
    if (i >= h && i <= last - h) continue;
    const int lo = std::max(0, i - h) - i;
    const int hi = std::min(last, i + h) - i;
    const Eigen::MatrixXd c = local_fit_coefficients(lo, hi, poly_degree);
    for (int r = 0; r < rows; ++r) (*outs[r])[static_cast<std::size_t>(i)] = apply(values.data() + i + lo, c.row(r).transpose());
  }

  const double f2 = frame_rate_hz * frame_rate_hz;
  for (std::size_t i = 0; i < n; ++i) {
    s.d1[i] *= frame_rate_hz;
    s.d2[i] *= 2.0 * f2;
  }
  return s;
}

std::vector<double> sle(const SmoothedSeries& s) {
  std::vector<double> out(s.d1.size());
  std::transform(s.d1.begin(), s.d1.end(), out.begin(), [](double v) { return std::abs(v); });
  return out;
}

std::vector<double> sie(const SmoothedSeries& s) {
  std::vector<double> out(s.d2.size());
  std::transform(s.d2.begin(), s.d2.end(), out.begin(), [](double v) { return std::abs(v); });
  return out;
}

const char* to_string(ExtremumKind kind) noexcept { return kind == ExtremumKind::maximum ? "maximum" : "minimum"; }

std::vector<ExtremePoint> find_extreme_points(const SmoothedSeries& s, int epsilon, double zero_tol) {
  if (epsilon < 1) throw Error(ErrorKind::parameter, "epsilon must be >= 1");
  if (!(zero_tol >= 0.0)) throw Error(ErrorKind::parameter, "zero_tol must be non-negative");
  const auto slev = sle(s);
  const std::size_t n = slev.size();
  auto sign_of = [&](std::size_t i) { return slev[i] <= zero_tol ? 0 : (s.d1[i] > 0.0 ? 1 : -1); };

  std::vector<ExtremePoint> out;
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < n; ++i) {
    const int si = sign_of(i);
    if (si == 0) continue;
    if (prev && sign_of(*prev) != si) {
      std::size_t t = *prev;
      for (std::size_t k = *prev + 1; k <= i; ++k)
        if (slev[k] < slev[t]) t = k;
      const std::size_t lo = t >= static_cast<std::size_t>(epsilon) ? t - static_cast<std::size_t>(epsilon) : 0;
      const std::size_t hi = std::min(n - 1, t + static_cast<std::size_t>(epsilon));
      const double peak = *std::max_element(slev.begin() + static_cast<std::ptrdiff_t>(lo), slev.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
      const double sharpness = peak - slev[t];
      if (sharpness > zero_tol)
        out.push_back({s.first_frame + static_cast<std::int64_t>(t),
                       sign_of(*prev) > 0 ? ExtremumKind::maximum : ExtremumKind::minimum, sharpness});
    }
    prev = i;
  }
  return out;
}

std::int64_t argmax_sle(const SmoothedSeries& s, std::int64_t ta, std::int64_t tb) {
  if (ta > tb) throw Error(ErrorKind::parameter, "empty interval");
  if (ta < s.first_frame || tb > s.last_frame()) throw Error(ErrorKind::range, "interval outside the series");
  std::int64_t best = ta;
  double best_v = std::abs(s.d1[static_cast<std::size_t>(ta - s.first_frame)]);
  for (std::int64_t t = ta + 1; t <= tb; ++t) {
    const double v = std::abs(s.d1[static_cast<std::size_t>(t - s.first_frame)]);
    if (v > best_v) {
      best_v = v;
      best = t;
    }
  }
  return best;
}

std::pair<std::int64_t, std::int64_t> confident_interval(const SmoothedSeries& s) {
  const auto p = static_cast<std::int64_t>(s.poly_degree);
  if (static_cast<std::int64_t>(s.size()) > 2 * p) return {s.first_frame + p, s.last_frame() - p};
  return {s.first_frame, s.last_frame()};
}

}  // namespace cmetric
