//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "geoseq/metrics.h"

namespace geoseq {
namespace {

// Fast Gauss transform parameters: box side in units of h = sqrt(2) sigma,
// Hermite terms and interaction cutoff (exp(-6.5^2) ~ 5e-19).
constexpr double kBoxSide = 0.5;
constexpr int kTerms = 20;
constexpr double kCutoff = 6.5;

// Pairs up to which the sums are evaluated directly.
constexpr double kDirectPairs = 4e6;

constexpr std::size_t kBandwidthSamples = 1000;

std::vector<double> quantile_thin(std::span<const double> v, std::size_t cap) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() <= cap)
    return sorted;
  std::vector<double> out(cap);
  const double step = static_cast<double>(sorted.size()) / cap;
  for (std::size_t i = 0; i < cap; ++i)
    out[i] = sorted[static_cast<std::size_t>((i + 0.5) * step)];
  return out;
}

void check_finite(std::span<const double> v) {
  for (double a: v) {
    if (!std::isfinite(a))
      throw std::invalid_argument("non-finite MMD sample");
  }
}

struct Box {
  long long index;
  std::array<double, kTerms> moments;
};

double gauss_sum(std::span<const double> x, std::span<const double> y,
                 double sigma) {
  if (static_cast<double>(x.size()) * y.size() <= kDirectPairs)
    return gauss_sum_direct(x, y, sigma);
  return gauss_sum_fast(x, y, sigma);
}

}  // namespace

double gauss_sum_direct(std::span<const double> x, std::span<const double> y,
                        double sigma) {
  const double inv = 1.0 / (2 * sigma * sigma);
  double total = 0;
  for (double a: x) {
    double row = 0;
    for (double b: y) {
      const double d = a - b;
      row += std::exp(-d * d * inv);
    }
    total += row;
  }
  return total;
}

double gauss_sum_fast(std::span<const double> x, std::span<const double> y,
                      double sigma) {
  if (x.empty() || y.empty())
    return 0;
  const double h = std::sqrt(2.0) * sigma;
  const double side = kBoxSide * h;
  const double origin = *std::min_element(y.begin(), y.end());

  // Hermite moments of the sources, per nonempty box.
  std::vector<double> src(y.begin(), y.end());
  std::sort(src.begin(), src.end());
  std::vector<Box> boxes;
  for (double s: src) {
    const auto idx = static_cast<long long>(std::floor((s - origin) / side));
    if (boxes.empty() || boxes.back().index != idx)
      boxes.push_back({ idx, {} });
    const double center = origin + (idx + 0.5) * side;
    const double u = (s - center) / h;
    double term = 1;
    for (int n = 0; n < kTerms; ++n) {
      boxes.back().moments[n] += term;
      term *= u / (n + 1);
    }
  }

  const double reach = kCutoff * h + side;
  double total = 0;
  std::array<double, kTerms> herm;
  for (double t: x) {
    const auto lo = static_cast<long long>(std::floor((t - reach - origin) / side));
    const auto hi = static_cast<long long>(std::floor((t + reach - origin) / side));
    auto it = std::lower_bound(
        boxes.begin(), boxes.end(), lo,
        [](const Box &b, long long v) { return b.index < v; });
    for (; it != boxes.end() && it->index <= hi; ++it) {
      const double center = origin + (it->index + 0.5) * side;
      const double u = (t - center) / h;
      herm[0] = std::exp(-u * u);
      herm[1] = 2 * u * herm[0];
      for (int n = 1; n + 1 < kTerms; ++n)
        herm[n + 1] = 2 * u * herm[n] - 2 * n * herm[n - 1];
      double acc = 0;
      for (int n = 0; n < kTerms; ++n)
        acc += it->moments[n] * herm[n];
      total += acc;
    }
  }
  return total;
}

double median_bandwidth(std::span<const double> x, std::span<const double> y) {
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  pooled = quantile_thin(pooled, kBandwidthSamples);
  if (pooled.size() < 2)
    return 1;
  std::vector<double> dist;
  dist.reserve(pooled.size() * (pooled.size() - 1) / 2);
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = i + 1; j < pooled.size(); ++j)
      dist.push_back(std::abs(pooled[i] - pooled[j]));
  }
  auto mid = dist.begin() + dist.size() / 2;
  std::nth_element(dist.begin(), mid, dist.end());
  return *mid > 0 ? *mid : 1.0;
}

double mmd_squared(std::span<const double> x_in, std::span<const double> y_in,
                   const MmdOptions &opts) {
  if (x_in.empty() || y_in.empty())
    throw std::invalid_argument("MMD needs two nonempty samples");
  check_finite(x_in);
  check_finite(y_in);
  const auto x = quantile_thin(x_in, opts.max_samples);
  const auto y = quantile_thin(y_in, opts.max_samples);
  const double sigma = opts.sigma ? *opts.sigma : median_bandwidth(x, y);
  if (!(sigma > 0))
    throw std::invalid_argument("MMD bandwidth must be positive");

  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());
  const double sxx = gauss_sum(x, x, sigma);
  const double syy = gauss_sum(y, y, sigma);
  const double sxy = gauss_sum(x, y, sigma);

  if (opts.estimator == MmdEstimator::kBiased) {
    const double a = sxx / (m * m);
    const double b = syy / (n * n);
    const double c = sxy / (m * n);
    return a + b - 2 * c;
  }
  if (x.size() < 2 || y.size() < 2)
    throw std::invalid_argument("unbiased MMD needs at least two samples per set");
  const double a = (sxx - m) / (m * (m - 1));
  const double b = (syy - n) / (n * (n - 1));
  const double c = sxy / (m * n);
  return a + b - 2 * c;
}

double mmd(std::span<const double> x, std::span<const double> y,
           const MmdOptions &opts) {
  return std::sqrt(std::max(0.0, mmd_squared(x, y, opts)));
}

}  // namespace geoseq
