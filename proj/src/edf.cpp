#include "domtest/edf.hpp"

#include <algorithm>
#include <stdexcept>

namespace domtest {

namespace {

std::size_t count_le(std::span<const double> sorted, double v) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), v) -
                                  sorted.begin());
}

std::vector<double> shifted_prefix(std::span<const double> sorted, double origin) {
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + (sorted[i] - origin);
  return prefix;
}

}  // namespace

EdfSummary::EdfSummary(std::span<const Observation> observations, double origin_x,
                       double origin_z)
    : pairs_(observations.begin(), observations.end()), origin_x_(origin_x), origin_z_(origin_z) {
  if (pairs_.empty()) throw std::invalid_argument("EdfSummary needs at least one observation");
  xs_.reserve(pairs_.size());
  zs_.reserve(pairs_.size());
  double sum_x = 0.0;
  for (const Observation& o : pairs_) {
    xs_.push_back(o.x);
    zs_.push_back(o.z);
    sum_x += o.x;
  }
  std::sort(xs_.begin(), xs_.end());
  std::sort(zs_.begin(), zs_.end());
  if (xs_.front() < origin_x_ || zs_.front() < origin_z_) {
    throw std::invalid_argument("EdfSummary origins must not exceed the sample minima");
  }
  x_prefix_ = shifted_prefix(xs_, origin_x_);
  z_prefix_ = shifted_prefix(zs_, origin_z_);
  mean_x_ = sum_x / static_cast<double>(pairs_.size());
}

EdfSummary::EdfSummary(const PolicySample& sample, const SupportBox& box)
    : EdfSummary(sample.observations(), box.x_min, box.z_min) {}

double EdfSummary::cdf1(double x) const {
  return static_cast<double>(count_le(xs_, x)) / static_cast<double>(size());
}

double EdfSummary::cdf2(double z) const {
  return static_cast<double>(count_le(zs_, z)) / static_cast<double>(size());
}

double EdfSummary::joint_cdf(double x, double z) const {
  std::size_t count = 0;
  for (const Observation& o : pairs_) count += (o.x <= x && o.z <= z) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(size());
}

double EdfSummary::k_fn(double x, double z) const {
  return cdf1(x) + cdf2(z) - joint_cdf(x, z);
}

double EdfSummary::h1(double x) const {
  const std::size_t k = count_le(xs_, x);
  const double u = x - origin_x_;
  return (static_cast<double>(k) * u - x_prefix_[k]) / static_cast<double>(size());
}

double EdfSummary::s1(double x) const {
  const std::size_t n = size();
  const std::size_t k = count_le(xs_, x);
  const double u = x - origin_x_;
  return ((x_prefix_[n] - x_prefix_[k]) - static_cast<double>(n - k) * u) /
         static_cast<double>(n);
}

double EdfSummary::h2(double z) const {
  const std::size_t k = count_le(zs_, z);
  const double v = z - origin_z_;
  return (static_cast<double>(k) * v - z_prefix_[k]) / static_cast<double>(size());
}

double EdfSummary::h_joint(double x, double z) const {
  double acc = 0.0;
  for (const Observation& o : pairs_) {
    if (o.x < x && o.z < z) acc += (x - o.x) * (z - o.z);
  }
  return acc / static_cast<double>(size());
}

double EdfSummary::l_joint(double x, double z) const {
  x = std::max(x, origin_x_);
  z = std::max(z, origin_z_);
  return (z - origin_z_) * h1(x) + (x - origin_x_) * h2(z) - h_joint(x, z);
}

}  // namespace domtest
