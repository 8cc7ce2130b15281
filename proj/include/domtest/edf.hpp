#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "domtest/data_model.hpp"

namespace domtest {

/// Immutable empirical-distribution summary of one sample.
///
/// Every transform is evaluated exactly over the empirical measure:
///
///   cdf1(x)      = P_n[X <= x]           cdf2(z) = P_n[Z <= z]
///   joint_cdf    = P_n[X <= x, Z <= z]   k_fn    = cdf1 + cdf2 - joint_cdf
///   h1(x)        = E_n[(x - X)+]         s1(x)   = E_n[(X - x)+]
///   h2(z)        = E_n[(z - Z)+]         h_joint = E_n[(x - X)+ (z - Z)+]
///   l_joint(x,z) = integral of k_fn over [origin_x, x] x [origin_z, z]
///
/// The origins are the pooled support minima so that summaries of two arms
/// built against the same SupportBox are directly comparable. Marginal
/// queries are O(log n); the joint queries scan the sample and serve as the
/// serial reference for the grid kernel.
class EdfSummary {
 public:
  /// Requires at least one observation and origins at or below the sample minima.
  EdfSummary(std::span<const Observation> observations, double origin_x, double origin_z);
  EdfSummary(const PolicySample& sample, const SupportBox& box);

  std::size_t size() const noexcept { return pairs_.size(); }
  double origin_x() const noexcept { return origin_x_; }
  double origin_z() const noexcept { return origin_z_; }
  std::span<const Observation> pairs() const noexcept { return pairs_; }
  std::span<const double> xs_sorted() const noexcept { return xs_; }
  std::span<const double> zs_sorted() const noexcept { return zs_; }
  double mean_x() const noexcept { return mean_x_; }

  double cdf1(double x) const;
  double cdf2(double z) const;
  double joint_cdf(double x, double z) const;
  double k_fn(double x, double z) const;
  double h1(double x) const;
  double s1(double x) const;
  double h2(double z) const;
  double h_joint(double x, double z) const;
  /// Arguments below the origins are clamped to them (the integration
  /// rectangle is empty there).
  double l_joint(double x, double z) const;

 private:
  std::vector<Observation> pairs_;
  std::vector<double> xs_;
  std::vector<double> zs_;
  // prefix sums of (xs_ - origin_x_) and (zs_ - origin_z_); length n + 1
  std::vector<double> x_prefix_;
  std::vector<double> z_prefix_;
  double origin_x_;
  double origin_z_;
  double mean_x_ = 0.0;
};

}  // namespace domtest
