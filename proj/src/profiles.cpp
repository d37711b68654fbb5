#include "profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"

namespace anisym {

StepProfile::StepProfile(std::vector<double> edges, std::vector<double> values)
    : edges_(std::move(edges)), values_(std::move(values)) {
  if (edges_.size() != values_.size() + 1 || values_.empty()) {
    throw ValidationError("StepProfile: needs K+1 edges for K >= 1 pieces");
  }
  if (edges_.front() != 0.0) {
    throw ValidationError("StepProfile: first edge must be 0");
  }
  for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
    if (!(edges_[k] < edges_[k + 1]) || !std::isfinite(edges_[k + 1])) {
      throw ValidationError("StepProfile: edges must increase strictly");
    }
  }
  prefix_.assign(edges_.size(), 0.0);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    prefix_[k + 1] = prefix_[k] + values_[k] * (edges_[k + 1] - edges_[k]);
  }
}

StepProfile StepProfile::constant(double value, double measure) {
  return StepProfile({0.0, measure}, {value});
}

double StepProfile::eval(double s) const {
  if (values_.empty()) return 0.0;
  if (s >= edges_.back()) return values_.back();
  if (s <= 0.0) return values_.front();
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - edges_.begin()) - 1;
  return values_[k];
}

double StepProfile::prefix_integral(double s) const {
  if (values_.empty() || s <= 0.0) return 0.0;
  if (s >= edges_.back()) return prefix_.back();
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - edges_.begin()) - 1;
  return prefix_[k] + values_[k] * (s - edges_[k]);
}

double StepProfile::integral() const {
  return prefix_.empty() ? 0.0 : prefix_.back();
}

double StepProfile::running_average(double s) const {
  if (values_.empty()) return 0.0;
  if (s <= 0.0) return values_.front();
  return prefix_integral(s) / s;
}

double StepProfile::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double StepProfile::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

bool StepProfile::non_increasing(double tol) const {
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
    if (values_[k + 1] > values_[k] + tol) return false;
  }
  return true;
}

bool StepProfile::non_negative() const {
  return min_value() >= 0.0;
}

StepProfile StepProfile::stretched(double new_measure) const {
  if (!(new_measure > 0.0)) {
    throw ValidationError("StepProfile::stretched: measure must be positive");
  }
  const double scale = new_measure / measure();
  std::vector<double> edges(edges_);
  for (auto& e : edges) e *= scale;
  edges.front() = 0.0;
  edges.back() = new_measure;
  return StepProfile(std::move(edges), values_);
}

StepProfile StepProfile::compressed() const {
  std::vector<double> edges{0.0}, values;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!values.empty() && values.back() == values_[k]) {
      edges.back() = edges_[k + 1];
    } else {
      values.push_back(values_[k]);
      edges.push_back(edges_[k + 1]);
    }
  }
  return StepProfile(std::move(edges), std::move(values));
}

StepProfile StepProfile::scaled(double scale) const {
  std::vector<double> values(values_);
  for (auto& v : values) v *= scale;
  return StepProfile(edges_, std::move(values));
}

RadialProfile::RadialProfile(int dim, std::vector<double> s,
                             std::vector<double> v)
    : dim_(dim), s_(std::move(s)), v_(std::move(v)) {
  if (dim_ < 1) throw ValidationError("RadialProfile: dimension must be >= 1");
  if (s_.size() != v_.size() || s_.size() < 2) {
    throw ValidationError("RadialProfile: needs >= 2 matching nodes");
  }
  if (s_.front() != 0.0) {
    throw ValidationError("RadialProfile: first node must sit at measure 0");
  }
  for (std::size_t k = 0; k + 1 < s_.size(); ++k) {
    if (!(s_[k] < s_[k + 1])) {
      throw ValidationError("RadialProfile: measure nodes must increase");
    }
  }
}

double RadialProfile::eval_measure(double s) const {
  if (s <= 0.0) return v_.front();
  if (s >= s_.back()) return v_.back();
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - s_.begin()) - 1;
  const double w = (s - s_[k]) / (s_[k + 1] - s_[k]);
  return v_[k] + w * (v_[k + 1] - v_[k]);
}

double RadialProfile::eval_radius(double rho) const {
  if (rho <= 0.0) return v_.front();
  return eval_measure(unit_ball_volume(dim_) * std::pow(rho, dim_));
}

double RadialProfile::radius_of(double s) const {
  if (s <= 0.0) return 0.0;
  return std::pow(s / unit_ball_volume(dim_), 1.0 / dim_);
}

double RadialProfile::max_value() const {
  return *std::max_element(v_.begin(), v_.end());
}

}  // namespace anisym
