#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace gcsplan {

using Vec2 = Eigen::Vector2d;

/// Raised when an input document or scenario fails validation.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numeric routine is called outside its domain
/// (degenerate time-scaling, vanishing tangent, speed below the flat floor).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when no feasible plan exists; carries per-path diagnostics.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::string> causes)
      : std::runtime_error(what), causes_(std::move(causes)) {}
  const std::vector<std::string>& causes() const { return causes_; }

 private:
  std::vector<std::string> causes_;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Mean and unbiased standard deviation of a sample.
std::pair<double, double> mean_std(const std::vector<double>& samples);

}  // namespace gcsplan
