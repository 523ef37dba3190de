#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace pfmpm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Consistent unit system: mm, microseconds, N. Derived: stress N/mm^2 (MPa),
// mass N*us^2/mm (= 1e-9 kg), energy N*mm (mJ). Density given in kg/m^3 is
// numerically identical to the consistent unit (1 kg/m^3 = 1e-9 kg / mm^3).

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfDomainError : std::runtime_error {
  explicit OutOfDomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BlowUpError : std::runtime_error {
  explicit BlowUpError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class PlaneMode { Stress, Strain };

struct Rect {
  Vec2 min{0.0, 0.0};
  Vec2 max{0.0, 0.0};
  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  Vec2 size() const { return max - min; }
};

inline Mat2 rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

}  // namespace pfmpm
