#pragma once

// Planar geometry primitives: rectangular windows, difference vectors, the
// directed sets used by directional K-functions, and the translational
// edge-correction weight.

#include <cmath>
#include <numbers>
#include <variant>

namespace fryiso {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double norm2() const { return x * x + y * y; }
  /// Polar angle in [0, 2pi). Undefined (returns 0) for the zero vector.
  double angle() const;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Unit vector u(alpha) = (cos alpha, sin alpha).
inline Vec2 unit_vector(double alpha) { return {std::cos(alpha), std::sin(alpha)}; }

/// Counter-clockwise rotation of z about the origin by phi.
Vec2 rotate(const Vec2& z, double phi);

/// Rotation with precomputed cos/sin, for hot loops that rotate many vectors by one angle.
constexpr Vec2 rotate(const Vec2& z, double cos_phi, double sin_phi) {
  return {z.x * cos_phi - z.y * sin_phi, z.x * sin_phi + z.y * cos_phi};
}

/// Wraps an angle into [0, 2pi).
double wrap_angle(double theta);

/// Distance between two directions on the circle, in [0, pi].
double angular_distance(double theta, double alpha);

/// Axis-aligned rectangular observation window.
class Window {
 public:
  /// Throws DomainError unless x_min < x_max, y_min < y_max and the area is finite.
  Window(double x_min, double x_max, double y_min, double y_max);

  /// Square [-side/2, side/2]^2 centred at the origin.
  static Window centered_square(double side);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {0.5 * (x_min_ + x_max_), 0.5 * (y_min_ + y_max_)}; }

  /// Closed containment.
  bool contains(const Vec2& p) const {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }

  /// Area of the Minkowski sum with the closed disk of radius r (rounded rectangle).
  double dilated_area(double r) const;

  /// Window expanded by `margin` on every side.
  Window expanded(double margin) const;

  bool operator==(const Window&) const = default;

 private:
  double x_min_;
  double x_max_;
  double y_min_;
  double y_max_;
};

/// |W intersect W_z| for the translate W_z = W + z.
double translation_overlap(const Window& w, const Vec2& z);

// Directed sets. Angles in radians; all sets are closed.

/// Disk sector S(alpha, eps, r): norm <= r and angular distance to alpha <= eps.
struct Sector {
  double alpha;
  double eps;
  double r;
};

/// Restricted double cone DS(alpha, eps, r) = Sector(alpha) union Sector(alpha + pi).
struct DoubleConeSector {
  double alpha;
  double eps;
  double r;
};

/// Cylinder Cyl(alpha, w, r): half-length r along u(alpha), half-width w across it.
struct Cylinder {
  double alpha;
  double w;
  double r;
};

/// Closed disk b_r(0).
struct Ball {
  double r;
};

using DirectedSet = std::variant<Sector, DoubleConeSector, Cylinder, Ball>;

/// Throws DomainError if the parameters violate the set's invariants.
void validate(const DirectedSet& set);

/// Closed membership test. The zero vector belongs to every set.
bool contains(const DirectedSet& set, const Vec2& z);

}  // namespace fryiso
