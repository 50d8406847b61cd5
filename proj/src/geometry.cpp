#include "fryiso/geometry.hpp"

#include <algorithm>
#include <string>

#include "fryiso/errors.hpp"

namespace fryiso {

double Vec2::angle() const {
  if (x == 0.0 && y == 0.0) return 0.0;
  return wrap_angle(std::atan2(y, x));
}

Vec2 rotate(const Vec2& z, double phi) { return rotate(z, std::cos(phi), std::sin(phi)); }

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angular_distance(double theta, double alpha) {
  return std::abs(std::remainder(theta - alpha, kTwoPi));
}

Window::Window(double x_min, double x_max, double y_min, double y_max)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw DomainError("window requires x_min < x_max and y_min < y_max");
  }
  if (!std::isfinite(area()) || area() <= 0.0) {
    throw DomainError("window area must be positive and finite");
  }
}

Window Window::centered_square(double side) {
  return Window(-0.5 * side, 0.5 * side, -0.5 * side, 0.5 * side);
}

double Window::dilated_area(double r) const {
  return area() + 2.0 * r * (width() + height()) + kPi * r * r;
}

Window Window::expanded(double margin) const {
  return Window(x_min_ - margin, x_max_ + margin, y_min_ - margin, y_max_ + margin);
}

double translation_overlap(const Window& w, const Vec2& z) {
  return std::max(0.0, w.width() - std::abs(z.x)) * std::max(0.0, w.height() - std::abs(z.y));
}

namespace {

struct Validator {
  void operator()(const Sector& s) const {
    if (!(s.eps >= 0.0 && 2.0 * s.eps <= kPi)) throw DomainError("sector needs 0 <= 2*eps <= pi");
    if (!(s.r >= 0.0)) throw DomainError("sector radius must be >= 0");
  }
  void operator()(const DoubleConeSector& s) const {
    if (!(s.eps > 0.0 && s.eps <= 0.5 * kPi)) throw DomainError("double cone needs 0 < eps <= pi/2");
    if (!(s.r >= 0.0)) throw DomainError("double cone radius must be >= 0");
  }
  void operator()(const Cylinder& c) const {
    if (!(c.w >= 0.0) || !(c.r >= 0.0)) throw DomainError("cylinder needs w >= 0 and r >= 0");
  }
  void operator()(const Ball& b) const {
    if (!(b.r >= 0.0)) throw DomainError("ball radius must be >= 0");
  }
};

bool in_sector(double alpha, double eps, double r, const Vec2& z) {
  if (z.norm() > r) return false;
  if (z.x == 0.0 && z.y == 0.0) return true;
  return angular_distance(z.angle(), alpha) <= eps;
}

struct Membership {
  const Vec2& z;
  bool operator()(const Sector& s) const { return in_sector(s.alpha, s.eps, s.r, z); }
  bool operator()(const DoubleConeSector& s) const {
    return in_sector(s.alpha, s.eps, s.r, z) || in_sector(s.alpha + kPi, s.eps, s.r, z);
  }
  bool operator()(const Cylinder& c) const {
    return std::abs(dot(z, unit_vector(c.alpha))) <= c.r &&
           std::abs(dot(z, unit_vector(c.alpha + 0.5 * kPi))) <= c.w;
  }
  bool operator()(const Ball& b) const { return z.norm() <= b.r; }
};

}  // namespace

void validate(const DirectedSet& set) { std::visit(Validator{}, set); }

bool contains(const DirectedSet& set, const Vec2& z) { return std::visit(Membership{z}, set); }

}  // namespace fryiso
