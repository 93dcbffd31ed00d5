#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "fclt/errors.hpp"

namespace fclt {

/// A point of R^d. Coordinates must be finite; equality is exact
/// (empirical measures reuse the sampled values bit for bit, so no
/// epsilon merging is ever needed).
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) { check(); }
  Point(std::initializer_list<double> coords) : coords_(coords) { check(); }

  static Point scalar(double x) { return Point{x}; }

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  double norm() const {
    double s = 0;
    for (double c : coords_) s += c * c;
    return std::sqrt(s);
  }

  friend bool operator==(const Point& a, const Point& b) = default;
  friend auto operator<=>(const Point& a, const Point& b) {
    return a.coords_ <=> b.coords_;
  }

  /// Euclidean distance between two points of the same dimension.
  friend double distance(const Point& a, const Point& b) {
    if (a.dim() != b.dim())
      throw DimensionMismatchError("point dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }

  /// Concatenation, embedding a pair of R^d points into R^{2d}.
  friend Point concat(const Point& a, const Point& b) {
    std::vector<double> c = a.coords_;
    c.insert(c.end(), b.coords_.begin(), b.coords_.end());
    return Point(std::move(c));
  }

 private:
  void check() const {
    for (double c : coords_)
      if (!std::isfinite(c)) throw Error("non-finite point coordinate");
  }

  std::vector<double> coords_;
};

inline Point origin(std::size_t d) { return Point(std::vector<double>(d, 0.0)); }

}  // namespace fclt
