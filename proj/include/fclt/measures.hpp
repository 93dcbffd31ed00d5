#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fclt/point.hpp"

namespace fclt {

struct Atom {
  Point point;
  double weight;
};

/// Discrete probability measure on R^d: consolidated (no duplicate
/// points, canonical lexicographic order), weights normalized to sum 1.
/// Immutable after construction.
class DiscreteMeasure {
 public:
  /// Merges duplicate points by weight addition, drops zero-weight atoms,
  /// renormalizes and sorts. Throws EmptyMeasureError when no positive
  /// weight remains.
  static DiscreteMeasure consolidate(std::size_t dim, std::vector<Atom> raw);

  /// Uniform weights 1/N on the sample points, then consolidated.
  static DiscreteMeasure empirical(const std::vector<Point>& points);

  static DiscreteMeasure dirac(Point p);

  /// s*m1 + (1-s)*m2, s in [0,1].
  static DiscreteMeasure mixture(double s, const DiscreteMeasure& m1,
                                 const DiscreteMeasure& m2);

  std::size_t dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// Integral of |x|^ell.
  double moment(double ell) const;

  /// Integral of an arbitrary function of the atom points.
  template <class F>
  double integrate(F&& f) const {
    double s = 0;
    for (const Atom& a : atoms_) s += a.weight * f(a.point);
    return s;
  }

  /// Weight of an exact point, 0 when absent.
  double weight_of(const Point& p) const;

  std::string to_text() const;
  static DiscreteMeasure from_text(std::istream& in);
  static DiscreteMeasure from_text(const std::string& text);

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b);

 private:
  DiscreteMeasure(std::size_t dim, std::vector<Atom> atoms)
      : dim_(dim), atoms_(std::move(atoms)) {}

  std::size_t dim_ = 0;
  std::vector<Atom> atoms_;
};

/// Signed measure with finite support; consolidated, zero-weight atoms
/// removed. Total mass may be anything (typically 0 for differences).
class SignedDiscreteMeasure {
 public:
  static SignedDiscreteMeasure consolidate(std::size_t dim, std::vector<Atom> raw);
  static SignedDiscreteMeasure zero(std::size_t dim) {
    return SignedDiscreteMeasure(dim, {});
  }
  static SignedDiscreteMeasure from(const DiscreteMeasure& m);

  /// m1 - m2 as a signed measure.
  static SignedDiscreteMeasure difference(const DiscreteMeasure& m1,
                                          const DiscreteMeasure& m2);

  std::size_t dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;

  SignedDiscreteMeasure scaled(double c) const;
  SignedDiscreteMeasure plus(const SignedDiscreteMeasure& other) const;

  /// ||tau||_ell = sum |w_i| (1 + |x_i|^ell): the supremum of
  /// int f dtau over |f(x)| <= 1+|x|^ell, attained atomwise.
  double norm_ell(double ell) const;

  /// Integral of |x|^ell against the total variation |tau|.
  double abs_moment(double ell) const;

  template <class F>
  double integrate(F&& f) const {
    double s = 0;
    for (const Atom& a : atoms_) s += a.weight * f(a.point);
    return s;
  }

  template <class F>
  double integrate_abs(F&& f) const {
    double s = 0;
    for (const Atom& a : atoms_) s += std::abs(a.weight) * f(a.point);
    return s;
  }

  /// Positive/negative parts of the Hahn decomposition by sign split.
  std::pair<std::vector<Atom>, std::vector<Atom>> sign_split() const;

 private:
  SignedDiscreteMeasure(std::size_t dim, std::vector<Atom> atoms)
      : dim_(dim), atoms_(std::move(atoms)) {}

  std::size_t dim_ = 0;
  std::vector<Atom> atoms_;
};

struct PairAtom {
  Point x;
  Point y;
  double weight;
};

/// Probability measure on R^d x R^d with finite support.
class ProductMeasure2d {
 public:
  static ProductMeasure2d consolidate(std::size_t dim, std::vector<PairAtom> raw);

  /// Tensor product m1(dx) m2(dy).
  static ProductMeasure2d tensor(const DiscreteMeasure& m1,
                                 const DiscreteMeasure& m2);

  std::size_t dim() const { return dim_; }
  const std::vector<PairAtom>& atoms() const { return atoms_; }

  DiscreteMeasure marginal_first() const;
  DiscreteMeasure marginal_second() const;

  /// The same measure seen on R^{2d}, pairs concatenated.
  DiscreteMeasure flatten() const;

  template <class F>
  double integrate(F&& f) const {
    double s = 0;
    for (const PairAtom& a : atoms_) s += a.weight * f(a.x, a.y);
    return s;
  }

 private:
  ProductMeasure2d(std::size_t dim, std::vector<PairAtom> atoms)
      : dim_(dim), atoms_(std::move(atoms)) {}

  std::size_t dim_ = 0;
  std::vector<PairAtom> atoms_;
};

/// 2 d_TV(m1, m2) via the half-sum-of-absolute-differences (used as the
/// ell=0 oracle for norm_ell).
double two_total_variation(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

}  // namespace fclt
