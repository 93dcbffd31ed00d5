#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fclt/measures.hpp"

namespace fclt {

/// Regularity data for a functional: moment order ell, radius r of the
/// W_ell ball where the derivative is defined (infinity when global),
/// Holder exponent alpha in (1/2, 1], and the growth constant C of the
/// bound |dU/dm(m,x)| <= C (1 + |x|^{ell/2}).
struct RegularityCertificate {
  double ell = 0;
  double radius = std::numeric_limits<double>::infinity();
  double alpha = 1.0;
  double growth_const = 1.0;
  /// Frozen constant of the single-integral Holder bound (see
  /// holder_modulus_probe); calibrated once per catalog entry.
  double holder_const = 1.0;
};

using ScalarField = std::function<double(const Point&)>;
using SymmetricKernel = std::function<double(const std::vector<Point>&)>;

/// A statistical functional U on probability measures, one of
///   Linear:     U(m) = int f dm
///   UStatistic: U(m) = int phi(x_1..x_n) m(dx_1)..m(dx_n), phi symmetric
///   Composite:  U(m) = g(int f dm)
/// with evaluator and linear functional derivative. The derivative is
/// defined up to an additive constant; U-statistics use the phi(0,...)
/// anchoring (so dU/dm(m, 0) = 0), Linear returns f raw.
class Functional {
 public:
  static Functional linear(ScalarField f, RegularityCertificate cert,
                           std::string name = "linear");
  static Functional u_statistic(std::size_t n, SymmetricKernel phi,
                                RegularityCertificate cert,
                                std::string name = "ustat");
  static Functional composite(std::function<double(double)> g,
                              std::function<double(double)> g_prime, ScalarField f,
                              RegularityCertificate cert,
                              std::string name = "composite");

  double evaluate(const DiscreteMeasure& m) const;
  double derivative(const DiscreteMeasure& m, const Point& x) const;

  const RegularityCertificate& certificate() const { return cert_; }
  const std::string& name() const { return name_; }
  std::size_t order() const { return order_; }  // 1 for linear/composite

  /// |U(m') - U(m) - int_0^1 int dU/dm(m_s, y) (m'-m)(dy) ds| with the
  /// s-integral by Gauss-Legendre.
  double finite_difference_identity_residual(const DiscreteMeasure& m,
                                             const DiscreteMeasure& m_prime,
                                             std::size_t quadrature_nodes) const;

 private:
  enum class Kind { Linear, UStatistic, Composite };

  Functional() = default;

  Kind kind_ = Kind::Linear;
  std::size_t order_ = 1;
  ScalarField f_;
  SymmetricKernel phi_;
  std::function<double(double)> g_, g_prime_;
  RegularityCertificate cert_;
  std::string name_;
};

/// RU6-style probe: lhs is the weighted sup-difference of derivatives on
/// a grid of atoms of both measures, rhs the certificate bound
/// C (int (1+|y|^{ell/(2 alpha)}) |m2-m1|(dy))^alpha.
std::pair<double, double> holder_modulus_probe(const Functional& U,
                                               const DiscreteMeasure& m1,
                                               const DiscreteMeasure& m2);

/// RU5 sibling with the pointwise two-term right-hand side
///   (1+|x|^ell) ||m2-m1||_0^alpha
///   + (1+|x|^{ell(1-alpha)}) (int |y|^ell |m2-m1|(dy))^alpha.
/// Returns (sup over the probe grid of |lhs(x)| / rhs-base(x),
/// certificate holder_const); the bound holds when first <= second.
std::pair<double, double> holder_ru5_probe(const Functional& U,
                                           const DiscreteMeasure& m1,
                                           const DiscreteMeasure& m2);

/// Built-in catalog addressable by id: "linear:identity",
/// "ustat2:variance", "ustat3:product", "composite:square_mean".
const Functional& catalog_lookup(const std::string& id);
std::vector<std::string> catalog_ids();

}  // namespace fclt
