#include "fclt/functionals.hpp"

#include <cmath>
#include <map>
#include <set>

#include "fclt/errors.hpp"
#include "fclt/quadrature.hpp"

namespace fclt {

namespace {

constexpr double kCostLimit = 1e8;

void check_cost(std::size_t support, std::size_t order) {
  double work = std::pow(static_cast<double>(support), static_cast<double>(order));
  if (work > kCostLimit)
    throw CostLimitError("U-statistic sum k^n exceeds the cost limit");
}

/// Sum of w(x_1)...w(x_k) phi-style terms over all k-tuples of atoms.
double tuple_sum(const std::vector<Atom>& atoms, std::size_t k,
                 const std::function<double(const std::vector<Point>&)>& term) {
  std::vector<Point> tuple(k);
  std::vector<std::size_t> idx(k, 0);
  double total = 0;
  while (true) {
    double w = 1;
    for (std::size_t j = 0; j < k; ++j) {
      w *= atoms[idx[j]].weight;
      tuple[j] = atoms[idx[j]].point;
    }
    total += w * term(tuple);
    std::size_t j = 0;
    for (; j < k; ++j) {
      if (++idx[j] < atoms.size()) break;
      idx[j] = 0;
    }
    if (j == k) break;
  }
  return total;
}

}  // namespace

Functional Functional::linear(ScalarField f, RegularityCertificate cert,
                              std::string name) {
  Functional u;
  u.kind_ = Kind::Linear;
  u.order_ = 1;
  u.f_ = std::move(f);
  u.cert_ = cert;
  u.name_ = std::move(name);
  return u;
}

Functional Functional::u_statistic(std::size_t n, SymmetricKernel phi,
                                   RegularityCertificate cert, std::string name) {
  if (n < 2) throw Error("U-statistic order must be at least 2");
  Functional u;
  u.kind_ = Kind::UStatistic;
  u.order_ = n;
  u.phi_ = std::move(phi);
  u.cert_ = cert;
  u.name_ = std::move(name);
  return u;
}

Functional Functional::composite(std::function<double(double)> g,
                                 std::function<double(double)> g_prime, ScalarField f,
                                 RegularityCertificate cert, std::string name) {
  Functional u;
  u.kind_ = Kind::Composite;
  u.order_ = 1;
  u.g_ = std::move(g);
  u.g_prime_ = std::move(g_prime);
  u.f_ = std::move(f);
  u.cert_ = cert;
  u.name_ = std::move(name);
  return u;
}

double Functional::evaluate(const DiscreteMeasure& m) const {
  switch (kind_) {
    case Kind::Linear:
      return m.integrate(f_);
    case Kind::Composite:
      return g_(m.integrate(f_));
    case Kind::UStatistic: {
      check_cost(m.size(), order_);
      return tuple_sum(m.atoms(), order_, phi_);
    }
  }
  throw Error("unreachable");
}

double Functional::derivative(const DiscreteMeasure& m, const Point& x) const {
  switch (kind_) {
    case Kind::Linear:
      return f_(x);
    case Kind::Composite:
      return g_prime_(m.integrate(f_)) * f_(x);
    case Kind::UStatistic: {
      check_cost(m.size(), order_);
      const Point zero = origin(m.dim());
      std::vector<Point> args(order_);
      auto term = [&](const std::vector<Point>& rest) {
        args[0] = x;
        for (std::size_t j = 1; j < order_; ++j) args[j] = rest[j - 1];
        double at_x = phi_(args);
        args[0] = zero;
        return at_x - phi_(args);
      };
      return static_cast<double>(order_) * tuple_sum(m.atoms(), order_ - 1, term);
    }
  }
  throw Error("unreachable");
}

double Functional::finite_difference_identity_residual(
    const DiscreteMeasure& m, const DiscreteMeasure& m_prime,
    std::size_t quadrature_nodes) const {
  if (quadrature_nodes < 1) throw Error("need at least one quadrature node");
  SignedDiscreteMeasure diff = SignedDiscreteMeasure::difference(m_prime, m);
  GaussLegendreRule rule(quadrature_nodes);
  double integral = rule.integrate([&](double s) {
    DiscreteMeasure ms = DiscreteMeasure::mixture(s, m_prime, m);
    return diff.integrate([&](const Point& y) { return derivative(ms, y); });
  });
  return std::abs(evaluate(m_prime) - evaluate(m) - integral);
}

namespace {

std::vector<Point> probe_grid(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  std::set<Point> pts;
  for (const Atom& a : m1.atoms()) pts.insert(a.point);
  for (const Atom& a : m2.atoms()) pts.insert(a.point);
  return {pts.begin(), pts.end()};
}

}  // namespace

std::pair<double, double> holder_modulus_probe(const Functional& U,
                                               const DiscreteMeasure& m1,
                                               const DiscreteMeasure& m2) {
  const RegularityCertificate& cert = U.certificate();
  double lhs = 0;
  for (const Point& x : probe_grid(m1, m2)) {
    double d = std::abs(U.derivative(m2, x) - U.derivative(m1, x)) /
               (1.0 + std::pow(x.norm(), cert.ell / 2.0));
    lhs = std::max(lhs, d);
  }
  SignedDiscreteMeasure diff = SignedDiscreteMeasure::difference(m2, m1);
  double integral = diff.integrate_abs([&](const Point& y) {
    return 1.0 + std::pow(y.norm(), cert.ell / (2.0 * cert.alpha));
  });
  double rhs = cert.holder_const * std::pow(integral, cert.alpha);
  return {lhs, rhs};
}

std::pair<double, double> holder_ru5_probe(const Functional& U,
                                           const DiscreteMeasure& m1,
                                           const DiscreteMeasure& m2) {
  const RegularityCertificate& cert = U.certificate();
  SignedDiscreteMeasure diff = SignedDiscreteMeasure::difference(m2, m1);
  double tv = diff.integrate_abs([](const Point&) { return 1.0; });
  double mom = diff.abs_moment(cert.ell);
  double worst = 0;
  for (const Point& x : probe_grid(m1, m2)) {
    double lhs = std::abs(U.derivative(m2, x) - U.derivative(m1, x));
    double base =
        (1.0 + std::pow(x.norm(), cert.ell)) * std::pow(tv, cert.alpha) +
        (1.0 + std::pow(x.norm(), cert.ell * (1.0 - cert.alpha))) *
            std::pow(mom, cert.alpha);
    if (base > 0) worst = std::max(worst, lhs / base);
  }
  return {worst, cert.holder_const};
}

namespace {

double first(const Point& p) { return p[0]; }

std::map<std::string, Functional> build_catalog() {
  std::map<std::string, Functional> cat;

  // U(m) = int x dm, derivative f(x) = x.
  cat.emplace("linear:identity",
              Functional::linear(first, {.ell = 2.0, .alpha = 1.0, .growth_const = 1.0,
                                         .holder_const = 1.0},
                                 "linear:identity"));

  // U(m) = Var(m) through phi(x,y) = (x-y)^2/2; derivative x^2 - 2 mean x.
  // ell = 6 so the vanishing condition sup_y phi/(1+|x|^3)(1+|y|^3) -> 0 holds.
  cat.emplace(
      "ustat2:variance",
      Functional::u_statistic(
          2,
          [](const std::vector<Point>& t) {
            double d = t[0][0] - t[1][0];
            return 0.5 * d * d;
          },
          {.ell = 6.0, .alpha = 1.0, .growth_const = 2.0, .holder_const = 2.0},
          "ustat2:variance"));

  // U(m) = (int x dm)^3 through phi(x,y,z) = xyz; derivative 3 mean^2 x.
  cat.emplace("ustat3:product",
              Functional::u_statistic(
                  3,
                  [](const std::vector<Point>& t) { return t[0][0] * t[1][0] * t[2][0]; },
                  {.ell = 6.0, .alpha = 1.0, .growth_const = 3.0, .holder_const = 6.0},
                  "ustat3:product"));

  // U(m) = (int x dm)^2; derivative 2 mean x.
  cat.emplace("composite:square_mean",
              Functional::composite([](double t) { return t * t; },
                                    [](double t) { return 2.0 * t; }, first,
                                    {.ell = 2.0, .alpha = 1.0, .growth_const = 2.0,
                                     .holder_const = 2.0},
                                    "composite:square_mean"));
  return cat;
}

const std::map<std::string, Functional>& catalog() {
  static const std::map<std::string, Functional> cat = build_catalog();
  return cat;
}

}  // namespace

const Functional& catalog_lookup(const std::string& id) {
  auto it = catalog().find(id);
  if (it == catalog().end()) throw ParseError("unknown functional id: " + id);
  return it->second;
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> out;
  for (const auto& [id, u] : catalog()) out.push_back(id);
  return out;
}

}  // namespace fclt
