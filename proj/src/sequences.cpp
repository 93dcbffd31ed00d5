#include "fclt/sequences.hpp"

#include <cmath>
#include <map>

#include "fclt/errors.hpp"

namespace fclt {

namespace {

/// mu + scale * tau as a probability measure; throws when a weight goes
/// negative.
DiscreteMeasure perturb(const DiscreteMeasure& mu, const SignedDiscreteMeasure& tau,
                        double scale) {
  // merge first so the sign check sees net weights
  std::map<Point, double> net;
  for (const Atom& a : mu.atoms()) net[a.point] += a.weight;
  for (const Atom& a : tau.atoms()) net[a.point] += scale * a.weight;
  std::vector<Atom> atoms;
  for (const auto& [p, w] : net) {
    if (w < -1e-15) throw Error("perturbed family weight went negative");
    if (w > 0) atoms.push_back({p, w});
  }
  return DiscreteMeasure::consolidate(mu.dim(), std::move(atoms));
}

}  // namespace

SequenceFamily SequenceFamily::iid(DiscreteMeasure mu, double ell) {
  return SequenceFamily(Iid{std::move(mu)}, ell);
}

SequenceFamily SequenceFamily::cyclic(std::vector<DiscreteMeasure> thetas, double ell) {
  if (thetas.empty()) throw Error("cyclic family needs at least one theta");
  for (const DiscreteMeasure& t : thetas)
    if (t.dim() != thetas.front().dim())
      throw DimensionMismatchError("cyclic thetas have different dimensions");
  return SequenceFamily(Cyclic{std::move(thetas)}, ell);
}

SequenceFamily SequenceFamily::decaying(DiscreteMeasure mu, SignedDiscreteMeasure tau,
                                        double alpha, double c, double ell) {
  if (alpha <= 0.5) throw Error("decaying family needs alpha > 1/2");
  if (std::abs(tau.total_mass()) > 1e-12)
    throw Error("perturbation tau must have total mass 0");
  if (tau.norm_ell(ell) > c)
    throw Error("||tau||_ell exceeds the decay constant c");
  // positivity at the worst index i = 1 forces it for all i
  perturb(mu, tau, 1.0);
  return SequenceFamily(Decaying{std::move(mu), std::move(tau), alpha, c}, ell);
}

SequenceFamily SequenceFamily::sqrt_perturbed(DiscreteMeasure mu,
                                              SignedDiscreteMeasure tau, double ell) {
  if (std::abs(tau.total_mass()) > 1e-12)
    throw Error("perturbation tau must have total mass 0");
  perturb(mu, tau, 1.0);
  return SequenceFamily(SqrtPerturbed{std::move(mu), std::move(tau)}, ell);
}

SequenceFamily SequenceFamily::markov(std::shared_ptr<const MarkovModel> model,
                                      std::vector<double> nu1, double ell) {
  if (!model) throw Error("null Markov model");
  if (nu1.size() != model->state_count())
    throw Error("initial law must be state-indexed");
  return SequenceFamily(MarkovFamily{std::move(model), std::move(nu1)}, ell);
}

SequenceFamily SequenceFamily::ar1(double a, double noise_sd, double ell) {
  if (std::abs(a) >= 1) throw Error("AR(1) needs |a| < 1");
  if (noise_sd <= 0) throw Error("AR(1) needs a positive noise scale");
  return SequenceFamily(Ar1{a, noise_sd}, ell);
}

const SequenceFamily::MarkovFamily& SequenceFamily::markov_family() const {
  if (!is_markov()) throw UnsupportedError("not a Markov family");
  return std::get<MarkovFamily>(kind_);
}

DiscreteMeasure SequenceFamily::marginal(std::size_t i) const {
  if (i < 1) throw Error("marginal index starts at 1");
  if (const auto* k = std::get_if<Iid>(&kind_)) return k->mu;
  if (const auto* k = std::get_if<Cyclic>(&kind_))
    return k->thetas[(i - 1) % k->thetas.size()];
  if (const auto* k = std::get_if<Decaying>(&kind_))
    return perturb(k->mu, k->tau, std::pow(static_cast<double>(i), -k->alpha));
  if (const auto* k = std::get_if<SqrtPerturbed>(&kind_))
    return perturb(k->mu, k->tau, 1.0 / std::sqrt(static_cast<double>(i)));
  throw UnsupportedError("marginal laws are only available for independent kinds");
}

LimitData SequenceFamily::limit_data() const {
  if (const auto* k = std::get_if<Iid>(&kind_))
    return {k->mu, ProductMeasure2d::tensor(k->mu, k->mu),
            SignedDiscreteMeasure::zero(k->mu.dim())};
  if (const auto* k = std::get_if<Cyclic>(&kind_)) {
    const double w = 1.0 / static_cast<double>(k->thetas.size());
    std::vector<Atom> mu_raw;
    std::vector<PairAtom> eta_raw;
    for (const DiscreteMeasure& theta : k->thetas) {
      for (const Atom& a : theta.atoms()) mu_raw.push_back({a.point, w * a.weight});
      for (const Atom& a : theta.atoms())
        for (const Atom& b : theta.atoms())
          eta_raw.push_back({a.point, b.point, w * a.weight * b.weight});
    }
    std::size_t d = k->thetas.front().dim();
    return {DiscreteMeasure::consolidate(d, std::move(mu_raw)),
            ProductMeasure2d::consolidate(d, std::move(eta_raw)),
            SignedDiscreteMeasure::zero(d)};
  }
  if (const auto* k = std::get_if<Decaying>(&kind_))
    return {k->mu, ProductMeasure2d::tensor(k->mu, k->mu),
            SignedDiscreteMeasure::zero(k->mu.dim())};
  if (const auto* k = std::get_if<SqrtPerturbed>(&kind_))
    return {k->mu, ProductMeasure2d::tensor(k->mu, k->mu), k->tau.scaled(2.0)};
  throw UnsupportedError("limit data is only defined for independent kinds");
}

DiscreteMeasure SequenceFamily::limit_measure() const {
  if (const auto* k = std::get_if<MarkovFamily>(&kind_))
    return k->model->invariant_measure();
  if (is_ar1())
    throw UnsupportedError("the AR(1) limit law is continuous");
  return limit_data().mu;
}

DiscreteMeasure SequenceFamily::average_marginal(std::size_t n) const {
  if (n == 0) throw Error("average over an empty prefix");
  const double w = 1.0 / static_cast<double>(n);
  std::vector<Atom> raw;
  for (std::size_t i = 1; i <= n; ++i) {
    DiscreteMeasure nu_i = marginal(i);
    for (const Atom& a : nu_i.atoms()) raw.push_back({a.point, w * a.weight});
  }
  return DiscreteMeasure::consolidate(marginal(1).dim(), std::move(raw));
}

Point draw_from(const DiscreteMeasure& m, RngStream& rng) {
  double u = rng.next_double();
  double acc = 0;
  for (const Atom& a : m.atoms()) {
    acc += a.weight;
    if (u < acc) return a.point;
  }
  return m.atoms().back().point;
}

std::vector<Point> SequenceFamily::sample(std::size_t n, RngStream& rng) const {
  if (n == 0) throw Error("sample length must be positive");
  if (const auto* k = std::get_if<MarkovFamily>(&kind_))
    return sample_chain(*k->model, k->nu1, n, rng);
  if (const auto* k = std::get_if<Ar1>(&kind_)) {
    std::vector<Point> path;
    path.reserve(n);
    double x = rng.next_normal() * k->noise_sd / std::sqrt(1.0 - k->a * k->a);
    path.push_back(Point{x});
    for (std::size_t i = 1; i < n; ++i) {
      x = k->a * x + rng.next_normal() * k->noise_sd;
      path.push_back(Point{x});
    }
    return path;
  }
  std::vector<Point> path;
  path.reserve(n);
  // cyclic marginals repeat; avoid rebuilding perturbed laws where possible
  if (const auto* k = std::get_if<Cyclic>(&kind_)) {
    for (std::size_t i = 1; i <= n; ++i)
      path.push_back(draw_from(k->thetas[(i - 1) % k->thetas.size()], rng));
    return path;
  }
  if (const auto* k = std::get_if<Iid>(&kind_)) {
    for (std::size_t i = 1; i <= n; ++i) path.push_back(draw_from(k->mu, rng));
    return path;
  }
  for (std::size_t i = 1; i <= n; ++i) path.push_back(draw_from(marginal(i), rng));
  return path;
}

double SequenceFamily::tx_condition_partial_sum(double beta, std::size_t i_max) const {
  if (beta <= 0 || beta >= 1) throw Error("TX diagnostic needs beta in (0,1)");
  if (!is_independent())
    throw UnsupportedError("TX diagnostic needs finite-support marginal laws");
  double total = 0;
  for (std::size_t i = 1; i <= i_max; ++i) {
    double threshold = std::pow(static_cast<double>(i), beta);
    DiscreteMeasure nu = marginal(i);
    double expect = nu.integrate([&](const Point& x) {
      double v = std::pow(x.norm(), ell_);
      return v > threshold ? v - threshold : 0.0;
    });
    total += expect / static_cast<double>(i);
  }
  return total;
}

double SequenceFamily::lindeberg_partial(std::size_t n, double eps) const {
  if (!is_independent())
    throw UnsupportedError("Lindeberg diagnostic needs finite-support marginal laws");
  if (n == 0 || eps <= 0) throw Error("Lindeberg diagnostic needs n >= 1 and eps > 0");
  double threshold = static_cast<double>(n) * eps;
  double total = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    DiscreteMeasure nu = marginal(i);
    total += nu.integrate([&](const Point& x) {
      double v = std::pow(x.norm(), ell_);
      return v > threshold ? v : 0.0;
    });
  }
  return total / static_cast<double>(n);
}

}  // namespace fclt
