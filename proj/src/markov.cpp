#include "fclt/markov.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fclt/errors.hpp"

namespace fclt {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kInvariantTol = 1e-10;

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& P) {
  const std::size_t k = P.size();
  Eigen::MatrixXd M(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) M(i, j) = P[i][j];
  return M;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MarkovModel MarkovModel::create(std::vector<Point> states,
                                std::vector<std::vector<double>> transition) {
  const std::size_t k = states.size();
  if (k == 0) throw Error("Markov model needs at least one state");
  for (const Point& s : states)
    if (s.dim() != states.front().dim())
      throw DimensionMismatchError("state embedding dimensions differ");
  if (transition.size() != k) throw Error("transition matrix row count mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    if (transition[i].size() != k) throw Error("transition matrix column count mismatch");
    double row = 0;
    for (double p : transition[i]) {
      if (p < 0.0 || p > 1.0) throw Error("transition probability outside [0,1]");
      row += p;
    }
    if (std::abs(row - 1.0) >= kRowSumTol)
      throw Error("transition row " + std::to_string(i) + " does not sum to 1");
  }

  Eigen::MatrixXd P = to_eigen(transition);

  if (k > 1) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(P);
    int at_one = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i] - std::complex<double>(1.0, 0.0)) < 1e-8)
        ++at_one;
    if (at_one != 1)
      throw NotErgodicError("eigenvalue 1 has multiplicity " + std::to_string(at_one));
  }

  // stationarity system: (P^T - I) mu = 0 with one balance equation
  // replaced by the normalization sum mu = 1
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(k, k);
  A.row(k - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(k - 1) = 1.0;
  Eigen::VectorXd mu = A.fullPivLu().solve(b);

  Eigen::VectorXd residual = P.transpose() * mu - mu;
  for (std::size_t i = 0; i < k; ++i) {
    if (mu(i) < -kInvariantTol)
      throw NotErgodicError("invariant weight negative at state " + std::to_string(i));
    if (std::abs(residual(i)) >= kInvariantTol)
      throw NotErgodicError("invariant measure residual exceeds tolerance");
  }

  MarkovModel model;
  model.states_ = std::move(states);
  model.P_ = std::move(transition);
  model.mu_weights_.assign(mu.data(), mu.data() + k);
  for (double& w : model.mu_weights_) w = std::max(w, 0.0);

  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < k; ++i)
    atoms.push_back({model.states_[i], model.mu_weights_[i]});
  model.mu_ = DiscreteMeasure::consolidate(model.states_.front().dim(), std::move(atoms));
  return model;
}

std::vector<double> MarkovModel::apply_kernel(const std::vector<double>& g) const {
  const std::size_t k = state_count();
  std::vector<double> out(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out[i] += P_[i][j] * g[j];
  return out;
}

double MarkovModel::mu_integral(const std::vector<double>& g) const {
  double s = 0;
  for (std::size_t i = 0; i < state_count(); ++i) s += mu_weights_[i] * g[i];
  return s;
}

std::vector<double> MarkovModel::on_states(
    const std::function<double(const Point&)>& f) const {
  std::vector<double> out;
  out.reserve(state_count());
  for (const Point& s : states_) out.push_back(f(s));
  return out;
}

std::vector<double> MarkovModel::push_forward(const std::vector<double>& sigma,
                                              std::size_t n_steps) const {
  const std::size_t k = state_count();
  std::vector<double> w = sigma;
  for (std::size_t step = 0; step < n_steps; ++step) {
    std::vector<double> next(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) next[j] += w[i] * P_[i][j];
    w = std::move(next);
  }
  return w;
}

DiscreteMeasure MarkovModel::weights_as_measure(const std::vector<double>& w) const {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < state_count(); ++i)
    if (w[i] > 0) atoms.push_back({states_[i], w[i]});
  return DiscreteMeasure::consolidate(dim(), std::move(atoms));
}

std::string MarkovModel::to_text() const {
  std::ostringstream out;
  out << "states=" << state_count() << " dim=" << dim() << "\n";
  for (const Point& s : states_) {
    bool sep = false;
    for (double c : s.coords()) {
      if (sep) out << " ";
      out << format_double(c);
      sep = true;
    }
    out << "\n";
  }
  for (const auto& row : P_) {
    bool sep = false;
    for (double p : row) {
      if (sep) out << " ";
      out << format_double(p);
      sep = true;
    }
    out << "\n";
  }
  return out.str();
}

MarkovModel MarkovModel::from_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("line 1: missing model header");
  std::size_t k = 0, d = 0;
  if (std::sscanf(header.c_str(), "states=%zu dim=%zu", &k, &d) != 2)
    throw ParseError("line 1: expected 'states=<k> dim=<d>'");
  std::vector<Point> states;
  for (std::size_t i = 0; i < k; ++i) {
    std::string line;
    if (!std::getline(in, line))
      throw ParseError("line " + std::to_string(i + 2) + ": missing state line");
    std::istringstream ls(line);
    std::vector<double> coords(d);
    for (std::size_t j = 0; j < d; ++j)
      if (!(ls >> coords[j]))
        throw ParseError("line " + std::to_string(i + 2) + ": missing coordinate");
    states.emplace_back(std::move(coords));
  }
  std::vector<std::vector<double>> P(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    std::string line;
    if (!std::getline(in, line))
      throw ParseError("line " + std::to_string(k + i + 2) + ": missing kernel row");
    std::istringstream ls(line);
    for (std::size_t j = 0; j < k; ++j)
      if (!(ls >> P[i][j]))
        throw ParseError("line " + std::to_string(k + i + 2) + ": missing probability");
  }
  return create(std::move(states), std::move(P));
}

MarkovModel MarkovModel::from_text(const std::string& text) {
  std::istringstream in(text);
  return from_text(in);
}

double LyapunovCertificate::contraction_factor(double beta) const {
  if (beta <= 0 || beta >= beta_max)
    throw InvalidBetaError("beta outside the admissible interval (0, " +
                           std::to_string(beta_max) + ")");
  double a = 1.0 - rho + beta * K;
  double b = (2.0 + beta * gamma * R + 2.0 * beta * K) / (2.0 + beta * R);
  double chi = std::max(a, b);
  if (chi <= 0 || chi >= 1)
    throw Error("contraction factor escaped (0,1): " + std::to_string(chi));
  return chi;
}

LyapunovCertificate verify_lyapunov(const MarkovModel& model, std::vector<double> V,
                                    double gamma, double K, double R, double rho,
                                    LyapunovCertificate::Variant variant, double ell) {
  const std::size_t k = model.state_count();
  if (V.size() != k) throw Error("V must be state-indexed");
  for (std::size_t i = 0; i < k; ++i)
    if (V[i] < 0) throw Error("V negative at state " + std::to_string(i));
  if (gamma <= 0 || gamma >= 1) throw Error("gamma must lie in (0,1)");
  if (K < 0) throw Error("K must be nonnegative");
  if (rho <= 0 || rho > 1) throw Error("rho must lie in (0,1]");

  const double tol = 1e-12;

  // L1 drift
  std::vector<double> PV = model.apply_kernel(V);
  for (std::size_t i = 0; i < k; ++i)
    if (PV[i] > gamma * V[i] + K + tol)
      throw Error("L1 drift fails at state " + std::to_string(i) + ": PV=" +
                  std::to_string(PV[i]) + " > " + std::to_string(gamma * V[i] + K));

  // radius condition
  double radius_floor = variant == LyapunovCertificate::Variant::L2
                            ? 2.0 * K / (1.0 - gamma)
                            : 4.0 * K / ((1.0 - std::sqrt(gamma)) * (1.0 - std::sqrt(gamma)));
  if (R <= radius_floor)
    throw Error("radius R=" + std::to_string(R) + " must exceed " +
                std::to_string(radius_floor));

  // minorization on the sublevel set
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y) {
      if (V[x] + V[y] > R) continue;
      double overlap = 0;
      for (std::size_t z = 0; z < k; ++z)
        overlap += std::min(model.transition()[x][z], model.transition()[y][z]);
      if (overlap < rho - tol)
        throw Error("minorization fails at pair (" + std::to_string(x) + "," +
                    std::to_string(y) + "): overlap " + std::to_string(overlap));
    }

  // mu(V) <= K/(1-gamma)
  double muV = model.mu_integral(V);
  if (muV > K / (1.0 - gamma) + tol)
    throw Error("invariant mean of V exceeds K/(1-gamma)");

  // sqrt-V drift from Jensen
  std::vector<double> sqrtV(k);
  for (std::size_t i = 0; i < k; ++i) sqrtV[i] = std::sqrt(V[i]);
  std::vector<double> PsqrtV = model.apply_kernel(sqrtV);
  for (std::size_t i = 0; i < k; ++i)
    if (PsqrtV[i] > std::sqrt(gamma) * sqrtV[i] + std::sqrt(K) + tol)
      throw Error("sqrt-V drift fails at state " + std::to_string(i));

  LyapunovCertificate cert;
  cert.V = std::move(V);
  cert.gamma = gamma;
  cert.K = K;
  cert.R = R;
  cert.rho = rho;
  cert.variant = variant;
  cert.ell = ell;
  double c_ell = 0;
  for (std::size_t i = 0; i < k; ++i)
    c_ell = std::max(c_ell,
                     std::pow(model.states()[i].norm(), ell) / (1.0 + cert.V[i]));
  cert.C_ell = c_ell;
  double denom = variant == LyapunovCertificate::Variant::L2 ? K : std::sqrt(K);
  cert.beta_max = denom > 0 ? rho / denom : std::numeric_limits<double>::infinity();
  return cert;
}

namespace {

PoissonSolution finish_solution(const MarkovModel& model, std::vector<double> f,
                                std::vector<double> F) {
  const std::size_t k = model.state_count();
  // centering mu(F) = 0
  double muF = model.mu_integral(F);
  for (double& v : F) v -= muF;

  PoissonSolution sol;
  sol.PF = model.apply_kernel(F);
  double muf = model.mu_integral(f);
  double residual = 0;
  for (std::size_t i = 0; i < k; ++i)
    residual = std::max(residual, std::abs(F[i] - sol.PF[i] - f[i] + muf));

  std::vector<double> F2(k), PF2(k);
  for (std::size_t i = 0; i < k; ++i) {
    F2[i] = F[i] * F[i];
    PF2[i] = sol.PF[i] * sol.PF[i];
  }
  sol.variance = model.mu_integral(model.apply_kernel(F2)) - model.mu_integral(PF2);
  sol.residual = residual;
  sol.f = std::move(f);
  sol.F = std::move(F);
  return sol;
}

}  // namespace

PoissonSolution solve_poisson_direct(const MarkovModel& model,
                                     const std::vector<double>& f) {
  const std::size_t k = model.state_count();
  if (f.size() != k) throw Error("observable must be state-indexed");
  double muf = model.mu_integral(f);

  // (I - P) F = f - mu(f) augmented with the centering row mu^T F = 0
  Eigen::MatrixXd A(k + 1, k);
  Eigen::VectorXd b(k + 1);
  const auto& P = model.transition();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) A(i, j) = (i == j ? 1.0 : 0.0) - P[i][j];
    b(i) = f[i] - muf;
  }
  for (std::size_t j = 0; j < k; ++j) A(k, j) = model.invariant_weights()[j];
  b(k) = 0.0;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < static_cast<Eigen::Index>(k))
    throw NotErgodicError("singular augmented Poisson system");
  Eigen::VectorXd F = qr.solve(b);

  PoissonSolution sol =
      finish_solution(model, f, std::vector<double>(F.data(), F.data() + k));
  if (sol.residual > 1e-10)
    throw NotErgodicError("Poisson residual exceeds tolerance after direct solve");
  return sol;
}

PoissonSolution solve_poisson_neumann(const MarkovModel& model,
                                      const std::vector<double>& f, double tol,
                                      const std::vector<double>& V) {
  const std::size_t k = model.state_count();
  if (f.size() != k) throw Error("observable must be state-indexed");
  if (tol <= 0) throw Error("tolerance must be positive");

  std::vector<double> weight(k, 1.0);
  if (!V.empty()) {
    if (V.size() != k) throw Error("V must be state-indexed");
    for (std::size_t i = 0; i < k; ++i) weight[i] = 1.0 + std::sqrt(V[i]);
  }

  double muf = model.mu_integral(f);
  std::vector<double> term(k), F(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) term[i] = f[i] - muf;

  const std::size_t max_terms = 1000000;
  for (std::size_t n = 0; n < max_terms; ++n) {
    double norm = 0;
    for (std::size_t i = 0; i < k; ++i)
      norm = std::max(norm, std::abs(term[i]) / weight[i]);
    if (norm < tol) return finish_solution(model, f, std::move(F));
    for (std::size_t i = 0; i < k; ++i) F[i] += term[i];
    term = model.apply_kernel(term);
  }
  throw ConvergenceFailureError("Neumann series did not converge within 1e6 terms");
}

double asymptotic_variance_markov(const MarkovModel& model, const Functional& U) {
  const DiscreteMeasure& mu = model.invariant_measure();
  std::vector<double> f = model.on_states(
      [&](const Point& x) { return U.derivative(mu, x); });
  PoissonSolution sol = solve_poisson_direct(model, f);

  // invariance of mu: mu(P(F^2)) = mu(F^2)
  std::vector<double> F2(sol.F.size());
  for (std::size_t i = 0; i < sol.F.size(); ++i) F2[i] = sol.F[i] * sol.F[i];
  double lhs = model.mu_integral(model.apply_kernel(F2));
  double rhs = model.mu_integral(F2);
  if (std::abs(lhs - rhs) > 1e-10)
    throw Error("invariance identity mu(P F^2) = mu(F^2) violated");
  return sol.variance;
}

double covariance_series_variance(const MarkovModel& model,
                                  const std::vector<double>& f, std::size_t lags) {
  double muf = model.mu_integral(f);
  std::vector<double> f2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f2[i] = f[i] * f[i];
  double total = model.mu_integral(f2) - muf * muf;

  std::vector<double> g = f;
  for (std::size_t lag = 1; lag <= lags; ++lag) {
    g = model.apply_kernel(g);
    std::vector<double> prod(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f[i] * g[i];
    total += 2.0 * (model.mu_integral(prod) - muf * muf);
  }
  return total;
}

std::vector<Point> sample_chain(const MarkovModel& model,
                                const std::vector<double>& nu1_weights,
                                std::size_t n, RngStream& rng) {
  const std::size_t k = model.state_count();
  if (nu1_weights.size() != k) throw Error("initial law must be state-indexed");
  if (n == 0) throw Error("chain length must be positive");

  auto draw = [&](const std::vector<double>& w) {
    double u = rng.next_double();
    double acc = 0;
    for (std::size_t i = 0; i < k; ++i) {
      acc += w[i];
      if (u < acc) return i;
    }
    return k - 1;
  };

  std::vector<Point> path;
  path.reserve(n);
  std::size_t s = draw(nu1_weights);
  path.push_back(model.states()[s]);
  for (std::size_t i = 1; i < n; ++i) {
    s = draw(model.transition()[s]);
    path.push_back(model.states()[s]);
  }
  return path;
}

}  // namespace fclt
