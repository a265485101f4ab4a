#include "bapfactor/yspace.hpp"

#include <cmath>
#include <random>

namespace bapfactor {

YSpace::YSpace(const SplittingPlan& plan) : plan_(&plan) {
  const NormedSpace& W = plan.W;
  unit_vectors_.reserve(plan.atoms.size());
  for (const RankOneAtom& atom : plan.atoms) {
    // y~_s = A~_s x* / ||A~_s x*|| with x* the support witness of ||A~_s||.
    SupportResult wit = support_maximize(plan.X, atom.f);
    Eigen::VectorXd image = atom.f(wit.maximizer) * atom.w.coords;
    double n = norm(W, image);
    if (wit.degenerate || n <= 1e-14 * std::max(1.0, norm(atom.w))) {
      unit_vectors_.emplace_back(Eigen::VectorXd::Zero(W.dim), W);
      line_scale_.push_back(0.0);
      zero_atom_.push_back(true);
    } else {
      Vec ytilde(image / n, W);
      // w_s = scale * y~_s; exact since both span the same line.
      double scale = ytilde.coords.dot(atom.w.coords) / ytilde.coords.squaredNorm();
      unit_vectors_.push_back(std::move(ytilde));
      line_scale_.push_back(scale);
      zero_atom_.push_back(false);
    }
  }
}

YElement YSpace::element(std::vector<double> coeffs) const {
  if (coeffs.size() != unit_vectors_.size())
    throw InputError("YSpace::element: coefficient count != atom count");
  for (size_t s = 0; s < coeffs.size(); ++s) {
    if (!std::isfinite(coeffs[s])) throw InputError("YSpace::element: non-finite coefficient");
    if (zero_atom_[s] && coeffs[s] != 0.0)
      throw InputError("YSpace::element: nonzero coefficient on a zero atom line");
  }
  return YElement{std::move(coeffs), this};
}

double YSpace::y_norm(const YElement& y) const {
  if (y.space != this) throw InputError("y_norm: element of a different Y space");
  Eigen::VectorXd running = Eigen::VectorXd::Zero(plan_->W.dim);
  double best = 0.0;
  for (size_t s = 0; s < y.coeffs.size(); ++s) {
    running += y.coeffs[s] * unit_vectors_[s].coords;
    best = std::max(best, norm(plan_->W, running));
  }
  return best;
}

YElement YSpace::lift(const Vec& x) const {
  if (x.space != plan_->X) throw InputError("lift: vector not in X");
  std::vector<double> coeffs(unit_vectors_.size(), 0.0);
  for (size_t s = 0; s < plan_->atoms.size(); ++s) {
    if (zero_atom_[s]) continue;
    coeffs[s] = plan_->atoms[s].f(x) * line_scale_[s];
  }
  return YElement{std::move(coeffs), this};
}

Vec YSpace::sum_j(const YElement& y) const {
  if (y.space != this) throw InputError("sum_j: element of a different Y space");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(plan_->W.dim);
  for (size_t s = 0; s < y.coeffs.size(); ++s) out += y.coeffs[s] * unit_vectors_[s].coords;
  return Vec(out, plan_->W);
}

YSpace::FactorizationReport YSpace::verify_factorization(const FiniteRankOperator& T,
                                                         const std::vector<Vec>& test_set) const {
  FactorizationReport rep;
  rep.pass = true;
  for (const Vec& x : test_set) {
    Vec jx = sum_j(lift(x));
    Eigen::VectorXd diff = jx.coords - T.matrix() * x.coords;
    double res = norm(plan_->W, diff);
    double bound = 1e-8 * plan_->norm_T * norm(x);
    rep.residuals.push_back(res);
    rep.bounds.push_back(bound);
    rep.max_residual = std::max(rep.max_residual, res);
    if (res > bound) rep.pass = false;
  }
  return rep;
}

YSpace::MonotonicityReport YSpace::basis_monotonicity_check(int coeff_samples,
                                                            std::uint64_t seed) const {
  MonotonicityReport rep;
  rep.samples = coeff_samples;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int count = atom_count();
  for (int t = 0; t < coeff_samples; ++t) {
    std::vector<double> c(count);
    for (int s = 0; s < count; ++s) c[s] = zero_atom_[s] ? 0.0 : gauss(rng);

    // |||prefix m||| is the running max of the W-norms of the partial sums.
    Eigen::VectorXd running = Eigen::VectorXd::Zero(plan_->W.dim);
    double prev = 0.0;  // m = 0
    double running_max = 0.0;
    for (int m = 1; m <= count; ++m) {
      running += c[m - 1] * unit_vectors_[m - 1].coords;
      running_max = std::max(running_max, norm(plan_->W, running));
      rep.max_violation = std::max(rep.max_violation, prev - running_max);
      prev = running_max;
    }
  }
  rep.pass = rep.max_violation <= 1e-12;
  return rep;
}

BapCertificate YSpace::certificate_from_factorization() const {
  BapCertificate cert;
  cert.C = 5.0 * plan_->K;
  cert.norm_T = plan_->norm_T;

  // Deterministic test set: the standard basis of X.
  for (int i = 0; i < plan_->X.dim; ++i)
    cert.test_set.emplace_back(Eigen::VectorXd::Unit(plan_->X.dim, i), plan_->X);

  Eigen::MatrixXd total = plan_->total().matrix();
  Eigen::MatrixXd running = Eigen::MatrixXd::Zero(plan_->W.dim, plan_->X.dim);
  const int count = atom_count();
  for (int n = 1; n <= count; ++n) {
    running += plan_->atoms[n - 1].as_operator().matrix();
    FiniteRankOperator rn(running, plan_->X, plan_->W);
    cert.approximant_norms.push_back(operator_norm(rn));
    double sup = 0.0;
    for (const Vec& x : cert.test_set)
      sup = std::max(sup, norm(plan_->W, Eigen::VectorXd(running * x.coords - total * x.coords)));
    cert.epsilon_schedule.push_back(sup);
    cert.approximants.push_back(std::move(rn));
  }
  if (count == 0) {
    // Degenerate plan (T = 0): the empty sum already reconstructs T.
    cert.approximants.push_back(FiniteRankOperator::zero(plan_->X, plan_->W));
    cert.approximant_norms.push_back(0.0);
    cert.epsilon_schedule.push_back(0.0);
  }
  return cert;
}

}  // namespace bapfactor
