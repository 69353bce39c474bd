#include "pmiprof/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pmiprof/mathutil.hpp"

namespace pmiprof {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

// Lower Cholesky factor; requires symmetry and min eigenvalue > 1e-12.
Matrix checked_cholesky(const Matrix& cov, const char* what) {
  if (cov.rows() != cov.cols()) throw NumericError(std::string(what) + ": covariance not square");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + cov.cwiseAbs().maxCoeff()))
    throw NumericError(std::string(what) + ": covariance not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-12)
    throw NumericError(std::string(what) + ": covariance not positive definite");
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericError(std::string(what) + ": Cholesky factorization failed");
  return llt.matrixL();
}

double chol_log_det(const Matrix& L) {
  return 2.0 * L.diagonal().array().log().sum();
}

// -0.5 * |L^-1 (v - mu)|^2 for the Gaussian quadratic form.
double gauss_quad(const Matrix& L, const Vector& mu, const CVecRef& v) {
  Vector z = L.template triangularView<Eigen::Lower>().solve(v - mu);
  return -0.5 * z.squaredNorm();
}

double poisson_log_pmf(double y, double mean) {
  return -mean + y * std::log(mean) - std::lgamma(y + 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Base conveniences
// ---------------------------------------------------------------------------

Matrix MarginalDistribution::sample(Rng& rng, Eigen::Index n) const {
  Matrix out(n, dim());
  Vector row(dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    sample_point(rng, row);
    out.row(i) = row;
  }
  return out;
}

PairedSample JointDistribution::sample(Rng& rng, Eigen::Index n) const {
  if (n < 0) throw NumericError("sample: n must be >= 0");
  PairedSample s;
  s.xs.resize(n, dim_x());
  s.ys.resize(n, dim_y());
  Vector x(dim_x()), y(dim_y());
  for (Eigen::Index i = 0; i < n; ++i) {
    sample_pair(rng, x, y);
    s.xs.row(i) = x;
    s.ys.row(i) = y;
  }
  return s;
}

PairedSample JointDistribution::sample(Seed seed, Eigen::Index n) const {
  Rng rng(seed);
  return sample(rng, n);
}

void JointDistribution::check_point(const CVecRef& x, const CVecRef& y) const {
  if (x.size() != dim_x() || y.size() != dim_y())
    throw DimensionError("point dimensions do not match distribution");
  check_finite(x, "log_pdf");
  check_finite(y, "log_pdf");
}

// ---------------------------------------------------------------------------
// Marginals
// ---------------------------------------------------------------------------

GaussianMarginal::GaussianMarginal(Vector mean, Matrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (cov_.rows() != mean_.size()) throw DimensionError("GaussianMarginal: mean/cov mismatch");
  chol_ = checked_cholesky(cov_, "GaussianMarginal");
  log_norm_ = -0.5 * (double(mean_.size()) * kLog2Pi + chol_log_det(chol_));
}

void GaussianMarginal::sample_point(Rng& rng, VecRef out) const {
  Vector z(mean_.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  out = mean_ + chol_ * z;
}

double GaussianMarginal::log_pdf(const CVecRef& v) const {
  if (v.size() != mean_.size()) throw DimensionError("GaussianMarginal: bad point dimension");
  check_finite(v, "GaussianMarginal");
  return log_norm_ + gauss_quad(chol_, mean_, v);
}

StudentMarginal::StudentMarginal(Vector location, Matrix dispersion, double dof)
    : loc_(std::move(location)), disp_(std::move(dispersion)), dof_(dof) {
  if (dof_ <= 0.0) throw NumericError("StudentMarginal: dof must be positive");
  if (disp_.rows() != loc_.size()) throw DimensionError("StudentMarginal: location/dispersion mismatch");
  chol_ = checked_cholesky(disp_, "StudentMarginal");
  const double d = double(loc_.size());
  log_norm_ = std::lgamma(0.5 * (dof_ + d)) - std::lgamma(0.5 * dof_) -
              0.5 * d * std::log(dof_ * std::numbers::pi) - 0.5 * chol_log_det(chol_);
}

void StudentMarginal::sample_point(Rng& rng, VecRef out) const {
  Vector z(loc_.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  const double w = rng.chi_squared(dof_);
  out = loc_ + chol_ * z * std::sqrt(dof_ / w);
}

double StudentMarginal::log_pdf(const CVecRef& v) const {
  if (v.size() != loc_.size()) throw DimensionError("StudentMarginal: bad point dimension");
  check_finite(v, "StudentMarginal");
  const double q = -2.0 * gauss_quad(chol_, loc_, v);
  const double d = double(loc_.size());
  return log_norm_ - 0.5 * (dof_ + d) * std::log1p(q / dof_);
}

UniformMarginal::UniformMarginal(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw DimensionError("UniformMarginal: bound size mismatch");
  if (((upper_ - lower_).array() <= 0.0).any())
    throw NumericError("UniformMarginal: upper must exceed lower");
  log_density_ = -(upper_ - lower_).array().log().sum();
}

void UniformMarginal::sample_point(Rng& rng, VecRef out) const {
  for (Eigen::Index i = 0; i < lower_.size(); ++i) out[i] = rng.uniform(lower_[i], upper_[i]);
}

double UniformMarginal::log_pdf(const CVecRef& v) const {
  if (v.size() != lower_.size()) throw DimensionError("UniformMarginal: bad point dimension");
  check_finite(v, "UniformMarginal");
  const bool inside = (v.array() >= lower_.array()).all() && (v.array() <= upper_.array()).all();
  return inside ? log_density_ : kNegInf;
}

CategoricalMarginal::CategoricalMarginal(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw NumericError("CategoricalMarginal: empty probability vector");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw NumericError("CategoricalMarginal: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw NumericError("CategoricalMarginal: probabilities must sum to 1");
}

void CategoricalMarginal::sample_point(Rng& rng, VecRef out) const {
  out[0] = double(rng.categorical(probs_));
}

double CategoricalMarginal::log_pdf(const CVecRef& v) const {
  if (v.size() != 1) throw DimensionError("CategoricalMarginal: bad point dimension");
  check_finite(v, "CategoricalMarginal");
  const double lab = v[0];
  const long k = std::lround(lab);
  if (std::abs(lab - double(k)) > 1e-9 || k < 0 || k >= long(probs_.size()))
    throw NumericError("CategoricalMarginal: invalid label");
  return probs_[std::size_t(k)] > 0.0 ? std::log(probs_[std::size_t(k)]) : kNegInf;
}

// ---------------------------------------------------------------------------
// MultivariateNormal
// ---------------------------------------------------------------------------

MultivariateNormal::MultivariateNormal(Vector mean, Matrix cov, int dim_x, int dim_y)
    : mean_(std::move(mean)), cov_(std::move(cov)), m_(dim_x), n_(dim_y) {
  const int d = m_ + n_;
  if (m_ < 1 || n_ < 1) throw DimensionError("MultivariateNormal: split must be positive");
  if (mean_.size() != d || cov_.rows() != d)
    throw DimensionError("MultivariateNormal: mean/cov/split mismatch");
  chol_joint_ = checked_cholesky(cov_, "MultivariateNormal");
  chol_x_ = checked_cholesky(cov_.topLeftCorner(m_, m_), "MultivariateNormal (X block)");
  chol_y_ = checked_cholesky(cov_.bottomRightCorner(n_, n_), "MultivariateNormal (Y block)");
  log_norm_joint_ = -0.5 * (d * kLog2Pi + chol_log_det(chol_joint_));
  log_norm_x_ = -0.5 * (m_ * kLog2Pi + chol_log_det(chol_x_));
  log_norm_y_ = -0.5 * (n_ * kLog2Pi + chol_log_det(chol_y_));
}

void MultivariateNormal::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  Vector z(m_ + n_);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  Vector v = mean_ + chol_joint_ * z;
  x = v.head(m_);
  y = v.tail(n_);
}

double MultivariateNormal::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  Vector v(m_ + n_);
  v << x, y;
  return log_norm_joint_ + gauss_quad(chol_joint_, mean_, v);
}

double MultivariateNormal::log_pdf_x(const CVecRef& x) const {
  if (x.size() != m_) throw DimensionError("MultivariateNormal: bad X dimension");
  check_finite(x, "MultivariateNormal");
  return log_norm_x_ + gauss_quad(chol_x_, mean_.head(m_), x);
}

double MultivariateNormal::log_pdf_y(const CVecRef& y) const {
  if (y.size() != n_) throw DimensionError("MultivariateNormal: bad Y dimension");
  check_finite(y, "MultivariateNormal");
  return log_norm_y_ + gauss_quad(chol_y_, mean_.tail(n_), y);
}

MarginalPtr MultivariateNormal::marginal_x() const {
  return std::make_shared<GaussianMarginal>(mean_.head(m_), cov_.topLeftCorner(m_, m_));
}

MarginalPtr MultivariateNormal::marginal_y() const {
  return std::make_shared<GaussianMarginal>(mean_.tail(n_), cov_.bottomRightCorner(n_, n_));
}

// ---------------------------------------------------------------------------
// MultivariateStudent
// ---------------------------------------------------------------------------

MultivariateStudent::MultivariateStudent(Vector location, Matrix dispersion, double dof,
                                         int dim_x, int dim_y)
    : loc_(std::move(location)), disp_(std::move(dispersion)), dof_(dof), m_(dim_x), n_(dim_y) {
  const int d = m_ + n_;
  if (m_ < 1 || n_ < 1) throw DimensionError("MultivariateStudent: split must be positive");
  if (loc_.size() != d || disp_.rows() != d)
    throw DimensionError("MultivariateStudent: location/dispersion/split mismatch");
  if (dof_ <= 0.0) throw NumericError("MultivariateStudent: dof must be positive");
  chol_joint_ = checked_cholesky(disp_, "MultivariateStudent");
  log_norm_joint_ = std::lgamma(0.5 * (dof_ + d)) - std::lgamma(0.5 * dof_) -
                    0.5 * d * std::log(dof_ * std::numbers::pi) - 0.5 * chol_log_det(chol_joint_);
}

void MultivariateStudent::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  Vector z(m_ + n_);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  // The X and Y blocks share the chi-squared mixing variable; that is what
  // couples them even under an identity dispersion.
  const double w = rng.chi_squared(dof_);
  Vector v = loc_ + chol_joint_ * z * std::sqrt(dof_ / w);
  x = v.head(m_);
  y = v.tail(n_);
}

double MultivariateStudent::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  Vector v(m_ + n_);
  v << x, y;
  const double q = -2.0 * gauss_quad(chol_joint_, loc_, v);
  return log_norm_joint_ - 0.5 * (dof_ + double(m_ + n_)) * std::log1p(q / dof_);
}

double MultivariateStudent::log_pdf_x(const CVecRef& x) const {
  return StudentMarginal(loc_.head(m_), disp_.topLeftCorner(m_, m_), dof_).log_pdf(x);
}

double MultivariateStudent::log_pdf_y(const CVecRef& y) const {
  return StudentMarginal(loc_.tail(n_), disp_.bottomRightCorner(n_, n_), dof_).log_pdf(y);
}

MarginalPtr MultivariateStudent::marginal_x() const {
  return std::make_shared<StudentMarginal>(loc_.head(m_), Matrix(disp_.topLeftCorner(m_, m_)), dof_);
}

MarginalPtr MultivariateStudent::marginal_y() const {
  return std::make_shared<StudentMarginal>(loc_.tail(n_), Matrix(disp_.bottomRightCorner(n_, n_)), dof_);
}

// ---------------------------------------------------------------------------
// UniformBox
// ---------------------------------------------------------------------------

UniformBox::UniformBox(Vector lower, Vector upper, int dim_x, int dim_y)
    : lower_(std::move(lower)), upper_(std::move(upper)), m_(dim_x), n_(dim_y) {
  if (m_ < 1 || n_ < 1) throw DimensionError("UniformBox: split must be positive");
  if (lower_.size() != m_ + n_ || upper_.size() != m_ + n_)
    throw DimensionError("UniformBox: bounds/split mismatch");
  if (((upper_ - lower_).array() <= 0.0).any())
    throw NumericError("UniformBox: upper must exceed lower elementwise");
}

void UniformBox::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  for (int i = 0; i < m_; ++i) x[i] = rng.uniform(lower_[i], upper_[i]);
  for (int i = 0; i < n_; ++i) y[i] = rng.uniform(lower_[m_ + i], upper_[m_ + i]);
}

double UniformBox::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  Vector v(m_ + n_);
  v << x, y;
  const bool inside = (v.array() >= lower_.array()).all() && (v.array() <= upper_.array()).all();
  return inside ? -(upper_ - lower_).array().log().sum() : kNegInf;
}

double UniformBox::log_pdf_x(const CVecRef& x) const {
  if (x.size() != m_) throw DimensionError("UniformBox: bad X dimension");
  check_finite(x, "UniformBox");
  const auto lo = lower_.head(m_), hi = upper_.head(m_);
  const bool inside = (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  return inside ? -(hi - lo).array().log().sum() : kNegInf;
}

double UniformBox::log_pdf_y(const CVecRef& y) const {
  if (y.size() != n_) throw DimensionError("UniformBox: bad Y dimension");
  check_finite(y, "UniformBox");
  const auto lo = lower_.tail(n_), hi = upper_.tail(n_);
  const bool inside = (y.array() >= lo.array()).all() && (y.array() <= hi.array()).all();
  return inside ? -(hi - lo).array().log().sum() : kNegInf;
}

MarginalPtr UniformBox::marginal_x() const {
  return std::make_shared<UniformMarginal>(lower_.head(m_), upper_.head(m_));
}

MarginalPtr UniformBox::marginal_y() const {
  return std::make_shared<UniformMarginal>(lower_.tail(n_), upper_.tail(n_));
}

// ---------------------------------------------------------------------------
// DiscreteContinuousMixture
// ---------------------------------------------------------------------------

DiscreteContinuousMixture::DiscreteContinuousMixture(std::vector<double> weights,
                                                     std::vector<Component> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (components_.empty()) throw NumericError("DiscreteContinuousMixture: no components");
  if (weights_.size() != components_.size())
    throw DimensionError("DiscreteContinuousMixture: weights/components mismatch");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw NumericError("DiscreteContinuousMixture: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw NumericError("DiscreteContinuousMixture: weights must sum to 1");
  n_labels_ = int(components_[0].y_probs.size());
  const int dx = components_[0].x_part->dim();
  for (const auto& c : components_) {
    if (!c.x_part || c.x_part->dim() != dx)
      throw DimensionError("DiscreteContinuousMixture: inconsistent X dimension");
    if (int(c.y_probs.size()) != n_labels_)
      throw DimensionError("DiscreteContinuousMixture: inconsistent label count");
    double row = 0.0;
    for (double p : c.y_probs) {
      if (!(p >= 0.0)) throw NumericError("DiscreteContinuousMixture: negative table entry");
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-9)
      throw NumericError("DiscreteContinuousMixture: probability table rows must sum to 1");
  }
}

int DiscreteContinuousMixture::label_of(const CVecRef& y) const {
  if (y.size() != 1) throw DimensionError("DiscreteContinuousMixture: bad Y dimension");
  check_finite(y, "DiscreteContinuousMixture");
  const long k = std::lround(y[0]);
  if (std::abs(y[0] - double(k)) > 1e-9 || k < 0 || k >= n_labels_)
    throw NumericError("DiscreteContinuousMixture: invalid label");
  return int(k);
}

void DiscreteContinuousMixture::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  const int z = rng.categorical(weights_);
  components_[std::size_t(z)].x_part->sample_point(rng, x);
  y[0] = double(rng.categorical(components_[std::size_t(z)].y_probs));
}

double DiscreteContinuousMixture::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  const int lab = label_of(y);
  std::vector<double> terms(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const double t = components_[k].y_probs[std::size_t(lab)];
    terms[k] = std::log(weights_[k]) + components_[k].x_part->log_pdf(x) +
               (t > 0.0 ? std::log(t) : kNegInf);
  }
  return logsumexp(terms);
}

double DiscreteContinuousMixture::log_pdf_x(const CVecRef& x) const {
  std::vector<double> terms(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k)
    terms[k] = std::log(weights_[k]) + components_[k].x_part->log_pdf(x);
  return logsumexp(terms);
}

double DiscreteContinuousMixture::log_pdf_y(const CVecRef& y) const {
  const int lab = label_of(y);
  double p = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k)
    p += weights_[k] * components_[k].y_probs[std::size_t(lab)];
  return p > 0.0 ? std::log(p) : kNegInf;
}

MarginalPtr DiscreteContinuousMixture::marginal_y() const {
  std::vector<double> probs(std::size_t(n_labels_), 0.0);
  for (std::size_t k = 0; k < components_.size(); ++k)
    for (int j = 0; j < n_labels_; ++j)
      probs[std::size_t(j)] += weights_[k] * components_[k].y_probs[std::size_t(j)];
  return std::make_shared<CategoricalMarginal>(std::move(probs));
}

// ---------------------------------------------------------------------------
// GaoStaircase
// ---------------------------------------------------------------------------

GaoStaircase::GaoStaircase(int m, int replication) : m_(m), k_(replication) {
  if (m_ < 1) throw NumericError("GaoStaircase: m must be >= 1");
  if (k_ < 1) throw NumericError("GaoStaircase: replication must be >= 1");
}

int GaoStaircase::overlap_count(double y) const {
  // number of states x in {0..m-1} with y in (x, x+2)
  const int lo = std::max(0, int(std::floor(y - 2.0)) + 1);
  const int hi = std::min(m_ - 1, int(std::ceil(y)) - 1);
  return std::max(0, hi - lo + 1);
}

void GaoStaircase::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  for (int i = 0; i < k_; ++i) {
    const int s = int(rng.next_u64() % std::uint64_t(m_));
    x[i] = double(s);
    y[i] = double(s) + 2.0 * rng.uniform();
  }
}

double GaoStaircase::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  double total = 0.0;
  for (int i = 0; i < k_; ++i) {
    const long s = std::lround(x[i]);
    if (std::abs(x[i] - double(s)) > 1e-9 || s < 0 || s >= m_)
      throw NumericError("GaoStaircase: invalid X label");
    if (!(y[i] > double(s) && y[i] < double(s) + 2.0)) return kNegInf;
    total += -std::log(2.0 * m_);
  }
  return total;
}

double GaoStaircase::log_pdf_x(const CVecRef& x) const {
  if (x.size() != k_) throw DimensionError("GaoStaircase: bad X dimension");
  check_finite(x, "GaoStaircase");
  for (int i = 0; i < k_; ++i) {
    const long s = std::lround(x[i]);
    if (std::abs(x[i] - double(s)) > 1e-9 || s < 0 || s >= m_)
      throw NumericError("GaoStaircase: invalid X label");
  }
  return -double(k_) * std::log(double(m_));
}

double GaoStaircase::log_pdf_y(const CVecRef& y) const {
  if (y.size() != k_) throw DimensionError("GaoStaircase: bad Y dimension");
  check_finite(y, "GaoStaircase");
  double total = 0.0;
  for (int i = 0; i < k_; ++i) {
    const int c = overlap_count(y[i]);
    if (c == 0) return kNegInf;
    total += std::log(double(c) / (2.0 * m_));
  }
  return total;
}

// ---------------------------------------------------------------------------
// ZeroInflatedPoissonization
// ---------------------------------------------------------------------------

ZeroInflatedPoissonization::ZeroInflatedPoissonization(double p) : p_(p) {
  if (!(p_ >= 0.0 && p_ <= 1.0)) throw NumericError("ZeroInflatedPoissonization: p outside [0,1]");
}

void ZeroInflatedPoissonization::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  x[0] = rng.exponential(1.0);
  if (rng.uniform() < p_) {
    y[0] = 0.0;
  } else {
    y[0] = double(rng.poisson(x[0]));
  }
}

double ZeroInflatedPoissonization::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  const double lx = log_pdf_x(x);
  if (lx == kNegInf) return kNegInf;
  const long k = std::lround(y[0]);
  if (std::abs(y[0] - double(k)) > 1e-9 || k < 0)
    throw NumericError("ZeroInflatedPoissonization: invalid Y label");
  double cond;
  if (k == 0) {
    const double terms[2] = {p_ > 0.0 ? std::log(p_) : kNegInf,
                             p_ < 1.0 ? std::log1p(-p_) - x[0] : kNegInf};
    cond = logsumexp(std::span<const double>(terms, 2));
  } else {
    cond = p_ < 1.0 ? std::log1p(-p_) + poisson_log_pmf(double(k), x[0]) : kNegInf;
  }
  return lx + cond;
}

double ZeroInflatedPoissonization::log_pdf_x(const CVecRef& x) const {
  if (x.size() != 1) throw DimensionError("ZeroInflatedPoissonization: bad X dimension");
  check_finite(x, "ZeroInflatedPoissonization");
  return x[0] >= 0.0 ? -x[0] : kNegInf;
}

double ZeroInflatedPoissonization::log_pdf_y(const CVecRef& y) const {
  if (y.size() != 1) throw DimensionError("ZeroInflatedPoissonization: bad Y dimension");
  check_finite(y, "ZeroInflatedPoissonization");
  const long k = std::lround(y[0]);
  if (std::abs(y[0] - double(k)) > 1e-9 || k < 0)
    throw NumericError("ZeroInflatedPoissonization: invalid Y label");
  if (k == 0) return std::log(p_ + (1.0 - p_) * 0.5);
  return p_ < 1.0 ? std::log1p(-p_) - (1.0 + double(k)) * std::log(2.0) : kNegInf;
}

// ---------------------------------------------------------------------------
// UniformAdditiveNoise
// ---------------------------------------------------------------------------

UniformAdditiveNoise::UniformAdditiveNoise(double epsilon) : eps_(epsilon) {
  if (!(eps_ > 0.0)) throw NumericError("UniformAdditiveNoise: epsilon must be positive");
}

void UniformAdditiveNoise::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  x[0] = rng.uniform();
  y[0] = x[0] + rng.uniform(-eps_, eps_);
}

double UniformAdditiveNoise::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  const bool inside = x[0] >= 0.0 && x[0] <= 1.0 && std::abs(y[0] - x[0]) <= eps_;
  return inside ? -std::log(2.0 * eps_) : kNegInf;
}

double UniformAdditiveNoise::log_pdf_x(const CVecRef& x) const {
  if (x.size() != 1) throw DimensionError("UniformAdditiveNoise: bad X dimension");
  check_finite(x, "UniformAdditiveNoise");
  return (x[0] >= 0.0 && x[0] <= 1.0) ? 0.0 : kNegInf;
}

double UniformAdditiveNoise::log_pdf_y(const CVecRef& y) const {
  if (y.size() != 1) throw DimensionError("UniformAdditiveNoise: bad Y dimension");
  check_finite(y, "UniformAdditiveNoise");
  const double width = std::min(1.0, y[0] + eps_) - std::max(0.0, y[0] - eps_);
  return width > 0.0 ? std::log(width / (2.0 * eps_)) : kNegInf;
}

// ---------------------------------------------------------------------------
// SwissRollEmbedding
// ---------------------------------------------------------------------------

SwissRollEmbedding::SwissRollEmbedding(double rho) : rho_(rho) {
  if (!(rho_ > -1.0 && rho_ < 1.0)) throw NumericError("SwissRollEmbedding: |rho| must be < 1");
}

void SwissRollEmbedding::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  const double g1 = rng.normal();
  const double g2 = rho_ * g1 + std::sqrt(1.0 - rho_ * rho_) * rng.normal();
  const double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * normal_cdf(g1));
  x[0] = 0.1 * t * std::cos(t);
  x[1] = 0.1 * t * std::sin(t);
  y[0] = g2;
}

double SwissRollEmbedding::log_pdf_joint(const CVecRef&, const CVecRef&) const {
  throw NumericError("SwissRollEmbedding: no density with respect to Lebesgue measure");
}

double SwissRollEmbedding::log_pdf_x(const CVecRef&) const {
  throw NumericError("SwissRollEmbedding: no density with respect to Lebesgue measure");
}

double SwissRollEmbedding::log_pdf_y(const CVecRef&) const {
  throw NumericError("SwissRollEmbedding: no density with respect to Lebesgue measure");
}

double SwissRollEmbedding::exact_mi() const { return -0.5 * std::log1p(-rho_ * rho_); }

// ---------------------------------------------------------------------------
// Closed forms and constructors
// ---------------------------------------------------------------------------

double gao_mi(int m) {
  if (m < 1) throw NumericError("gao_mi: m must be >= 1");
  if (m == 1) return 0.0;
  return std::log(double(m)) - (double(m - 1) / double(m)) * std::log(2.0);
}

double zip_mi(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw NumericError("zip_mi: p outside [0,1]");
  constexpr double kEulerGamma = 0.57721566490153286061;
  double series = 0.0;
  for (int k = 2;; ++k) {
    const double term = std::log(double(k)) * std::exp(-double(k) * std::log(2.0));
    series += term;
    if (term < 1e-12) break;
  }
  return (1.0 - p) * (2.0 * std::log(2.0) - kEulerGamma - series);
}

double uniform_additive_mi(double epsilon) {
  if (!(epsilon > 0.0)) throw NumericError("uniform_additive_mi: epsilon must be positive");
  if (epsilon >= 0.5) return 1.0 / (4.0 * epsilon);
  return epsilon - std::log(2.0 * epsilon);
}

std::shared_ptr<const MultivariateNormal> paired_gaussian(const std::vector<double>& rhos,
                                                          int dim_x, int dim_y) {
  const int k = int(rhos.size());
  if (k > std::min(dim_x, dim_y)) throw DimensionError("paired_gaussian: too many correlations");
  const int d = dim_x + dim_y;
  Matrix cov = Matrix::Identity(d, d);
  for (int i = 0; i < k; ++i) {
    if (!(std::abs(rhos[std::size_t(i)]) < 1.0))
      throw NumericError("paired_gaussian: |rho| must be < 1");
    cov(i, dim_x + i) = rhos[std::size_t(i)];
    cov(dim_x + i, i) = rhos[std::size_t(i)];
  }
  return std::make_shared<MultivariateNormal>(Vector::Zero(d), cov, dim_x, dim_y);
}

std::shared_ptr<const MultivariateNormal> dense_factor_gaussian(int m, double lambda) {
  if (m < 1) throw DimensionError("dense_factor_gaussian: m must be >= 1");
  if (!(lambda * lambda < 1.0)) throw NumericError("dense_factor_gaussian: |lambda| must be < 1");
  const int d = 2 * m;
  const double l2 = lambda * lambda;
  Matrix cov = Matrix::Constant(d, d, l2);
  cov.diagonal().setOnes();
  return std::make_shared<MultivariateNormal>(Vector::Zero(d), cov, m, m);
}

}  // namespace pmiprof
