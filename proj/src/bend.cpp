#include "pmiprof/bend.hpp"

#include <cmath>
#include <utility>

namespace pmiprof {

namespace {

class AffineMap final : public Diffeomorphism {
 public:
  AffineMap(Vector scale, Vector shift) : scale_(std::move(scale)), shift_(std::move(shift)) {
    if (scale_.size() != shift_.size()) throw DimensionError("affine_map: scale/shift mismatch");
    if ((scale_.array() == 0.0).any()) throw NumericError("affine_map: zero scale");
    log_det_fwd_ = scale_.array().abs().log().sum();
  }
  int dim() const override { return int(scale_.size()); }
  Vector forward(const CVecRef& v) const override {
    return (scale_.array() * v.array() + shift_.array()).matrix();
  }
  Vector inverse(const CVecRef& v) const override {
    return ((v.array() - shift_.array()) / scale_.array()).matrix();
  }
  double log_det_jacobian_inverse(const CVecRef&) const override { return -log_det_fwd_; }
  std::string describe() const override { return "affine"; }

 private:
  Vector scale_, shift_;
  double log_det_fwd_;
};

class AsinhMap final : public Diffeomorphism {
 public:
  explicit AsinhMap(int dim) : dim_(dim) {
    if (dim_ < 1) throw DimensionError("asinh_map: dim must be >= 1");
  }
  int dim() const override { return dim_; }
  Vector forward(const CVecRef& v) const override {
    return v.array().unaryExpr([](double t) { return std::asinh(t); }).matrix();
  }
  Vector inverse(const CVecRef& v) const override {
    return v.array().unaryExpr([](double t) { return std::sinh(t); }).matrix();
  }
  double log_det_jacobian_inverse(const CVecRef& v) const override {
    // d sinh / dv = cosh(v); log det = sum log cosh(v_i)
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double a = std::abs(v[i]);
      s += a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
    }
    return s;
  }
  std::string describe() const override { return "asinh"; }

 private:
  int dim_;
};

class SpiralMap final : public Diffeomorphism {
 public:
  SpiralMap(double speed, int dim) : v_(speed), dim_(dim) {
    if (dim_ < 2) throw DimensionError("spiral_map: dim must be >= 2");
  }
  int dim() const override { return dim_; }
  Vector forward(const CVecRef& x) const override {
    const double theta = v_ * x.squaredNorm();
    return rotate(x, theta);
  }
  Vector inverse(const CVecRef& x) const override {
    // the rotation preserves the norm, so the angle is recoverable
    const double theta = v_ * x.squaredNorm();
    return rotate(x, -theta);
  }
  double log_det_jacobian_inverse(const CVecRef&) const override { return 0.0; }
  std::string describe() const override { return "spiral"; }

 private:
  static Vector rotate(const CVecRef& x, double theta) {
    Vector out = x;
    const double c = std::cos(theta), s = std::sin(theta);
    out[0] = c * x[0] - s * x[1];
    out[1] = s * x[0] + c * x[1];
    return out;
  }
  double v_;
  int dim_;
};

class WavesInjection final : public Diffeomorphism {
 public:
  int dim() const override { return 2; }
  Vector forward(const CVecRef& x) const override {
    Vector out(2);
    out[0] = x[0] + 5.0 * std::sin(3.0 * x[1]);
    out[1] = x[1];
    return out;
  }
  Vector inverse(const CVecRef& x) const override {
    Vector out(2);
    out[0] = x[0] - 5.0 * std::sin(3.0 * x[1]);
    out[1] = x[1];
    return out;
  }
  double log_det_jacobian_inverse(const CVecRef&) const override { return 0.0; }
  std::string describe() const override { return "waves"; }
};

class ComposedMap final : public Diffeomorphism {
 public:
  explicit ComposedMap(std::vector<MapPtr> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) throw DimensionError("compose: empty map list");
    for (const auto& m : maps_) {
      if (!m || m->dim() != maps_[0]->dim()) throw DimensionError("compose: dimension mismatch");
    }
  }
  int dim() const override { return maps_[0]->dim(); }
  Vector forward(const CVecRef& v) const override {
    Vector cur = v;
    for (const auto& m : maps_) cur = m->forward(cur);
    return cur;
  }
  Vector inverse(const CVecRef& v) const override {
    Vector cur = v;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) cur = (*it)->inverse(cur);
    return cur;
  }
  double log_det_jacobian_inverse(const CVecRef& v) const override {
    double total = 0.0;
    Vector cur = v;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) {
      total += (*it)->log_det_jacobian_inverse(cur);
      cur = (*it)->inverse(cur);
    }
    return total;
  }
  std::string describe() const override { return "compose"; }

 private:
  std::vector<MapPtr> maps_;
};

double numeric_log_abs_det_forward(const Diffeomorphism& map, const CVecRef& x) {
  const int d = map.dim();
  const double h = 1e-5;
  Matrix jac(d, d);
  Vector xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    jac.col(j) = (map.forward(xp) - map.forward(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  const double det = jac.partialPivLu().determinant();
  if (det == 0.0) throw NumericError("validate_jacobian: singular numeric Jacobian");
  return std::log(std::abs(det));
}

}  // namespace

void validate_jacobian(const Diffeomorphism& map, int points, double tol, Seed seed) {
  Rng rng(seed);
  Vector x(map.dim());
  for (int p = 0; p < points; ++p) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    const Vector fx = map.forward(x);
    const double declared = -map.log_det_jacobian_inverse(fx);
    const double numeric = numeric_log_abs_det_forward(map, x);
    if (std::abs(declared - numeric) > tol)
      throw NumericError("validate_jacobian: declared log-det disagrees with finite differences (" +
                         map.describe() + ")");
    // round trip sanity at the same points
    if ((map.inverse(fx) - x).cwiseAbs().maxCoeff() > 1e-7)
      throw NumericError("validate_jacobian: inverse(forward(x)) != x (" + map.describe() + ")");
  }
}

MapPtr affine_map(Vector scale, Vector shift) {
  auto m = std::make_shared<AffineMap>(std::move(scale), std::move(shift));
  validate_jacobian(*m);
  return m;
}

MapPtr affine_map(double scale, double shift, int dim) {
  return affine_map(Vector::Constant(dim, scale), Vector::Constant(dim, shift));
}

MapPtr asinh_map(int dim) {
  auto m = std::make_shared<AsinhMap>(dim);
  validate_jacobian(*m);
  return m;
}

MapPtr spiral_map(double speed, int dim) {
  auto m = std::make_shared<SpiralMap>(speed, dim);
  validate_jacobian(*m);
  return m;
}

MapPtr waves_injection() {
  auto m = std::make_shared<WavesInjection>();
  validate_jacobian(*m);
  return m;
}

MapPtr compose(std::vector<MapPtr> maps) {
  auto m = std::make_shared<ComposedMap>(std::move(maps));
  validate_jacobian(*m);
  return m;
}

namespace {

// Marginal of a bent block: sample through f, evaluate by change of variables.
class BentMarginal final : public MarginalDistribution {
 public:
  BentMarginal(MarginalPtr base, MapPtr f) : base_(std::move(base)), f_(std::move(f)) {}
  int dim() const override { return base_->dim(); }
  void sample_point(Rng& rng, VecRef out) const override {
    Vector raw(base_->dim());
    base_->sample_point(rng, raw);
    out = f_->forward(raw);
  }
  double log_pdf(const CVecRef& v) const override {
    return base_->log_pdf(f_->inverse(v)) + f_->log_det_jacobian_inverse(v);
  }
  std::string describe() const override { return "bent " + base_->describe(); }

 private:
  MarginalPtr base_;
  MapPtr f_;
};

}  // namespace

BentDistribution::BentDistribution(DistPtr base, MapPtr f, MapPtr g)
    : base_(std::move(base)), f_(std::move(f)), g_(std::move(g)) {
  if (!base_) throw DimensionError("bend: null base distribution");
  if (f_ && f_->dim() != base_->dim_x()) throw DimensionError("bend: f dimension != dim_x");
  if (g_ && g_->dim() != base_->dim_y()) throw DimensionError("bend: g dimension != dim_y");
  if (f_ && base_->discrete_x()) throw NumericError("bend: cannot bend a discrete X");
  if (g_ && base_->discrete_y()) throw NumericError("bend: cannot bend a discrete Y");
}

void BentDistribution::sample_pair(Rng& rng, VecRef x, VecRef y) const {
  Vector bx(base_->dim_x()), by(base_->dim_y());
  base_->sample_pair(rng, bx, by);
  x = f_ ? f_->forward(bx) : bx;
  y = g_ ? g_->forward(by) : by;
}

double BentDistribution::log_pdf_joint(const CVecRef& x, const CVecRef& y) const {
  check_point(x, y);
  const Vector bx = f_ ? f_->inverse(x) : Vector(x);
  const Vector by = g_ ? g_->inverse(y) : Vector(y);
  double out = base_->log_pdf_joint(bx, by);
  if (f_) out += f_->log_det_jacobian_inverse(x);
  if (g_) out += g_->log_det_jacobian_inverse(y);
  return out;
}

double BentDistribution::log_pdf_x(const CVecRef& x) const {
  if (!f_) return base_->log_pdf_x(x);
  return base_->log_pdf_x(f_->inverse(x)) + f_->log_det_jacobian_inverse(x);
}

double BentDistribution::log_pdf_y(const CVecRef& y) const {
  if (!g_) return base_->log_pdf_y(y);
  return base_->log_pdf_y(g_->inverse(y)) + g_->log_det_jacobian_inverse(y);
}

MarginalPtr BentDistribution::marginal_x() const {
  auto inner = base_->marginal_x();
  if (!inner) return nullptr;
  return f_ ? std::make_shared<BentMarginal>(inner, f_) : inner;
}

MarginalPtr BentDistribution::marginal_y() const {
  auto inner = base_->marginal_y();
  if (!inner) return nullptr;
  return g_ ? std::make_shared<BentMarginal>(inner, g_) : inner;
}

std::string BentDistribution::describe() const {
  return "bend(" + base_->describe() + (f_ ? ", f=" + f_->describe() : "") +
         (g_ ? ", g=" + g_->describe() : "") + ")";
}

DistPtr bend(DistPtr base, MapPtr f, MapPtr g) {
  return std::make_shared<BentDistribution>(std::move(base), std::move(f), std::move(g));
}

}  // namespace pmiprof
