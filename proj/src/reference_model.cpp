#include "so3obs/reference_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "so3obs/symmetric_eigen.hpp"

namespace so3obs {

ReferenceDirection ReferenceDirection::from_raw(const Vec3& raw, double weight) {
  const double n = raw.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    throw Error(ErrorKind::InvalidParams, "reference direction must be a nonzero finite vector");
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorKind::InvalidParams, "reference weight must be positive");
  }
  return {raw / n, weight};
}

namespace {

void flip_largest_positive(Vec3& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0.0) v = -v;
}

void flip_last_positive(Vec3& v) {
  for (int k = 2; k >= 0; --k) {
    if (v(k) != 0.0) {
      if (v(k) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

ReferenceModel ReferenceModel::build(std::vector<ReferenceDirection> dirs, ModelOptions options) {
  if (dirs.size() < 3) {
    throw Error(ErrorKind::RankDeficient, "at least three reference directions are required");
  }
  for (const auto& d : dirs) {
    if (std::abs(d.direction.norm() - 1.0) > 1e-12) {
      throw Error(ErrorKind::InvalidParams, "reference direction is not unit length");
    }
    if (!(d.weight > 0.0)) throw Error(ErrorKind::InvalidParams, "reference weight must be positive");
  }

  ReferenceModel model;
  model.dirs_ = std::move(dirs);
  model.options_ = options;
  for (const auto& d : model.dirs_) {
    model.K_ += d.weight * d.direction * d.direction.transpose();
  }
  model.K_ = 0.5 * (model.K_ + model.K_.transpose());

  const SymmetricEigen3 eig = symmetric_eigen(model.K_);
  const auto& ev = eig.values;  // ascending
  const double top = ev[2];
  if (ev[0] <= 1e-10 * top) {
    throw Error(ErrorKind::RankDeficient, "reference directions do not span R^3");
  }
  const double gap = options.gap_tolerance * top;
  if (ev[1] - ev[0] < gap || ev[2] - ev[1] < gap) {
    std::ostringstream os;
    os << "eigenvalues of K (" << ev[0] << ", " << ev[1] << ", " << ev[2]
       << ") are not separated by " << gap;
    throw Error(ErrorKind::DegenerateSpectrum, os.str());
  }

  std::array<int, 3> order{};
  if (options.order == EigenOrder::Descending) {
    order = {2, 1, 0};
  } else {
    order = {0, 1, 2};
  }

  Mat3 u;
  for (int j = 0; j < 3; ++j) {
    Vec3 v = eig.vectors.col(order[static_cast<std::size_t>(j)]);
    if (options.order == EigenOrder::Descending) {
      flip_largest_positive(v);
    } else {
      flip_last_positive(v);
    }
    u.col(j) = v;
    model.lambdas_[static_cast<std::size_t>(j)] = ev[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
  }
  if (u.determinant() < 0.0) {
    if (options.order == EigenOrder::Descending) {
      u.col(2) = -u.col(2);
    } else {
      u = -u;
    }
  }
  model.U_ = Rotation::from_matrix(u, 1e-12);
  model.compute_recon();
  return model;
}

void ReferenceModel::compute_recon() {
  const auto n = static_cast<Eigen::Index>(dirs_.size());
  Eigen::Matrix<double, 3, Eigen::Dynamic> v(3, n);
  for (Eigen::Index i = 0; i < n; ++i) v.col(i) = dirs_[static_cast<std::size_t>(i)].direction;
  // Minimum-norm solution of u_j = V c_j for every j.
  const Mat3 gram = v * v.transpose();
  recon_ = U_.matrix().transpose() * gram.ldlt().solve(v);
}

double ReferenceModel::weight_sum() const {
  return std::accumulate(dirs_.begin(), dirs_.end(), 0.0,
                         [](double acc, const ReferenceDirection& d) { return acc + d.weight; });
}

ReferenceModel ReferenceModel::with_flipped_columns(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i > 2 || j > 2) {
    throw Error(ErrorKind::InvalidParams, "flip needs two distinct columns in 0..2");
  }
  ReferenceModel out = *this;
  Mat3 u = U_.matrix();
  u.col(i) = -u.col(i);
  u.col(j) = -u.col(j);
  out.U_ = Rotation::from_matrix(u, 1e-12);
  out.compute_recon();
  return out;
}

double trace_identity_check(const ReferenceModel& model) {
  const auto& l = model.lambdas();
  return std::abs(model.weight_sum() - (l[0] + l[1] + l[2]));
}

std::vector<ReferenceDirection> standard_directions() {
  return {
      ReferenceDirection::from_raw(Vec3(-2.0, 5.0, 2.0), 1.211),
      ReferenceDirection::from_raw(Vec3(10.0, -1.0, 0.0), 1.21),
      ReferenceDirection::from_raw(Vec3(0.0, 1.0, -2.0), 1.209),
  };
}

}  // namespace so3obs
