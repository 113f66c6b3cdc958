#include "twild/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace twild {

Mat random_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(i, j) = {re, im};
    }
  return m;
}

Mat random_masked(Rng& rng, const Mask& mask) {
  Mat m = random_normal(rng, mask.rows(), mask.cols());
  return project(m, mask);
}

Mat random_invertible(Rng& rng, Eigen::Index n, double max_cond) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Mat m = random_normal(rng, n, n);
    if (condition_number(m) <= max_cond) return m;
  }
  throw std::runtime_error("could not sample a well-conditioned matrix");
}

Mat random_invertible_masked(Rng& rng, const Mask& mask, double max_cond) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Mat m = random_masked(rng, mask);
    if (condition_number(m) <= max_cond) return m;
  }
  throw std::runtime_error("could not sample a well-conditioned matrix");
}

double condition_number(const Mat& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return INFINITY;
  return s(0) / smin;
}

double off_mask_norm(const Mat& m, const Mask& mask) {
  double acc = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!mask(i, j)) acc += std::norm(m(i, j));
  return std::sqrt(acc);
}

Mat project(const Mat& m, const Mask& mask) {
  Mat out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!mask(i, j)) out(i, j) = 0;
  return out;
}

Mat expm(const Mat& x) { return x.exp(); }

Mat exp_nilpotent(const Mat& x) {
  const auto n = x.rows();
  Mat sum = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

Mat log_unipotent(const Mat& u) {
  const auto n = u.rows();
  const Mat y = u - Mat::Identity(n, n);
  Mat sum = Mat::Zero(n, n);
  Mat power = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    power = power * y;
    sum += (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k) * power;
  }
  return sum;
}

std::vector<Mat> mask_basis(const Mask& mask) {
  std::vector<Mat> basis;
  for (Eigen::Index i = 0; i < mask.rows(); ++i)
    for (Eigen::Index j = 0; j < mask.cols(); ++j)
      if (mask(i, j)) {
        Mat e = Mat::Zero(mask.rows(), mask.cols());
        e(i, j) = 1;
        basis.push_back(std::move(e));
      }
  return basis;
}

}  // namespace twild
