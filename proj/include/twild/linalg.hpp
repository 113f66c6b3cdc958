#pragma once

// Dense complex matrix helpers shared by the numerical modules.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace twild {

using Mat = Eigen::MatrixXcd;
using Mask = Eigen::MatrixXi;
using Rng = std::mt19937_64;

/// Entries i.i.d. complex standard normal (E|z|^2 = 1).
Mat random_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Random matrix supported on mask.
Mat random_masked(Rng& rng, const Mask& mask);

/// Complex standard normal, resampled until the condition number is at most max_cond.
Mat random_invertible(Rng& rng, Eigen::Index n, double max_cond = 1e6);

/// Block-diagonal invertible matrix supported on mask, same resampling rule.
Mat random_invertible_masked(Rng& rng, const Mask& mask, double max_cond = 1e6);

double condition_number(const Mat& m);

/// Entries outside the mask, as a Frobenius norm.
double off_mask_norm(const Mat& m, const Mask& mask);

Mat project(const Mat& m, const Mask& mask);

/// General matrix exponential.
Mat expm(const Mat& x);

/// exp and log by terminating series; x must be nilpotent, u unipotent.
Mat exp_nilpotent(const Mat& x);
Mat log_unipotent(const Mat& u);

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

/// Elementary matrices E_ab for the entries of a mask, row-major.
std::vector<Mat> mask_basis(const Mask& mask);

}  // namespace twild
