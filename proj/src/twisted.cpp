#include "twild/twisted.hpp"

#include <sstream>
#include <stdexcept>

namespace twild {

Automorphism Automorphism::identity(Eigen::Index n) { return Automorphism(Mat::Identity(n, n), false); }
Automorphism Automorphism::inner(Mat a) { return Automorphism(std::move(a), false); }
Automorphism Automorphism::outer(Mat a) { return Automorphism(std::move(a), true); }

Automorphism Automorphism::composite(const std::vector<Automorphism>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty composite automorphism");
  Automorphism out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out = out * parts[k];
  return out;
}

Mat Automorphism::apply(const Mat& g) const {
  if (!outer_) return a_ * g * a_.inverse();
  return a_ * g.transpose().inverse() * a_.inverse();
}

Mat Automorphism::apply_lie(const Mat& x) const {
  if (!outer_) return a_ * x * a_.inverse();
  return -(a_ * x.transpose() * a_.inverse());
}

Automorphism Automorphism::inverse() const {
  if (!outer_) return inner(a_.inverse());
  return outer(a_.transpose());
}

bool Automorphism::same_as(const Automorphism& other, double tol) const {
  if (outer_ != other.outer_ || size() != other.size()) return false;
  Eigen::Index r = 0, c = 0;
  a_.cwiseAbs().maxCoeff(&r, &c);
  const auto lambda = other.a_(r, c) / a_(r, c);
  return (other.a_ - lambda * a_).norm() <= tol * other.a_.norm();
}

std::string Automorphism::describe() const {
  if (!outer_ && same_as(identity(size()))) return "id";
  return outer_ ? "outer" : "inner";
}

Automorphism operator*(const Automorphism& a, const Automorphism& b) {
  if (a.size() != b.size()) throw std::invalid_argument("automorphisms of different rank");
  const Mat right = a.outer_ ? Mat(b.a_.transpose().inverse()) : b.a_;
  return Automorphism(a.a_ * right, a.outer_ != b.outer_);
}

TwistedElement compose(const TwistedElement& a, const TwistedElement& b) {
  if (a.size() != b.size() || a.phi.size() != b.phi.size() || a.size() != a.phi.size())
    throw std::invalid_argument("twisted elements of different rank");
  return {a.g * a.phi.apply(b.g), a.phi * b.phi};
}

TwistedElement inverse(const TwistedElement& x) {
  const auto inv = x.phi.inverse();
  return {inv.apply(x.g.inverse()), inv};
}

TwistedElement power(const TwistedElement& x, int r) {
  TwistedElement out{Mat::Identity(x.size(), x.size()), Automorphism::identity(x.size())};
  for (int k = 0; k < r; ++k) out = compose(out, x);
  return out;
}

TwistedElement twisted_conjugate(const Mat& h, const TwistedElement& x) {
  if (h.rows() != x.size()) throw std::invalid_argument("conjugating matrix has the wrong size");
  return {h * x.g * x.phi.apply(h).inverse(), x.phi};
}

bool in_twist_coset(const Mat& m, const Mask& levi, const Mat& p, double tol) {
  if (m.rows() != levi.rows() || m.rows() != p.rows()) return false;
  const Mat core = m * p.inverse();
  const double scale = std::max(m.norm(), 1e-300);
  if (off_mask_norm(core, levi) > tol * scale) return false;
  Eigen::JacobiSVD<Mat> svd(core);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) > tol * s(0);
}

}  // namespace twild
