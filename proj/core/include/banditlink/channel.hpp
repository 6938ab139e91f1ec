#pragma once

#include <cstdint>
#include <vector>

#include "banditlink/rng.hpp"

namespace banditlink {

// Row-stochastic K x K actuation kernel: entry (x, y) is the probability
// that commanded symbol x is executed as y. Zeros are stored exactly as
// written; support logic tests `> 0.0`, never an epsilon.
class TransitionMatrix {
 public:
  TransitionMatrix(int k, std::vector<double> row_major);

  int k() const noexcept { return k_; }
  double operator()(int x, int y) const { return w_[static_cast<std::size_t>(x) * k_ + y]; }
  const std::vector<double>& row_major() const noexcept { return w_; }

 private:
  int k_;
  std::vector<double> w_;
};

// Per-input support sets Y(x) = { y : w(x, y) > 0 }, each sorted ascending.
class SupportSet {
 public:
  explicit SupportSet(const TransitionMatrix& w);

  int k() const noexcept { return static_cast<int>(sets_.size()); }
  const std::vector<int>& of(int x) const { return sets_[static_cast<std::size_t>(x)]; }
  bool intersects(int x1, int x2) const;

 private:
  std::vector<std::vector<int>> sets_;
};

// One-sided cyclic shift channel: w(x, x) = 1 - eps, w(x, x+1 mod k) = eps.
// Requires k >= 2 and eps strictly inside (0, 1) so the support is exactly
// {x, x+1} for every input.
TransitionMatrix make_typewriter(int k, double eps);

// Draw one execution for command x. Consumes exactly one uniform from the
// stream; coupling arguments depend on this one-use contract.
int sample_output(const TransitionMatrix& w, int x, RandomStream& rng);

// nu = W mu: per-command means of executed-arm values.
std::vector<double> mixed_means(const TransitionMatrix& w, const std::vector<double>& mu);

// y = M v for a row-major k x k matrix.
std::vector<double> mat_vec(int k, const std::vector<double>& m, const std::vector<double>& v);

// Smallest singular value of W. Computed by cyclic Jacobi on the symmetric
// embedding [[0, W^T], [W, 0]], whose eigenvalues are (+/-) the singular
// values; that keeps absolute accuracy ~1e-15 even at sigma_min = 0, where
// sqrt of a W^T W eigenvalue would lose half the digits.
double smallest_singular_value(const TransitionMatrix& w);

// Row-major inverse of W. Gauss-Jordan with partial pivoting plus one
// residual-driven refinement pass. Throws SingularChannel when
// smallest_singular_value(w) <= sigma_threshold.
std::vector<double> invert(const TransitionMatrix& w, double sigma_threshold = 1e-9);

// max_ij |A B - I| for row-major k x k factors; the inversion residual.
double inverse_residual(int k, const std::vector<double>& a, const std::vector<double>& b);

}  // namespace banditlink
