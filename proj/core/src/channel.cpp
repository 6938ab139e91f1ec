#include "banditlink/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "banditlink/errors.hpp"

namespace banditlink {

namespace {

constexpr double kRowSumTol = 1e-12;

}  // namespace

TransitionMatrix::TransitionMatrix(int k, std::vector<double> row_major)
    : k_(k), w_(std::move(row_major)) {
  if (k_ < 2) throw ConfigError("transition matrix needs k >= 2");
  if (w_.size() != static_cast<std::size_t>(k_) * k_)
    throw ConfigError("transition matrix row data has wrong size");
  for (int x = 0; x < k_; ++x) {
    double sum = 0.0;
    for (int y = 0; y < k_; ++y) {
      const double p = (*this)(x, y);
      if (!(p >= 0.0) || p > 1.0) throw ConfigError("transition entry outside [0, 1]");
      sum += p;
    }
    if (std::fabs(sum - 1.0) > kRowSumTol) throw ConfigError("transition row does not sum to 1");
  }
}

SupportSet::SupportSet(const TransitionMatrix& w) {
  sets_.resize(static_cast<std::size_t>(w.k()));
  for (int x = 0; x < w.k(); ++x) {
    for (int y = 0; y < w.k(); ++y) {
      if (w(x, y) > 0.0) sets_[static_cast<std::size_t>(x)].push_back(y);
    }
  }
}

bool SupportSet::intersects(int x1, int x2) const {
  const auto& a = of(x1);
  const auto& b = of(x2);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i; else ++j;
  }
  return false;
}

TransitionMatrix make_typewriter(int k, double eps) {
  if (k < 2) throw ConfigError("typewriter channel needs k >= 2");
  if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("typewriter eps must lie strictly in (0, 1)");
  std::vector<double> w(static_cast<std::size_t>(k) * k, 0.0);
  for (int x = 0; x < k; ++x) {
    w[static_cast<std::size_t>(x) * k + x] = 1.0 - eps;
    w[static_cast<std::size_t>(x) * k + (x + 1) % k] = eps;
  }
  return TransitionMatrix(k, std::move(w));
}

int sample_output(const TransitionMatrix& w, int x, RandomStream& rng) {
  if (x < 0 || x >= w.k()) throw ConfigError("sample_output: input symbol out of range");
  const double u = rng.next_unit();
  double acc = 0.0;
  int last_support = -1;
  for (int y = 0; y < w.k(); ++y) {
    const double p = w(x, y);
    if (p > 0.0) {
      last_support = y;
      acc += p;
      if (u < acc) return y;
    }
  }
  // u landed in the rounding slack at the top of the row.
  return last_support;
}

std::vector<double> mat_vec(int k, const std::vector<double>& m, const std::vector<double>& v) {
  std::vector<double> out(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += m[static_cast<std::size_t>(i) * k + j] * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

std::vector<double> mixed_means(const TransitionMatrix& w, const std::vector<double>& mu) {
  if (static_cast<int>(mu.size()) != w.k()) throw ConfigError("mixed_means: mu size mismatch");
  return mat_vec(w.k(), w.row_major(), mu);
}

namespace {

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix stored row-major.
// Sweeps until the off-diagonal Frobenius mass drops below tol.
void jacobi_eigenvalues(std::vector<double>& a, int n, double tol) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * at(i, j) * at(i, j);
    if (std::sqrt(off) < tol) return;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = at(i, p);
          const double aiq = at(i, q);
          at(i, p) = c * aip - s * aiq;
          at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = at(p, i);
          const double aqi = at(q, i);
          at(p, i) = c * api - s * aqi;
          at(q, i) = s * api + c * aqi;
        }
      }
    }
  }
}

}  // namespace

double smallest_singular_value(const TransitionMatrix& w) {
  const int k = w.k();
  const int n = 2 * k;
  // Symmetric embedding: eigenvalues come in (+/-) singular-value pairs.
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      a[static_cast<std::size_t>(k + i) * n + j] = w(i, j);
      a[static_cast<std::size_t>(j) * n + (k + i)] = w(i, j);
    }
  }
  jacobi_eigenvalues(a, n, 1e-12);
  double smallest = std::fabs(a[0]);
  for (int i = 1; i < n; ++i)
    smallest = std::min(smallest, std::fabs(a[static_cast<std::size_t>(i) * n + i]));
  return smallest;
}

double inverse_residual(int k, const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l)
        s += a[static_cast<std::size_t>(i) * k + l] * b[static_cast<std::size_t>(l) * k + j];
      if (i == j) s -= 1.0;
      worst = std::max(worst, std::fabs(s));
    }
  }
  return worst;
}

namespace {

// Plain Gauss-Jordan with partial pivoting; adequate for k <= 64 and the
// conditioning the SingularChannel gate admits.
std::vector<double> gauss_jordan_inverse(int k, std::vector<double> m) {
  std::vector<double> inv(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) inv[static_cast<std::size_t>(i) * k + i] = 1.0;
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    double best = std::fabs(m[static_cast<std::size_t>(col) * k + col]);
    for (int r = col + 1; r < k; ++r) {
      const double v = std::fabs(m[static_cast<std::size_t>(r) * k + col]);
      if (v > best) { best = v; pivot = r; }
    }
    if (best == 0.0) throw SingularChannel("exactly singular transition matrix");
    if (pivot != col) {
      for (int c = 0; c < k; ++c) {
        std::swap(m[static_cast<std::size_t>(pivot) * k + c], m[static_cast<std::size_t>(col) * k + c]);
        std::swap(inv[static_cast<std::size_t>(pivot) * k + c], inv[static_cast<std::size_t>(col) * k + c]);
      }
    }
    const double d = m[static_cast<std::size_t>(col) * k + col];
    for (int c = 0; c < k; ++c) {
      m[static_cast<std::size_t>(col) * k + c] /= d;
      inv[static_cast<std::size_t>(col) * k + c] /= d;
    }
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = m[static_cast<std::size_t>(r) * k + col];
      if (f == 0.0) continue;
      for (int c = 0; c < k; ++c) {
        m[static_cast<std::size_t>(r) * k + c] -= f * m[static_cast<std::size_t>(col) * k + c];
        inv[static_cast<std::size_t>(r) * k + c] -= f * inv[static_cast<std::size_t>(col) * k + c];
      }
    }
  }
  return inv;
}

}  // namespace

std::vector<double> invert(const TransitionMatrix& w, double sigma_threshold) {
  const double sigma = smallest_singular_value(w);
  if (sigma <= sigma_threshold)
    throw SingularChannel("smallest singular value " + std::to_string(sigma) +
                          " at or below threshold " + std::to_string(sigma_threshold));
  const int k = w.k();
  std::vector<double> inv = gauss_jordan_inverse(k, w.row_major());
  // Newton refinement: X <- X (2I - W X); one step usually reaches ~1e-15.
  for (int iter = 0; iter < 3; ++iter) {
    if (inverse_residual(k, w.row_major(), inv) <= 1e-14) break;
    std::vector<double> wx(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l) {
        const double wil = w(i, l);
        if (wil == 0.0) continue;
        for (int j = 0; j < k; ++j)
          wx[static_cast<std::size_t>(i) * k + j] += wil * inv[static_cast<std::size_t>(l) * k + j];
      }
    for (int i = 0; i < k; ++i) wx[static_cast<std::size_t>(i) * k + i] -= 2.0;
    std::vector<double> next(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l) {
        const double xil = inv[static_cast<std::size_t>(i) * k + l];
        if (xil == 0.0) continue;
        for (int j = 0; j < k; ++j)
          next[static_cast<std::size_t>(i) * k + j] -= xil * wx[static_cast<std::size_t>(l) * k + j];
      }
    inv = std::move(next);
  }
  return inv;
}

}  // namespace banditlink
