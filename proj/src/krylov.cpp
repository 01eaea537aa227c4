#include "fimsim/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "fimsim/error.hpp"
#include "fimsim/kernels.hpp"

namespace fimsim {

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const { copy(r, z); }

namespace {

std::vector<double> initial_guess(std::size_t n, std::span<const double> x0) {
  if (x0.empty()) return std::vector<double>(n, 0.0);
  if (x0.size() != n) throw LinearAlgebraError("initial guess has wrong length");
  return {x0.begin(), x0.end()};
}

void finish(const CsrMatrix& a, std::span<const double> b, KrylovResult& res, double recursive_norm,
            const KrylovOptions& opt) {
  std::vector<double> r(b.size());
  residual(a, res.x, b, r);
  res.residual_norm = norm2(r);
  res.converged = res.rhs_norm == 0.0 || res.residual_norm <= opt.tol * res.rhs_norm;
  if (std::isfinite(recursive_norm))
    res.residual_drift = std::abs(res.residual_norm - recursive_norm) > 10.0 * opt.tol * res.rhs_norm;
}

bool tiny(double v, double scale) { return std::abs(v) <= 1e-300 || std::abs(v) <= 1e-30 * scale; }

}  // namespace

KrylovResult bicgstab(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m,
                      const KrylovOptions& opt, std::span<const double> x0) {
  const std::size_t n = b.size();
  if (a.rows() != n || a.cols() != n) throw LinearAlgebraError("bicgstab: dimension mismatch");
  KrylovResult res;
  res.x = initial_guess(n, x0);
  res.rhs_norm = norm2(b);
  if (res.rhs_norm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const double target = opt.tol * res.rhs_norm;

  std::vector<double> r(n), r_hat(n), p(n), v(n), s(n), t(n), p_hat(n), s_hat(n);
  residual(a, res.x, b, r);
  double r_norm = norm2(r);
  int restarts = 0;
  bool fresh = true;

  auto restart = [&]() {
    fresh = true;
    residual(a, res.x, b, r);
    copy(r, r_hat);
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    r_norm = norm2(r);
  };
  restart();

  double rho_old = 1.0, alpha = 1.0, omega = 1.0;
  while (r_norm > target && res.iterations < opt.max_iter) {
    const double rho = dot(r_hat, r);
    if (tiny(rho, r_norm * r_norm) || tiny(omega, 1.0)) {
      if (restarts++ >= 1) {
        res.breakdown = true;
        break;
      }
      restart();
      rho_old = alpha = omega = 1.0;
      continue;
    }
    if (fresh) {
      copy(r, p);
      fresh = false;
    } else {
      const double beta = (rho / rho_old) * (alpha / omega);
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    m.apply(p, p_hat);
    ++res.preconditioner_applications;
    spmv(a, p_hat, v);
    const double rv = dot(r_hat, v);
    if (tiny(rv, norm2(r_hat) * norm2(v))) {
      if (restarts++ >= 1) {
        res.breakdown = true;
        break;
      }
      restart();
      rho_old = alpha = omega = 1.0;
      continue;
    }
    alpha = rho / rv;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    ++res.iterations;
    const double s_norm = norm2(s);
    if (s_norm <= target) {
      axpy(alpha, p_hat, res.x);
      r_norm = s_norm;
      copy(s, r);
      break;
    }
    m.apply(s, s_hat);
    ++res.preconditioner_applications;
    spmv(a, s_hat, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += alpha * p_hat[i] + omega * s_hat[i];
      r[i] = s[i] - omega * t[i];
    }
    r_norm = norm2(r);
    rho_old = rho;
    if (!std::isfinite(r_norm)) {
      res.breakdown = true;
      break;
    }
  }
  finish(a, b, res, r_norm, opt);
  return res;
}

KrylovResult gmres(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m, const KrylovOptions& opt,
                   std::span<const double> x0) {
  const std::size_t n = b.size();
  if (a.rows() != n || a.cols() != n) throw LinearAlgebraError("gmres: dimension mismatch");
  if (opt.restart == 0) throw LinearAlgebraError("gmres: restart length must be positive");
  KrylovResult res;
  res.x = initial_guess(n, x0);
  res.rhs_norm = norm2(b);
  if (res.rhs_norm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const double target = opt.tol * res.rhs_norm;
  const std::size_t mdim = opt.restart;

  std::vector<std::vector<double>> v(mdim + 1, std::vector<double>(n));
  std::vector<std::vector<double>> z(mdim, std::vector<double>(n));
  std::vector<std::vector<double>> h(mdim + 1, std::vector<double>(mdim, 0.0));
  std::vector<double> cs(mdim), sn(mdim), g(mdim + 1), w(n), r(n);

  double r_norm = 0.0;
  double estimate = 0.0;
  while (true) {
    residual(a, res.x, b, r);
    r_norm = norm2(r);
    if (r_norm <= target || res.iterations >= opt.max_iter) break;
    if (!std::isfinite(r_norm)) {
      res.breakdown = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / r_norm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = r_norm;

    std::size_t k = 0;
    bool lucky = false;
    while (k < mdim && res.iterations < opt.max_iter) {
      m.apply(v[k], z[k]);
      ++res.preconditioner_applications;
      spmv(a, z[k], w);
      // Modified Gram-Schmidt
      for (std::size_t j = 0; j <= k; ++j) {
        h[j][k] = dot(w, v[j]);
        axpy(-h[j][k], v[j], w);
      }
      const double hn = norm2(w);
      h[k + 1][k] = hn;
      for (std::size_t j = 0; j < k; ++j) {
        const double tmp = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
        h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
        h[j][k] = tmp;
      }
      const double denom = std::hypot(h[k][k], h[k + 1][k]);
      if (denom == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = h[k][k] / denom;
        sn[k] = h[k + 1][k] / denom;
      }
      h[k][k] = cs[k] * h[k][k] + sn[k] * h[k + 1][k];
      h[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      ++res.iterations;
      ++k;
      estimate = std::abs(g[k]);
      if (estimate <= target) break;
      if (hn <= 1e-14 * denom || hn == 0.0) {
        lucky = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) v[k][i] = w[i] / hn;
    }

    // Back substitution on the k x k triangular system.
    std::vector<double> y(k, 0.0);
    for (std::size_t ii = k; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t j = ii + 1; j < k; ++j) s -= h[ii][j] * y[j];
      if (h[ii][ii] == 0.0) {
        res.breakdown = true;
        y[ii] = 0.0;
      } else {
        y[ii] = s / h[ii][ii];
      }
    }
    for (std::size_t j = 0; j < k; ++j) axpy(y[j], z[j], res.x);
    if (res.breakdown || lucky) {
      residual(a, res.x, b, r);
      r_norm = norm2(r);
      break;
    }
  }
  finish(a, b, res, res.iterations > 0 ? estimate : r_norm, opt);
  return res;
}

}  // namespace fimsim
