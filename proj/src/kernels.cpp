#include "fimsim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fimsim/error.hpp"

namespace fimsim {

namespace {

void check_spmv(const CsrMatrix& a, std::size_t nx, std::size_t ny) {
  if (a.cols() != nx || a.rows() != ny) throw LinearAlgebraError("spmv: dimension mismatch");
}

void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw LinearAlgebraError("vector length mismatch");
}

template <class Fn>
double chunked_sum(std::size_t n, Fn&& term) {
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  if (chunks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t end = std::min(n, begin + kReductionChunk);
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

}  // namespace

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x.size(), y.size());
  const auto ptr = a.row_ptr();
  const auto idx = a.col_idx();
  const auto val = a.values();
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t k = ptr[r]; k < ptr[r + 1]; ++k) s += val[k] * x[idx[k]];
    y[r] = s;
  }
}

void residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b, std::span<double> r) {
  check_spmv(a, x.size(), r.size());
  check_same(b.size(), r.size());
  const auto ptr = a.row_ptr();
  const auto idx = a.col_idx();
  const auto val = a.values();
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) s += val[k] * x[idx[k]];
    r[i] = b[i] - s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size());
  return chunked_sum(x.size(), [&](std::size_t i) { return x[i] * y[i]; });
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  check_same(x.size(), y.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void scale(double alpha, std::span<double> x) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= alpha;
}

void copy(std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size());
  std::copy(x.begin(), x.end(), y.begin());
}

namespace serial {

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv(a, x.size(), y.size());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto cols = a.row_cols(r);
    const auto vals = a.row_values(r);
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

void residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b, std::span<double> r) {
  serial::spmv(a, x, r);
  check_same(b.size(), r.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(serial::dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace serial

}  // namespace fimsim
