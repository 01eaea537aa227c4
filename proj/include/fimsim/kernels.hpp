#pragma once

#include <span>

#include "fimsim/csr.hpp"

namespace fimsim {

// OpenMP vector kernels. Reductions sum fixed-size chunks and combine the
// partial sums in chunk order, so results do not depend on the thread count.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b, std::span<double> r);
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
// y += alpha*x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// y = x + beta*y
void xpby(std::span<const double> x, double beta, std::span<double> y);
void scale(double alpha, std::span<double> x);
void copy(std::span<const double> x, std::span<double> y);

inline constexpr std::size_t kReductionChunk = 2048;

// Single-threaded reference versions; dot/norm2 accumulate left to right.
namespace serial {
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b, std::span<double> r);
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace serial

}  // namespace fimsim
