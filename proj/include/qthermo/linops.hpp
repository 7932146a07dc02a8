// Copyright 2026 The qthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTHERMO_LINOPS_HPP
#define QTHERMO_LINOPS_HPP

// Dense complex linear algebra for operators and superoperators.
//
// Conventions fixed here and relied upon everywhere else:
//  * vectorize() stacks columns, vec(X)[j*d + i] = X(i, j), so that
//    vec(A X B) = kron(B^T, A) vec(X).
//  * Operator norms are Hilbert-Schmidt; a superoperator norm is the
//    induced norm, i.e. the largest singular value of its matrix in an
//    orthonormal operator basis (exact at these dimensions).
//  * On composite spaces tensor factors are ordered with kron(first, second)
//    and indexed 0-based.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qthermo {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Super = Eigen::MatrixXcd;  // acts on column-stacked operators
using Vector = Eigen::VectorXcd;

inline const Complex kImag{0.0, 1.0};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a spectrum cannot be biorthonormalized; carries the tightest
// eigenvalue cluster found, as that is usually the culprit.
class DegenerateSpectrumError : public std::runtime_error {
 public:
  DegenerateSpectrumError(const std::string& message, std::vector<Complex> degenerate_cluster)
      : std::runtime_error(message), cluster(std::move(degenerate_cluster)) {}
  std::vector<Complex> cluster;
};

inline void require_square(const Eigen::MatrixXcd& x, const char* who) {
  if (x.rows() != x.cols())
    throw DimensionError(std::string(who) + ": matrix is not square");
}

inline void require_finite(const Eigen::MatrixXcd& x, const char* who) {
  if (!x.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

/// Side length of the operators a superoperator matrix acts on.
inline Eigen::Index super_op_dim(const Super& s) {
  require_square(s, "super_op_dim");
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(s.rows()))));
  if (d * d != s.rows())
    throw DimensionError("super_op_dim: matrix side is not a perfect square");
  return d;
}

inline Vector vectorize(const Operator& x) {
  require_square(x, "vectorize");
  return x.reshaped();
}

inline Operator devectorize(const Vector& v, Eigen::Index dim) {
  if (dim <= 0 || v.size() != dim * dim)
    throw DimensionError("devectorize: vector length does not match dim^2");
  return v.reshaped(dim, dim);
}

/// Superoperator of X -> A X.
inline Super left_mult(const Operator& a) {
  require_square(a, "left_mult");
  return Eigen::kroneckerProduct(Operator::Identity(a.rows(), a.rows()), a);
}

/// Superoperator of X -> X A.
inline Super right_mult(const Operator& a) {
  require_square(a, "right_mult");
  return Eigen::kroneckerProduct(a.transpose(), Operator::Identity(a.rows(), a.rows()));
}

/// Superoperator of X -> A X B.
inline Super sandwich(const Operator& a, const Operator& b) {
  require_square(a, "sandwich");
  require_square(b, "sandwich");
  if (a.rows() != b.rows()) throw DimensionError("sandwich: dimension mismatch");
  return Eigen::kroneckerProduct(b.transpose(), a);
}

inline Super identity_super(Eigen::Index op_dim) {
  return Super::Identity(op_dim * op_dim, op_dim * op_dim);
}

inline Operator apply_super(const Super& s, const Operator& x) {
  const auto d = super_op_dim(s);
  if (x.rows() != d || x.cols() != d)
    throw DimensionError("apply_super: operator dimension mismatch");
  return devectorize(s * vectorize(x), d);
}

inline Operator kron(const Operator& a, const Operator& b) {
  return Eigen::kroneckerProduct(a, b);
}

/// Matrix of the product map (A (x) B)(X (x) Y) = A(X) (x) B(Y) on the joint
/// space, with A acting on the first tensor factor.
inline Super super_tensor(const Super& a, const Super& b) {
  const auto ds = super_op_dim(a);
  const auto da = super_op_dim(b);
  const auto dj = ds * da;
  Super m = Super::Zero(dj * dj, dj * dj);
  const auto joint = [da, dj](Eigen::Index i, Eigen::Index p, Eigen::Index j, Eigen::Index q) {
    return (j * da + q) * dj + (i * da + p);
  };
  for (Eigen::Index i = 0; i < ds; ++i)
    for (Eigen::Index j = 0; j < ds; ++j)
      for (Eigen::Index i2 = 0; i2 < ds; ++i2)
        for (Eigen::Index j2 = 0; j2 < ds; ++j2) {
          const Complex av = a(j * ds + i, j2 * ds + i2);
          if (av == Complex{}) continue;
          for (Eigen::Index p = 0; p < da; ++p)
            for (Eigen::Index q = 0; q < da; ++q)
              for (Eigen::Index p2 = 0; p2 < da; ++p2)
                for (Eigen::Index q2 = 0; q2 < da; ++q2)
                  m(joint(i, p, j, q), joint(i2, p2, j2, q2)) = av * b(q * da + p, q2 * da + p2);
        }
  return m;
}

/// Trace out every tensor factor except dims[keep] (0-based).
inline Operator partial_trace(const Operator& x, std::span<const Eigen::Index> dims, std::size_t keep) {
  require_square(x, "partial_trace");
  if (dims.empty() || keep >= dims.size())
    throw DimensionError("partial_trace: bad factor index");
  Eigen::Index total = 1;
  for (const auto d : dims) {
    if (d <= 0) throw DimensionError("partial_trace: nonpositive factor dimension");
    total *= d;
  }
  if (total != x.rows())
    throw DimensionError("partial_trace: factor dimensions do not multiply to the matrix size");

  std::vector<Eigen::Index> stride(dims.size());
  Eigen::Index s = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    stride[k] = s;
    s *= dims[k];
  }
  const Eigen::Index dk = dims[keep];
  const Eigen::Index rest = total / dk;

  Operator out = Operator::Zero(dk, dk);
  for (Eigen::Index r = 0; r < rest; ++r) {
    Eigen::Index base = 0, rr = r;
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (k == keep) continue;
      base += (rr % dims[k]) * stride[k];
      rr /= dims[k];
    }
    for (Eigen::Index a = 0; a < dk; ++a)
      for (Eigen::Index b = 0; b < dk; ++b)
        out(a, b) += x(base + a * stride[keep], base + b * stride[keep]);
  }
  return out;
}

inline Operator partial_trace(const Operator& x, std::initializer_list<Eigen::Index> dims, std::size_t keep) {
  return partial_trace(x, std::span<const Eigen::Index>(dims.begin(), dims.size()), keep);
}

inline double hs_norm(const Operator& x) {
  require_finite(x, "hs_norm");
  return x.norm();
}

inline double induced_norm(const Super& s) {
  require_square(s, "induced_norm");
  require_finite(s, "induced_norm");
  if (s.rows() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(s);
  return svd.singularValues()(0);
}

inline double trace_distance(const Operator& a, const Operator& b) {
  require_square(a, "trace_distance");
  if (a.rows() != b.rows()) throw DimensionError("trace_distance: dimension mismatch");
  Operator d = a - b;
  d = 0.5 * (d + d.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Operator> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline bool is_density_matrix(const Operator& x, double trace_tol = 1e-12,
                              double hermitian_tol = 1e-12, double eigen_floor = -1e-10) {
  if (x.rows() != x.cols() || x.rows() == 0 || !x.allFinite()) return false;
  const Complex tr = x.trace();
  if (std::abs(tr.real() - 1.0) > trace_tol || std::abs(tr.imag()) > trace_tol) return false;
  if ((x - x.adjoint().eval()).cwiseAbs().maxCoeff() > hermitian_tol) return false;
  Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (x + x.adjoint().eval()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= eigen_floor;
}

/// exp(A t) by Pade order-13 scaling-and-squaring only.  Makes no
/// diagonalizability assumption; the right choice for non-normal matrices.
inline Eigen::MatrixXcd expm_pade(const Eigen::MatrixXcd& a, double t = 1.0) {
  require_square(a, "expm_pade");
  require_finite(a, "expm_pade");
  if (!std::isfinite(t)) throw std::invalid_argument("expm_pade: non-finite time");
  return (a * t).exp();
}

/// exp(A t).  Uses the eigendecomposition fast path when A is diagonalizable
/// with an eigenvector basis conditioned better than 1e8, and falls back to
/// Pade order-13 scaling-and-squaring otherwise.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a, double t = 1.0) {
  require_square(a, "expm");
  require_finite(a, "expm");
  if (!std::isfinite(t)) throw std::invalid_argument("expm: non-finite time");
  if (a.rows() == 0) return a;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, true);
  if (es.info() == Eigen::Success) {
    const Eigen::MatrixXcd& v = es.eigenvectors();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(v);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin > 0.0 && sv(0) / smin < 1e8) {
      const Vector phases = (es.eigenvalues().array() * t).exp();
      return v * phases.asDiagonal() *
             v.partialPivLu().solve(Eigen::MatrixXcd::Identity(a.rows(), a.rows()));
    }
  }
  return (a * t).exp();
}

// Biorthonormalized spectrum of a (generally non-normal) superoperator.
struct Spectrum {
  Vector eigenvalues;             // ascending in |Re|, ties broken by Im
  Eigen::MatrixXcd right_vectors; // unit-norm columns
  Eigen::MatrixXcd left_vectors;  // columns; left.col(i).adjoint() * right.col(j) = delta_ij
};

namespace detail {

inline std::vector<Complex> tightest_cluster(const Vector& lam, double tol) {
  std::vector<Complex> cluster;
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index bi = 0, bj = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    for (Eigen::Index j = i + 1; j < lam.size(); ++j) {
      const double d = std::abs(lam(i) - lam(j));
      if (d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  if (lam.size() < 2) return cluster;
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    if (std::abs(lam(k) - lam(bi)) <= std::max(tol, best * 2) ||
        std::abs(lam(k) - lam(bj)) <= std::max(tol, best * 2))
      cluster.push_back(lam(k));
  return cluster;
}

}  // namespace detail

/// Eigendecomposition with a biorthonormal left/right pair.  Right vectors
/// come out unit-norm and the left vectors are the matching dual basis, so
/// degenerate-but-diagonalizable clusters are handled blockwise for free.
inline Spectrum eig(const Super& s, double cluster_tol = 1e-9) {
  require_square(s, "eig");
  require_finite(s, "eig");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(s, true);
  if (es.info() != Eigen::Success) throw std::runtime_error("eig: eigensolver did not converge");

  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Vector& lam = es.eigenvalues();

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(v);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > 1e12) {
    std::ostringstream msg;
    msg << "eig: eigenvector basis is numerically singular (condition "
        << (smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity())
        << "); cannot biorthonormalize the degenerate cluster";
    throw DegenerateSpectrumError(msg.str(), detail::tightest_cluster(lam, cluster_tol));
  }
  const Eigen::MatrixXcd w =
      v.partialPivLu().solve(Eigen::MatrixXcd::Identity(v.rows(), v.rows()));

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(lam.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::sort(idx.begin(), idx.end(), [&lam](Eigen::Index i, Eigen::Index j) {
    const double ri = std::abs(lam(i).real()), rj = std::abs(lam(j).real());
    if (ri != rj) return ri < rj;
    if (lam(i).imag() != lam(j).imag()) return lam(i).imag() < lam(j).imag();
    return lam(i).real() < lam(j).real();
  });

  Spectrum out;
  out.eigenvalues.resize(lam.size());
  out.right_vectors.resize(v.rows(), v.cols());
  out.left_vectors.resize(v.rows(), v.cols());
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    out.eigenvalues(k) = lam(idx[static_cast<std::size_t>(k)]);
    out.right_vectors.col(k) = v.col(idx[static_cast<std::size_t>(k)]);
    out.left_vectors.col(k) = w.row(idx[static_cast<std::size_t>(k)]).adjoint();
  }
  return out;
}

}  // namespace qthermo

#endif  // QTHERMO_LINOPS_HPP
