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

#ifndef QTHERMO_LINDBLAD_HPP
#define QTHERMO_LINDBLAD_HPP

// Liouvillian construction and spectral analysis: steady states, damping
// bases, dissipative gaps, and the projection-technique error bounds for
// the memory kernel.

#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "qthermo/linops.hpp"

namespace qthermo {

class UniquenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundInapplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LindbladSpec {
  Operator hamiltonian;  // units of the reference rate g, hbar = 1
  std::vector<std::pair<double, Operator>> jumps;  // (rate >= 0, jump operator)
};

inline void validate(const LindbladSpec& spec) {
  require_square(spec.hamiltonian, "LindbladSpec");
  require_finite(spec.hamiltonian, "LindbladSpec");
  for (const auto& [rate, op] : spec.jumps) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
      throw std::invalid_argument("LindbladSpec: jump rates must be finite and nonnegative");
    if (op.rows() != spec.hamiltonian.rows() || op.cols() != spec.hamiltonian.cols())
      throw DimensionError("LindbladSpec: jump operator dimension mismatch");
    require_finite(op, "LindbladSpec");
  }
}

/// L = -i[H, .] + sum_l rate_l (K_l . K_l^dag - 1/2 {K_l^dag K_l, .}).
/// The trace functional is checked to be a left null vector.
inline Super build_liouvillian(const LindbladSpec& spec) {
  validate(spec);
  const Operator& h = spec.hamiltonian;
  Super l = -kImag * (left_mult(h) - right_mult(h));
  for (const auto& [rate, op] : spec.jumps) {
    const Operator kdk = op.adjoint() * op;
    l += rate * (sandwich(op, op.adjoint()) - 0.5 * (left_mult(kdk) + right_mult(kdk)));
  }
  const auto d = h.rows();
  const double scale = std::max(1.0, l.size() ? l.cwiseAbs().maxCoeff() : 1.0);
  if ((vectorize(Operator::Identity(d, d)).adjoint() * l).norm() > 1e-10 * scale)
    throw std::logic_error("build_liouvillian: generator is not trace-preserving");
  return l;
}

/// Trace-one Hermitian null vector of L; requires the zero eigenvalue to be
/// simple within zero_tol.
inline Operator steady_state(const Super& l, double zero_tol = 1e-10) {
  const Spectrum sp = eig(l);
  const auto d = super_op_dim(l);
  Eigen::Index zero_index = -1;
  int zero_count = 0;
  for (Eigen::Index k = 0; k < sp.eigenvalues.size(); ++k) {
    if (std::abs(sp.eigenvalues(k)) < zero_tol) {
      ++zero_count;
      zero_index = k;
    }
  }
  if (zero_count == 0)
    throw UniquenessError("steady_state: no zero eigenvalue within tolerance");
  if (zero_count > 1)
    throw UniquenessError("steady_state: zero eigenvalue is degenerate, steady state not unique");

  Operator rho = devectorize(sp.right_vectors.col(zero_index), d);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw UniquenessError("steady_state: null vector is traceless");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint().eval());
  if (!is_density_matrix(rho, 1e-10, 1e-10, -1e-10))
    throw std::runtime_error("steady_state: null vector is not a density matrix");
  return rho;
}

// Spectral data of a Liouvillian: the biorthonormal eigen-operator pairs,
// the dissipative gap, and the basis constant
// epsilon = sum over decaying modes of ||L_mu|| ||R_mu||.
struct DampingBasis {
  Spectrum spectrum;
  double epsilon = 0.0;
  double gap = 0.0;
};

inline DampingBasis damping_basis(const Super& l, double zero_tol = 1e-10) {
  DampingBasis db;
  db.spectrum = eig(l);
  const auto d = super_op_dim(l);
  const auto n = db.spectrum.eigenvalues.size();

  double gap = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> zero_modes;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(db.spectrum.eigenvalues(k)) < zero_tol) {
      zero_modes.push_back(k);
      continue;
    }
    db.epsilon += db.spectrum.left_vectors.col(k).norm() * db.spectrum.right_vectors.col(k).norm();
    gap = std::min(gap, std::abs(db.spectrum.eigenvalues(k).real()));
  }
  db.gap = std::isfinite(gap) ? gap : 0.0;

  if (zero_modes.size() == 1) {
    const Operator r0 = devectorize(db.spectrum.right_vectors.col(zero_modes[0]), d);
    const Complex tr = r0.trace();
    if (std::abs(tr) > 1e-12) {
      const Vector proj = vectorize(Operator((r0 / tr).eval()));
      const Vector dual = vectorize(Operator::Identity(d, d));
      // Q R_0 = 0 and Q R_mu = R_mu for the decaying modes
      for (Eigen::Index k = 0; k < n; ++k) {
        const Vector rv = db.spectrum.right_vectors.col(k);
        const Vector qrv = rv - proj * (dual.adjoint() * rv);
        const double dev = (k == zero_modes[0]) ? qrv.norm() : (qrv - rv).norm();
        if (dev > 1e-8)
          throw std::runtime_error("damping_basis: steady-state projector does not split the decaying modes");
      }
    }
  }
  return db;
}

/// P X = rho_ss (x) tr_first(X) on a (first (x) second)-factor space; with
/// ancilla_dim = 1 this is the single-space projector P X = rho_ss tr(X).
inline Super steady_projector(const Operator& rho_ss, Eigen::Index ancilla_dim = 1) {
  require_square(rho_ss, "steady_projector");
  if (ancilla_dim <= 0) throw DimensionError("steady_projector: nonpositive ancilla dimension");
  const Eigen::Index ds = rho_ss.rows();
  const Eigen::Index dj = ds * ancilla_dim;
  const std::vector<Eigen::Index> dims{ds, ancilla_dim};
  Super p(dj * dj, dj * dj);
  Vector basis = Vector::Zero(dj * dj);
  for (Eigen::Index col = 0; col < dj * dj; ++col) {
    basis(col) = 1.0;
    const Operator reduced = partial_trace(devectorize(basis, dj), dims, 1);
    p.col(col) = vectorize(Operator(kron(rho_ss, reduced)));
    basis(col) = 0.0;
  }
  return p;
}

/// Norm bound on the memory kernel accumulated over one probing time:
/// eps * g * ||P||^2 ||K||^2 / (gap/g - eps ||K||), valid only when the
/// thermalization dominates, gap/g > eps ||K||.
inline double memory_bound(const Super& probe_liouvillian, const Super& coupling, double g,
                           double eps, double gap) {
  if (!(g >= 0.0) || !std::isfinite(g))
    throw std::invalid_argument("memory_bound: coupling strength must be finite and nonnegative");
  const Operator rho = steady_state(probe_liouvillian);
  const auto ds = rho.rows();
  const auto dj = super_op_dim(coupling);
  if (dj % ds != 0)
    throw DimensionError("memory_bound: coupling space is not a multiple of the probe space");
  const double norm_k = induced_norm(coupling);
  if (g == 0.0) return 0.0;
  if (!(gap / g > eps * norm_k))
    throw BoundInapplicableError(
        "memory_bound: bound inapplicable, gap/g <= eps*||K|| (thermalization too weak)");
  const double norm_p = induced_norm(steady_projector(rho, dj / ds));
  return eps * g * norm_p * norm_p * norm_k * norm_k / (gap / g - eps * norm_k);
}

struct DecayBoundPoint {
  double dt;
  double lhs;  // ||exp(Q L dt) Q||
  double rhs;  // eps * exp((eps g ||K|| - gap) dt)
};

/// Both sides of the exponential-decay bound on the projected propagator,
/// evaluated on a grid of time separations.  probe_liouvillian acts on the
/// probe alone; coupling acts on the joint probe (x) ancilla space.
inline std::vector<DecayBoundPoint> decay_bound_check(const Super& probe_liouvillian,
                                                      const Super& coupling, double g,
                                                      std::span<const double> t_grid) {
  const DampingBasis db = damping_basis(probe_liouvillian);
  const Operator rho = steady_state(probe_liouvillian);
  const auto ds = rho.rows();
  const auto dj = super_op_dim(coupling);
  if (dj % ds != 0)
    throw DimensionError("decay_bound_check: coupling space is not a multiple of the probe space");
  const auto da = dj / ds;

  const Super p = steady_projector(rho, da);
  const Super q = identity_super(dj) - p;
  const Super ql = q * (super_tensor(probe_liouvillian, identity_super(da)) + g * coupling);
  const double norm_k = induced_norm(coupling);

  std::vector<DecayBoundPoint> out;
  out.reserve(t_grid.size());
  for (const double dt : t_grid) {
    const double lhs = induced_norm(expm(ql, dt) * q);
    const double rhs = db.epsilon * std::exp((db.epsilon * g * norm_k - db.gap) * dt);
    out.push_back({dt, lhs, rhs});
  }
  return out;
}

inline std::vector<DecayBoundPoint> decay_bound_check(const Super& probe_liouvillian,
                                                      const Super& coupling, double g,
                                                      std::initializer_list<double> t_grid) {
  return decay_bound_check(probe_liouvillian, coupling, g,
                           std::span<const double>(t_grid.begin(), t_grid.size()));
}

}  // namespace qthermo

#endif  // QTHERMO_LINDBLAD_HPP
