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

#ifndef QTHERMO_ORACLE_HPP
#define QTHERMO_ORACLE_HPP

// Brute-force ground truth: the full joint master equation for up to three
// probes plus the ancilla, solved by exponentiating the complete joint
// Liouvillian and partial-tracing down to the ancilla.

#include <vector>

#include "qthermo/models.hpp"

namespace qthermo {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 4^{N+1} superoperator growth; three probes already means 256 x 256.
inline constexpr int kMaxOracleProbes = 3;

struct JointSystem {
  int n_probes;
  Super liouvillian;  // joint space, probes first, ancilla last
  Operator initial;   // probe_initial^{(x) N} (x) ancilla_initial
};

namespace detail {

inline Operator embed_qubit_op(const Operator& op, int site, int n_sites) {
  Operator out = Operator::Identity(1, 1);
  for (int k = 0; k < n_sites; ++k)
    out = kron(out, k == site ? op : Operator::Identity(2, 2));
  return out;
}

}  // namespace detail

/// Full joint Liouvillian of N probes and the ancilla, every term embedded
/// with identity factors.  `coupling` scales the probe-ancilla interaction
/// (1 in units of g); setting it to 0 decouples the ancilla.
inline JointSystem build_joint(const QubitThermalModel& m, int n_probes,
                               Operator probe_initial = Operator(),
                               Operator ancilla_initial = Operator(), double coupling = 1.0) {
  m.validate();
  if (n_probes < 1 || n_probes > kMaxOracleProbes)
    throw CapacityError("build_joint: n_probes must lie in [1, 3]");
  if (!std::isfinite(m.xi))
    throw std::invalid_argument("build_joint: xi must be finite");
  if (probe_initial.size() == 0) probe_initial = gibbs_state(m.theta);
  if (ancilla_initial.size() == 0) ancilla_initial = plus_state();
  if (!is_density_matrix(probe_initial, 1e-10, 1e-10, -1e-9) || probe_initial.rows() != 2)
    throw std::invalid_argument("build_joint: probe_initial is not a qubit density matrix");
  if (!is_density_matrix(ancilla_initial, 1e-10, 1e-10, -1e-9) || ancilla_initial.rows() != 2)
    throw std::invalid_argument("build_joint: ancilla_initial is not a qubit density matrix");

  const int sites = n_probes + 1;
  const int ancilla = n_probes;
  const double nbar = thermal_quantities(m.theta).nbar;

  LindbladSpec spec;
  const Eigen::Index dim = Eigen::Index{1} << sites;
  spec.hamiltonian = Operator::Zero(dim, dim);
  for (int n = 0; n < n_probes; ++n) {
    spec.hamiltonian += detail::embed_qubit_op(-0.5 * pauli_z(), n, sites);
    spec.hamiltonian += coupling * detail::embed_qubit_op(pauli_z(), n, sites) *
                        detail::embed_qubit_op(pauli_z(), ancilla, sites);
    spec.jumps.emplace_back(m.xi * (nbar + 1.0), detail::embed_qubit_op(sigma_minus(), n, sites));
    spec.jumps.emplace_back(m.xi * nbar, detail::embed_qubit_op(sigma_plus(), n, sites));
    if (m.kappa_s_over_g > 0.0)
      spec.jumps.emplace_back(m.kappa_s_over_g, detail::embed_qubit_op(pauli_z(), n, sites));
  }
  if (m.eta > 0.0)
    spec.jumps.emplace_back(m.eta, detail::embed_qubit_op(pauli_z(), ancilla, sites));

  JointSystem sys;
  sys.n_probes = n_probes;
  sys.liouvillian = build_liouvillian(spec);
  sys.initial = ancilla_initial;
  for (int n = 0; n < n_probes; ++n) sys.initial = kron(probe_initial, sys.initial);
  return sys;
}

/// exp(L_joint t) applied to the initial product state, reduced to the
/// ancilla.  Pade scaling-and-squaring throughout; the joint generator is
/// non-normal and no diagonalizability is assumed.
inline Operator evolve_and_reduce(const JointSystem& sys, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("evolve_and_reduce: time must be finite and nonnegative");
  const Operator full = apply_super(expm_pade(sys.liouvillian, t), sys.initial);
  const std::vector<Eigen::Index> dims(static_cast<std::size_t>(sys.n_probes) + 1, 2);
  Operator reduced = partial_trace(full, dims, static_cast<std::size_t>(sys.n_probes));
  if (!is_density_matrix(reduced, 1e-10, 1e-10, -1e-9))
    throw std::runtime_error("evolve_and_reduce: reduced state failed density-matrix checks");
  return 0.5 * (reduced + reduced.adjoint().eval());
}

}  // namespace qthermo

#endif  // QTHERMO_ORACLE_HPP
