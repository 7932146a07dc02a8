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

#ifndef QTHERMO_MODELS_HPP
#define QTHERMO_MODELS_HPP

// The worked physical example: a qubit probe thermalizing with a bosonic
// bath, coupled through sigma_z (x) sigma_z to a qubit ancilla, with
// optional dephasing on both.
//
// Everything is dimensionless: hbar = kB = 1, energies in units of the
// qubit splitting, rates in units of the probe-ancilla coupling g, time in
// units of 1/g.  The probing time is exactly 1 in these units.

#include <cmath>

#include "qthermo/lindblad.hpp"

namespace qthermo {

inline Operator pauli_x() {
  Operator s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

inline Operator pauli_y() {
  Operator s(2, 2);
  s << 0, -kImag, kImag, 0;
  return s;
}

inline Operator pauli_z() {
  Operator s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

// sigma_- = |0><1| lowers into the sigma_z = +1 ground state, so the Gibbs
// populations satisfy tr(sigma_z rho_T) = +1/(2 nbar + 1).
inline Operator sigma_minus() {
  Operator s = Operator::Zero(2, 2);
  s(0, 1) = 1;
  return s;
}

inline Operator sigma_plus() {
  Operator s = Operator::Zero(2, 2);
  s(1, 0) = 1;
  return s;
}

/// (|0> + |1>)(<0| + <1|) / 2.
inline Operator plus_state() { return Operator::Constant(2, 2, 0.5); }

struct QubitThermalModel {
  double theta;                 // kB T / (hbar Omega)
  double xi;                    // gamma / g; +infinity selects the ideal limit
  double eta = 0.0;             // kappa_A / g
  double kappa_s_over_g = 0.0;  // kappa_S / g

  void validate() const {
    if (!(theta > 0.0) || !std::isfinite(theta))
      throw std::invalid_argument("QubitThermalModel: theta must be positive and finite");
    if (!(xi > 0.0))
      throw std::invalid_argument("QubitThermalModel: xi must be positive");
    if (!(eta >= 0.0) || !std::isfinite(eta))
      throw std::invalid_argument("QubitThermalModel: eta must be finite and nonnegative");
    if (!(kappa_s_over_g >= 0.0) || !std::isfinite(kappa_s_over_g))
      throw std::invalid_argument("QubitThermalModel: kappa_s_over_g must be finite and nonnegative");
  }
};

struct ThermalQuantities {
  double nbar;         // bath occupation 1/(e^{1/theta} - 1)
  double phi;          // tr(sigma_z rho_T) = tanh(1/(2 theta)) = 1/(2 nbar + 1)
  double dphi_dtheta;  // -sech^2(1/(2 theta)) / (2 theta^2)
  double f_th;         // Gibbs-state QFI (1/(2 theta^2))^2 sech^2(1/(2 theta))
};

inline ThermalQuantities thermal_quantities(double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("thermal_quantities: theta must be positive");
  const double x = 1.0 / (2.0 * theta);
  ThermalQuantities q;
  q.nbar = 1.0 / std::expm1(2.0 * x);
  q.phi = std::tanh(x);
  const double sech2 = 1.0 / (std::cosh(x) * std::cosh(x));
  q.dphi_dtheta = -sech2 * x / theta;
  q.f_th = (x / theta) * (x / theta) * sech2;
  return q;
}

/// Gibbs state of the probe, diag((1 + phi)/2, (1 - phi)/2).
inline Operator gibbs_state(double theta) {
  const double phi = thermal_quantities(theta).phi;
  Operator rho = Operator::Zero(2, 2);
  rho(0, 0) = 0.5 * (1.0 + phi);
  rho(1, 1) = 0.5 * (1.0 - phi);
  return rho;
}

/// Thermalization generator of one probe.  The free-splitting term only
/// rotates probe coherences, which stay decoupled from every quantity this
/// model feeds; its scale is fixed at g.
inline LindbladSpec probe_liouvillian(const QubitThermalModel& m) {
  m.validate();
  if (!std::isfinite(m.xi))
    throw std::invalid_argument("probe_liouvillian: xi must be finite to build the generator");
  const double nbar = thermal_quantities(m.theta).nbar;
  LindbladSpec spec;
  spec.hamiltonian = -0.5 * pauli_z();
  spec.jumps = {{m.xi * (nbar + 1.0), sigma_minus()}, {m.xi * nbar, sigma_plus()}};
  return spec;
}

/// Pure dephasing on one probe at rate kappa_S/g.
inline LindbladSpec probe_noise(const QubitThermalModel& m) {
  m.validate();
  return {Operator::Zero(2, 2), {{m.kappa_s_over_g, pauli_z()}}};
}

/// Pure dephasing on the ancilla at rate eta.
inline LindbladSpec ancilla_noise(const QubitThermalModel& m) {
  m.validate();
  return {Operator::Zero(2, 2), {{m.eta, pauli_z()}}};
}

}  // namespace qthermo

#endif  // QTHERMO_MODELS_HPP
