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

#ifndef QTHERMO_SCHEME_HPP
#define QTHERMO_SCHEME_HPP

// The thermometry engine.
//
// One probing time (1/g) multiplies the ancilla coherence by Gamma per
// probe and by e^{-2 eta} for the ancilla dephasing, so
//
//   rho_A(t1) = [[s00, s01 Gamma^N e^{-2 eta}], [c.c., s11]].
//
// Gamma is available in closed form (gamma_analytic) and as the trace of
// the coherence-sector propagator applied to the probe state
// (gamma_numeric); both must agree.  On top of that sit the quantum Fisher
// information routes: the ideal N^2 law, the closed form for the worked
// dephasing example, the generic eigendecomposition formula, and the
// arbitrary-ancilla-noise expression built from the rotating-wave sector
// decomposition of the noise generator.
//
// Temperature derivatives are central finite differences with one
// Richardson step (h = 1e-6 theta).  When probes are prepared in the
// theta-dependent steady state the derivative follows the preparation;
// for an explicitly fixed probe state it does not.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "qthermo/oracle.hpp"

namespace qthermo {

struct SchemeConfig {
  QubitThermalModel model;
  long n_probes = 1;
  Operator ancilla_initial = plus_state();
  Operator probe_initial;  // empty: probes prepared in the steady state rho_T(theta)

  void validate() const {
    model.validate();
    if (n_probes < 1) throw std::invalid_argument("SchemeConfig: n_probes must be >= 1");
    if (ancilla_initial.rows() != 2 || !is_density_matrix(ancilla_initial, 1e-10, 1e-10, -1e-9))
      throw std::invalid_argument("SchemeConfig: ancilla_initial is not a qubit density matrix");
    if (probe_initial.size() != 0 &&
        (probe_initial.rows() != 2 || !is_density_matrix(probe_initial, 1e-10, 1e-10, -1e-9)))
      throw std::invalid_argument("SchemeConfig: probe_initial is not a qubit density matrix");
  }
};

struct GammaValue {
  Complex value;
  Complex dvalue_dtheta;
};

// Probe-space generator of the joint dynamics restricted to one ancilla
// matrix-element sector: populations of the ancilla pick up -+i[S, .] from
// the sigma_z (x) sigma_z coupling, coherences pick up -+i{S, .}.
enum class AncillaSector { Pop00, Pop11, Coh01, Coh10 };

inline Super sector_liouvillian(const QubitThermalModel& m, AncillaSector sector) {
  Super l = build_liouvillian(probe_liouvillian(m)) + build_liouvillian(probe_noise(m));
  const Super lz = left_mult(pauli_z());
  const Super rz = right_mult(pauli_z());
  switch (sector) {
    case AncillaSector::Pop00: l += -kImag * (lz - rz); break;
    case AncillaSector::Pop11: l += kImag * (lz - rz); break;
    case AncillaSector::Coh01: l += -kImag * (lz + rz); break;
    case AncillaSector::Coh10: l += kImag * (lz + rz); break;
  }
  return l;
}

namespace detail {

template <class F>
auto richardson_derivative(F&& f, double x, double h) {
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  const auto d1 = central(h);
  const auto d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

// Closed form for the per-probe coherence factor.  With a = 2 nbar + 1 and
// z the probe population difference rho00 - rho11,
//   Delta   = a^2 xi^2 - 8 i xi - 16,
//   w_pm    = (-a xi +- sqrt(Delta)) / 2,
//   Gamma   = sum_pm e^{w_pm} (1 +- (a xi - 4 i z)/sqrt(Delta)) / 2.
// The principal square-root branch is used; the expression is invariant
// under flipping the branch, and continuity in xi is covered by tests.
// xi = +infinity yields the limit e^{-2 i / a}, independent of z.
inline Complex gamma_closed_form(double a, double xi, double z) {
  if (!std::isfinite(xi)) return std::exp(-2.0 * kImag / a);
  const Complex delta = a * a * xi * xi - 8.0 * kImag * xi - 16.0;
  const Complex root = std::sqrt(delta);
  const Complex b = (a * xi - 4.0 * kImag * z) / root;
  return 0.5 * (std::exp(0.5 * (-a * xi + root)) * (1.0 + b) +
                std::exp(0.5 * (-a * xi - root)) * (1.0 - b));
}

inline void check_contraction(const GammaValue& g) {
  if (!(std::abs(g.value) <= 1.0 + 1e-10))
    throw std::logic_error("gamma: |Gamma| exceeds 1 beyond tolerance");
}

}  // namespace detail

/// Gamma for probes prepared in the theta-dependent steady state.
inline GammaValue gamma_analytic(const QubitThermalModel& m) {
  m.validate();
  const auto value_at = [&m](double theta) {
    const ThermalQuantities q = thermal_quantities(theta);
    return detail::gamma_closed_form(2.0 * q.nbar + 1.0, m.xi, q.phi);
  };
  const GammaValue g{value_at(m.theta),
                     detail::richardson_derivative(value_at, m.theta, 1e-6 * m.theta)};
  detail::check_contraction(g);
  return g;
}

/// Gamma for probes prepared in a fixed state; only the generator varies
/// with temperature.
inline GammaValue gamma_analytic(const QubitThermalModel& m, const Operator& probe_initial) {
  m.validate();
  if (probe_initial.rows() != 2 || !is_density_matrix(probe_initial, 1e-10, 1e-10, -1e-9))
    throw std::invalid_argument("gamma_analytic: probe_initial is not a qubit density matrix");
  const double z = (probe_initial(0, 0) - probe_initial(1, 1)).real();
  const auto value_at = [&m, z](double theta) {
    return detail::gamma_closed_form(2.0 * thermal_quantities(theta).nbar + 1.0, m.xi, z);
  };
  const GammaValue g{value_at(m.theta),
                     detail::richardson_derivative(value_at, m.theta, 1e-6 * m.theta)};
  detail::check_contraction(g);
  return g;
}

namespace detail {

inline GammaValue gamma_from_sector(const QubitThermalModel& m,
                                    const std::optional<Operator>& probe_initial) {
  m.validate();
  if (!std::isfinite(m.xi))
    throw std::invalid_argument("gamma_numeric: xi must be finite");
  const auto value_at = [&](double theta) {
    QubitThermalModel mt = m;
    mt.theta = theta;
    const Operator rho = probe_initial ? *probe_initial : gibbs_state(theta);
    return apply_super(expm(sector_liouvillian(mt, AncillaSector::Coh01), 1.0), rho).trace();
  };
  const GammaValue g{value_at(m.theta),
                     richardson_derivative(value_at, m.theta, 1e-6 * m.theta)};
  check_contraction(g);
  return g;
}

}  // namespace detail

/// Gamma as the trace of the coherence-sector propagator over the probe
/// prepared in the steady state (re-derived at each differentiation node).
inline GammaValue gamma_numeric(const QubitThermalModel& m) {
  return detail::gamma_from_sector(m, std::nullopt);
}

inline GammaValue gamma_numeric(const QubitThermalModel& m, const Operator& probe_initial) {
  if (probe_initial.rows() != 2 || !is_density_matrix(probe_initial, 1e-10, 1e-10, -1e-9))
    throw std::invalid_argument("gamma_numeric: probe_initial is not a qubit density matrix");
  return detail::gamma_from_sector(m, probe_initial);
}

namespace detail {

inline GammaValue config_gamma(const SchemeConfig& config) {
  return config.probe_initial.size() == 0 ? gamma_analytic(config.model)
                                          : gamma_analytic(config.model, config.probe_initial);
}

}  // namespace detail

/// Ancilla state after the probing time.
inline Operator output_state(const SchemeConfig& config) {
  config.validate();
  const GammaValue g = detail::config_gamma(config);
  const Complex coh = config.ancilla_initial(0, 1) *
                      std::pow(g.value, static_cast<double>(config.n_probes)) *
                      std::exp(-2.0 * config.model.eta);
  Operator out(2, 2);
  out << config.ancilla_initial(0, 0), coh, std::conj(coh), config.ancilla_initial(1, 1);
  return out;
}

/// Temperature derivative of output_state.
inline Operator output_state_derivative(const SchemeConfig& config) {
  config.validate();
  const GammaValue g = detail::config_gamma(config);
  const double n = static_cast<double>(config.n_probes);
  const Complex dcoh = config.ancilla_initial(0, 1) * n * std::pow(g.value, n - 1.0) *
                       g.dvalue_dtheta * std::exp(-2.0 * config.model.eta);
  Operator out = Operator::Zero(2, 2);
  out(0, 1) = dcoh;
  out(1, 0) = std::conj(dcoh);
  return out;
}

/// QFI of the noiseless scheme, N^2 (a_M - a_m)^2 |dphi|^2.
inline double qfi_ideal(long n_probes, double a_gap, double dphi) {
  if (n_probes < 1) throw std::invalid_argument("qfi_ideal: n_probes must be >= 1");
  if (!(a_gap > 0.0))
    throw std::invalid_argument("qfi_ideal: observable spectral gap must be positive");
  const double n = static_cast<double>(n_probes);
  return n * n * a_gap * a_gap * dphi * dphi;
}

/// Strong-thermalization limit of the worked example with ancilla
/// dephasing, 4 N^2 |dphi|^2 e^{-4 eta}.
inline double qfi_ideal_limit(long n_probes, double eta, double dphi) {
  if (n_probes < 1) throw std::invalid_argument("qfi_ideal_limit: n_probes must be >= 1");
  if (!(eta >= 0.0)) throw std::invalid_argument("qfi_ideal_limit: eta must be nonnegative");
  const double n = static_cast<double>(n_probes);
  return 4.0 * n * n * dphi * dphi * std::exp(-4.0 * eta);
}

/// delta T = 1 / sqrt(nu * QFI).
inline double cramer_rao(double qfi, double nu) {
  if (!(qfi > 0.0)) throw std::invalid_argument("cramer_rao: QFI must be positive");
  if (!(nu >= 1.0)) throw std::invalid_argument("cramer_rao: nu must be >= 1");
  return 1.0 / std::sqrt(nu * qfi);
}

/// Closed-form QFI of the output state for general initial states,
///
///   F = 4 N^2 |s01|^2 |G|^{2N-2} |dG|^2 e^{-4 eta}
///     + 4 N^2 |s01|^4 |G|^{4N-2} (d|G|)^2 e^{-8 eta}
///       / (s00 s11 - |s01|^2 |G|^{2N} e^{-4 eta}).
///
/// The denominator vanishes only at the pure ideal-limit point, where
/// d|Gamma| vanishes identically; the second term is 0 there.
inline double qfi_example_noise(const SchemeConfig& config) {
  config.validate();
  const GammaValue g = detail::config_gamma(config);
  const double abs_g = std::abs(g.value);
  const double dabs_g = abs_g > 0.0 ? (std::conj(g.value) * g.dvalue_dtheta).real() / abs_g : 0.0;

  const double n = static_cast<double>(config.n_probes);
  const double s00 = config.ancilla_initial(0, 0).real();
  const double s11 = config.ancilla_initial(1, 1).real();
  const double c2 = std::norm(config.ancilla_initial(0, 1));
  const double e4 = std::exp(-4.0 * config.model.eta);

  const double first = 4.0 * n * n * c2 * std::pow(abs_g, 2.0 * n - 2.0) *
                       std::norm(g.dvalue_dtheta) * e4;
  const double denom = s00 * s11 - c2 * std::pow(abs_g, 2.0 * n) * e4;
  double second = 0.0;
  if (denom > 1e-14)
    second = 4.0 * n * n * c2 * c2 * std::pow(abs_g, 4.0 * n - 2.0) * dabs_g * dabs_g * e4 * e4 /
             denom;
  return first + second;
}

/// Eigendecomposition QFI, 2 sum_{p_k + p_l > cutoff} |<k|drho|l>|^2 / (p_k + p_l).
inline double qfi_generic(const Operator& rho, const Operator& drho, double eigen_cutoff = 1e-12) {
  require_square(rho, "qfi_generic");
  if (rho.rows() != drho.rows() || drho.rows() != drho.cols())
    throw DimensionError("qfi_generic: dimension mismatch");
  if ((rho - rho.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("qfi_generic: rho is not Hermitian");
  if ((drho - drho.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-9 ||
      std::abs(drho.trace()) > 1e-9)
    throw std::invalid_argument("qfi_generic: drho must be Hermitian and traceless");

  Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.adjoint().eval()));
  const Eigen::VectorXd p = es.eigenvalues();
  const Operator m = es.eigenvectors().adjoint() * (0.5 * (drho + drho.adjoint().eval())) *
                     es.eigenvectors();
  double out = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k)
    for (Eigen::Index l = 0; l < p.size(); ++l)
      if (p(k) + p(l) > eigen_cutoff) out += 2.0 * std::norm(m(k, l)) / (p(k) + p(l));
  return out;
}

// Ancilla state dressed by its own noise over one probing time, computed
// from the rotating-wave sector decomposition of the noise generator.
struct NoiseDressedState {
  Operator delta;
  Eigen::VectorXd eigenvalues;    // p_k
  Eigen::MatrixXcd eigenvectors;  // columns |phi_k>
};

/// Splits every jump operator into eigenvalue-difference sectors of A
/// (clustered within diff_tol), rebuilds the generator from the sectors,
/// and applies it for one probing time to ancilla_initial.
inline NoiseDressedState dressed_ancilla_state(const Operator& a, const LindbladSpec& noise,
                                               const Operator& ancilla_initial,
                                               double diff_tol = 1e-9) {
  require_square(a, "dressed_ancilla_state");
  if ((a - a.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("dressed_ancilla_state: observable is not Hermitian");
  validate(noise);
  if (noise.hamiltonian.rows() != a.rows() || ancilla_initial.rows() != a.rows())
    throw DimensionError("dressed_ancilla_state: dimension mismatch");
  if (!is_density_matrix(ancilla_initial, 1e-10, 1e-10, -1e-9))
    throw std::invalid_argument("dressed_ancilla_state: initial state is not a density matrix");

  const auto d = a.rows();
  Eigen::SelfAdjointEigenSolver<Operator> esa(a);
  const Eigen::VectorXd av = esa.eigenvalues();
  const Operator u = esa.eigenvectors();

  // cluster the pairwise eigenvalue differences
  std::vector<std::pair<double, std::pair<Eigen::Index, Eigen::Index>>> diffs;
  diffs.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index mu = 0; mu < d; ++mu)
    for (Eigen::Index nu = 0; nu < d; ++nu)
      diffs.push_back({av(mu) - av(nu), {mu, nu}});
  std::sort(diffs.begin(), diffs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> sectors;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    if (k == 0 || diffs[k].first - diffs[k - 1].first > diff_tol) sectors.emplace_back();
    sectors.back().push_back(diffs[k].second);
  }

  Super l_rwa = Super::Zero(d * d, d * d);
  for (const auto& [rate, jump] : noise.jumps) {
    const Operator jb = u.adjoint() * jump * u;
    for (const auto& sector : sectors) {
      Operator kd = Operator::Zero(d, d);
      for (const auto& [mu, nu] : sector) kd(mu, nu) = jb(mu, nu);
      if (kd.cwiseAbs().maxCoeff() == 0.0) continue;
      const Operator kop = u * kd * u.adjoint();
      const Operator kdk = kop.adjoint() * kop;
      l_rwa += rate * (sandwich(kop, kop.adjoint()) - 0.5 * (left_mult(kdk) + right_mult(kdk)));
    }
  }

  NoiseDressedState out;
  out.delta = apply_super(expm(l_rwa, 1.0), ancilla_initial);
  out.delta = 0.5 * (out.delta + out.delta.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Operator> esd(out.delta);
  out.eigenvalues = esd.eigenvalues();
  out.eigenvectors = esd.eigenvectors();
  if (out.eigenvalues.minCoeff() < -1e-10 || std::abs(out.eigenvalues.sum() - 1.0) > 1e-10)
    throw std::logic_error("dressed_ancilla_state: dressed state is not a density matrix");
  return out;
}

/// QFI under arbitrary ancilla noise,
/// 2 N^2 |dphi|^2 sum_{k != l} p_{k,l} |<phi_k|A|phi_l>|^2 with
/// p_{k,l} = (p_k - p_l)^2 / (p_k + p_l) and 0 when both vanish.
inline double general_noise_qfi(const Operator& a, const LindbladSpec& noise,
                                const Operator& ancilla_initial, long n_probes, double dphi) {
  if (n_probes < 1) throw std::invalid_argument("general_noise_qfi: n_probes must be >= 1");
  const NoiseDressedState ds = dressed_ancilla_state(a, noise, ancilla_initial);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < ds.eigenvalues.size(); ++k)
    for (Eigen::Index l = 0; l < ds.eigenvalues.size(); ++l) {
      if (k == l) continue;
      const double pk = std::max(ds.eigenvalues(k), 0.0);
      const double pl = std::max(ds.eigenvalues(l), 0.0);
      if (pk + pl <= 1e-15) continue;
      const Complex matel =
          (ds.eigenvectors.col(k).adjoint() * a * ds.eigenvectors.col(l)).value();
      sum += (pk - pl) * (pk - pl) / (pk + pl) * std::norm(matel);
    }
  const double n = static_cast<double>(n_probes);
  return 2.0 * n * n * dphi * dphi * sum;
}

struct EffectiveDynamicsPoint {
  double xi;
  double g_over_lambda;
  double deviation;  // trace distance to the phase-accumulation unitary picture
};

/// Reduced one-probe dynamics against exp(-i phi_T sigma_z) . exp(i phi_T
/// sigma_z) over a grid of thermalization strengths.  Deviations shrink as
/// the thermalization gets stronger.
inline std::vector<EffectiveDynamicsPoint> effective_ancilla_check(
    QubitThermalModel model, std::span<const double> xi_grid,
    const Operator& ancilla_initial = plus_state()) {
  model.eta = 0.0;
  model.kappa_s_over_g = 0.0;
  const double phi = thermal_quantities(model.theta).phi;
  Operator u = Operator::Zero(2, 2);
  u(0, 0) = std::exp(-kImag * phi);
  u(1, 1) = std::exp(kImag * phi);
  const Operator target = u * ancilla_initial * u.adjoint();

  std::vector<EffectiveDynamicsPoint> out;
  out.reserve(xi_grid.size());
  for (const double xi : xi_grid) {
    model.xi = xi;
    const JointSystem sys = build_joint(model, 1, gibbs_state(model.theta), ancilla_initial);
    const Operator reduced = evolve_and_reduce(sys, 1.0);
    const double gap = damping_basis(build_liouvillian(probe_liouvillian(model))).gap;
    out.push_back({xi, 1.0 / gap, trace_distance(reduced, target)});
  }
  return out;
}

inline std::vector<EffectiveDynamicsPoint> effective_ancilla_check(
    const QubitThermalModel& model, std::initializer_list<double> xi_grid,
    const Operator& ancilla_initial = plus_state()) {
  return effective_ancilla_check(model, std::span<const double>(xi_grid.begin(), xi_grid.size()),
                                 ancilla_initial);
}

}  // namespace qthermo

#endif  // QTHERMO_SCHEME_HPP
