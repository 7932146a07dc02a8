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

#ifndef QTHERMO_SWEEP_HPP
#define QTHERMO_SWEEP_HPP

// Parameter sweeps over (N, xi, eta, theta), the N_max search, and
// machine-readable CSV/JSON output.  Grid points are independent; rows are
// always emitted in deterministic grid order no matter how many threads
// compute them.

#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qthermo/scheme.hpp"

namespace qthermo {

enum class SweepMode { ExampleNoise, Ideal, GeneralNoise, InitialState };

inline const char* to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::ExampleNoise: return "example-noise";
    case SweepMode::Ideal: return "ideal";
    case SweepMode::GeneralNoise: return "general-noise";
    case SweepMode::InitialState: return "initial-state";
  }
  return "?";
}

inline std::optional<SweepMode> sweep_mode_from_string(std::string_view s) {
  if (s == "example-noise") return SweepMode::ExampleNoise;
  if (s == "ideal") return SweepMode::Ideal;
  if (s == "general-noise") return SweepMode::GeneralNoise;
  if (s == "initial-state") return SweepMode::InitialState;
  return std::nullopt;
}

struct SweepSpec {
  SweepMode mode = SweepMode::ExampleNoise;
  std::vector<long> n_values;
  std::vector<double> xi_values;
  std::vector<double> eta_values;
  std::vector<double> theta_values;
  // initial-state mode only: ancilla coherence |sigma_01| (diagonal fixed at
  // 1/2) and probe ground population; an empty rho00 list keeps the probes
  // in the steady state.
  std::vector<double> sigma01_values;
  std::vector<double> rho00_values;
  int threads = 1;

  void validate() const {
    if (n_values.empty() || xi_values.empty() || eta_values.empty() || theta_values.empty())
      throw std::invalid_argument("SweepSpec: all of N, xi, eta, theta grids must be non-empty");
    for (const long n : n_values)
      if (n < 1) throw std::invalid_argument("SweepSpec: N values must be >= 1");
    for (const double theta : theta_values)
      for (const double eta : eta_values)
        for (const double xi : xi_values)
          QubitThermalModel{theta, xi, eta, 0.0}.validate();
    for (const double s : sigma01_values)
      if (!(s >= 0.0 && s <= 0.5))
        throw std::invalid_argument("SweepSpec: sigma01 values must lie in [0, 1/2]");
    for (const double r : rho00_values)
      if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("SweepSpec: rho00 values must lie in [0, 1]");
    if (threads < 1) throw std::invalid_argument("SweepSpec: threads must be >= 1");
  }
};

struct SweepRow {
  long n;
  double xi, eta, theta;
  double qfi_over_fth;
  double qfi_ideal_over_fth;
  double ratio;
  // initial-state mode extras; rho00 = -1 marks steady-state preparation
  double sigma01 = 0.5;
  double rho00 = -1.0;
};

struct SweepResult {
  SweepMode mode = SweepMode::ExampleNoise;
  std::vector<SweepRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

namespace detail {

inline SweepRow sweep_row(SweepMode mode, double theta, double eta, double xi, long n,
                          double sigma01, std::optional<double> rho00) {
  const QubitThermalModel model{theta, xi, eta, 0.0};
  const ThermalQuantities q = thermal_quantities(theta);
  double qfi = 0.0, reference = 0.0;
  switch (mode) {
    case SweepMode::ExampleNoise: {
      SchemeConfig config{model, n};
      qfi = qfi_example_noise(config);
      reference = qfi_ideal_limit(n, eta, q.dphi_dtheta);
      break;
    }
    case SweepMode::Ideal: {
      qfi = qfi_ideal(n, 2.0, q.dphi_dtheta);
      reference = qfi;
      break;
    }
    case SweepMode::GeneralNoise: {
      qfi = general_noise_qfi(pauli_z(), ancilla_noise(model), plus_state(), n, q.dphi_dtheta);
      reference = qfi_ideal_limit(n, eta, q.dphi_dtheta);
      break;
    }
    case SweepMode::InitialState: {
      SchemeConfig config{model, n};
      Operator sigma(2, 2);
      sigma << 0.5, sigma01, sigma01, 0.5;
      config.ancilla_initial = sigma;
      if (rho00) {
        Operator rho = Operator::Zero(2, 2);
        rho(0, 0) = *rho00;
        rho(1, 1) = 1.0 - *rho00;
        config.probe_initial = rho;
      }
      qfi = qfi_example_noise(config);
      reference = 4.0 * sigma01 * sigma01 * qfi_ideal_limit(n, eta, q.dphi_dtheta);
      break;
    }
  }
  SweepRow row;
  row.n = n;
  row.xi = xi;
  row.eta = eta;
  row.theta = theta;
  row.qfi_over_fth = qfi / q.f_th;
  row.qfi_ideal_over_fth = reference / q.f_th;
  row.ratio = reference > 0.0 ? qfi / reference : 0.0;
  row.sigma01 = sigma01;
  row.rho00 = rho00 ? *rho00 : -1.0;
  return row;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

inline constexpr const char* kQthermoVersion = "0.1.0";

inline SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> sigma01 =
      spec.mode == SweepMode::InitialState && !spec.sigma01_values.empty() ? spec.sigma01_values
                                                                           : std::vector<double>{0.5};
  std::vector<std::optional<double>> rho00{std::nullopt};
  if (spec.mode == SweepMode::InitialState && !spec.rho00_values.empty()) {
    rho00.clear();
    for (const double r : spec.rho00_values) rho00.emplace_back(r);
  }

  struct Task {
    double theta, eta, xi;
    long n;
    double sigma01;
    std::optional<double> rho00;
  };
  std::vector<Task> tasks;
  for (const double theta : spec.theta_values)
    for (const double eta : spec.eta_values)
      for (const double xi : spec.xi_values)
        for (const long n : spec.n_values)
          for (const double s : sigma01)
            for (const auto& r : rho00) tasks.push_back({theta, eta, xi, n, s, r});

  SweepResult result;
  result.mode = spec.mode;
  result.rows.resize(tasks.size());

  const auto worker = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < tasks.size(); i += stride) {
      const Task& t = tasks[i];
      result.rows[i] = detail::sweep_row(spec.mode, t.theta, t.eta, t.xi, t.n, t.sigma01, t.rho00);
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(spec.threads), std::max<std::size_t>(tasks.size(), 1));
  if (n_threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker, k, n_threads);
    for (auto& th : pool) th.join();
  }

  result.metadata = {
      {"tool", "qthermo"},
      {"version", kQthermoVersion},
      {"mode", to_string(spec.mode)},
      {"convention",
       "hbar = kB = 1; rates in units of g; time in units of 1/g; theta = kB T / (hbar Omega); "
       "QFI in units of the Gibbs-state QFI F_th(theta)"},
      {"generated_at", detail::utc_timestamp()},
  };
  return result;
}

// ---------------------------------------------------------------------------
// N_max search
// ---------------------------------------------------------------------------

// Threshold frozen by calibration: with this tau the largest N at xi = 400,
// theta = 2, eta = 0.1 whose QFI stays within (1 - tau) of the
// strong-thermalization limit is exactly 435.  Out-of-sample, xi = 100, 200,
// 300 then land on 109, 217, 326.
inline constexpr double kDefaultNmaxTau = 0.865207100437043;
inline constexpr long kNmaxSearchCap = 5'000'000;

/// Largest N whose QFI stays at or above (1 - tau) times the
/// strong-thermalization limit at the same eta.  The predicate is evaluated
/// on every N from 1 up to its first failure.  An empty result means the
/// predicate already fails at N = 1 (no Heisenberg window).
inline std::optional<long> find_nmax(const QubitThermalModel& model, double tau = kDefaultNmaxTau) {
  model.validate();
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("find_nmax: tau must lie in (0, 1)");
  const ThermalQuantities q = thermal_quantities(model.theta);
  for (long n = 1; n <= kNmaxSearchCap; ++n) {
    const SchemeConfig config{model, n};
    if (qfi_example_noise(config) < (1.0 - tau) * qfi_ideal_limit(n, model.eta, q.dphi_dtheta))
      return n == 1 ? std::optional<long>{} : std::optional<long>{n - 1};
  }
  throw std::runtime_error("find_nmax: predicate holds beyond the search cap");
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Scientific notation with 12 significant digits.
inline std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

inline void write_csv(const SweepResult& result, std::ostream& os) {
  for (const auto& [key, value] : result.metadata) os << "# " << key << ": " << value << "\n";
  os << "N,xi,eta,theta,qfi_over_fth,qfi_ideal_over_fth,ratio";
  const bool extras = result.mode == SweepMode::InitialState;
  if (extras) os << ",sigma01,rho00";
  os << "\n";
  for (const SweepRow& r : result.rows) {
    os << r.n << ',' << format_sci(r.xi) << ',' << format_sci(r.eta) << ',' << format_sci(r.theta)
       << ',' << format_sci(r.qfi_over_fth) << ',' << format_sci(r.qfi_ideal_over_fth) << ','
       << format_sci(r.ratio);
    if (extras) os << ',' << format_sci(r.sigma01) << ',' << format_sci(r.rho00);
    os << "\n";
  }
}

inline void write_json(const SweepResult& result, std::ostream& os) {
  nlohmann::json j;
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [key, value] : result.metadata) meta[key] = value;
  j["metadata"] = meta;
  j["rows"] = nlohmann::json::array();
  const bool extras = result.mode == SweepMode::InitialState;
  for (const SweepRow& r : result.rows) {
    nlohmann::json row{{"N", r.n},
                       {"xi", r.xi},
                       {"eta", r.eta},
                       {"theta", r.theta},
                       {"qfi_over_fth", r.qfi_over_fth},
                       {"qfi_ideal_over_fth", r.qfi_ideal_over_fth},
                       {"ratio", r.ratio}};
    if (extras) {
      row["sigma01"] = r.sigma01;
      row["rho00"] = r.rho00;
    }
    j["rows"].push_back(row);
  }
  os << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Flat key-value configuration ("key = value" lines, '#' comments)
// ---------------------------------------------------------------------------

inline std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

/// Comma list of numbers, or "logspace:first:last:count".
inline std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  if (text.rfind("logspace:", 0) == 0) {
    double first = 0.0, last = 0.0;
    long count = 0;
    if (std::sscanf(text.c_str(), "logspace:%lf:%lf:%ld", &first, &last, &count) != 3 ||
        count < 2 || !(first > 0.0) || !(last > first))
      throw std::invalid_argument("parse_value_list: bad logspace spec '" + text + "'");
    const double step = std::log(last / first) / static_cast<double>(count - 1);
    for (long k = 0; k < count; ++k) out.push_back(first * std::exp(step * static_cast<double>(k)));
    return out;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string token = text.substr(pos, comma - pos);
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size())
      throw std::invalid_argument("parse_value_list: bad number '" + token + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("parse_value_list: empty list");
  return out;
}

/// Like parse_value_list but rounded to integers, deduplicated, ascending
/// order preserved for logspace grids.
inline std::vector<long> parse_index_list(const std::string& text) {
  std::vector<long> out;
  for (const double v : parse_value_list(text)) {
    const long n = std::lround(v);
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

}  // namespace qthermo

#endif  // QTHERMO_SWEEP_HPP
