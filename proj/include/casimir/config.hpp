#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "casimir/materials.hpp"

namespace casimir {

enum class Mode { static_force, dynamic, polder, sweep, verify };
enum class StaticRoute { matsubara, loop, split };
enum class PolderRoute { analytic, finite_difference, matsubara };
enum class SweepVariable { gap, velocity, temperature };
enum class Spacing { linear, log };

/// Plate material as written in a config block.
struct MaterialSpec {
  std::string kind;  // vacuum, constant, drude, plasma, lorentz, ideal_metal
  double eps = 1.0;
  double cutoff = 0.0;
  double plasma_frequency = 0.0;
  double damping = 0.0;
  std::vector<Oscillator> oscillators;
  std::vector<Oscillator> magnetic_oscillators;  // mu - 1, optional

  MaterialModel build() const;
  bool operator==(const MaterialSpec&) const = default;
};

/// One particle polarizability (Gaussian volume units, m^3).
struct PolarizabilitySpec {
  std::string kind = "none";  // none, constant, lorentz
  double value = 0.0;
  double cutoff = std::numeric_limits<double>::infinity();
  std::vector<Oscillator> oscillators;

  Response build() const;
  bool operator==(const PolarizabilitySpec&) const = default;
};

struct ParticleSpec {
  PolarizabilitySpec electric;
  PolarizabilitySpec magnetic;
  double density = 0.0;  // 1/m^3, finite-difference route; 0 picks one
  bool include_magnetic = true;

  ParticleModel build() const;
  bool operator==(const ParticleSpec&) const = default;
};

struct SweepSpec {
  Mode target = Mode::static_force;
  SweepVariable variable = SweepVariable::gap;
  double from = 0.0;
  double to = 0.0;
  int points = 0;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const;
  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  Mode mode = Mode::static_force;
  StaticRoute static_route = StaticRoute::matsubara;
  PolderRoute polder_route = PolderRoute::analytic;
  double rel_tol = 1e-3;
  std::string output;  // empty: standard output

  double gap = 0.0;          // l, m
  double separation = 0.0;   // z, m
  double temperature = 300.0;
  double velocity = 0.0;

  std::optional<MaterialSpec> plate1;
  std::optional<MaterialSpec> plate2;
  std::optional<ParticleSpec> particle;
  std::optional<SweepSpec> sweep;

  /// Mode that produces the rows: the sweep target in sweep mode.
  Mode compute_mode() const { return mode == Mode::sweep && sweep ? sweep->target : mode; }
  bool operator==(const RunConfig&) const = default;
};

struct ConfigIssue {
  int line = 0;  // 0 when the problem is a missing key
  std::string message;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  std::vector<ConfigIssue> issues;
  bool ok() const { return config.has_value(); }
};

/// Parses the sectioned key = value format; every problem found is reported.
ParseOutcome parse_config(const std::string& text);

/// Re-validates a config assembled in code (after command-line overrides).
std::vector<ConfigIssue> validate_config(const RunConfig& config);

std::string serialize_config(const RunConfig& config);

std::string to_string(Mode m);
std::optional<Mode> mode_from_string(const std::string& s);

}  // namespace casimir
