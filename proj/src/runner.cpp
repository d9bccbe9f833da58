#include "casimir/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/lifshitz_dynamic.hpp"
#include "casimir/lifshitz_static.hpp"
#include "casimir/parallel.hpp"
#include "casimir/polder.hpp"
#include "casimir/verification.hpp"

namespace casimir {

namespace {

struct Row {
  std::vector<double> values;
  std::string status = "ok";
  int exit = exit_success;
  std::string message;
};

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::accuracy_not_reached:
    case ErrorKind::matsubara_divergence:
    case ErrorKind::loop_divergence:
    case ErrorKind::reflection_pole:
    case ErrorKind::light_cone_singular:
      return exit_accuracy;
    case ErrorKind::contract_violation:
      return exit_verification;
    default:
      return exit_validation;
  }
}

// Higher wins: internal failure, then bad input, then accuracy.
int severity(int code) {
  switch (code) {
    case exit_verification: return 3;
    case exit_validation: return 2;
    case exit_accuracy: return 1;
    default: return 0;
  }
}

std::vector<std::string> columns(const RunConfig& c) {
  switch (c.compute_mode()) {
    case Mode::static_force: {
      std::vector<std::string> cols = {"pressure_Pa", "error_Pa", "electric_Pa", "magnetic_Pa"};
      if (c.static_route == StaticRoute::loop) {
        cols.push_back("evanescent_Pa");
        cols.push_back("propagating_Pa");
      }
      if (c.static_route == StaticRoute::split) {
        cols.push_back("term1_Pa");
        cols.push_back("term2_Pa");
      }
      return cols;
    }
    case Mode::dynamic:
      return {"pressure_Pa", "error_Pa", "term1_Pa", "term2_Pa", "electric_Pa", "magnetic_Pa", "omega_cutoff_rad_s"};
    default:
      if (c.polder_route == PolderRoute::finite_difference)
        return {"force_N", "error_N", "term1_dPdl_Pa_per_m", "term2_dPdl_Pa_per_m", "richardson_ratio", "density_per_m3"};
      return {"force_N", "error_N", "electric_N", "magnetic_N", "literal_sign_N"};
  }
}

Row compute(const RunConfig& c, double gap, double temperature, double velocity) {
  Row row;
  const double tol = c.rel_tol;
  bool converged = true;
  switch (c.compute_mode()) {
    case Mode::static_force: {
      PlateSystem sys{gap, temperature, c.plate1->build(), c.plate2->build()};
      StaticOptions o;
      o.rel_tol = tol;
      PressureResult r;
      if (c.static_route == StaticRoute::matsubara) r = pressure_matsubara(sys, o);
      else if (c.static_route == StaticRoute::loop) r = pressure_realfreq_loop(sys, o);
      else r = pressure_realfreq_split(sys, o);
      row.values = {r.value, r.error, r.breakdown.electric, r.breakdown.magnetic};
      if (c.static_route == StaticRoute::loop) {
        row.values.push_back(r.breakdown.evanescent);
        row.values.push_back(r.breakdown.propagating);
      }
      if (c.static_route == StaticRoute::split) {
        row.values.push_back(r.breakdown.cross_term);
        row.values.push_back(r.breakdown.second_term);
      }
      converged = r.converged;
      break;
    }
    case Mode::dynamic: {
      DynamicSystem sys{{gap, temperature, c.plate1->build(), c.plate2->build()}, velocity};
      DynamicOptions o;
      o.rel_tol = tol;
      const DynamicPressureResult r = pressure_dynamic(sys, o);
      row.values = {r.total, r.total_error, r.term1, r.term2, r.electric, r.magnetic, r.omega_cutoff};
      converged = r.converged;
      break;
    }
    default: {
      ParticleSurfaceSystem sys;
      sys.particle = c.particle->build();
      sys.surface = c.plate2->build();
      sys.separation = gap;
      sys.temperature = temperature;
      sys.velocity = velocity;
      PolderOptions o;
      o.rel_tol = tol;
      o.magnetic = c.particle->include_magnetic;
      if (c.polder_route == PolderRoute::finite_difference) {
        FiniteDifferenceOptions fo;
        fo.base = o;
        fo.density = c.particle->density;
        const FiniteDifferenceResult r = cp_force_finite_difference(sys, fo);
        row.values = {r.force, r.error, r.term1_derivative, r.term2_derivative, r.richardson_ratio, r.density};
        converged = r.converged;
      } else {
        const PolderResult r =
            c.polder_route == PolderRoute::matsubara ? cp_force_matsubara(sys, o) : cp_force_analytic(sys, o);
        row.values = {r.force, r.error, r.electric, r.magnetic, r.literal_sign_force};
        converged = r.converged;
      }
      break;
    }
  }
  for (double v : row.values)
    if (!std::isfinite(v)) throw Error(ErrorKind::contract_violation, "non-finite result");
  if (!converged) {
    row.status = "not_converged";
    row.exit = exit_accuracy;
    row.message = "requested tolerance not reached";
  }
  return row;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

int run_verify(std::ostream& out, std::ostream& diag) {
  const auto checks = run_verification();
  std::size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  int failed = 0;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ') << c.detail
        << "\n";
    if (!c.passed) {
      ++failed;
      diag << "error kind=verification check=" << c.name << " message=" << quoted(c.detail) << "\n";
    }
  }
  out << failed << " of " << checks.size() << " checks failed\n";
  return failed ? exit_verification : exit_success;
}

}  // namespace

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  if (const auto issues = validate_config(config); !issues.empty()) {
    for (const auto& i : issues) diag << "error kind=invalid_config message=" << quoted(i.message) << "\n";
    return exit_validation;
  }
  if (config.mode == Mode::verify) return run_verify(out, diag);

  const Mode m = config.compute_mode();
  const double base_gap = m == Mode::polder ? config.separation : config.gap;
  std::vector<double> sweep_values = {0.0};
  std::string sweep_column;
  if (config.mode == Mode::sweep) {
    sweep_values = config.sweep->values();
    switch (config.sweep->variable) {
      case SweepVariable::gap: sweep_column = m == Mode::polder ? "z_m" : "l_m"; break;
      case SweepVariable::velocity: sweep_column = "V_m_per_s"; break;
      case SweepVariable::temperature: sweep_column = "T_K"; break;
    }
  }

  const auto cols = columns(config);
  std::vector<Row> rows(sweep_values.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    double gap = base_gap, temperature = config.temperature, velocity = config.velocity;
    if (config.mode == Mode::sweep) {
      const double v = sweep_values[i];
      if (config.sweep->variable == SweepVariable::gap) gap = v;
      else if (config.sweep->variable == SweepVariable::velocity) velocity = v;
      else temperature = v;
    }
    try {
      rows[i] = compute(config, gap, temperature, velocity);
    } catch (const Error& e) {
      rows[i].values.assign(cols.size(), 0.0);
      rows[i].status = "error:" + std::string(to_string(e.kind()));
      rows[i].exit = exit_for(e.kind());
      rows[i].message = e.what();
    } catch (const std::exception& e) {
      rows[i].values.assign(cols.size(), 0.0);
      rows[i].status = "error:internal";
      rows[i].exit = exit_verification;
      rows[i].message = e.what();
    }
  });

  if (!sweep_column.empty()) out << sweep_column << ",";
  for (const auto& c : cols) out << c << ",";
  out << "status\n";
  int code = exit_success;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (!sweep_column.empty()) out << csv_number(sweep_values[i]) << ",";
    for (double v : r.values) out << csv_number(v) << ",";
    out << r.status << "\n";
    if (r.exit != exit_success) {
      diag << (r.status == "not_converged" ? "warning" : "error") << " row=" << i + 1
           << " kind=" << r.status.substr(r.status.find(':') + 1) << " message=" << quoted(r.message) << "\n";
      if (severity(r.exit) > severity(code)) code = r.exit;
    }
  }
  return code;
}

}  // namespace casimir
