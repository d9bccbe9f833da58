#include "casimir/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::vector<Oscillator>> parse_oscillators(const std::string& text) {
  std::vector<Oscillator> out;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    std::stringstream fields(item);
    std::string a, b, c, extra;
    if (!std::getline(fields, a, ':') || !std::getline(fields, b, ':') || !std::getline(fields, c, ':'))
      return std::nullopt;
    if (std::getline(fields, extra, ':')) return std::nullopt;
    const auto s = parse_number(a), w = parse_number(b), g = parse_number(c);
    if (!s || !w || !g) return std::nullopt;
    out.push_back({*s, *w, *g});
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_oscillators(const std::vector<Oscillator>& list) {
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ", ";
    out += format_number(list[i].strength) + ":" + format_number(list[i].resonance) + ":" +
           format_number(list[i].damping);
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"run", {"mode", "route", "tol", "output"}},
      {"geometry", {"gap", "separation", "temperature", "velocity"}},
      {"plate1", {"kind", "eps", "cutoff", "plasma_frequency", "damping", "oscillators", "magnetic_oscillators"}},
      {"plate2", {"kind", "eps", "cutoff", "plasma_frequency", "damping", "oscillators", "magnetic_oscillators"}},
      {"particle",
       {"alpha_e", "alpha_e_value", "alpha_e_cutoff", "alpha_e_oscillators", "alpha_m", "alpha_m_value",
        "alpha_m_cutoff", "alpha_m_oscillators", "density", "magnetic"}},
      {"sweep", {"target", "variable", "from", "to", "points", "spacing"}},
  };
  return s;
}

struct Entry {
  std::string value;
  int line = 0;
};
using Sections = std::map<std::string, std::map<std::string, Entry>>;

// Line lookup for validation messages; 0 when unknown.
using LineOf = std::function<int(const std::string& section, const std::string& key)>;

const char* static_route_name(StaticRoute r) {
  switch (r) {
    case StaticRoute::loop: return "loop";
    case StaticRoute::split: return "split";
    default: return "matsubara";
  }
}

const char* polder_route_name(PolderRoute r) {
  switch (r) {
    case PolderRoute::finite_difference: return "finite_difference";
    case PolderRoute::matsubara: return "matsubara";
    default: return "analytic";
  }
}

const char* variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::velocity: return "V";
    case SweepVariable::temperature: return "T";
    default: return "l";
  }
}

void check_material(const MaterialSpec& m, const std::string& section, const LineOf& line,
                    std::vector<ConfigIssue>& issues) {
  auto issue = [&](const std::string& key, const std::string& msg) {
    issues.push_back({line(section, key), "[" + section + "] " + key + ": " + msg});
  };
  static const std::set<std::string> kinds = {"vacuum", "constant", "drude", "plasma", "lorentz", "ideal_metal"};
  if (!kinds.count(m.kind)) {
    issue("kind", "unknown material kind '" + m.kind + "' (vacuum, constant, drude, plasma, lorentz, ideal_metal)");
    return;
  }
  const std::size_t before = issues.size();
  if (m.kind == "drude" || m.kind == "plasma") {
    if (!(m.plasma_frequency > 0.0 && std::isfinite(m.plasma_frequency)))
      issue("plasma_frequency", "must be > 0 rad/s");
    if (m.kind == "drude" && !(m.damping > 0.0 && std::isfinite(m.damping))) issue("damping", "must be > 0 rad/s");
  }
  if (m.kind == "constant") {
    if (!(m.eps >= 1.0 && std::isfinite(m.eps))) issue("eps", "must be >= 1");
    if (m.eps != 1.0 && !(m.cutoff > 0.0)) issue("cutoff", "must be > 0 rad/s when eps != 1");
  }
  if (m.kind == "lorentz" && m.oscillators.empty()) issue("oscillators", "required for kind = lorentz");
  for (const auto* list : {&m.oscillators, &m.magnetic_oscillators})
    for (const auto& o : *list)
      if (!(o.strength >= 0.0 && o.resonance > 0.0 && o.damping >= 0.0))
        issue(list == &m.oscillators ? "oscillators" : "magnetic_oscillators",
              "each oscillator needs strength >= 0, resonance > 0, damping >= 0");
  if (!m.magnetic_oscillators.empty() && m.kind == "ideal_metal")
    issue("magnetic_oscillators", "not allowed for an ideal metal");
  if (issues.size() != before) return;
  try {
    m.build().validate();
  } catch (const Error& e) {
    issue("kind", e.what());
  }
}

void check_polarizability(const PolarizabilitySpec& p, const std::string& prefix, const LineOf& line,
                          std::vector<ConfigIssue>& issues) {
  auto issue = [&](const std::string& key, const std::string& msg) {
    issues.push_back({line("particle", key), "[particle] " + key + ": " + msg});
  };
  if (p.kind != "none" && p.kind != "constant" && p.kind != "lorentz") {
    issue(prefix, "unknown polarizability kind '" + p.kind + "' (none, constant, lorentz)");
    return;
  }
  if (p.kind == "constant") {
    if (!std::isfinite(p.value)) issue(prefix + "_value", "must be finite (m^3)");
    if (!(p.cutoff > 0.0)) issue(prefix + "_cutoff", "must be > 0 rad/s");
  }
  if (p.kind == "lorentz") {
    if (p.oscillators.empty()) issue(prefix + "_oscillators", "required for kind = lorentz");
    for (const auto& o : p.oscillators)
      if (!(o.resonance > 0.0 && o.damping >= 0.0 && std::isfinite(o.strength)))
        issue(prefix + "_oscillators", "each oscillator needs resonance > 0 and damping >= 0");
  }
}

std::vector<ConfigIssue> validate(const RunConfig& c, const LineOf& line) {
  std::vector<ConfigIssue> issues;
  auto issue = [&](const std::string& section, const std::string& key, const std::string& msg) {
    issues.push_back({line(section, key), "[" + section + "] " + key + ": " + msg});
  };
  if (!(c.rel_tol > 0.0 && c.rel_tol <= 0.1)) issue("run", "tol", "must lie in (0, 0.1]");
  if (c.mode == Mode::verify) return issues;

  if (c.mode == Mode::sweep && !c.sweep) issue("sweep", "target", "a [sweep] section is required in sweep mode");
  if (c.mode != Mode::sweep && c.sweep) issue("sweep", "target", "a [sweep] section needs mode = sweep");
  const Mode m = c.compute_mode();
  const bool swept = c.mode == Mode::sweep && c.sweep.has_value();
  const auto var = swept ? std::optional<SweepVariable>(c.sweep->variable) : std::nullopt;

  if (!(c.temperature >= 0.0 && std::isfinite(c.temperature)))
    issue("geometry", "temperature", "must be >= 0 K");
  const double guard = 0.01 * constants::speed_of_light;
  if (!(std::abs(c.velocity) < guard)) issue("geometry", "velocity", "must satisfy |V| < 0.01 c");

  if (m == Mode::static_force || m == Mode::dynamic) {
    if (var != SweepVariable::gap && !(c.gap > 0.0 && std::isfinite(c.gap)))
      issue("geometry", "gap", c.gap == 0.0 ? "required and must be > 0 m" : "must be > 0 m");
    if (!c.plate1) issue("plate1", "kind", "a [plate1] section is required");
    if (!c.plate2) issue("plate2", "kind", "a [plate2] section is required");
    if (m == Mode::static_force && (c.velocity != 0.0 || var == SweepVariable::velocity))
      issue("geometry", "velocity", "static mode takes no velocity; use dynamic mode");
  }
  if (m == Mode::polder) {
    if (var != SweepVariable::gap && !(c.separation > 0.0 && std::isfinite(c.separation)))
      issue("geometry", "separation", c.separation == 0.0 ? "required and must be > 0 m" : "must be > 0 m");
    if (!c.particle) issue("particle", "alpha_e", "a [particle] section is required");
    if (!c.plate2) issue("plate2", "kind", "a [plate2] section (the surface) is required");
    if (c.polder_route == PolderRoute::matsubara && (c.velocity != 0.0 || var == SweepVariable::velocity))
      issue("run", "route", "the matsubara route needs V = 0");
  }
  if (c.plate1) check_material(*c.plate1, "plate1", line, issues);
  if (c.plate2) check_material(*c.plate2, "plate2", line, issues);
  if (c.particle) {
    check_polarizability(c.particle->electric, "alpha_e", line, issues);
    check_polarizability(c.particle->magnetic, "alpha_m", line, issues);
    if (!(c.particle->density >= 0.0 && std::isfinite(c.particle->density)))
      issue("particle", "density", "must be >= 0 (1/m^3)");
  }
  if (c.sweep) {
    const SweepSpec& s = *c.sweep;
    if (s.target == Mode::sweep || s.target == Mode::verify)
      issue("sweep", "target", "must be static, dynamic or polder");
    if (s.points < 2) issue("sweep", "points", "must be >= 2");
    if (!std::isfinite(s.from) || !std::isfinite(s.to)) issue("sweep", "from", "range must be finite");
    if (s.variable == SweepVariable::gap && !(s.from > 0.0 && s.to > 0.0))
      issue("sweep", "from", "distances must be > 0 m");
    if (s.variable == SweepVariable::temperature && !(s.from >= 0.0 && s.to >= 0.0))
      issue("sweep", "from", "temperatures must be >= 0 K");
    if (s.variable == SweepVariable::velocity && !(std::abs(s.from) < guard && std::abs(s.to) < guard))
      issue("sweep", "from", "velocities must satisfy |V| < 0.01 c");
    if (s.spacing == Spacing::log && !(s.from > 0.0 && s.to > 0.0))
      issue("sweep", "spacing", "log spacing needs a positive range");
  }
  return issues;
}

}  // namespace

MaterialModel MaterialSpec::build() const {
  MaterialModel m;
  if (kind == "vacuum") m = MaterialModel::vacuum();
  else if (kind == "constant") m = MaterialModel::constant(eps, cutoff);
  else if (kind == "drude") m = MaterialModel::drude(plasma_frequency, damping);
  else if (kind == "plasma") m = MaterialModel::plasma(plasma_frequency);
  else if (kind == "lorentz") m = MaterialModel::lorentz(oscillators);
  else if (kind == "ideal_metal") return MaterialModel::ideal_metal();
  else throw Error(ErrorKind::invalid_model, "unknown material kind '" + kind + "'");
  if (!magnetic_oscillators.empty()) m = m.with_magnetic(Response::lorentz(magnetic_oscillators));
  return m;
}

Response PolarizabilitySpec::build() const {
  if (kind == "constant") return Response::constant(value, cutoff);
  if (kind == "lorentz") return Response::lorentz(oscillators);
  return Response::zero();
}

ParticleModel ParticleSpec::build() const {
  ParticleModel p;
  p.electric = electric.build();
  p.magnetic = magnetic.build();
  p.density = density;
  return p;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    const double t = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
    if (spacing == Spacing::log)
      out.push_back(from * std::pow(to / from, t));
    else
      out.push_back(from + (to - from) * t);
  }
  if (points > 1) out.back() = to;
  return out;
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::dynamic: return "dynamic";
    case Mode::polder: return "polder";
    case Mode::sweep: return "sweep";
    case Mode::verify: return "verify";
    default: return "static";
  }
}

std::optional<Mode> mode_from_string(const std::string& s) {
  for (Mode m : {Mode::static_force, Mode::dynamic, Mode::polder, Mode::sweep, Mode::verify})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

ParseOutcome parse_config(const std::string& text) {
  ParseOutcome out;
  Sections sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        out.issues.push_back({line_no, "malformed section header '" + line + "'"});
        current.clear();
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      if (!schema().count(current)) {
        out.issues.push_back({line_no, "unknown section [" + current + "]"});
        current = "\x01";  // swallow its keys
      } else if (sections.count(current)) {
        out.issues.push_back({line_no, "section [" + current + "] appears twice"});
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      out.issues.push_back({line_no, "expected 'key = value', got '" + line + "'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (current.empty()) {
      out.issues.push_back({line_no, "key '" + key + "' outside any section"});
      continue;
    }
    if (current == "\x01") continue;
    if (!schema().at(current).count(key)) {
      out.issues.push_back({line_no, "[" + current + "] unknown key '" + key + "'"});
      continue;
    }
    auto& sec = sections[current];
    if (sec.count(key)) {
      out.issues.push_back({line_no, "[" + current + "] key '" + key + "' given twice (first on line " +
                                         std::to_string(sec[key].line) + ")"});
      continue;
    }
    if (value.empty()) {
      out.issues.push_back({line_no, "[" + current + "] " + key + ": empty value"});
      continue;
    }
    sec[key] = {value, line_no};
  }
  sections.erase("\x01");

  auto find = [&](const std::string& s, const std::string& k) -> const Entry* {
    const auto si = sections.find(s);
    if (si == sections.end()) return nullptr;
    const auto ki = si->second.find(k);
    return ki == si->second.end() ? nullptr : &ki->second;
  };
  const LineOf line_of = [&](const std::string& s, const std::string& k) {
    const Entry* e = find(s, k);
    if (e) return e->line;
    const Entry* any = nullptr;
    if (sections.count(s) && !sections[s].empty()) any = &sections[s].begin()->second;
    return any ? any->line : 0;
  };
  auto number = [&](const std::string& s, const std::string& k, double& target) {
    if (const Entry* e = find(s, k)) {
      if (auto v = parse_number(e->value))
        target = *v;
      else
        out.issues.push_back({e->line, "[" + s + "] " + k + ": '" + e->value + "' is not a number"});
    }
  };
  auto oscillators = [&](const std::string& s, const std::string& k, std::vector<Oscillator>& target) {
    if (const Entry* e = find(s, k)) {
      if (auto v = parse_oscillators(e->value))
        target = *v;
      else
        out.issues.push_back(
            {e->line, "[" + s + "] " + k + ": expected 'strength:resonance:damping' items separated by commas"});
    }
  };
  auto word = [&](const std::string& s, const std::string& k) -> std::optional<std::string> {
    if (const Entry* e = find(s, k)) return e->value;
    return std::nullopt;
  };
  auto bad_word = [&](const std::string& s, const std::string& k, const std::string& allowed) {
    out.issues.push_back({line_of(s, k), "[" + s + "] " + k + ": '" + find(s, k)->value + "' is not one of " + allowed});
  };

  RunConfig c;
  if (auto m = word("run", "mode")) {
    if (auto mm = mode_from_string(*m))
      c.mode = *mm;
    else
      bad_word("run", "mode", "static, dynamic, polder, sweep, verify");
  } else {
    out.issues.push_back({0, "[run] mode: required (static, dynamic, polder, sweep, verify)"});
  }
  number("run", "tol", c.rel_tol);
  if (auto o = word("run", "output")) c.output = *o;

  if (sections.count("sweep")) {
    SweepSpec s;
    if (auto t = word("sweep", "target")) {
      if (auto tm = mode_from_string(*t))
        s.target = *tm;
      else
        bad_word("sweep", "target", "static, dynamic, polder");
    } else {
      out.issues.push_back({line_of("sweep", "target"), "[sweep] target: required"});
    }
    if (auto v = word("sweep", "variable")) {
      if (*v == "l") s.variable = SweepVariable::gap;
      else if (*v == "V") s.variable = SweepVariable::velocity;
      else if (*v == "T") s.variable = SweepVariable::temperature;
      else bad_word("sweep", "variable", "l, V, T");
    } else {
      out.issues.push_back({line_of("sweep", "variable"), "[sweep] variable: required (l, V, T)"});
    }
    for (const char* k : {"from", "to"})
      if (!find("sweep", k)) out.issues.push_back({line_of("sweep", k), std::string("[sweep] ") + k + ": required"});
    number("sweep", "from", s.from);
    number("sweep", "to", s.to);
    double points = 0.0;
    if (!find("sweep", "points")) out.issues.push_back({line_of("sweep", "points"), "[sweep] points: required"});
    number("sweep", "points", points);
    if (points != std::floor(points) || points > 1e6)
      out.issues.push_back({line_of("sweep", "points"), "[sweep] points: must be a whole number"});
    else
      s.points = static_cast<int>(points);
    if (auto sp = word("sweep", "spacing")) {
      if (*sp == "linear") s.spacing = Spacing::linear;
      else if (*sp == "log") s.spacing = Spacing::log;
      else bad_word("sweep", "spacing", "linear, log");
    }
    c.sweep = s;
  }

  if (auto r = word("run", "route")) {
    const Mode m = c.compute_mode();
    if (m == Mode::static_force) {
      if (*r == "matsubara") c.static_route = StaticRoute::matsubara;
      else if (*r == "loop") c.static_route = StaticRoute::loop;
      else if (*r == "split") c.static_route = StaticRoute::split;
      else bad_word("run", "route", "matsubara, loop, split");
    } else if (m == Mode::polder) {
      if (*r == "analytic") c.polder_route = PolderRoute::analytic;
      else if (*r == "finite_difference") c.polder_route = PolderRoute::finite_difference;
      else if (*r == "matsubara") c.polder_route = PolderRoute::matsubara;
      else bad_word("run", "route", "analytic, finite_difference, matsubara");
    } else {
      out.issues.push_back({line_of("run", "route"), "[run] route: only static and polder calculations have routes"});
    }
  }

  number("geometry", "gap", c.gap);
  number("geometry", "separation", c.separation);
  number("geometry", "temperature", c.temperature);
  number("geometry", "velocity", c.velocity);

  for (const char* name : {"plate1", "plate2"}) {
    if (!sections.count(name)) continue;
    MaterialSpec m;
    if (auto k = word(name, "kind"))
      m.kind = *k;
    else
      out.issues.push_back({line_of(name, "kind"), std::string("[") + name + "] kind: required"});
    number(name, "eps", m.eps);
    number(name, "cutoff", m.cutoff);
    number(name, "plasma_frequency", m.plasma_frequency);
    number(name, "damping", m.damping);
    oscillators(name, "oscillators", m.oscillators);
    oscillators(name, "magnetic_oscillators", m.magnetic_oscillators);
    (std::string(name) == "plate1" ? c.plate1 : c.plate2) = m;
  }

  if (sections.count("particle")) {
    ParticleSpec p;
    for (const std::string prefix : {"alpha_e", "alpha_m"}) {
      PolarizabilitySpec& a = prefix == "alpha_e" ? p.electric : p.magnetic;
      if (auto k = word("particle", prefix)) a.kind = *k;
      number("particle", prefix + "_value", a.value);
      number("particle", prefix + "_cutoff", a.cutoff);
      oscillators("particle", prefix + "_oscillators", a.oscillators);
    }
    number("particle", "density", p.density);
    if (auto mg = word("particle", "magnetic")) {
      if (*mg == "true") p.include_magnetic = true;
      else if (*mg == "false") p.include_magnetic = false;
      else bad_word("particle", "magnetic", "true, false");
    }
    c.particle = p;
  }

  // A line that already failed to parse gets no second, semantic complaint.
  std::set<int> bad_lines;
  for (const auto& i : out.issues) bad_lines.insert(i.line);
  for (auto& i : validate(c, line_of))
    if (i.line == 0 || !bad_lines.count(i.line)) out.issues.push_back(std::move(i));
  std::stable_sort(out.issues.begin(), out.issues.end(),
                   [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
  if (out.issues.empty()) out.config = c;
  return out;
}

std::vector<ConfigIssue> validate_config(const RunConfig& config) {
  return validate(config, [](const std::string&, const std::string&) { return 0; });
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[run]\n";
  o << "mode = " << to_string(c.mode) << "\n";
  const Mode m = c.compute_mode();
  if (m == Mode::static_force) o << "route = " << static_route_name(c.static_route) << "\n";
  if (m == Mode::polder) o << "route = " << polder_route_name(c.polder_route) << "\n";
  o << "tol = " << format_number(c.rel_tol) << "\n";
  if (!c.output.empty()) o << "output = " << c.output << "\n";

  o << "\n[geometry]\n";
  o << "gap = " << format_number(c.gap) << "\n";
  o << "separation = " << format_number(c.separation) << "\n";
  o << "temperature = " << format_number(c.temperature) << "\n";
  o << "velocity = " << format_number(c.velocity) << "\n";

  auto material = [&](const char* name, const MaterialSpec& s) {
    o << "\n[" << name << "]\n";
    o << "kind = " << s.kind << "\n";
    o << "eps = " << format_number(s.eps) << "\n";
    o << "cutoff = " << format_number(s.cutoff) << "\n";
    o << "plasma_frequency = " << format_number(s.plasma_frequency) << "\n";
    o << "damping = " << format_number(s.damping) << "\n";
    if (!s.oscillators.empty()) o << "oscillators = " << format_oscillators(s.oscillators) << "\n";
    if (!s.magnetic_oscillators.empty())
      o << "magnetic_oscillators = " << format_oscillators(s.magnetic_oscillators) << "\n";
  };
  if (c.plate1) material("plate1", *c.plate1);
  if (c.plate2) material("plate2", *c.plate2);

  if (c.particle) {
    const ParticleSpec& p = *c.particle;
    o << "\n[particle]\n";
    for (const std::string prefix : {"alpha_e", "alpha_m"}) {
      const PolarizabilitySpec& a = prefix == "alpha_e" ? p.electric : p.magnetic;
      o << prefix << " = " << a.kind << "\n";
      o << prefix << "_value = " << format_number(a.value) << "\n";
      o << prefix << "_cutoff = " << format_number(a.cutoff) << "\n";
      if (!a.oscillators.empty()) o << prefix << "_oscillators = " << format_oscillators(a.oscillators) << "\n";
    }
    o << "density = " << format_number(p.density) << "\n";
    o << "magnetic = " << (p.include_magnetic ? "true" : "false") << "\n";
  }

  if (c.sweep) {
    const SweepSpec& s = *c.sweep;
    o << "\n[sweep]\n";
    o << "target = " << to_string(s.target) << "\n";
    o << "variable = " << variable_name(s.variable) << "\n";
    o << "from = " << format_number(s.from) << "\n";
    o << "to = " << format_number(s.to) << "\n";
    o << "points = " << s.points << "\n";
    o << "spacing = " << (s.spacing == Spacing::log ? "log" : "linear") << "\n";
  }
  return o.str();
}

}  // namespace casimir
