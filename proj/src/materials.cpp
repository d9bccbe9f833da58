#include "casimir/materials.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::invalid_model: return "invalid model";
    case ErrorKind::static_pole: return "static pole";
    case ErrorKind::zero_frequency_convention: return "zero-frequency term needs convention";
    case ErrorKind::reflection_pole: return "reflection pole";
    case ErrorKind::light_cone_singular: return "rarified substitution singular on light cone";
    case ErrorKind::loop_divergence: return "loop divergence";
    case ErrorKind::matsubara_divergence: return "matsubara divergence";
    case ErrorKind::accuracy_not_reached: return "accuracy not reached";
    case ErrorKind::velocity_guard: return "velocity guard";
    case ErrorKind::not_rarified: return "not in rarified regime";
    case ErrorKind::contract_violation: return "contract violation";
  }
  return "unknown";
}

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw Error(ErrorKind::invalid_model, message);
}

}  // namespace

Response Response::zero() { return Response{}; }

Response Response::constant(double chi0, double cutoff) {
  require(std::isfinite(chi0), "constant response must be finite");
  require(cutoff > 0.0, "constant response cutoff must be positive");
  if (chi0 == 0.0) return zero();
  Response r;
  r.kind_ = Kind::constant;
  r.value_ = chi0;
  r.cutoff_ = cutoff;
  return r;
}

Response Response::drude(double plasma_frequency, double damping, double strength) {
  require(plasma_frequency > 0.0 && std::isfinite(plasma_frequency), "drude plasma frequency must be positive");
  require(damping >= 0.0 && std::isfinite(damping), "drude damping must be non-negative");
  require(strength >= 0.0, "drude strength must be non-negative");
  if (damping == 0.0) return plasma(plasma_frequency, strength);
  Response r;
  r.kind_ = Kind::drude;
  r.plasma_frequency_ = plasma_frequency;
  r.damping_ = damping;
  r.strength_ = strength;
  return r;
}

Response Response::plasma(double plasma_frequency, double strength) {
  require(plasma_frequency > 0.0 && std::isfinite(plasma_frequency), "plasma frequency must be positive");
  require(strength >= 0.0, "plasma strength must be non-negative");
  Response r;
  r.kind_ = Kind::plasma;
  r.plasma_frequency_ = plasma_frequency;
  r.strength_ = strength;
  return r;
}

Response Response::lorentz(std::vector<Oscillator> oscillators) {
  for (const auto& o : oscillators) {
    require(o.strength >= 0.0, "oscillator strength must be non-negative");
    require(o.resonance > 0.0, "oscillator resonance must be positive");
    require(o.damping >= 0.0, "oscillator damping must be non-negative");
  }
  Response r;
  r.kind_ = oscillators.empty() ? Kind::zero : Kind::lorentz;
  r.oscillators_ = std::move(oscillators);
  return r;
}

cplx Response::at_positive(double w) const {
  constexpr cplx i{0.0, 1.0};
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      if (std::isinf(cutoff_)) return value_;
      return value_ / (1.0 - i * (w / cutoff_));
    case Kind::drude: {
      const double wp2 = plasma_frequency_ * plasma_frequency_;
      return -strength_ * wp2 / (w * cplx(w, damping_));
    }
    case Kind::plasma: {
      const double ratio = plasma_frequency_ / w;
      return -strength_ * ratio * ratio;
    }
    case Kind::lorentz: {
      cplx sum = 0.0;
      for (const auto& o : oscillators_) {
        const double w02 = o.resonance * o.resonance;
        sum += o.strength * w02 / cplx(w02 - w * w, -o.damping * w);
      }
      return sum;
    }
  }
  return 0.0;
}

cplx Response::closed_form(double omega) const {
  if (omega == 0.0) return at(0.0);
  return at_positive(omega);
}

cplx Response::at(double omega) const {
  if (omega == 0.0) {
    if (kind_ == Kind::drude || kind_ == Kind::plasma)
      throw Error(ErrorKind::static_pole, "response has a pole at omega = 0");
    return at_positive(0.0);
  }
  if (omega < 0.0) return std::conj(at_positive(-omega));
  return at_positive(omega);
}

double Response::at_imaginary(double xi) const {
  if (xi < 0.0) throw Error(ErrorKind::invalid_argument, "imaginary frequency must be non-negative");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      if (std::isinf(cutoff_)) return value_;
      return value_ / (1.0 + xi / cutoff_);
    case Kind::drude:
    case Kind::plasma: {
      if (xi == 0.0)
        throw Error(ErrorKind::zero_frequency_convention, "response diverges at xi = 0");
      const double wp2 = plasma_frequency_ * plasma_frequency_;
      return strength_ * wp2 / (xi * (xi + damping_));
    }
    case Kind::lorentz: {
      double sum = 0.0;
      for (const auto& o : oscillators_) {
        const double w02 = o.resonance * o.resonance;
        sum += o.strength * w02 / (w02 + xi * xi + o.damping * xi);
      }
      return sum;
    }
  }
  return 0.0;
}

StaticLimit Response::static_limit() const {
  StaticLimit s;
  switch (kind_) {
    case Kind::drude:
      s.divergent = true;
      s.xi2_chi = 0.0;
      break;
    case Kind::plasma:
      s.divergent = true;
      s.xi2_chi = strength_ * plasma_frequency_ * plasma_frequency_;
      break;
    default:
      s.value = at_imaginary(0.0);
  }
  return s;
}

bool Response::is_zero() const noexcept { return kind_ == Kind::zero; }

bool Response::lossy() const noexcept {
  switch (kind_) {
    case Kind::constant:
      return std::isfinite(cutoff_) && value_ != 0.0;
    case Kind::drude:
      return damping_ > 0.0 && strength_ > 0.0;
    case Kind::lorentz:
      return std::any_of(oscillators_.begin(), oscillators_.end(),
                         [](const Oscillator& o) { return o.damping > 0.0 && o.strength > 0.0; });
    default:
      return false;
  }
}

bool Response::transparent() const noexcept {
  return kind_ != Kind::constant || std::isfinite(cutoff_) || value_ == 0.0;
}

double Response::transparency_frequency(double threshold) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      // |chi0| / sqrt(1 + (w/wc)^2) < threshold
      if (std::isinf(cutoff_)) return std::numeric_limits<double>::infinity();
      return cutoff_ * std::max(0.0, std::abs(value_) / threshold);
    case Kind::drude:
    case Kind::plasma:
      return plasma_frequency_ * std::sqrt(strength_ / threshold);
    case Kind::lorentz: {
      // |chi| <= sum s w0^2 / (w^2 - w0^2) for w above every resonance
      double s = 0.0, wmax = 0.0;
      for (const auto& o : oscillators_) {
        s += o.strength * o.resonance * o.resonance;
        wmax = std::max(wmax, o.resonance);
      }
      return std::sqrt(wmax * wmax + s / threshold);
    }
  }
  return 0.0;
}

std::vector<double> Response::characteristic_frequencies() const {
  std::vector<double> out;
  switch (kind_) {
    case Kind::constant:
      if (std::isfinite(cutoff_)) out.push_back(cutoff_);
      break;
    case Kind::drude:
      out.push_back(damping_);
      [[fallthrough]];
    case Kind::plasma:
      out.push_back(plasma_frequency_ * std::sqrt(strength_));
      out.push_back(plasma_frequency_ * std::sqrt(strength_ / 2.0));
      break;
    case Kind::lorentz:
      for (const auto& o : oscillators_) {
        out.push_back(o.resonance);
        if (o.damping > 0.0) out.push_back(o.damping);
      }
      break;
    default:
      break;
  }
  return out;
}

Response Response::scaled(double factor) const {
  Response r = *this;
  switch (kind_) {
    case Kind::constant:
      r.value_ *= factor;
      break;
    case Kind::drude:
    case Kind::plasma:
      r.strength_ *= factor;
      break;
    case Kind::lorentz:
      for (auto& o : r.oscillators_) o.strength *= factor;
      break;
    default:
      break;
  }
  if (factor == 0.0) return zero();
  return r;
}

MaterialModel MaterialModel::vacuum() { return MaterialModel{}; }

MaterialModel MaterialModel::constant(double eps, double cutoff) {
  MaterialModel m;
  m.kind_ = Kind::constant;
  m.electric_ = Response::constant(eps - 1.0, cutoff);
  m.validate();
  return m;
}

MaterialModel MaterialModel::drude(double plasma_frequency, double damping) {
  MaterialModel m;
  m.kind_ = Kind::drude;
  m.electric_ = Response::drude(plasma_frequency, damping);
  return m;
}

MaterialModel MaterialModel::plasma(double plasma_frequency) {
  MaterialModel m;
  m.kind_ = Kind::plasma;
  m.electric_ = Response::plasma(plasma_frequency);
  return m;
}

MaterialModel MaterialModel::lorentz(std::vector<Oscillator> oscillators) {
  MaterialModel m;
  m.kind_ = Kind::lorentz;
  m.electric_ = Response::lorentz(std::move(oscillators));
  return m;
}

MaterialModel MaterialModel::ideal_metal() {
  MaterialModel m;
  m.kind_ = Kind::ideal_metal;
  return m;
}

MaterialModel MaterialModel::from_susceptibilities(Response electric, Response magnetic) {
  MaterialModel m;
  m.electric_ = std::move(electric);
  m.magnetic_ = std::move(magnetic);
  switch (m.electric_.kind()) {
    case Response::Kind::zero: m.kind_ = Kind::vacuum; break;
    case Response::Kind::constant: m.kind_ = Kind::constant; break;
    case Response::Kind::drude: m.kind_ = Kind::drude; break;
    case Response::Kind::plasma: m.kind_ = Kind::plasma; break;
    case Response::Kind::lorentz: m.kind_ = Kind::lorentz; break;
  }
  return m;
}

MaterialModel MaterialModel::with_magnetic(Response mu_minus_one) const {
  if (is_ideal_metal()) throw Error(ErrorKind::invalid_model, "ideal metal has no magnetic response");
  MaterialModel m = *this;
  m.magnetic_ = std::move(mu_minus_one);
  return m;
}

bool MaterialModel::is_vacuum() const noexcept {
  return kind_ != Kind::ideal_metal && electric_.is_zero() && magnetic_.is_zero();
}

bool MaterialModel::lossy() const noexcept {
  return !is_ideal_metal() && (electric_.lossy() || magnetic_.lossy());
}

void MaterialModel::validate() const {
  if (is_ideal_metal()) return;
  require(electric_.transparent(), "constant permittivity != 1 needs a finite high-frequency cutoff");
  require(magnetic_.transparent(), "constant permeability != 1 needs a finite high-frequency cutoff");
}

cplx permittivity(const MaterialModel& model, double omega) {
  if (model.is_ideal_metal())
    throw Error(ErrorKind::invalid_model, "ideal metal has no finite permittivity");
  return 1.0 + model.electric().at(omega);
}

cplx permeability(const MaterialModel& model, double omega) {
  if (model.is_ideal_metal()) return 1.0;
  return 1.0 + model.magnetic().at(omega);
}

double imag_axis_permittivity(const MaterialModel& model, double xi) {
  if (model.is_ideal_metal())
    throw Error(ErrorKind::invalid_model, "ideal metal has no finite permittivity");
  return 1.0 + model.electric().at_imaginary(xi);
}

double imag_axis_permeability(const MaterialModel& model, double xi) {
  if (model.is_ideal_metal()) return 1.0;
  return 1.0 + model.magnetic().at_imaginary(xi);
}

cplx polarizability(const ParticleModel& particle, Channel channel, double omega) {
  return channel == Channel::electric ? particle.electric.at(omega) : particle.magnetic.at(omega);
}

MaterialModel rarified_material(const ParticleModel& particle, double density) {
  if (!(density > 0.0)) throw Error(ErrorKind::invalid_argument, "density must be positive");
  const double factor = 4.0 * constants::pi * density;
  return MaterialModel::from_susceptibilities(particle.electric.scaled(factor),
                                              particle.magnetic.scaled(factor));
}

}  // namespace casimir
