#pragma once

#include <stdexcept>
#include <string>

namespace shmc {

// shmc:    leapfrog on the smooth part, short-range acceptance, full forces
// rb_shmc: same with random-batch forces, fresh batch per leapfrog step
// rbmc:    overdamped Langevin proposals on the smooth part, same acceptance
// hmc:     classical leapfrog on the full potential, energy-based acceptance
enum class SamplerKind { shmc, rb_shmc, rbmc, hmc };

// single_particle: one uniformly chosen particle moves per iteration
// all_particle:    the whole configuration moves per iteration
enum class UpdateMode { single_particle, all_particle };

inline std::string to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::shmc: return "shmc";
    case SamplerKind::rb_shmc: return "rb-shmc";
    case SamplerKind::rbmc: return "rbmc";
    case SamplerKind::hmc: return "hmc";
  }
  throw std::logic_error("to_string: bad SamplerKind");
}

inline std::string to_string(UpdateMode m) {
  switch (m) {
    case UpdateMode::single_particle: return "single-particle";
    case UpdateMode::all_particle: return "all-particle";
  }
  throw std::logic_error("to_string: bad UpdateMode");
}

inline SamplerKind sampler_kind_from_string(const std::string& s) {
  if (s == "shmc") return SamplerKind::shmc;
  if (s == "rb-shmc") return SamplerKind::rb_shmc;
  if (s == "rbmc") return SamplerKind::rbmc;
  if (s == "hmc") return SamplerKind::hmc;
  throw std::invalid_argument("unknown sampler kind: " + s);
}

inline UpdateMode update_mode_from_string(const std::string& s) {
  if (s == "single-particle") return UpdateMode::single_particle;
  if (s == "all-particle") return UpdateMode::all_particle;
  throw std::invalid_argument("unknown update mode: " + s);
}

}  // namespace shmc
