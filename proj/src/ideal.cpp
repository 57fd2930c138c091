#include "roughlim/ideal.hpp"

#include "roughlim/errors.hpp"

namespace roughlim {

std::string to_string(IdealSpec ideal) {
  switch (ideal) {
    case IdealSpec::DensityZero:
      return "density-zero";
    case IdealSpec::MinimalStronglyAdmissible:
      return "minimal-sa";
    case IdealSpec::FiniteSets:
      return "finite";
  }
  return "?";
}

IdealSpec parse_ideal(const std::string& name) {
  if (name == "density-zero" || name == "dz" || name == "Id" ||
      name == "DensityZero")
    return IdealSpec::DensityZero;
  if (name == "minimal-sa" || name == "msa" || name == "MinimalSA" ||
      name == "MinimalStronglyAdmissible")
    return IdealSpec::MinimalStronglyAdmissible;
  if (name == "finite" || name == "fin" || name == "FiniteSets")
    return IdealSpec::FiniteSets;
  throw InputError("unknown ideal '" + name +
                   "' (expected density-zero, minimal-sa or finite)");
}

bool ideal_contains(IdealSpec ideal, const Region& reg) {
  switch (ideal) {
    case IdealSpec::DensityZero: {
      DensityValue d = region_density(reg);
      if (!d.defined())
        throw UndecidableRegion("density of " + reg.to_string() +
                                " cannot be certified");
      return d.is_zero();
    }
    case IdealSpec::MinimalStronglyAdmissible:
      return region_is_band_coverable(reg);
    case IdealSpec::FiniteSets:
      return region_is_finite(reg);
  }
  return false;
}

bool filter_member(IdealSpec ideal, const Region& reg) {
  return ideal_contains(ideal, Region::complement(reg));
}

bool is_admissible(IdealSpec) { return true; }

bool is_strongly_admissible(IdealSpec ideal) {
  return ideal != IdealSpec::FiniteSets;
}

AxiomReport check_ideal_axioms(IdealSpec ideal, const std::vector<Region>& samples) {
  AxiomReport rep;
  auto violate = [&](std::string msg) {
    rep.pass = false;
    rep.violations.push_back(std::move(msg));
  };
  if (!ideal_contains(ideal, Region::empty())) violate("empty set is not a member");
  if (ideal_contains(ideal, Region::full())) violate("ideal is trivial: N x N is a member");

  std::vector<bool> member;
  member.reserve(samples.size());
  for (const auto& s : samples) member.push_back(ideal_contains(ideal, s));

  for (size_t a = 0; a < samples.size(); ++a) {
    for (size_t b = a; b < samples.size(); ++b) {
      const Region u = samples[a] | samples[b];
      const Region sub = samples[a] & samples[b];
      const bool in_u = ideal_contains(ideal, u);
      if (member[a] && member[b] && !in_u)
        violate("union not closed: " + u.to_string());
      // A | B contains both operands, so it can only be small if both are.
      if (in_u && !(member[a] && member[b]))
        violate("heredity fails below " + u.to_string());
      if ((member[a] || member[b]) && !ideal_contains(ideal, sub))
        violate("heredity fails: " + sub.to_string());
    }
  }
  return rep;
}

}  // namespace roughlim
