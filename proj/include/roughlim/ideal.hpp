#pragma once

#include <string>
#include <vector>

#include "roughlim/region.hpp"

namespace roughlim {

/// The decidable ideals on N x N.
enum class IdealSpec {
  /// I_d = {A : d(A) = 0}.
  DensityZero,
  /// Sets covered by finitely many rows, columns and a finite set.
  MinimalStronglyAdmissible,
  /// All finite subsets.
  FiniteSets,
};

/// Canonical names: density-zero, minimal-sa, finite.
std::string to_string(IdealSpec ideal);
/// Also accepts a few aliases (dz, Id, msa, fin, ...). Throws InputError.
IdealSpec parse_ideal(const std::string& name);

/// Throws UndecidableRegion when the density (DensityZero) or the structural
/// decision (other ideals) cannot be certified.
bool ideal_contains(IdealSpec ideal, const Region& reg);
bool filter_member(IdealSpec ideal, const Region& reg);

bool is_admissible(IdealSpec ideal);
bool is_strongly_admissible(IdealSpec ideal);

struct AxiomReport {
  bool pass = true;
  std::vector<std::string> violations;
};

/// Checks the empty set is a member, closure under pairwise unions of the
/// member samples, and heredity on the constructed subsets A & B.
AxiomReport check_ideal_axioms(IdealSpec ideal, const std::vector<Region>& samples);

}  // namespace roughlim
