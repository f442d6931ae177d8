#include "gravbell/interaction.hpp"

#include <algorithm>

#include "gravbell/errors.hpp"

namespace gravbell {

void InteractionDeclaration::validate() const {
  for (const auto& c : couplings) {
    if (!has_system(c.a) || !has_system(c.b))
      throw ConfigError("interaction declaration: coupling references undeclared system '" +
                        (!has_system(c.a) ? c.a : c.b) + "'");
    if (c.stage < 1 || c.stage > 3)
      throw ConfigError("interaction declaration: stage must be 1, 2 or 3");
    if (c.a == c.b)
      throw ConfigError("interaction declaration: self-coupling on '" + c.a + "'");
  }
}

bool InteractionDeclaration::has_system(const std::string& name) const {
  return std::any_of(systems.begin(), systems.end(),
                     [&](const SystemNode& s) { return s.name == name; });
}

SystemKind InteractionDeclaration::kind_of(const std::string& name) const {
  for (const auto& s : systems)
    if (s.name == name) return s.kind;
  throw ConfigError("interaction declaration: unknown system '" + name + "'");
}

InteractionDeclaration InteractionDeclaration::standard() {
  InteractionDeclaration d;
  d.systems = {{"particle_1", SystemKind::particle},
               {"particle_2", SystemKind::particle},
               {"photon_1", SystemKind::photon},
               {"photon_2", SystemKind::photon}};
  d.couplings = {{"particle_1", "particle_2", CouplingKind::gravity, 1},
                 {"particle_1", "photon_1", CouplingKind::electromagnetic, 2},
                 {"particle_2", "photon_2", CouplingKind::electromagnetic, 2}};
  return d;
}

std::string to_string(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::gravity: return "gravity";
    case CouplingKind::electromagnetic: return "electromagnetic";
    case CouplingKind::other: return "other";
  }
  return "unknown";
}

std::string describe(const Coupling& c) {
  return c.a + "--" + c.b + " (" + to_string(c.kind) + ", stage " +
         std::to_string(c.stage) + ")";
}

}  // namespace gravbell
