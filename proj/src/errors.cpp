#include "distlab/errors.hpp"

#include <utility>

namespace distlab {

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Identity: return "identity";
    case Axiom::Nonnegativity: return "nonnegativity";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Triangle: return "triangle";
  }
  return "?";
}

AxiomViolation::AxiomViolation(Axiom axiom, std::size_t x, std::size_t y, std::size_t z)
    : Error(std::string("metric axiom violated: ") + axiom_name(axiom) + " at (" + std::to_string(x) + "," +
            std::to_string(y) + "," + std::to_string(z) + ")"),
      axiom(axiom), x(x), y(y), z(z) {}

IneligibleStep::IneligibleStep(std::size_t step, std::string reason)
    : Error("ineligible merge step " + std::to_string(step) + ": " + reason), step(step), reason(std::move(reason)) {}

}  // namespace distlab
