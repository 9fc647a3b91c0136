#include "flightoed/airframe.hpp"

#include <cmath>
#include <string>

#include "flightoed/errors.hpp"

namespace flightoed {

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string("airframe: ") + name + " must be positive");
}
}  // namespace

void AirframeProperties::validate() const {
  require_positive(mass, "mass");
  require_positive(inertia_x, "inertia_x");
  require_positive(inertia_y, "inertia_y");
  require_positive(inertia_z, "inertia_z");
  require_positive(wing_area, "wing_area");
  require_positive(wing_span, "wing_span");
  require_positive(mean_chord, "mean_chord");
  require_positive(air_density, "air_density");
  require_positive(gravity, "gravity");
  if (!std::isfinite(inertia_xz) || inertia_xz * inertia_xz >= inertia_x * inertia_z)
    throw ValidationError("airframe: inertia_xz^2 must be below inertia_x*inertia_z");
}

}  // namespace flightoed
