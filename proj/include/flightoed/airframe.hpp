#pragma once

namespace flightoed {

// Mass, inertia and geometry of the vehicle plus the atmosphere it flies in.
struct AirframeProperties {
  double mass = 36.8;         // kg
  double inertia_x = 25.0;    // kg m^2
  double inertia_y = 32.0;
  double inertia_z = 56.0;
  double inertia_xz = 0.47;
  double wing_area = 3.0;     // m^2
  double wing_span = 5.5;     // m
  double mean_chord = 0.55;   // m
  double air_density = 1.225; // kg/m^3
  double gravity = 9.81;      // m/s^2

  // Throws ValidationError on non-physical values.
  void validate() const;

  double dynamic_pressure(double airspeed) const {
    return 0.5 * air_density * airspeed * airspeed;
  }
};

}  // namespace flightoed
