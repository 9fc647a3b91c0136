#pragma once

#include <limits>
#include <string>
#include <vector>

#include "flightoed/signal.hpp"

namespace flightoed {

// One constant demand held over [start, start + duration).
struct Step {
  double start = 0.0;
  double duration = 0.0;
  double level = 0.0;
};

// FCC demand schedules (ideal, before the actuator rate limit).
std::vector<Step> schedule_3211(double amplitude, double pulse_width, double start_time);
std::vector<Step> schedule_doublet(double amplitude, double pulse_width, double start_time);

// Deflection that follows a step demand at bounded rate, sampled on `grid`.
// rate_limit = +inf gives the ideal square wave.
Eigen::VectorXd rate_limited_response(const std::vector<Step>& schedule, double rate_limit, const UniformGrid& grid);

InputSignal gen_3211(double amplitude, double pulse_width, double start_time, double rate_limit,
                     const UniformGrid& grid, const std::string& channel = "delta_e");
InputSignal gen_doublet(double amplitude, double pulse_width, double start_time, double rate_limit,
                        const UniformGrid& grid, const std::string& channel = "delta_e");

struct FccStep {
  std::string channel;
  double amplitude = 0.0;  // rad
  double start = 0.0;      // s
  double duration = 0.0;   // s
};

struct FccQuantization {
  InputSignal signal;
  std::vector<FccStep> steps;
};

// Piecewise-constant approximation with pieces of at least min_step_duration.
// Boundaries are taken greedily at the midpoints of transitions; each piece
// holds the mean of the samples it covers.
FccQuantization quantize_to_fcc_steps(const InputSignal& signal, double min_step_duration);

// Zero the signal outside [window_start, window_end).
InputSignal truncate_for_safety(const InputSignal& signal, double window_start, double window_end);

}  // namespace flightoed
