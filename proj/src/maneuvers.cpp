#include "flightoed/maneuvers.hpp"

#include <algorithm>
#include <cmath>

#include "flightoed/errors.hpp"

namespace flightoed {

namespace {

constexpr double kTimeTol = 1e-9;

void check_pulse_args(double amplitude, double pulse_width, double start_time, double rate_limit) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ValidationError("maneuver: amplitude must be >= 0");
  if (!(pulse_width > 0.0)) throw ValidationError("maneuver: pulse width must be positive");
  if (!(start_time >= 0.0)) throw ValidationError("maneuver: start time must be >= 0");
  if (!(rate_limit > 0.0)) throw ValidationError("maneuver: rate limit must be positive");
}

double demand_at(const std::vector<Step>& schedule, double t) {
  for (const auto& s : schedule)
    if (t >= s.start - kTimeTol && t < s.start + s.duration - kTimeTol) return s.level;
  return 0.0;
}

InputSignal pulse_train(const std::vector<Step>& schedule, double rate_limit, const UniformGrid& grid,
                        const std::string& channel, SignalKind kind, double amplitude, double pulse_width,
                        double start_time) {
  const double end = schedule.back().start + schedule.back().duration;
  if (end > grid.horizon() + kTimeTol) throw ValidationError("maneuver: pulse train exceeds the horizon");
  InputSignal s = zero_signal(grid, {channel});
  s.samples.col(0) = rate_limited_response(schedule, rate_limit, grid);
  s.metadata = {kind, amplitude, pulse_width, start_time};
  return s;
}

}  // namespace

std::vector<Step> schedule_3211(double amplitude, double pulse_width, double start_time) {
  const double dt = pulse_width, t0 = start_time, a = amplitude;
  return {{t0, 3 * dt, a}, {t0 + 3 * dt, 2 * dt, -a}, {t0 + 5 * dt, dt, a}, {t0 + 6 * dt, dt, -a}};
}

std::vector<Step> schedule_doublet(double amplitude, double pulse_width, double start_time) {
  return {{start_time, pulse_width, amplitude}, {start_time + pulse_width, pulse_width, -amplitude}};
}

Eigen::VectorXd rate_limited_response(const std::vector<Step>& schedule, double rate_limit, const UniformGrid& grid) {
  std::vector<double> events;
  for (const auto& s : schedule) {
    events.push_back(s.start);
    events.push_back(s.start + s.duration);
  }
  std::sort(events.begin(), events.end());

  auto advance = [rate_limit](double d, double target, double span) {
    const double reach = rate_limit * span;
    if (std::isinf(rate_limit) || std::abs(target - d) <= reach) return target;
    return d + std::copysign(reach, target - d);
  };

  Eigen::VectorXd out(grid.samples);
  double d = 0.0, level = 0.0, t_prev = 0.0;
  size_t next = 0;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = i * grid.sample_period;
    while (next < events.size() && events[next] <= t + kTimeTol) {
      const double e = std::max(events[next], t_prev);
      d = advance(d, level, e - t_prev);
      t_prev = e;
      level = demand_at(schedule, events[next]);
      ++next;
    }
    d = advance(d, level, t - t_prev);
    t_prev = t;
    out(i) = d;
  }
  return out;
}

InputSignal gen_3211(double amplitude, double pulse_width, double start_time, double rate_limit,
                     const UniformGrid& grid, const std::string& channel) {
  check_pulse_args(amplitude, pulse_width, start_time, rate_limit);
  return pulse_train(schedule_3211(amplitude, pulse_width, start_time), rate_limit, grid, channel,
                     SignalKind::ThreeTwoOneOne, amplitude, pulse_width, start_time);
}

InputSignal gen_doublet(double amplitude, double pulse_width, double start_time, double rate_limit,
                        const UniformGrid& grid, const std::string& channel) {
  check_pulse_args(amplitude, pulse_width, start_time, rate_limit);
  return pulse_train(schedule_doublet(amplitude, pulse_width, start_time), rate_limit, grid, channel,
                     SignalKind::Doublet, amplitude, pulse_width, start_time);
}

FccQuantization quantize_to_fcc_steps(const InputSignal& signal, double min_step_duration) {
  signal.validate();
  if (min_step_duration < signal.sample_period * (1.0 - 1e-9))
    throw ValidationError("quantize: minimum step shorter than the sample period");
  const int n = signal.size();
  const double dt = signal.sample_period;
  const int min_len = static_cast<int>(std::ceil(min_step_duration / dt - 1e-9));

  FccQuantization out;
  out.signal = signal;
  out.signal.metadata.kind = SignalKind::Custom;
  for (Eigen::Index c = 0; c < signal.samples.cols(); ++c) {
    const Eigen::VectorXd x = signal.samples.col(c);
    const double tol = 1e-12 * std::max(x.cwiseAbs().maxCoeff(), 1e-300);

    // Candidate boundaries: middle of every run of consecutive changes.
    std::vector<int> candidates;
    for (int i = 0; i + 1 < n;) {
      if (std::abs(x(i + 1) - x(i)) <= tol) {
        ++i;
        continue;
      }
      int j = i + 1;
      while (j + 1 < n && std::abs(x(j + 1) - x(j)) > tol) ++j;
      candidates.push_back((i + 1 + j) / 2);
      i = j;
    }

    std::vector<int> bounds{0};
    for (int b : candidates)
      if (b - bounds.back() >= min_len && n - b >= min_len) bounds.push_back(b);
    bounds.push_back(n);

    for (size_t k = 0; k + 1 < bounds.size(); ++k) {
      const int a = bounds[k], b = bounds[k + 1];
      const double mean = x.segment(a, b - a).mean();
      out.signal.samples.col(c).segment(a, b - a).setConstant(mean);
      out.steps.push_back({signal.channels[static_cast<size_t>(c)], mean, a * dt, (b - a) * dt});
    }
  }
  return out;
}

InputSignal truncate_for_safety(const InputSignal& signal, double window_start, double window_end) {
  signal.validate();
  if (window_start < -kTimeTol || window_end > signal.horizon() + kTimeTol)
    throw ValidationError("truncate: window outside the horizon");
  InputSignal out = signal;
  for (int i = 0; i < signal.size(); ++i) {
    const double t = signal.time(i);
    if (t < window_start - kTimeTol || t >= window_end - kTimeTol) out.samples.row(i).setZero();
  }
  return out;
}

}  // namespace flightoed
