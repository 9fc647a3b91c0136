#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace flightoed {

enum class SignalKind { ThreeTwoOneOne, Doublet, Custom, Optimized };

std::string to_string(SignalKind kind);

struct SignalMetadata {
  SignalKind kind = SignalKind::Custom;
  double amplitude = 0.0;    // rad
  double pulse_width = 0.0;  // s
  double start_time = 0.0;   // s
};

struct UniformGrid {
  double sample_period = 0.01;
  int samples = 1000;

  double horizon() const { return samples * sample_period; }
  static UniformGrid from_rate(double horizon, double rate_hz);
};

// Deflections relative to trim (rad), one column per channel, sample i at t = i*dt.
struct InputSignal {
  double sample_period = 0.01;
  Eigen::MatrixXd samples;
  std::vector<std::string> channels;
  SignalMetadata metadata;

  int size() const { return static_cast<int>(samples.rows()); }
  double horizon() const { return size() * sample_period; }
  double time(int i) const { return i * sample_period; }
  UniformGrid grid() const { return {sample_period, size()}; }
  int channel_index(std::string_view label) const;  // -1 when absent
  Eigen::VectorXd channel(std::string_view label) const;
  void validate() const;
};

InputSignal zero_signal(const UniformGrid& grid, const std::vector<std::string>& channels);

// Fixed 9 significant digits, shared by every CSV artifact.
std::string format_number(double value);

void write_signal_csv(const InputSignal& signal, std::ostream& out);
void write_signal_csv(const InputSignal& signal, const std::string& path);
InputSignal read_signal_csv(std::istream& in);
InputSignal read_signal_csv(const std::string& path);
// Value the signal takes after a CSV round trip.
InputSignal round_to_csv_precision(const InputSignal& signal);

}  // namespace flightoed
