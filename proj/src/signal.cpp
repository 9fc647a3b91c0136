#include "flightoed/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "flightoed/errors.hpp"

namespace flightoed {

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::ThreeTwoOneOne: return "3211";
    case SignalKind::Doublet: return "doublet";
    case SignalKind::Optimized: return "optimized";
    case SignalKind::Custom: break;
  }
  return "custom";
}

UniformGrid UniformGrid::from_rate(double horizon, double rate_hz) {
  if (!(horizon > 0.0) || !(rate_hz > 0.0)) throw ValidationError("grid: horizon and rate must be positive");
  const double n = horizon * rate_hz;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
    throw ValidationError("grid: horizon must be a whole number of samples");
  return {1.0 / rate_hz, static_cast<int>(std::lround(n))};
}

int InputSignal::channel_index(std::string_view label) const {
  auto it = std::find(channels.begin(), channels.end(), label);
  return it == channels.end() ? -1 : static_cast<int>(it - channels.begin());
}

Eigen::VectorXd InputSignal::channel(std::string_view label) const {
  const int j = channel_index(label);
  if (j < 0) throw ValidationError("signal has no channel '" + std::string(label) + "'");
  return samples.col(j);
}

void InputSignal::validate() const {
  if (!(sample_period > 0.0)) throw ValidationError("signal: sample period must be positive");
  if (samples.cols() != static_cast<Eigen::Index>(channels.size()))
    throw ValidationError("signal: channel labels do not match sample columns");
  if (!samples.allFinite()) throw ValidationError("signal: non-finite samples");
}

InputSignal zero_signal(const UniformGrid& grid, const std::vector<std::string>& channels) {
  InputSignal s;
  s.sample_period = grid.sample_period;
  s.samples = Eigen::MatrixXd::Zero(grid.samples, static_cast<Eigen::Index>(channels.size()));
  s.channels = channels;
  return s;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value == 0.0 ? 0.0 : value);
  return buf;
}

void write_signal_csv(const InputSignal& signal, std::ostream& out) {
  out << "time";
  for (const auto& c : signal.channels) out << ',' << c;
  out << '\n';
  for (int i = 0; i < signal.size(); ++i) {
    out << format_number(signal.time(i));
    for (Eigen::Index j = 0; j < signal.samples.cols(); ++j) out << ',' << format_number(signal.samples(i, j));
    out << '\n';
  }
}

void write_signal_csv(const InputSignal& signal, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  write_signal_csv(signal, out);
}

InputSignal read_signal_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("signal csv: empty input");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header[0] != "time") throw ValidationError("signal csv: expected 'time,<channel>...' header");

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || !std::isfinite(v))
        throw ValidationError("signal csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != header.size())
      throw ValidationError("signal csv line " + std::to_string(line_no) + ": wrong column count");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ValidationError("signal csv: need at least two samples");

  InputSignal s;
  s.channels.assign(header.begin() + 1, header.end());
  s.sample_period = rows[1][0] - rows[0][0];
  if (!(s.sample_period > 0.0)) throw ValidationError("signal csv: time must increase");
  s.samples.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(s.channels.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    const double expected = rows[0][0] + static_cast<double>(i) * s.sample_period;
    if (std::abs(rows[i][0] - expected) > 1e-6 * s.sample_period + 1e-9)
      throw ValidationError("signal csv line " + std::to_string(i + 2) + ": non-uniform time grid");
    for (size_t j = 1; j < rows[i].size(); ++j) s.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) = rows[i][j];
  }
  return s;
}

InputSignal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_signal_csv(in);
}

InputSignal round_to_csv_precision(const InputSignal& signal) {
  InputSignal out = signal;
  out.samples = signal.samples.unaryExpr([](double v) { return std::strtod(format_number(v).c_str(), nullptr); });
  return out;
}

}  // namespace flightoed
