#include "flightoed/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "flightoed/errors.hpp"

namespace flightoed {

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::Phugoid: return "Phugoid";
    case ModeLabel::ShortPeriod: return "Short-period";
    case ModeLabel::Spiral: return "Spiral";
    case ModeLabel::DutchRoll: return "Dutch roll";
    case ModeLabel::RollSubsidence: return "Roll subsidence";
    case ModeLabel::Unclassified: break;
  }
  return "Unclassified";
}

namespace {

ModeCharacteristics characterize(std::complex<double> lambda, bool oscillatory) {
  ModeCharacteristics m;
  m.eigenvalue = lambda;
  m.oscillatory = oscillatory;
  m.natural_frequency = std::abs(lambda);
  m.time_constant = m.natural_frequency > 0 ? 1.0 / m.natural_frequency : std::numeric_limits<double>::infinity();
  m.stable = lambda.real() <= 0.0;
  if (oscillatory) {
    const double zeta = -lambda.real() / m.natural_frequency;
    m.damping_ratio = zeta;
    m.period = 2.0 * std::numbers::pi / std::abs(lambda.imag());
    if (std::abs(zeta) < 1.0) m.overshoot_pct = 100.0 * std::exp(-zeta * std::numbers::pi / std::sqrt(1.0 - zeta * zeta));
  } else if (lambda.real() < 0.0) {
    m.damping_ratio = 1.0;
  }
  return m;
}

}  // namespace

std::vector<ModeCharacteristics> modal_report(const LtiModel& model) {
  if (model.A.rows() != model.A.cols() || model.A.rows() == 0) throw ValidationError("modal_report: A must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(model.A, false);
  if (es.info() != Eigen::Success) throw ConvergenceError("modal_report: eigen decomposition failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

  std::vector<ModeCharacteristics> modes;
  std::vector<bool> used(ev.size(), false);
  for (int i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(ev(i).imag()) <= 1e-12 * scale) {
      modes.push_back(characterize({ev(i).real(), 0.0}, false));
      continue;
    }
    int partner = -1;
    for (int j = i + 1; j < ev.size(); ++j)
      if (!used[j] && std::abs(ev(j) - std::conj(ev(i))) <= 1e-9 * scale) {
        partner = j;
        break;
      }
    if (partner < 0) throw ValidationError("modal_report: unpaired complex eigenvalue");
    used[partner] = true;
    const std::complex<double> upper = ev(i).imag() > 0 ? ev(i) : ev(partner);
    modes.push_back(characterize(upper, true));
  }
  std::stable_sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
    return a.natural_frequency < b.natural_frequency;
  });

  const auto count_osc = std::count_if(modes.begin(), modes.end(), [](const auto& m) { return m.oscillatory; });
  const std::vector<std::string> lon = {"V_T", "alpha", "theta", "q"};
  const std::vector<std::string> lat = {"beta", "phi", "p", "r"};
  if (model.state_labels == lon) {
    if (modes.size() != 2 || count_osc != 2)
      throw ValidationError("modal_report: longitudinal model without two oscillatory pairs");
    modes[0].label = ModeLabel::Phugoid;
    modes[1].label = ModeLabel::ShortPeriod;
  } else if (model.state_labels == lat) {
    if (modes.size() != 3 || count_osc != 1)
      throw ValidationError("modal_report: lateral model without one pair and two real roots");
    bool slow_real_done = false;
    for (auto& m : modes) {
      if (m.oscillatory) {
        m.label = ModeLabel::DutchRoll;
      } else if (!slow_real_done) {
        m.label = ModeLabel::Spiral;
        slow_real_done = true;
      } else {
        m.label = ModeLabel::RollSubsidence;
      }
    }
  }
  return modes;
}

}  // namespace flightoed
