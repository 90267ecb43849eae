#include "stereocorr/analog.hpp"

#include <sstream>
#include <iomanip>

namespace stereocorr {

PowerReport power_estimate(int channels) {
  if (channels < 0) throw std::invalid_argument("channel count must be non-negative");
  if (channels % 2 != 0)
    throw std::invalid_argument("channel count must be even (channels pair into template/reference)");

  PowerReport report;
  report.channels = channels;
  const int pairs = channels / 2;
  report.entries = {
      {"LPF", 2.8, channels, 0.0},
      {"Summer", 0.549, channels, 0.0},
      {"Multiplier", 0.00183, pairs, 0.0},
      {"Integrator", 0.024, pairs, 0.0},
  };
  for (auto& e : report.entries) {
    e.subtotal_mw = e.unit_power_mw * e.quantity;
    report.total_mw += e.subtotal_mw;
  }
  return report;
}

std::string format_power_report(const PowerReport& report) {
  std::ostringstream out;
  out << "channels " << report.channels << '\n';
  out << std::left << std::setw(12) << "component" << std::right << std::setw(10) << "quantity"
      << std::setw(16) << "unit_mW" << std::setw(16) << "subtotal_mW" << '\n';
  for (const auto& e : report.entries) {
    out << std::left << std::setw(12) << e.name << std::right << std::setw(10) << e.quantity
        << std::setw(16) << std::setprecision(6) << std::defaultfloat << e.unit_power_mw << std::setw(16)
        << std::fixed << std::setprecision(4) << e.subtotal_mw << std::defaultfloat << '\n';
  }
  out << std::left << std::setw(38) << "total" << std::right << std::setw(16) << std::fixed
      << std::setprecision(4) << report.total_mw << '\n';
  return out.str();
}

}  // namespace stereocorr
