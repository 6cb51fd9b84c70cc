#include "ntnsplit/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ntnsplit/rng.hpp"
#include "ntnsplit/scenario.hpp"

namespace ntnsplit {

namespace {

constexpr double kDayHours = 24.0;
constexpr double kBumpHalfWidthHours = 6.0;
constexpr double kPi = 3.14159265358979323846;

void validate(const TrafficProfile& p) {
  if (!(p.mean_mbps > 0.0) || !(p.mean_mbps <= p.peak_mbps)) {
    throw std::invalid_argument("traffic profile requires 0 < mean_mbps <= peak_mbps");
  }
  if (!(p.peak_hour >= 0.0 && p.peak_hour < kDayHours)) {
    throw std::invalid_argument("traffic profile requires 0 <= peak_hour < 24");
  }
  if (p.noise_rel_std < 0.0) {
    throw std::invalid_argument("traffic profile requires noise_rel_std >= 0");
  }
}

// Raised-cosine window: 1 at the peak, 0 outside +-6 h (wrapped).
double bump(double time_of_day_hours, double peak_hour) {
  double delta = std::fabs(time_of_day_hours - peak_hour);
  delta = std::min(delta, kDayHours - delta);
  if (delta >= kBumpHalfWidthHours) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * delta / kBumpHalfWidthHours));
}

}  // namespace

TrafficProfile business_profile() {
  return TrafficProfile{ProfileKind::Business, 200.0, 100.0, 8.0, 0.05, 0};
}

TrafficProfile residential_profile() {
  return TrafficProfile{ProfileKind::Residential, 200.0, 100.0, 22.0, 0.05, 0};
}

TrafficProfile profile_by_name(const std::string& name) {
  if (name == "business") return business_profile();
  if (name == "residential") return residential_profile();
  throw ConfigError("unknown traffic profile: " + name);
}

double pattern_value(const TrafficProfile& profile, double time_of_day_hours) {
  validate(profile);
  if (!(time_of_day_hours >= 0.0 && time_of_day_hours < kDayHours)) {
    throw std::invalid_argument("time_of_day must lie in [0, 24)");
  }
  // The bump averages half-width / 24 over the day, so the baseline solves
  // baseline + (peak - baseline) * w = mean:
  const double w = kBumpHalfWidthHours / kDayHours;  // = 1/4
  double baseline = (profile.mean_mbps - profile.peak_mbps * w) / (1.0 - w);
  double value = baseline + (profile.peak_mbps - baseline) *
                                bump(time_of_day_hours, profile.peak_hour);
  return std::max(value, 0.0);
}

std::vector<double> generate_day(const TrafficProfile& profile, int step_minutes) {
  validate(profile);
  if (step_minutes <= 0 || 1440 % step_minutes != 0) {
    throw std::invalid_argument("step_minutes must divide 1440");
  }
  const int steps = 1440 / step_minutes;
  Rng rng(profile.seed);
  std::vector<double> series(steps);
  for (int k = 0; k < steps; ++k) {
    double t = k * step_minutes / 60.0;
    double noise = profile.noise_rel_std == 0.0
                       ? 0.0
                       : profile.noise_rel_std * rng.normal();
    series[k] = std::max(pattern_value(profile, t) * (1.0 + noise), 0.0);
  }
  return series;
}

void write_trace_csv(std::ostream& out, const std::vector<double>& series,
                     int step_minutes) {
  out << "minute,lambda_mbps\n";
  char buf[64];
  for (size_t k = 0; k < series.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k * step_minutes, series[k]);
    out << buf;
  }
}

std::vector<double> read_trace_csv(std::istream& in) {
  std::vector<double> series;
  std::string line;
  bool header_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("minute", 0) != 0) {
        throw ConfigError("trace CSV must start with header 'minute,lambda_mbps'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string minute_text, lambda_text;
    if (!std::getline(row, minute_text, ',') || !std::getline(row, lambda_text)) {
      throw ConfigError("trace CSV line " + std::to_string(lineno) + ": expected minute,lambda");
    }
    double lambda = 0.0;
    try {
      lambda = std::stod(lambda_text);
    } catch (const std::exception&) {
      throw ConfigError("trace CSV line " + std::to_string(lineno) + ": bad value");
    }
    if (lambda < 0.0) {
      throw ConfigError("trace CSV line " + std::to_string(lineno) + ": negative traffic");
    }
    series.push_back(lambda);
  }
  if (series.empty()) throw ConfigError("trace CSV holds no samples");
  return series;
}

std::vector<double> load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  return read_trace_csv(in);
}

}  // namespace ntnsplit
