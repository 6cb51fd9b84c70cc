#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ntnsplit {

enum class ProfileKind { Business, Residential };

// Daily RU traffic profile. The deterministic template is a raised-cosine
// bump of half-width 6 h centered at peak_hour (with 24 h wrap-around) on
// top of a flat baseline; the baseline is solved so that the 24 h mean of
// the template equals mean_mbps.
struct TrafficProfile {
  ProfileKind kind = ProfileKind::Business;
  double peak_mbps = 200.0;
  double mean_mbps = 100.0;
  double peak_hour = 8.0;
  double noise_rel_std = 0.05;
  std::uint64_t seed = 0;
};

TrafficProfile business_profile();
TrafficProfile residential_profile();

TrafficProfile profile_by_name(const std::string& name);  // "business"|"residential"

/// Noiseless template value in Mbps at a time of day in hours.
/// Throws std::invalid_argument outside [0, 24).
double pattern_value(const TrafficProfile& profile, double time_of_day_hours);

/// One day of samples at the given step (step_minutes must divide 1440):
/// template value times (1 + N(0, noise_rel_std)), clamped at zero. Entry k
/// corresponds to minute k * step_minutes. Deterministic in profile.seed.
std::vector<double> generate_day(const TrafficProfile& profile, int step_minutes);

/// Trace export, header `minute,lambda_mbps`, one row per step.
void write_trace_csv(std::ostream& out, const std::vector<double>& series,
                     int step_minutes);

/// Trace import; accepts any equally-spaced (minute, Mbps) rows covering one
/// day. Returns the per-step values in row order.
std::vector<double> read_trace_csv(std::istream& in);

std::vector<double> load_trace_csv(const std::string& path);

}  // namespace ntnsplit
