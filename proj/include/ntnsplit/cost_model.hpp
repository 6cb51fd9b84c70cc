#pragma once

#include <array>
#include <cstdint>

namespace ntnsplit {

enum class Platform : int { Sat = 0, Hap = 1 };

constexpr int kPlatformCount = 2;
constexpr int kSplitOptionCount = 4;

const char* platform_name(Platform p);

// Protocol-stack functions that can sit in the DU or the CU.
enum StackFunction : unsigned {
  kPhy = 1u << 0,
  kRlc = 1u << 1,
  kMac = 1u << 2,
  kPdcp = 1u << 3,
};

// One CU/DU split configuration. The feeder-link traffic law is affine:
// TRA(lambda) = traffic_slope * lambda + traffic_intercept_mbps.
struct SplitOption {
  int id = 0;
  unsigned du_functions = 0;  // bitmask over StackFunction
  unsigned cu_functions = 0;
  double latency_limit_ms = 0.0;
  double traffic_slope = 0.0;
  double traffic_intercept_mbps = 0.0;
};

/// The four split options, ordered by id. Option 0 keeps the whole stack in
/// the DU; option 3 centralizes everything in the CU.
const std::array<SplitOption, kSplitOptionCount>& split_options();

/// Catalogue lookup; throws std::out_of_range for ids outside {0..3}.
const SplitOption& split_option(int id);

// Per-function computational loads in GOPS.
struct FunctionLoads {
  double phy_gops = 1280.0;
  double rlc_gops = 50.0;
  double mac_gops = 50.0;
  double pdcp_gops = 100.0;
};

// Physical and energy parameters of one NTN platform.
struct PlatformParams {
  Platform id = Platform::Sat;
  double idle_power_w = 0.0;
  double epo_j_per_to = 0.0;  // joules per tera-operation
  double comp_max_tops = 0.0;
  double distance_to_gateway_m = 0.0;
  double link_capacity_mbps = 0.0;
  double link_power_w = 0.0;  // power drawn at full link capacity
};

struct GatewayParams {
  double idle_power_w = 36.0;
  double epo_j_per_to = 0.0742;
  double comp_max_tops = 485.0;
};

// A complete scenario: both platforms, the gateway, the function loads and
// the propagation speed used for latency.
struct ScenarioParams {
  PlatformParams sat;
  PlatformParams hap;
  GatewayParams gateway;
  FunctionLoads loads;
  double speed_of_light_m_per_s = 3.0e8;

  const PlatformParams& platform(Platform p) const {
    return p == Platform::Sat ? sat : hap;
  }
};

/// Scenario with the default parameter set (LEO satellite at 600 km with a
/// 100 Mbps feeder link, HAPS at 20 km with a 10 Gbps link).
ScenarioParams default_scenario();

// The active (platform, option) pair; exactly one pair is active at a time.
struct Assignment {
  Platform platform = Platform::Sat;
  int option = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Outcome of evaluating the four feasibility constraints, with the measured
// quantities kept for diagnostics.
struct FeasibilityReport {
  bool latency_ok = false;
  bool traffic_ok = false;
  bool node_comp_ok = false;
  bool gateway_comp_ok = false;

  double latency_ms = 0.0;
  double latency_limit_ms = 0.0;
  double traffic_mbps = 0.0;
  double link_capacity_mbps = 0.0;
  double node_comp_tops = 0.0;
  double node_comp_max_tops = 0.0;
  double gateway_comp_tops = 0.0;
  double gateway_comp_max_tops = 0.0;

  bool feasible() const {
    return latency_ok && traffic_ok && node_comp_ok && gateway_comp_ok;
  }
};

constexpr double gops_to_tops(double gops) { return gops / 1000.0; }

/// Feeder-link traffic demand in Mbps for a given RU load.
double traffic_demand(const SplitOption& option, double lambda_ru_mbps);

/// Computational load hosted on the NTN node (sum of DU functions), GOPS.
double node_comp_load_gops(const SplitOption& option, const FunctionLoads& loads);

/// Computational load hosted at the gateway (sum of CU functions), GOPS.
double gateway_comp_load_gops(const SplitOption& option, const FunctionLoads& loads);

double processing_power_node_w(const PlatformParams& platform,
                               const SplitOption& option,
                               const FunctionLoads& loads);

// Gateway idle power is charged in every configuration, even when the CU
// hosts nothing.
double processing_power_gateway_w(const GatewayParams& gateway,
                                  const SplitOption& option,
                                  const FunctionLoads& loads);

// May exceed link_power_w when the demand exceeds the link capacity;
// feasibility is checked separately.
double transmission_power_w(const PlatformParams& platform,
                            const SplitOption& option,
                            double lambda_ru_mbps);

/// Total power of an assignment: active-node processing + gateway
/// processing + feeder-link transmission. The inactive platform draws
/// nothing.
double total_power_w(const Assignment& assignment, double lambda_ru_mbps,
                     const ScenarioParams& params);

/// One-way feeder-link propagation latency in milliseconds.
double propagation_latency_ms(const PlatformParams& platform,
                              double speed_of_light_m_per_s);

/// Evaluates all four constraints with non-strict inequalities; a boundary
/// value counts as feasible.
FeasibilityReport check_feasibility(const Assignment& assignment,
                                    double lambda_ru_mbps,
                                    const ScenarioParams& params);

}  // namespace ntnsplit
