#include "ntnsplit/cost_model.hpp"

#include <stdexcept>
#include <string>

namespace ntnsplit {

const char* platform_name(Platform p) {
  return p == Platform::Sat ? "SAT" : "HAP";
}

const std::array<SplitOption, kSplitOptionCount>& split_options() {
  static const std::array<SplitOption, kSplitOptionCount> table = {{
      {0, kPhy | kRlc | kMac | kPdcp, 0, 30.0, 1.0, 0.0},
      {1, kPhy | kRlc | kMac, kPdcp, 30.0, 1.0, 0.0},
      {2, kPhy, kRlc | kMac | kPdcp, 2.0, 1.02, 1.5},
      {3, 0, kPhy | kRlc | kMac | kPdcp, 0.25, 0.0, 2500.0},
  }};
  return table;
}

const SplitOption& split_option(int id) {
  if (id < 0 || id >= kSplitOptionCount) {
    throw std::out_of_range("split option id out of range: " + std::to_string(id));
  }
  return split_options()[static_cast<size_t>(id)];
}

ScenarioParams default_scenario() {
  ScenarioParams s;
  s.sat = {Platform::Sat, 10.0, 0.625, 32.0, 600e3, 100.0, 35.0};
  s.hap = {Platform::Hap, 7.5, 5.64, 1.33, 20e3, 10000.0, 4.0};
  return s;
}

double traffic_demand(const SplitOption& option, double lambda_ru_mbps) {
  return option.traffic_slope * lambda_ru_mbps + option.traffic_intercept_mbps;
}

namespace {

double masked_load_gops(unsigned functions, const FunctionLoads& loads) {
  double total = 0.0;
  if (functions & kPhy) total += loads.phy_gops;
  if (functions & kRlc) total += loads.rlc_gops;
  if (functions & kMac) total += loads.mac_gops;
  if (functions & kPdcp) total += loads.pdcp_gops;
  return total;
}

}  // namespace

double node_comp_load_gops(const SplitOption& option, const FunctionLoads& loads) {
  return masked_load_gops(option.du_functions, loads);
}

double gateway_comp_load_gops(const SplitOption& option, const FunctionLoads& loads) {
  return masked_load_gops(option.cu_functions, loads);
}

double processing_power_node_w(const PlatformParams& platform,
                               const SplitOption& option,
                               const FunctionLoads& loads) {
  return platform.idle_power_w +
         platform.epo_j_per_to * gops_to_tops(node_comp_load_gops(option, loads));
}

double processing_power_gateway_w(const GatewayParams& gateway,
                                  const SplitOption& option,
                                  const FunctionLoads& loads) {
  return gateway.idle_power_w +
         gateway.epo_j_per_to * gops_to_tops(gateway_comp_load_gops(option, loads));
}

double transmission_power_w(const PlatformParams& platform,
                            const SplitOption& option,
                            double lambda_ru_mbps) {
  return platform.link_power_w / platform.link_capacity_mbps *
         traffic_demand(option, lambda_ru_mbps);
}

double total_power_w(const Assignment& assignment, double lambda_ru_mbps,
                     const ScenarioParams& params) {
  const PlatformParams& node = params.platform(assignment.platform);
  const SplitOption& option = split_option(assignment.option);
  return processing_power_node_w(node, option, params.loads) +
         processing_power_gateway_w(params.gateway, option, params.loads) +
         transmission_power_w(node, option, lambda_ru_mbps);
}

double propagation_latency_ms(const PlatformParams& platform,
                              double speed_of_light_m_per_s) {
  return platform.distance_to_gateway_m / speed_of_light_m_per_s * 1e3;
}

FeasibilityReport check_feasibility(const Assignment& assignment,
                                    double lambda_ru_mbps,
                                    const ScenarioParams& params) {
  const PlatformParams& node = params.platform(assignment.platform);
  const SplitOption& option = split_option(assignment.option);

  FeasibilityReport r;
  r.latency_ms = propagation_latency_ms(node, params.speed_of_light_m_per_s);
  r.latency_limit_ms = option.latency_limit_ms;
  r.traffic_mbps = traffic_demand(option, lambda_ru_mbps);
  r.link_capacity_mbps = node.link_capacity_mbps;
  r.node_comp_tops = gops_to_tops(node_comp_load_gops(option, params.loads));
  r.node_comp_max_tops = node.comp_max_tops;
  r.gateway_comp_tops = gops_to_tops(gateway_comp_load_gops(option, params.loads));
  r.gateway_comp_max_tops = params.gateway.comp_max_tops;

  r.latency_ok = r.latency_ms <= r.latency_limit_ms;
  r.traffic_ok = r.traffic_mbps <= r.link_capacity_mbps;
  r.node_comp_ok = r.node_comp_tops <= r.node_comp_max_tops;
  r.gateway_comp_ok = r.gateway_comp_tops <= r.gateway_comp_max_tops;
  return r;
}

}  // namespace ntnsplit
