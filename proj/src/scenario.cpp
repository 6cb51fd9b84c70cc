#include "ntnsplit/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ntnsplit {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value '" + text + "' for " + where);
  }
}

using Setter = std::function<void(ScenarioParams&, double)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  auto plat = [](PlatformParams ScenarioParams::* field) {
    return std::map<std::string, Setter>{
        {"idle_power_w", [field](ScenarioParams& s, double v) { (s.*field).idle_power_w = v; }},
        {"epo_j_per_to", [field](ScenarioParams& s, double v) { (s.*field).epo_j_per_to = v; }},
        {"comp_max_tops", [field](ScenarioParams& s, double v) { (s.*field).comp_max_tops = v; }},
        {"distance_to_gateway_m", [field](ScenarioParams& s, double v) { (s.*field).distance_to_gateway_m = v; }},
        {"link_capacity_mbps", [field](ScenarioParams& s, double v) { (s.*field).link_capacity_mbps = v; }},
        {"link_power_w", [field](ScenarioParams& s, double v) { (s.*field).link_power_w = v; }},
    };
  };
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"platform.SAT", plat(&ScenarioParams::sat)},
      {"platform.HAP", plat(&ScenarioParams::hap)},
      {"gateway",
       {
           {"idle_power_w", [](ScenarioParams& s, double v) { s.gateway.idle_power_w = v; }},
           {"epo_j_per_to", [](ScenarioParams& s, double v) { s.gateway.epo_j_per_to = v; }},
           {"comp_max_tops", [](ScenarioParams& s, double v) { s.gateway.comp_max_tops = v; }},
       }},
      {"function_loads",
       {
           {"phy_gops", [](ScenarioParams& s, double v) { s.loads.phy_gops = v; }},
           {"rlc_gops", [](ScenarioParams& s, double v) { s.loads.rlc_gops = v; }},
           {"mac_gops", [](ScenarioParams& s, double v) { s.loads.mac_gops = v; }},
           {"pdcp_gops", [](ScenarioParams& s, double v) { s.loads.pdcp_gops = v; }},
       }},
      {"constants",
       {
           {"speed_of_light_m_per_s", [](ScenarioParams& s, double v) { s.speed_of_light_m_per_s = v; }},
       }},
  };
  return table;
}

void validate(const ScenarioParams& s) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("parameter must be strictly positive: ") + name);
  };
  for (const PlatformParams* p : {&s.sat, &s.hap}) {
    const char* tag = p->id == Platform::Sat ? "platform.SAT" : "platform.HAP";
    positive(p->idle_power_w, tag);
    positive(p->epo_j_per_to, tag);
    positive(p->comp_max_tops, tag);
    positive(p->distance_to_gateway_m, tag);
    positive(p->link_capacity_mbps, tag);
    positive(p->link_power_w, tag);
  }
  positive(s.gateway.idle_power_w, "gateway.idle_power_w");
  positive(s.gateway.epo_j_per_to, "gateway.epo_j_per_to");
  positive(s.gateway.comp_max_tops, "gateway.comp_max_tops");
  if (s.loads.phy_gops < 0 || s.loads.rlc_gops < 0 || s.loads.mac_gops < 0 ||
      s.loads.pdcp_gops < 0) {
    throw ConfigError("function loads must be nonnegative");
  }
  positive(s.speed_of_light_m_per_s, "constants.speed_of_light_m_per_s");
}

}  // namespace

ScenarioParams parse_scenario(std::istream& in) {
  ScenarioParams params = default_scenario();
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      if (setters().find(section) == setters().end()) {
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    const auto& keys = setters().at(section);
    auto it = keys.find(key);
    if (it == keys.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    }
    it->second(params, parse_double(value, "[" + section + "] " + key));
  }
  validate(params);
  return params;
}

ScenarioParams load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  return parse_scenario(in);
}

std::string scenario_to_string(const ScenarioParams& s) {
  char buf[64];
  std::ostringstream out;
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << " = " << buf << "\n";
  };
  for (const PlatformParams* p : {&s.sat, &s.hap}) {
    out << "[platform." << platform_name(p->id) << "]\n";
    put("idle_power_w", p->idle_power_w);
    put("epo_j_per_to", p->epo_j_per_to);
    put("comp_max_tops", p->comp_max_tops);
    put("distance_to_gateway_m", p->distance_to_gateway_m);
    put("link_capacity_mbps", p->link_capacity_mbps);
    put("link_power_w", p->link_power_w);
  }
  out << "[gateway]\n";
  put("idle_power_w", s.gateway.idle_power_w);
  put("epo_j_per_to", s.gateway.epo_j_per_to);
  put("comp_max_tops", s.gateway.comp_max_tops);
  out << "[function_loads]\n";
  put("phy_gops", s.loads.phy_gops);
  put("rlc_gops", s.loads.rlc_gops);
  put("mac_gops", s.loads.mac_gops);
  put("pdcp_gops", s.loads.pdcp_gops);
  out << "[constants]\n";
  put("speed_of_light_m_per_s", s.speed_of_light_m_per_s);
  return out.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace ntnsplit
