#include <cstdio>
#include <sstream>

#include "symcap/capopt.hpp"
#include "symcap/group_json.hpp"
#include "symcap/matrix_json.hpp"

namespace symcap {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string full_precision(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

nlohmann::json to_json(const VerificationReport& r, double unit) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"check", c.description},
                      {"pass", c.pass},
                      {"margin", c.information ? c.margin * unit : c.margin}});
  }
  return {{"suite", r.suite}, {"pass", r.pass()}, {"seed", r.seed}, {"checks", checks}};
}

std::string to_csv_rows(const VerificationReport& r, double unit) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << csv_field(r.suite) << ',' << csv_field(c.description) << ',' << (c.pass ? "true" : "false")
       << ',' << full_precision(c.information ? c.margin * unit : c.margin) << ',' << r.seed << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const CapacityResult& r, double unit) {
  return {{"q_star", matrix_to_json(r.q_star.matrix())},
          {"capacity", to_json(r.capacity, unit)},
          {"saa_value", r.saa_value * unit},
          {"reduced_set", reduced_set_to_json(r.reduced_set)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"gradient_norm", r.gradient_norm}};
}

}  // namespace symcap
