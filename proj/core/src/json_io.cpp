#include "ttstar/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "ttstar/errors.hpp"

namespace ttstar::io {
namespace {

std::vector<double> reals(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw ShapeError(std::string("missing array field '") + key + "'");
  return j[key].get<std::vector<double>>();
}

int integer(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ShapeError(std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const Json& j, int indent, int depth) {
  const auto nl = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(std::size_t(indent) * d, ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      nl(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && e.is_primitive();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) nl(depth + 1);
        write(out, e, indent, depth + 1);
      }
      if (!flat) nl(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

Json to_json(const datamaps::AsymptoticData& a) {
  Json j;
  j["n"] = a.n;
  j["gamma"] = a.gamma;
  j["rho"] = a.rho;
  return j;
}

Json to_json(const datamaps::MonodromyData& m) {
  Json j;
  j["n"] = m.n;
  j["m"] = m.m;
  j["log_e"] = m.log_e;
  return j;
}

Json to_json(const todaflow::IntegratorStats& s) {
  Json j;
  j["accepted_steps"] = s.accepted;
  j["rejected_steps"] = s.rejected;
  j["rhs_evaluations"] = s.rhs_evaluations;
  j["max_error_ratio"] = s.max_error_ratio;
  return j;
}

Json to_json(const tauconst::ConstantReport& r) {
  Json j;
  j["gamma"] = r.gamma;
  j["c_numeric"] = r.c_numeric;
  j["c_closed"] = r.c_closed;
  j["abs_diff"] = r.abs_diff;
  j["x1_grid"] = r.x1_grid;
  j["x2_used"] = r.x2_used;
  j["extrapolation_exponent"] = r.extrapolation_exponent;
  j["tail_bound"] = r.tail_bound;
  j["c_values"] = r.c_values;
  j["rho"] = r.rho;
  j["gamma_residual"] = r.gamma_residual;
  j["newton_iterations"] = r.newton_iterations;
  j["integrator_stats"] = to_json(r.integrator_stats);
  return j;
}

datamaps::AsymptoticData asymptotic_from_json(const Json& j) {
  return {integer(j, "n"), reals(j, "gamma"), reals(j, "rho")};
}

datamaps::MonodromyData monodromy_from_json(const Json& j) {
  return {integer(j, "n"), reals(j, "m"), reals(j, "log_e")};
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

}  // namespace ttstar::io
