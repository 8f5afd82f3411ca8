#include "rzlab/report.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rzlab {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join_p(const std::vector<double>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ";" : "") + format_double(ps[i]);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::AtMost: return "at_most";
    case Comparison::AtLeast: return "at_least";
    case Comparison::Within: return "within";
    case Comparison::Info: return "info";
  }
  return "?";
}

json number(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

}  // namespace

std::string csv_header() { return "check_id,d,n,R,potential,p,measured,bound,tolerance,verdict,seed,runtime_s\n"; }

std::string csv_row(const CheckReport& r) {
  const auto& m = r.headline();
  char runtime[32];
  std::snprintf(runtime, sizeof runtime, "%.3f", r.runtime_s);
  std::ostringstream os;
  os << csv_field(r.id) << ',' << r.d << ',' << r.n << ',' << format_double(r.R) << ',' << csv_field(r.potential) << ','
     << join_p(r.p) << ',' << format_double(m.value) << ',' << format_double(m.bound) << ','
     << format_double(m.allowed_slack()) << ',' << to_string(r.verdict) << ',' << r.seed << ',' << runtime << '\n';
  return os.str();
}

std::string reports_csv(const std::vector<CheckReport>& reports) {
  std::string out = csv_header();
  for (const auto& r : reports) out += csv_row(r);
  return out;
}

std::string reports_json(const std::vector<CheckReport>& reports, const RunConfig& config) {
  json arr = json::array();
  for (const auto& r : reports) {
    json ms = json::array();
    for (const auto& m : r.measurements)
      ms.push_back({{"name", m.name},
                    {"p", m.p},
                    {"value", number(m.value)},
                    {"bound", number(m.bound)},
                    {"tolerance", m.tolerance},
                    {"slack", m.slack == Slack::Relative ? "relative" : "absolute"},
                    {"comparison", comparison_name(m.comparison)},
                    {"pass", m.passes()}});
    arr.push_back({{"check_id", r.id},
                   {"d", r.d},
                   {"n", r.n},
                   {"R", r.R},
                   {"potential", r.potential},
                   {"p", r.p},
                   {"seed", r.seed},
                   {"verdict", to_string(r.verdict)},
                   {"measurements", ms},
                   {"notes", r.notes},
                   {"runtime_s", r.runtime_s}});
  }
  json doc{{"config", json::parse(config_to_json(config))}, {"reports", arr}};
  return doc.dump(2) + "\n";
}

std::string scan_csv(const ScanReport& scan) {
  std::string out = "which,x,value\n";
  for (const auto& pt : scan.points)
    out += std::string(to_string(scan.which)) + "," + format_double(pt.x) + "," + format_double(pt.value) + "\n";
  return out;
}

std::string scan_json(const ScanReport& scan) {
  json pts = json::array();
  for (const auto& pt : scan.points) pts.push_back({{"x", pt.x}, {"value", pt.value}});
  json doc{{"which", to_string(scan.which)},
           {"eps", scan.params.eps},
           {"p", scan.params.p},
           {"d", scan.params.d},
           {"law", scan.law},
           {"slope", scan.slope},
           {"intercept", scan.intercept},
           {"r_squared", scan.r_squared},
           {"expected_slope", scan.expected},
           {"max_increment_error", scan.max_increment_error},
           {"monotone", scan.monotone},
           {"conclusive", scan.conclusive},
           {"points", pts}};
  return doc.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "suite") c.suite = value.get<std::string>();
      else if (key == "checks") c.checks = value.get<std::vector<std::string>>();
      else if (key == "d") c.d = value.get<int>();
      else if (key == "n") c.n = value.get<int>();
      else if (key == "R") c.R = value.get<double>();
      else if (key == "potential") c.potential = value.get<std::string>();
      else if (key == "p") c.p = value.get<std::vector<double>>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "trials") c.trials = value.get<int>();
      else if (key == "split_tau0") c.split_tau0 = value.get<double>();
      else if (key == "frac_tau0") c.frac_tau0 = value.get<double>();
      else if (key == "quad_tol") c.quad_tol = value.get<double>();
      else if (key == "fk_paths") c.fk_paths = value.get<long>();
      else if (key == "fk_slices") c.fk_slices = value.get<int>();
      else if (key == "jobs") c.jobs = value.get<int>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw std::invalid_argument("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

RunConfig config_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json doc{{"suite", c.suite},         {"checks", c.checks},     {"d", c.d},
           {"n", c.n},                 {"R", c.R},               {"potential", c.potential},
           {"p", c.p},                 {"seed", c.seed},         {"trials", c.trials},
           {"split_tau0", c.split_tau0}, {"frac_tau0", c.frac_tau0}, {"quad_tol", c.quad_tol},
           {"fk_paths", c.fk_paths},   {"fk_slices", c.fk_slices}, {"jobs", c.jobs},
           {"out", c.out}};
  return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace rzlab
