#include "spin7lab/runconfig.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spin7lab/csv.hpp"

namespace spin7lab::report {

namespace {

double parse_real(const std::string& text, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE) {
    throw usage_error("bad numeric value for '" + key + "': " + text);
  }
  return v;
}

long parse_long(const std::string& text, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE) {
    throw usage_error("bad integer value for '" + key + "': " + text);
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw usage_error("bad boolean value for '" + key + "': " + text);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

// One setter shared by config-file keys and long flags (flag name minus
// the leading dashes). Throws usage_error for unknown keys.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "nu0") {
    cfg.nu0 = parse_real(value, key);
  } else if (key == "vol-star") {
    cfg.vol_star = parse_real(value, key);
  } else if (key == "y0") {
    cfg.y0 = parse_real(value, key);
  } else if (key == "limit") {
    cfg.limit_profile = parse_bool(value, key);
  } else if (key == "flat") {
    cfg.flat_profile = parse_bool(value, key);
  } else if (key == "y0-list") {
    cfg.y0_list = parse_real_list(value);
  } else if (key == "kappa") {
    cfg.kappa_list = parse_real_list(value);
  } else if (key == "levels") {
    cfg.levels = parse_real_list(value);
  } else if (key == "region") {
    const auto vals = parse_real_list(value);
    if (vals.size() != 2) throw usage_error("region expects 'lo,hi' in nu^2");
    cfg.region = std::make_pair(vals[0], vals[1]);
  } else if (key == "r-max") {
    cfg.r_max = parse_real(value, key);
  } else if (key == "nu-max2") {
    cfg.nu_max2 = parse_real(value, key);
  } else if (key == "grid") {
    cfg.grid = static_cast<int>(parse_long(value, key));
  } else if (key == "k-max") {
    cfg.k_max = static_cast<int>(parse_long(value, key));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "perturb-x0") {
    cfg.perturb_x0 = parse_real(value, key);
  } else if (key == "rel_tol") {
    cfg.budget.rel_tol = parse_real(value, key);
  } else if (key == "abs_tol") {
    cfg.budget.abs_tol = parse_real(value, key);
  } else if (key == "max_steps") {
    cfg.budget.max_steps = parse_long(value, key);
  } else if (key == "x") {
    cfg.x_column = value;
  } else if (key == "y") {
    cfg.y_columns.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cfg.y_columns.push_back(item);
    }
  } else if (key == "logx") {
    cfg.log_x = parse_bool(value, key);
  } else if (key == "logy") {
    cfg.log_y = parse_bool(value, key);
  } else {
    throw usage_error("unknown key '" + key + "'");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw usage_error("config file " + path + " line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw usage_error("config file " + path + " line " + std::to_string(line_no) +
                        ": empty key");
    }
    apply_key(cfg, key, value);
  }
}

// Flags that take no value on the command line.
bool is_switch(const std::string& key) {
  return key == "limit" || key == "flat" || key == "logx" || key == "logy";
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw usage_error("empty entry in list: " + text);
    out.push_back(parse_real(item, "list"));
  }
  if (out.empty()) throw usage_error("empty list");
  return out;
}

RunConfig parse_run_config(const std::vector<std::string>& args) {
  RunConfig cfg;

  // Config file first, so explicit flags win.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw usage_error("--config expects a file path");
      apply_config_file(cfg, args[i + 1]);
    }
  }

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--config") {
      ++i;  // handled above
      continue;
    }
    if (arg.rfind("--", 0) != 0) {
      cfg.inputs.push_back(arg);  // positional (plot CSV paths)
      continue;
    }
    std::string key = arg.substr(2);
    std::string value;
    const std::size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (key == "budget") {
      // --budget k=v (repeatable); keys: rel_tol, abs_tol, max_steps.
      if (i + 1 >= args.size()) throw usage_error("--budget expects k=v");
      const std::string kv = args[++i];
      const std::size_t beq = kv.find('=');
      if (beq == std::string::npos) throw usage_error("--budget expects k=v, got: " + kv);
      apply_key(cfg, trim(kv.substr(0, beq)), trim(kv.substr(beq + 1)));
      continue;
    } else if (is_switch(key)) {
      value = "true";
    } else {
      if (i + 1 >= args.size()) throw usage_error("flag --" + key + " expects a value");
      value = args[++i];
    }
    if (key == "budget") {
      const std::size_t beq = value.find('=');
      if (beq == std::string::npos) throw usage_error("--budget expects k=v, got: " + value);
      apply_key(cfg, trim(value.substr(0, beq)), trim(value.substr(beq + 1)));
      continue;
    }
    apply_key(cfg, key, value);
  }

  try {
    cfg.budget.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  if (!(cfg.nu0 > 0.0)) throw usage_error("nu0 must be positive");
  if (!(cfg.vol_star > 0.0)) throw usage_error("vol-star must be positive");
  return cfg;
}

namespace {

std::string list_echo(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> lines;
  lines.push_back("nu0 = " + format_double(nu0));
  lines.push_back("vol-star = " + format_double(vol_star));
  if (y0) lines.push_back("y0 = " + format_double(*y0));
  if (limit_profile) lines.push_back("limit = true");
  if (flat_profile) lines.push_back("flat = true");
  if (!y0_list.empty()) lines.push_back("y0-list = " + list_echo(y0_list));
  if (!kappa_list.empty()) lines.push_back("kappa = " + list_echo(kappa_list));
  if (!levels.empty()) lines.push_back("levels = " + list_echo(levels));
  if (region) {
    lines.push_back("region = " + format_double(region->first) + "," +
                    format_double(region->second));
  }
  lines.push_back("r-max = " + format_double(r_max));
  if (nu_max2) lines.push_back("nu-max2 = " + format_double(*nu_max2));
  lines.push_back("grid = " + std::to_string(grid));
  lines.push_back("k-max = " + std::to_string(k_max));
  lines.push_back("rel_tol = " + format_double(budget.rel_tol));
  lines.push_back("abs_tol = " + format_double(budget.abs_tol));
  lines.push_back("max_steps = " + std::to_string(budget.max_steps));
  lines.push_back("out = " + out_dir);
  if (perturb_x0) lines.push_back("perturb-x0 = " + format_double(*perturb_x0));
  lines.push_back("seedless = true");
  return lines;
}

}  // namespace spin7lab::report
