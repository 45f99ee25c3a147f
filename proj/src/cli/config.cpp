#include "htlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace htlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" +
                      v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      v + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("config: key '" + key + "' has an empty list entry");
    out.push_back(parse_double(key, item));
  }
  if (out.empty())
    throw ConfigError("config: key '" + key + "' expects a list of numbers");
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "grid" && section != "mc" &&
          section != "payoff" && section != "law" && section != "output")
        throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config: key '" + key + "' outside any section");

    if (section == "model") {
      if (key == "type") cfg.model.type = value;
      else if (key == "sigma") cfg.model.sigma = parse_double(key, value);
      else if (key == "delta") cfg.model.delta = parse_double(key, value);
      else if (key == "x") cfg.model.x = parse_double(key, value);
      else if (key == "alpha0") cfg.model.alpha0 = parse_double(key, value);
      else if (key == "eta") cfg.model.eta = parse_double(key, value);
      else if (key == "m") cfg.model.m = static_cast<int>(parse_int(key, value));
      else if (key == "d") cfg.model.d = static_cast<int>(parse_int(key, value));
      else if (key == "r") cfg.model.r = parse_double(key, value);
      else if (key == "a") cfg.model.a = parse_list(key, value);
      else if (key == "b") cfg.model.b = parse_list(key, value);
      else if (key == "h") cfg.model.h = parse_list(key, value);
      else if (key == "x0") cfg.model.x0 = parse_list(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [model]");
    } else if (section == "grid") {
      if (key == "T") cfg.grid.horizon = parse_double(key, value);
      else if (key == "dt") cfg.grid.dt = parse_double(key, value);
      else if (key == "adaptive_epsilon")
        cfg.grid.adaptive_epsilon = parse_double(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [grid]");
    } else if (section == "mc") {
      if (key == "n_paths") {
        const long long n = parse_int(key, value);
        if (n < 1) throw ConfigError("config: n_paths must be >= 1");
        cfg.mc.n_paths = static_cast<std::size_t>(n);
      } else if (key == "seed") {
        cfg.mc.seed = static_cast<std::uint64_t>(parse_int(key, value));
      } else {
        throw ConfigError("config: unknown key '" + key + "' in [mc]");
      }
    } else if (section == "payoff") {
      cfg.payoff.present = true;
      if (key == "name") cfg.payoff.name = value;
      else if (key == "strike") cfg.payoff.strike = parse_double(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [payoff]");
    } else if (section == "law") {
      if (key == "target") cfg.law.target = value;
      else if (key == "points") cfg.law.points = parse_list(key, value);
      else throw ConfigError("config: unknown key '" + key + "' in [law]");
    } else if (section == "output") {
      if (key == "dir") cfg.output_dir = value;
      else throw ConfigError("config: unknown key '" + key + "' in [output]");
    }
  }
  if (!(cfg.grid.dt > 0.0)) throw ConfigError("config: dt must be > 0");
  if (!(cfg.grid.horizon > 0.0)) throw ConfigError("config: T must be > 0");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace htlab::cli
