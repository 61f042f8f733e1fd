#include "spde/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "spde/drift.hpp"
#include "spde/errors.hpp"

namespace spde {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (double d : parse_double_list(key, v)) out.push_back(static_cast<int>(d));
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_double_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

std::string format_int_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters;
  auto dset = [&](const std::string& key, double& target) {
    setters[key] = [key, &target](const std::string& k, const std::string& v) {
      target = parse_double(k, v);
    };
  };
  auto iset = [&](const std::string& key, int& target) {
    setters[key] = [key, &target](const std::string& k, const std::string& v) {
      target = static_cast<int>(parse_int(k, v));
    };
  };
  setters["model.family"] = [&cfg](const std::string&, const std::string& v) {
    cfg.model.family = family_from_name(v);
  };
  dset("model.alpha", cfg.model.alpha);
  dset("model.rho", cfg.model.rho);
  dset("model.gamma", cfg.model.gamma);
  dset("model.sigma", cfg.model.sigma);
  dset("model.theta", cfg.model.theta);
  dset("model.xi", cfg.model.xi);
  iset("model.m", cfg.model.m);
  iset("model.n_max", cfg.model.n_max);
  dset("model.eps_res", cfg.model.eps_res);
  dset("model.noise_scale", cfg.model.noise_scale);

  dset("run.T", cfg.T);
  iset("run.steps", cfg.steps);
  iset("run.trajectories", cfg.trajectories);
  setters["run.seed"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.seed = static_cast<std::uint64_t>(parse_int(k, v));
  };
  iset("run.micro_factor", cfg.micro_factor);

  setters["drift.kind"] = [&cfg](const std::string& k, const std::string& v) {
    if (v != "zero" && v != "mode_coefficients" && v != "counterexample")
      throw ConfigError("config: unknown drift kind '" + v + "' for " + k);
    cfg.drift_kind = v;
  };
  dset("drift.amplitude", cfg.drift_amplitude);
  dset("drift.theta", cfg.drift_theta);
  dset("drift.decay", cfg.drift_decay);
  dset("drift.velocity_mix", cfg.drift_velocity_mix);
  iset("drift.grid_points", cfg.drift_grid_points);

  setters["task.t_grid"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.t_grid = parse_double_list(k, v);
  };
  setters["task.n_list"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.n_list = parse_int_list(k, v);
  };
  iset("task.n_ref", cfg.n_ref);
  setters["task.eta_grid"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.eta_grid = parse_double_list(k, v);
  };
  dset("task.theta_prime", cfg.theta_prime);
  dset("task.box_half_width", cfg.box_half_width);
  iset("task.box_points", cfg.box_points);
  iset("task.time_steps", cfg.time_steps);
  iset("task.time_points", cfg.time_points);
  iset("task.space_points", cfg.space_points);
  iset("task.observe_count", cfg.observe_count);
  iset("task.profile_order", cfg.profile_order);
  setters["task.x0"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.x0 = parse_double_list(k, v);
  };
  setters["task.x1"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.x1 = parse_double_list(k, v);
  };
  setters["task.x2"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.x2 = parse_double_list(k, v);
  };
  setters["task.distances"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.distances = parse_double_list(k, v);
  };

  setters["output.dir"] = [&cfg](const std::string&, const std::string& v) {
    cfg.out_dir = v;
  };
  setters["output.plots"] = [&cfg](const std::string& k, const std::string& v) {
    cfg.plots = parse_bool(k, v);
  };

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("config: unknown key '" + key + "' (line " +
                        std::to_string(lineno) + ")");
    it->second(key, value);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "model.family = " << family_name(cfg.model.family) << "\n";
  os << "model.alpha = " << format_double(cfg.model.alpha) << "\n";
  os << "model.rho = " << format_double(cfg.model.rho) << "\n";
  os << "model.gamma = " << format_double(cfg.model.gamma) << "\n";
  os << "model.sigma = " << format_double(cfg.model.sigma) << "\n";
  os << "model.theta = " << format_double(cfg.model.theta) << "\n";
  os << "model.xi = " << format_double(cfg.model.xi) << "\n";
  os << "model.m = " << cfg.model.m << "\n";
  os << "model.n_max = " << cfg.model.n_max << "\n";
  os << "model.eps_res = " << format_double(cfg.model.eps_res) << "\n";
  os << "model.noise_scale = " << format_double(cfg.model.noise_scale) << "\n";
  os << "run.T = " << format_double(cfg.T) << "\n";
  os << "run.steps = " << cfg.steps << "\n";
  os << "run.trajectories = " << cfg.trajectories << "\n";
  os << "run.seed = " << cfg.seed << "\n";
  os << "run.micro_factor = " << cfg.micro_factor << "\n";
  os << "drift.kind = " << cfg.drift_kind << "\n";
  os << "drift.amplitude = " << format_double(cfg.drift_amplitude) << "\n";
  os << "drift.theta = " << format_double(cfg.drift_theta) << "\n";
  os << "drift.decay = " << format_double(cfg.drift_decay) << "\n";
  os << "drift.velocity_mix = " << format_double(cfg.drift_velocity_mix) << "\n";
  os << "drift.grid_points = " << cfg.drift_grid_points << "\n";
  if (!cfg.t_grid.empty()) os << "task.t_grid = " << format_double_list(cfg.t_grid) << "\n";
  if (!cfg.n_list.empty()) os << "task.n_list = " << format_int_list(cfg.n_list) << "\n";
  os << "task.n_ref = " << cfg.n_ref << "\n";
  if (!cfg.eta_grid.empty())
    os << "task.eta_grid = " << format_double_list(cfg.eta_grid) << "\n";
  os << "task.theta_prime = " << format_double(cfg.theta_prime) << "\n";
  os << "task.box_half_width = " << format_double(cfg.box_half_width) << "\n";
  os << "task.box_points = " << cfg.box_points << "\n";
  os << "task.time_steps = " << cfg.time_steps << "\n";
  os << "task.time_points = " << cfg.time_points << "\n";
  os << "task.space_points = " << cfg.space_points << "\n";
  os << "task.observe_count = " << cfg.observe_count << "\n";
  os << "task.profile_order = " << cfg.profile_order << "\n";
  if (!cfg.x0.empty()) os << "task.x0 = " << format_double_list(cfg.x0) << "\n";
  if (!cfg.x1.empty()) os << "task.x1 = " << format_double_list(cfg.x1) << "\n";
  if (!cfg.x2.empty()) os << "task.x2 = " << format_double_list(cfg.x2) << "\n";
  if (!cfg.distances.empty())
    os << "task.distances = " << format_double_list(cfg.distances) << "\n";
  os << "output.dir = " << cfg.out_dir << "\n";
  os << "output.plots = " << (cfg.plots ? "true" : "false") << "\n";
  return os.str();
}

DriftSpec drift_from_config(const ExperimentConfig& cfg) {
  if (cfg.drift_kind == "zero") return DriftSpec::zero();
  if (cfg.drift_kind == "mode_coefficients") {
    DriftSpec d =
        DriftSpec::mode_coefficients(cfg.drift_amplitude, cfg.drift_theta, cfg.drift_decay);
    d.velocity_mix = cfg.drift_velocity_mix;
    return d;
  }
  if (cfg.drift_kind == "counterexample") return counterexample_drift(cfg.drift_grid_points);
  throw ConfigError("config: unknown drift kind " + cfg.drift_kind);
}

}  // namespace spde
