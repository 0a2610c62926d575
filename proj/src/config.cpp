#include "hgr/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace hgr {
namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config key '" + key + "': invalid value '" +
                              value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, v);
  return out;
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(parse_u64(key, v));
}

double parse_f64(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, v);
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v,
                          T (*parse_one)(const std::string&,
                                         const std::string&)) {
  std::vector<T> out;
  std::size_t begin = 0;
  while (begin <= v.size()) {
    const std::size_t comma = v.find(',', begin);
    const std::size_t end = comma == std::string::npos ? v.size() : comma;
    out.push_back(parse_one(key, v.substr(begin, end - begin)));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  if (out.empty()) bad_value(key, v);
  return out;
}

std::string fmt_f64(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(values[k]);
  }
  return out;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace

const std::vector<ConfigKey>& config_keys() {
  using C = TrainConfig;
  using S = const std::string&;
  static const std::vector<ConfigKey> keys = {
      {"env_id", "environment id (point-reach | point-push)",
       [](C& c, S v) { c.env_id = v; },
       [](const C& c) { return c.env_id; }},
      {"seeds", "comma-separated training seeds",
       [](C& c, S v) { c.seeds = parse_list<std::uint64_t>("seeds", v, parse_u64); },
       [](const C& c) { return join(c.seeds); }},
      {"total_interactions", "environment steps per seed",
       [](C& c, S v) { c.total_interactions = parse_u64("total_interactions", v); },
       [](const C& c) { return std::to_string(c.total_interactions); }},
      {"horizon", "episode length H",
       [](C& c, S v) { c.env.horizon = parse_size("horizon", v); },
       [](const C& c) { return std::to_string(c.env.horizon); }},
      {"tolerance", "goal tolerance rho",
       [](C& c, S v) { c.env.tolerance = parse_f64("tolerance", v); },
       [](const C& c) { return fmt_f64(c.env.tolerance); }},
      {"dt", "integration step",
       [](C& c, S v) { c.env.dt = parse_f64("dt", v); },
       [](const C& c) { return fmt_f64(c.env.dt); }},
      {"v_max", "max speed",
       [](C& c, S v) { c.env.v_max = parse_f64("v_max", v); },
       [](const C& c) { return fmt_f64(c.env.v_max); }},
      {"contact_radius", "point-push contact radius",
       [](C& c, S v) { c.env.contact_radius = parse_f64("contact_radius", v); },
       [](const C& c) { return fmt_f64(c.env.contact_radius); }},
      {"buffer_size", "replay capacity in transitions",
       [](C& c, S v) { c.buffer_size = parse_size("buffer_size", v); },
       [](const C& c) { return std::to_string(c.buffer_size); }},
      {"batch_size", "transitions per gradient step",
       [](C& c, S v) { c.batch_size = parse_size("batch_size", v); },
       [](const C& c) { return std::to_string(c.batch_size); }},
      {"update_frequency", "episodes per optimize cycle",
       [](C& c, S v) { c.update_frequency = parse_size("update_frequency", v); },
       [](const C& c) { return std::to_string(c.update_frequency); }},
      {"gradient_steps", "gradient steps per cycle",
       [](C& c, S v) { c.gradient_steps = parse_size("gradient_steps", v); },
       [](const C& c) { return std::to_string(c.gradient_steps); }},
      {"hidden", "comma-separated hidden layer widths",
       [](C& c, S v) { c.hidden = parse_list<std::size_t>("hidden", v, parse_size); },
       [](const C& c) { return join(c.hidden); }},
      {"lr_actor", "actor learning rate",
       [](C& c, S v) { c.lr_actor = parse_f64("lr_actor", v); },
       [](const C& c) { return fmt_f64(c.lr_actor); }},
      {"lr_critic", "critic learning rate",
       [](C& c, S v) { c.lr_critic = parse_f64("lr_critic", v); },
       [](const C& c) { return fmt_f64(c.lr_critic); }},
      {"gamma", "discount factor",
       [](C& c, S v) { c.gamma = parse_f64("gamma", v); },
       [](const C& c) { return fmt_f64(c.gamma); }},
      {"polyak", "target averaging coefficient",
       [](C& c, S v) { c.polyak = parse_f64("polyak", v); },
       [](const C& c) { return fmt_f64(c.polyak); }},
      {"action_l2", "action norm penalty",
       [](C& c, S v) { c.action_l2 = parse_f64("action_l2", v); },
       [](const C& c) { return fmt_f64(c.action_l2); }},
      {"alpha", "episode prioritization exponent",
       [](C& c, S v) { c.alpha = parse_f64("alpha", v); },
       [](const C& c) { return fmt_f64(c.alpha); }},
      {"alpha_prime", "goal prioritization exponent",
       [](C& c, S v) { c.alpha_prime = parse_f64("alpha_prime", v); },
       [](const C& c) { return fmt_f64(c.alpha_prime); }},
      {"beta", "episode IS correction beta0",
       [](C& c, S v) { c.beta = parse_f64("beta", v); },
       [](const C& c) { return fmt_f64(c.beta); }},
      {"beta_prime", "goal IS correction beta0",
       [](C& c, S v) { c.beta_prime = parse_f64("beta_prime", v); },
       [](const C& c) { return fmt_f64(c.beta_prime); }},
      {"anneal_steps", "beta anneal length (0 = total_interactions)",
       [](C& c, S v) { c.anneal_steps = parse_u64("anneal_steps", v); },
       [](const C& c) { return std::to_string(c.anneal_steps); }},
      {"strategy", "replay strategy (hgr | uniform | per)",
       [](C& c, S v) {
         try {
           c.strategy = strategy_from_string(v);
         } catch (const std::invalid_argument&) {
           bad_value("strategy", v);
         }
       },
       [](const C& c) { return std::string(strategy_name(c.strategy)); }},
      {"relabel", "goal relabeling (future | none)",
       [](C& c, S v) {
         try {
           c.relabel = relabel_from_string(v);
         } catch (const std::invalid_argument&) {
           bad_value("relabel", v);
         }
       },
       [](const C& c) { return std::string(relabel_name(c.relabel)); }},
      {"eps_prio", "priority floor epsilon",
       [](C& c, S v) { c.eps_prio = parse_f64("eps_prio", v); },
       [](const C& c) { return fmt_f64(c.eps_prio); }},
      {"sigma", "behavior Gaussian noise stddev",
       [](C& c, S v) { c.exploration.gaussian_sigma = parse_f64("sigma", v); },
       [](const C& c) { return fmt_f64(c.exploration.gaussian_sigma); }},
      {"epsilon", "behavior uniform-action probability",
       [](C& c, S v) { c.exploration.epsilon_greedy = parse_f64("epsilon", v); },
       [](const C& c) { return fmt_f64(c.exploration.epsilon_greedy); }},
      {"eval_episodes", "episodes per evaluation",
       [](C& c, S v) { c.eval_episodes = parse_size("eval_episodes", v); },
       [](const C& c) { return std::to_string(c.eval_episodes); }},
      {"eval_interval", "interactions per epoch (0 = 10*horizon)",
       [](C& c, S v) { c.eval_interval = parse_u64("eval_interval", v); },
       [](const C& c) { return std::to_string(c.eval_interval); }},
      {"early_stop_success", "stop a seed at this eval success (>1 disables)",
       [](C& c, S v) { c.early_stop_success = parse_f64("early_stop_success", v); },
       [](const C& c) { return fmt_f64(c.early_stop_success); }},
      {"out_dir", "output directory",
       [](C& c, S v) { c.out_dir = v; },
       [](const C& c) { return c.out_dir; }},
  };
  return keys;
}

void set_key(TrainConfig& config, const std::string& key,
             const std::string& value) {
  for (const ConfigKey& k : config_keys()) {
    if (k.name == key) {
      k.set(config, value);
      return;
    }
  }
  std::string msg = "unknown config key '" + key + "'; valid keys: ";
  for (std::size_t i = 0; i < config_keys().size(); ++i) {
    if (i) msg += ", ";
    msg += config_keys()[i].name;
  }
  throw std::invalid_argument(msg);
}

void apply_config_file(TrainConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(where + "expected key=value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument(where + "expected key=value");
    try {
      set_key(config, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + e.what());
    }
  }
}

void apply_env_overrides(TrainConfig& config) {
  for (const ConfigKey& k : config_keys()) {
    std::string var = "HGR_";
    for (const char ch : k.name)
      var += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* value = std::getenv(var.c_str()))
      set_key(config, k.name, value);
  }
}

void apply_overrides(TrainConfig& config,
                     const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("override must be key=value: '" + item +
                                  "'");
    set_key(config, item.substr(0, eq), item.substr(eq + 1));
  }
}

std::string config_to_string(const TrainConfig& config) {
  std::string out;
  for (const ConfigKey& k : config_keys())
    out += k.name + "=" + k.get(config) + "\n";
  return out;
}

void write_manifest(const std::string& path, const TrainConfig& config) {
  nlohmann::json j;
  j["code_version"] = kCodeVersion;
  j["start_time"] = utc_timestamp();
  j["out_dir"] = config.out_dir;
  j["seeds"] = config.seeds;
  nlohmann::json snapshot = nlohmann::json::object();
  for (const ConfigKey& k : config_keys()) snapshot[k.name] = k.get(config);
  j["config"] = snapshot;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
  out.flush();
  if (!out) throw std::runtime_error("failed writing manifest: " + path);
}

TrainConfig config_from_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest: " + path);
  nlohmann::json j;
  in >> j;
  TrainConfig config;
  for (const auto& [key, value] : j.at("config").items())
    set_key(config, key, value.get<std::string>());
  return config;
}

} // namespace hgr
