#include "doctest.h"

#include "hgr/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

using namespace hgr;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

// Every key set to a non-default value; the member checks below prove the
// registry reaches every TrainConfig field.
TrainConfig full_config() {
  TrainConfig c;
  const std::vector<std::pair<std::string, std::string>> kv = {
      {"env_id", "point-push"},
      {"seeds", "4,5,6"},
      {"total_interactions", "12345"},
      {"horizon", "7"},
      {"tolerance", "0.03"},
      {"dt", "0.05"},
      {"v_max", "0.8"},
      {"contact_radius", "0.25"},
      {"buffer_size", "7777"},
      {"batch_size", "32"},
      {"update_frequency", "2"},
      {"gradient_steps", "10"},
      {"hidden", "12,13"},
      {"lr_actor", "0.002"},
      {"lr_critic", "0.003"},
      {"gamma", "0.9"},
      {"polyak", "0.92"},
      {"action_l2", "0.5"},
      {"alpha", "0.7"},
      {"alpha_prime", "0.8"},
      {"beta", "0.5"},
      {"beta_prime", "0.55"},
      {"anneal_steps", "4242"},
      {"strategy", "per"},
      {"relabel", "none"},
      {"eps_prio", "1e-05"},
      {"sigma", "0.1"},
      {"epsilon", "0.25"},
      {"eval_episodes", "20"},
      {"eval_interval", "99"},
      {"early_stop_success", "0.9"},
      {"out_dir", "runs/full"},
  };
  for (const auto& [key, value] : kv) set_key(c, key, value);
  return c;
}

} // namespace

TEST_CASE("registry: every TrainConfig field is settable and read back") {
  const TrainConfig c = full_config();
  CHECK(c.env_id == "point-push");
  CHECK(c.seeds == std::vector<std::uint64_t>{4, 5, 6});
  CHECK(c.total_interactions == 12345);
  CHECK(c.env.horizon == 7);
  CHECK(c.env.tolerance == 0.03);
  CHECK(c.env.dt == 0.05);
  CHECK(c.env.v_max == 0.8);
  CHECK(c.env.contact_radius == 0.25);
  CHECK(c.buffer_size == 7777);
  CHECK(c.batch_size == 32);
  CHECK(c.update_frequency == 2);
  CHECK(c.gradient_steps == 10);
  CHECK(c.hidden == std::vector<std::size_t>{12, 13});
  CHECK(c.lr_actor == 0.002);
  CHECK(c.lr_critic == 0.003);
  CHECK(c.gamma == 0.9);
  CHECK(c.polyak == 0.92);
  CHECK(c.action_l2 == 0.5);
  CHECK(c.alpha == 0.7);
  CHECK(c.alpha_prime == 0.8);
  CHECK(c.beta == 0.5);
  CHECK(c.beta_prime == 0.55);
  CHECK(c.anneal_steps == 4242);
  CHECK(c.strategy == Strategy::per);
  CHECK(c.relabel == Relabel::none);
  CHECK(c.eps_prio == 1e-05);
  CHECK(c.exploration.gaussian_sigma == 0.1);
  CHECK(c.exploration.epsilon_greedy == 0.25);
  CHECK(c.eval_episodes == 20);
  CHECK(c.eval_interval == 99);
  CHECK(c.early_stop_success == 0.9);
  CHECK(c.out_dir == "runs/full");

  // getters reproduce the exact input strings used above
  for (const ConfigKey& k : config_keys()) {
    if (k.name == "strategy") CHECK(k.get(c) == "per");
    if (k.name == "eps_prio") CHECK(k.get(c) == "1e-05");
    if (k.name == "hidden") CHECK(k.get(c) == "12,13");
  }
}

TEST_CASE("config_to_string round-trips bit-exactly, awkward doubles included") {
  TrainConfig a;
  a.gamma = 1.0 / 3.0;
  a.lr_actor = 0.1 + 0.2; // 0.30000000000000004
  a.eps_prio = 1e-300;
  a.early_stop_success = 0.1234567890123456789;
  a.seeds = {18446744073709551615ull, 1};
  a.hidden = {1};

  TrainConfig b;
  std::istringstream lines(config_to_string(a));
  std::string line;
  while (std::getline(lines, line)) {
    const std::size_t eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    set_key(b, line.substr(0, eq), line.substr(eq + 1));
  }
  CHECK(b.gamma == a.gamma);
  CHECK(b.lr_actor == a.lr_actor);
  CHECK(b.eps_prio == a.eps_prio);
  CHECK(b.early_stop_success == a.early_stop_success);
  CHECK(b.seeds == a.seeds);
  CHECK(config_to_string(b) == config_to_string(a));
}

TEST_CASE("set_key: unknown keys list the alternatives, bad values name the key") {
  TrainConfig c;
  try {
    set_key(c, "learning_rate", "0.1");
    FAIL_CHECK("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("unknown config key 'learning_rate'") != std::string::npos);
    CHECK(msg.find("valid keys") != std::string::npos);
    CHECK(msg.find("alpha_prime") != std::string::npos);
    CHECK(msg.find("out_dir") != std::string::npos);
  }

  auto expect_bad_value = [&c](const std::string& key, const std::string& v) {
    try {
      set_key(c, key, v);
      FAIL_CHECK("expected rejection for ", key, "=", v);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("'" + key + "'") != std::string::npos);
    }
  };
  expect_bad_value("gamma", "0.5x");
  expect_bad_value("gamma", "");
  expect_bad_value("buffer_size", "-2");
  expect_bad_value("buffer_size", "3.5");
  expect_bad_value("seeds", "");
  expect_bad_value("seeds", "1,a");
  expect_bad_value("hidden", "64,,64");
  expect_bad_value("strategy", "prioritized");
  expect_bad_value("relabel", "final");
}

TEST_CASE("apply_config_file: comments, whitespace, and located errors") {
  const fs::path good = temp_file("hgr_cfg_good.cfg",
                                  "# reach ablation\n"
                                  "alpha = 0.25\n"
                                  "  beta=0.5   # inline comment\n"
                                  "\n"
                                  "strategy = per\n"
                                  "out_dir = runs/x\n");
  TrainConfig c;
  apply_config_file(c, good.string());
  CHECK(c.alpha == 0.25);
  CHECK(c.beta == 0.5);
  CHECK(c.strategy == Strategy::per);
  CHECK(c.out_dir == "runs/x");

  const fs::path bad = temp_file("hgr_cfg_bad.cfg", "alpha = 0.25\nbeta 0.5\n");
  TrainConfig d;
  try {
    apply_config_file(d, bad.string());
    FAIL_CHECK("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":2:") != std::string::npos);
    CHECK(msg.find("expected key=value") != std::string::npos);
  }

  const fs::path unknown =
      temp_file("hgr_cfg_unknown.cfg", "alpha=0.1\nlearning_rate=1\n");
  TrainConfig e;
  try {
    apply_config_file(e, unknown.string());
    FAIL_CHECK("expected rejection");
  } catch (const std::invalid_argument& ex) {
    CHECK(std::string(ex.what()).find(":2:") != std::string::npos);
    CHECK(std::string(ex.what()).find("valid keys") != std::string::npos);
  }

  CHECK_THROWS_AS(apply_config_file(e, "/nonexistent/hgr.cfg"),
                  std::invalid_argument);
  fs::remove(good);
  fs::remove(bad);
  fs::remove(unknown);
}

TEST_CASE("overrides: --set strings and HGR_ env vars, file < env < set") {
  TrainConfig c;
  apply_overrides(c, {"gamma=0.7", "hidden=3,4", "gamma=0.8"}); // last wins
  CHECK(c.gamma == 0.8);
  CHECK(c.hidden == std::vector<std::size_t>{3, 4});
  CHECK_THROWS_AS(apply_overrides(c, {"gamma"}), std::invalid_argument);
  CHECK_THROWS_AS(apply_overrides(c, {"=0.4"}), std::invalid_argument);

  const fs::path file = temp_file("hgr_cfg_prec.cfg", "gamma=0.7\nbeta=0.3\n");
  REQUIRE(setenv("HGR_GAMMA", "0.5", 1) == 0);
  REQUIRE(setenv("HGR_V_MAX", "0.75", 1) == 0);
  TrainConfig d;
  apply_config_file(d, file.string());
  apply_env_overrides(d);
  apply_overrides(d, {"gamma=0.9"});
  CHECK(d.gamma == 0.9);       // --set beats env beats file
  CHECK(d.env.v_max == 0.75);  // env var, underscore key
  CHECK(d.beta == 0.3);        // file value untouched by either
  unsetenv("HGR_GAMMA");
  unsetenv("HGR_V_MAX");
  fs::remove(file);

  REQUIRE(setenv("HGR_STRATEGY", "bogus", 1) == 0);
  TrainConfig e;
  CHECK_THROWS_AS(apply_env_overrides(e), std::invalid_argument);
  unsetenv("HGR_STRATEGY");
}

TEST_CASE("manifest: snapshot reproduces the effective config exactly") {
  const TrainConfig config = full_config();
  const fs::path path = fs::temp_directory_path() / "hgr_manifest.json";
  write_manifest(path.string(), config);

  std::ifstream in(path);
  REQUIRE(in);
  nlohmann::json j;
  in >> j;
  CHECK(j.at("code_version").get<std::string>() == kCodeVersion);
  CHECK(j.at("out_dir").get<std::string>() == "runs/full");
  CHECK(j.at("seeds").get<std::vector<std::uint64_t>>() ==
        std::vector<std::uint64_t>{4, 5, 6});
  const std::string stamp = j.at("start_time").get<std::string>();
  CHECK(stamp.size() == 20);
  CHECK(stamp[10] == 'T');
  CHECK(stamp.back() == 'Z');
  CHECK(j.at("config").size() == config_keys().size());

  const TrainConfig reloaded = config_from_manifest(path.string());
  CHECK(config_to_string(reloaded) == config_to_string(config));

  CHECK_THROWS_AS(config_from_manifest("/nonexistent/manifest.json"),
                  std::runtime_error);
  fs::remove(path);
}
