#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hgr/trainer.hpp"

namespace hgr {

inline constexpr const char* kCodeVersion = "0.1.0";

// One settable TrainConfig field: flat config files, --set overrides, env
// vars, and the manifest snapshot all go through the same registry, so a
// field is either reachable everywhere or nowhere.
struct ConfigKey {
  std::string name;
  std::string description;
  std::function<void(TrainConfig&, const std::string&)> set;
  std::function<std::string(const TrainConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();

// Unknown keys throw std::invalid_argument listing every valid key; bad
// values throw naming the key.
void set_key(TrainConfig& config, const std::string& key,
             const std::string& value);

// key=value lines; blank lines and '#' comments (inline too) are ignored.
// Errors are prefixed with path:line.
void apply_config_file(TrainConfig& config, const std::string& path);

// HGR_<UPPERCASED KEY> environment variables, e.g. HGR_ALPHA_PRIME.
void apply_env_overrides(TrainConfig& config);

// "key=value" strings, applied in order (last write wins).
void apply_overrides(TrainConfig& config,
                     const std::vector<std::string>& overrides);

// Every key as "name=value\n", in registry order. Feeding the result back
// through set_key reproduces the config exactly (doubles are shortest
// round-trip formatted).
std::string config_to_string(const TrainConfig& config);

// JSON run manifest: config snapshot, code version, seed list, start time,
// output directory. Written before training starts, never rewritten.
void write_manifest(const std::string& path, const TrainConfig& config);
TrainConfig config_from_manifest(const std::string& path);

} // namespace hgr
