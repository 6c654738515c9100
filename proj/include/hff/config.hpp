#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hff/harness.hpp"

namespace hff {

namespace detail {

inline PadMode pad_from_string(const std::string& s) {
  if (s == "edge") return PadMode::Edge;
  if (s == "mirror") return PadMode::Mirror;
  throw std::invalid_argument("unknown pad mode: " + s);
}

}  // namespace detail

/// Applies a JSON experiment document on top of an existing spec. Absent keys
/// keep their current values, so CLI flags parsed afterwards win.
inline void apply_json(ExperimentSpec& spec, const nlohmann::json& j) {
  if (j.contains("inputs")) spec.inputs = j.at("inputs").get<std::vector<std::string>>();
  if (j.contains("out")) spec.out_dir = j.at("out").get<std::string>();
  if (j.contains("resize")) {
    const auto& r = j.at("resize");
    spec.resize_h = r.at(0).get<int>();
    spec.resize_w = r.at(1).get<int>();
  }
  if (j.contains("grayscale")) spec.grayscale = j.at("grayscale").get<bool>();
  if (j.contains("baseline")) spec.baseline = j.at("baseline").get<bool>();
  if (j.contains("workers")) spec.workers = j.at("workers").get<int>();

  if (j.contains("train")) {
    const auto& t = j.at("train");
    TrainConfig& cfg = spec.train;
    if (t.contains("stage1_epochs")) cfg.stage1_epochs = t.at("stage1_epochs").get<int>();
    if (t.contains("stage2_epochs")) cfg.stage2_epochs = t.at("stage2_epochs").get<int>();
    if (t.contains("learning_rate")) cfg.learning_rate = t.at("learning_rate").get<double>();
    if (t.contains("hidden_layers")) cfg.hidden_layers = t.at("hidden_layers").get<int>();
    if (t.contains("width")) cfg.width = t.at("width").get<int>();
    if (t.contains("backbone"))
      cfg.activation.kind = activation_from_string(t.at("backbone").get<std::string>());
    if (t.contains("omega0")) cfg.activation.omega0 = t.at("omega0").get<double>();
    if (t.contains("finer_bias_scale"))
      cfg.activation.finer_bias_scale = t.at("finer_bias_scale").get<double>();
    if (t.contains("seed")) cfg.seed = t.at("seed").get<std::uint64_t>();
    if (t.contains("eval_every")) cfg.eval_every = t.at("eval_every").get<int>();
    if (t.contains("reset_adam_between_stages"))
      cfg.reset_adam_between_stages = t.at("reset_adam_between_stages").get<bool>();
    if (t.contains("region_threshold"))
      cfg.region_threshold = t.at("region_threshold").get<double>();
    if (t.contains("mask")) {
      const auto& m = t.at("mask");
      if (m.contains("tau")) cfg.mask.tau = m.at("tau").get<double>();
      if (m.contains("alpha")) cfg.mask.alpha = m.at("alpha").get<double>();
      if (m.contains("n")) cfg.mask.n = m.at("n").get<int>();
      if (m.contains("pad"))
        cfg.mask.pad = detail::pad_from_string(m.at("pad").get<std::string>());
    }
  }

  if (j.contains("ablation")) {
    const auto& a = j.at("ablation");
    if (a.contains("tau_list")) spec.tau_list = a.at("tau_list").get<std::vector<double>>();
    if (a.contains("n_list")) spec.n_list = a.at("n_list").get<std::vector<int>>();
    if (a.contains("stage1_list"))
      spec.stage1_list = a.at("stage1_list").get<std::vector<int>>();
  }
}

inline void apply_config_file(ExperimentSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  apply_json(spec, j);
}

}  // namespace hff
