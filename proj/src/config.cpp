#include "svb/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace svb {

using nlohmann::json;

std::vector<QualityModel> fixture_quality_models() {
  // Two synthetic sequences: "meadow" degrades gracefully (easy content),
  // "arcade" needs more rate for the same quality.  Anchors span roughly
  // 27-39 dB across the rates the default system can actually deliver.
  return {
      QualityModel::from_anchors("meadow", {900.0, 1900.0, 3100.0, 4700.0, 6500.0},
                                 {31.0, 34.0, 36.2, 37.8, 39.0}, 1.0 / 300.0),
      QualityModel::from_anchors("arcade", {1000.0, 2100.0, 3400.0, 4900.0, 6700.0},
                                 {30.0, 32.8, 35.0, 36.7, 38.0}, 3.0 / 1000.0),
  };
}

SimulationSpec default_spec() {
  SimulationSpec s;
  s.system = SystemConfig{};  // 2 users, 4x(4,4) antennas, 6 RBs
  s.decoder = DecoderMode::kHybrid;
  s.decoder_cfg = DecoderConfig{};
  s.uep.margin = {0.15, 0.13, 0.13, 0.13, 0.10};
  s.uep.target_bler = {0.001, 0.01, 0.01, 0.01, 0.1};
  s.models = fixture_quality_models();
  s.snr_sweep_db = {-5.0, -2.0, 1.0, 4.0, 7.0, 10.0, 13.0, 16.0};
  s.trials = 200;
  s.seed = 1;
  s.bler_mode = BlerMode::kBernoulli;
  return s;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(std::string("bad value for '") + key + "': " + e.what());
  }
}

DecoderMode parse_decoder(const std::string& s) {
  if (s == "mmse") return DecoderMode::kMmse;
  if (s == "sgd") return DecoderMode::kSgd;
  if (s == "hybrid") return DecoderMode::kHybrid;
  fail("decoder must be one of mmse|sgd|hybrid");
}

BlerMode parse_bler(const std::string& s) {
  if (s == "outage") return BlerMode::kOutageOnly;
  if (s == "bernoulli") return BlerMode::kBernoulli;
  fail("bler_mode must be one of outage|bernoulli");
}

QualityModel parse_model(const json& j) {
  check_keys(j, "models[]", {"name", "cum_rate_bits", "quality_db", "base_slope_db_per_bit"});
  std::string name = "model";
  std::vector<double> v, q;
  double slope0 = 0.0;
  read(j, "name", name);
  read(j, "cum_rate_bits", v);
  read(j, "quality_db", q);
  read(j, "base_slope_db_per_bit", slope0);
  try {
    return QualityModel::from_anchors(std::move(name), std::move(v), std::move(q), slope0);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

}  // namespace

SimulationSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }

  SimulationSpec s = default_spec();
  check_keys(j, "spec",
             {"system", "decoder", "decoder_cfg", "uep", "models", "snr_sweep_db", "trials",
              "seed", "bler_mode"});
  if (j.contains("system")) {
    const json& sys = j.at("system");
    check_keys(sys, "system",
               {"num_users", "num_tx_antennas", "rx_antennas", "num_rbs", "subcarriers_per_rb",
                "channel_uses_per_rb", "snr_db"});
    read(sys, "num_users", s.system.num_users);
    read(sys, "num_tx_antennas", s.system.num_tx_antennas);
    read(sys, "rx_antennas", s.system.rx_antennas);
    read(sys, "num_rbs", s.system.num_rbs);
    read(sys, "subcarriers_per_rb", s.system.subcarriers_per_rb);
    read(sys, "channel_uses_per_rb", s.system.channel_uses_per_rb);
    read(sys, "snr_db", s.system.snr_db);
  }
  if (j.contains("decoder")) {
    std::string d;
    read(j, "decoder", d);
    s.decoder = parse_decoder(d);
  }
  if (j.contains("decoder_cfg")) {
    const json& dc = j.at("decoder_cfg");
    check_keys(dc, "decoder_cfg", {"max_group_size", "hybrid_threshold"});
    read(dc, "max_group_size", s.decoder_cfg.max_group_size);
    read(dc, "hybrid_threshold", s.decoder_cfg.hybrid_threshold);
  }
  if (j.contains("uep")) {
    const json& u = j.at("uep");
    check_keys(u, "uep", {"margin", "target_bler"});
    read(u, "margin", s.uep.margin);
    read(u, "target_bler", s.uep.target_bler);
  }
  if (j.contains("models")) {
    s.models.clear();
    for (const json& m : j.at("models")) s.models.push_back(parse_model(m));
  }
  read(j, "snr_sweep_db", s.snr_sweep_db);
  read(j, "trials", s.trials);
  read(j, "seed", s.seed);
  if (j.contains("bler_mode")) {
    std::string b;
    read(j, "bler_mode", b);
    s.bler_mode = parse_bler(b);
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return s;
}

SimulationSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string spec_to_json(const SimulationSpec& s) {
  json models = json::array();
  for (const QualityModel& m : s.models)
    models.push_back({{"name", m.name},
                      {"cum_rate_bits", m.cum_rate},
                      {"quality_db", m.quality_db},
                      {"base_slope_db_per_bit", m.slope.empty() ? 0.0 : m.slope[0]}});
  json j = {
      {"system",
       {{"num_users", s.system.num_users},
        {"num_tx_antennas", s.system.num_tx_antennas},
        {"rx_antennas", s.system.rx_antennas},
        {"num_rbs", s.system.num_rbs},
        {"subcarriers_per_rb", s.system.subcarriers_per_rb},
        {"channel_uses_per_rb", s.system.channel_uses_per_rb},
        {"snr_db", s.system.snr_db}}},
      {"decoder", decoder_mode_name(s.decoder)},
      {"decoder_cfg",
       {{"max_group_size", s.decoder_cfg.max_group_size},
        {"hybrid_threshold", s.decoder_cfg.hybrid_threshold}}},
      {"uep", {{"margin", s.uep.margin}, {"target_bler", s.uep.target_bler}}},
      {"models", models},
      {"snr_sweep_db", s.snr_sweep_db},
      {"trials", s.trials},
      {"seed", s.seed},
      {"bler_mode", s.bler_mode == BlerMode::kBernoulli ? "bernoulli" : "outage"},
  };
  return j.dump(2);
}

}  // namespace svb
