#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iotmac/experiment.hpp"

namespace iotmac {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Fixed-width-free but byte-stable double formatting.
std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values, char sep,
                 std::string (*fmt)(T)) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(sep);
    out += fmt(values[i]);
  }
  return out;
}

std::string fmt_int(int v) { return std::to_string(v); }

long long parse_int(const std::string& value, const std::string& where) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError(where + ": expected an integer, got '" + value + "'");
  return v;
}

double parse_double(const std::string& value, const std::string& where) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError(where + ": expected a number, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1" || value == "on" || value == "yes")
    return true;
  if (value == "false" || value == "0" || value == "off" || value == "no")
    return false;
  throw ConfigError(where + ": expected a boolean, got '" + value + "'");
}

// "(20,6) (15,7)" or "(20,6),(15,7)".
std::vector<std::pair<int, int>> parse_arms(const std::string& value,
                                            const std::string& where) {
  std::vector<std::pair<int, int>> arms;
  std::size_t pos = 0;
  while (pos < value.size()) {
    const char c = value[pos];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++pos;
      continue;
    }
    if (c != '(') throw ConfigError(where + ": expected '(' in arm list");
    const std::size_t close = value.find(')', pos);
    if (close == std::string::npos)
      throw ConfigError(where + ": unterminated arm tuple");
    const std::string body = value.substr(pos + 1, close - pos - 1);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos)
      throw ConfigError(where + ": arm tuple needs two integers");
    arms.emplace_back(
        static_cast<int>(parse_int(trim(body.substr(0, comma)), where)),
        static_cast<int>(parse_int(trim(body.substr(comma + 1)), where)));
    pos = close + 1;
  }
  if (arms.empty()) throw ConfigError(where + ": arm list is empty");
  return arms;
}

std::vector<double> parse_lambdas(const std::string& value,
                                  const std::string& where) {
  std::vector<double> out;
  std::string normalized = value;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::string token;
  while (in >> token) out.push_back(parse_double(token, where));
  return out;
}

LoadModel parse_load(const std::string& value, const LoadModel& base,
                     const std::string& where) {
  const std::size_t colon = value.find(':');
  const std::string kind = trim(value.substr(0, colon));
  if (colon == std::string::npos)
    throw ConfigError(where + ": load must look like 'deterministic:3' or 'geometric:1.25'");
  const std::string param = trim(value.substr(colon + 1));
  if (kind == "deterministic" || kind == "det")
    return LoadModel::deterministic(
        static_cast<int>(parse_int(param, where)), base.slack_min, base.slack_max);
  if (kind == "geometric" || kind == "geo")
    return LoadModel::geometric(parse_double(param, where), base.slack_min,
                                base.slack_max);
  throw ConfigError(where + ": unknown load kind '" + kind + "'");
}

std::string stem_of(const std::string& out) {
  if (out.size() > 4 && out.substr(out.size() - 4) == ".csv")
    return out.substr(0, out.size() - 4);
  return out;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::adaptive: return "adaptive";
    case Mode::oracle: return "oracle";
    case Mode::csma: return "csma";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "adaptive") return Mode::adaptive;
  if (s == "oracle") return Mode::oracle;
  if (s == "csma") return Mode::csma;
  throw ConfigError("unknown mode '" + s + "' (expected adaptive, oracle or csma)");
}

FrameConfig ExperimentConfig::arm_config(std::size_t i) const {
  const auto& [nc, nt] = arms.at(i);
  return FrameConfig{channels, nc, nt, slot_length};
}

int ExperimentConfig::max_tx_slots() const {
  int best = 0;
  for (const auto& [nc, nt] : arms) best = std::max(best, nt);
  return best;
}

double ExperimentConfig::capacity_bound() const {
  return static_cast<double>(channels) * max_tx_slots() /
         (static_cast<double>(frame_length) * load.mean_load());
}

std::vector<double> ExperimentConfig::lambda_grid() const {
  if (!lambdas.empty()) return lambdas;
  const double cap = capacity_bound();
  const double lo = cap / 10.0;
  const double hi = 8.0 * cap;  // deep enough overload to expose csma collapse
  constexpr int kPoints = 12;
  std::vector<double> grid;
  for (int i = 0; i < kPoints; ++i)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1)));
  return grid;
}

void ExperimentConfig::validate() const {
  try {
    load.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (channels < 1) throw ConfigError("channels must be >= 1");
  if (slot_length < 2) throw ConfigError("slot_length must be an integer > 1");
  if (frame_length < slot_length + 1)
    throw ConfigError("frame_length must leave room for a contention slot");
  if (arms.empty()) throw ConfigError("arm set must not be empty");
  for (const auto& [nc, nt] : arms) {
    if (nc < 1 || nt < 1)
      throw ConfigError("arm (" + std::to_string(nc) + "," + std::to_string(nt) +
                        ") needs positive slot counts");
    if (nc + slot_length * nt != frame_length)
      throw ConfigError(
          "arm (" + std::to_string(nc) + "," + std::to_string(nt) +
          ") violates N_C + k*N_T = T (" + std::to_string(nc) + " + " +
          std::to_string(slot_length) + "*" + std::to_string(nt) + " = " +
          std::to_string(nc + slot_length * nt) + " != " +
          std::to_string(frame_length) + ")");
  }
  if (frames_per_play < 1) throw ConfigError("frames_per_play must be >= 1");
  if (frames < 1) throw ConfigError("frames must be >= 1");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw ConfigError("lambda grid must be strictly positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
      throw ConfigError("lambda grid must be strictly increasing");
  }
  if (out.empty()) throw ConfigError("out path must not be empty");
}

std::string ExperimentConfig::summary_path() const {
  return stem_of(out) + ".summary.csv";
}

std::string ExperimentConfig::sidecar_path() const {
  return stem_of(out) + ".config.json";
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");

    if (key == "mode") {
      config.mode = mode_from_string(value);
    } else if (key == "channels") {
      config.channels = static_cast<int>(parse_int(value, where));
    } else if (key == "frame_length") {
      config.frame_length = static_cast<int>(parse_int(value, where));
    } else if (key == "slot_length") {
      config.slot_length = static_cast<int>(parse_int(value, where));
    } else if (key == "arms") {
      config.arms = parse_arms(value, where);
    } else if (key == "frames_per_play") {
      config.frames_per_play = static_cast<int>(parse_int(value, where));
    } else if (key == "load") {
      config.load = parse_load(value, config.load, where);
    } else if (key == "slack_min") {
      config.load.slack_min = static_cast<int>(parse_int(value, where));
    } else if (key == "slack_max") {
      config.load.slack_max = static_cast<int>(parse_int(value, where));
    } else if (key == "lambdas") {
      config.lambdas = parse_lambdas(value, where);
    } else if (key == "frames") {
      config.frames = static_cast<int>(parse_int(value, where));
    } else if (key == "replications") {
      config.replications = static_cast<int>(parse_int(value, where));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(value, where));
    } else if (key == "delta") {
      config.delta = parse_double(value, where);
    } else if (key == "retry_until_expiry") {
      config.retry_until_expiry = parse_bool(value, where);
    } else if (key == "freeze_backoff") {
      config.freeze_backoff = parse_bool(value, where);
    } else if (key == "out") {
      config.out = value;
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string results_csv(const std::vector<RunResult>& rows) {
  std::string out =
      "mode,lambda,replication,throughput,energy_per_success,accepted,"
      "completed,failed,final_p_by_arm,arm_play_counts\n";
  for (const RunResult& r : rows) {
    out += to_string(r.mode);
    out += ',';
    out += fmt_double(r.lambda);
    out += ',';
    out += std::to_string(r.replication);
    out += ',';
    out += fmt_double(throughput(r.metrics));
    out += ',';
    out += fmt_double(energy_per_success(r.metrics));
    out += ',';
    out += std::to_string(r.accepted);
    out += ',';
    out += std::to_string(r.completed);
    out += ',';
    out += std::to_string(r.failed);
    out += ',';
    out += join<double>(r.final_p, '|', fmt_double);
    out += ',';
    out += join<int>(r.play_counts, '|', fmt_int);
    out += '\n';
  }
  return out;
}

namespace {

struct Summary {
  Mode mode;
  double lambda;
  int n = 0;
  double tp_mean = 0, tp_stderr = 0, en_mean = 0, en_stderr = 0;
};

void mean_stderr(const std::vector<double>& xs, double& mean, double& stderr_) {
  mean = 0;
  stderr_ = 0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (!std::isfinite(mean)) {
    stderr_ = std::numeric_limits<double>::infinity();
    return;
  }
  if (xs.size() < 2) return;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  stderr_ = std::sqrt(ss / (static_cast<double>(xs.size()) - 1)) /
            std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace

std::string summary_csv(const std::vector<RunResult>& rows) {
  std::vector<Summary> groups;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    std::vector<double> tp, en;
    while (j < rows.size() && rows[j].mode == rows[i].mode &&
           rows[j].lambda == rows[i].lambda) {
      tp.push_back(throughput(rows[j].metrics));
      en.push_back(energy_per_success(rows[j].metrics));
      ++j;
    }
    Summary s;
    s.mode = rows[i].mode;
    s.lambda = rows[i].lambda;
    s.n = static_cast<int>(j - i);
    mean_stderr(tp, s.tp_mean, s.tp_stderr);
    mean_stderr(en, s.en_mean, s.en_stderr);
    groups.push_back(s);
    i = j;
  }

  std::string out =
      "mode,lambda,replications,throughput_mean,throughput_stderr,"
      "energy_per_success_mean,energy_per_success_stderr\n";
  for (const Summary& s : groups) {
    out += to_string(s.mode);
    out += ',';
    out += fmt_double(s.lambda);
    out += ',';
    out += std::to_string(s.n);
    out += ',';
    out += fmt_double(s.tp_mean);
    out += ',';
    out += fmt_double(s.tp_stderr);
    out += ',';
    out += fmt_double(s.en_mean);
    out += ',';
    out += fmt_double(s.en_stderr);
    out += '\n';
  }
  return out;
}

std::string config_json(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(config.mode);
  j["channels"] = config.channels;
  j["frame_length"] = config.frame_length;
  j["slot_length"] = config.slot_length;
  j["arms"] = config.arms;
  j["frames_per_play"] = config.frames_per_play;
  j["load"] = {
      {"kind", config.load.kind == LoadModel::Kind::deterministic
                   ? "deterministic"
                   : "geometric"},
      {"value", config.load.value},
      {"slack_min", config.load.slack_min},
      {"slack_max", config.load.slack_max},
  };
  j["lambda_grid"] = config.lambda_grid();
  j["frames"] = config.frames;
  j["replications"] = config.replications;
  j["seed"] = config.seed;
  j["delta"] = config.delta;
  j["retry_until_expiry"] = config.retry_until_expiry;
  j["freeze_backoff"] = config.freeze_backoff;
  j["capacity_bound"] = config.capacity_bound();
  j["outputs"] = {{"results", config.out},
                  {"summary", config.summary_path()},
                  {"config", config.sidecar_path()}};
  return j.dump(2) + "\n";
}

std::vector<std::string> write_outputs(const ExperimentConfig& config,
                                       const std::vector<RunResult>& rows) {
  const std::vector<std::pair<std::string, std::string>> files = {
      {config.out, results_csv(rows)},
      {config.summary_path(), summary_csv(rows)},
      {config.sidecar_path(), config_json(config)},
  };
  std::vector<std::string> paths;
  for (const auto& [path, content] : files) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + path + "'");
    f << content;
    if (!f) throw ConfigError("failed while writing '" + path + "'");
    paths.push_back(path);
  }
  return paths;
}

}  // namespace iotmac
