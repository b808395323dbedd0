#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hpdwav::cli {
namespace {

using nlohmann::json;

template <class T>
T get(const json& j, const char* key, const char* section) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config: ") + section + "." + key + " has the wrong type");
  }
}

void read_transform(const json& t, RunConfig& c) {
  if (!t.contains("order")) return;
  const auto& o = t.at("order");
  if (!o.is_array() || o.size() != 2 || !o[0].is_number_integer() || !o[1].is_number_integer()) {
    throw UsageError("config: transform.order must be [N1, N2]");
  }
  c.order = Order{o[0].get<int>(), o[1].get<int>()};
  try {
    validate_order(c.order);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

void read_threshold(const json& t, RunConfig& c) {
  if (t.contains("kind")) {
    const auto kind = get<std::string>(t, "kind", "threshold");
    if (kind == "tree") {
      c.threshold = ThresholdKind::Tree;
    } else if (kind == "linear") {
      c.threshold = ThresholdKind::Linear;
    } else {
      throw UsageError("config: threshold.kind must be \"tree\" or \"linear\"");
    }
  }
  if (t.contains("lambda")) {
    const auto& l = t.at("lambda");
    if (l.is_string()) {
      c.lambda = parse_lambda(l.get<std::string>());
    } else if (l.is_number() && l.get<double>() >= 0.0) {
      c.lambda = l.get<double>();
    } else {
      throw UsageError("config: threshold.lambda must be \"universal\" or a non-negative number");
    }
  }
  if (t.contains("max_scale")) c.max_scale = get<int>(t, "max_scale", "threshold");
  if (t.contains("j0")) c.linear_scale = get<int>(t, "j0", "threshold");
}

void read_noise(const json& n, RunConfig& c) {
  if (n.contains("kind")) parse_noise_kind(get<std::string>(n, "kind", "noise"), c);
  if (n.contains("sigma2")) c.noise.sigma2 = get<double>(n, "sigma2", "noise");
  if (n.contains("dof")) c.noise.dof = get<int>(n, "dof", "noise");
  if (c.noise.sigma2 < 0.0) throw UsageError("config: noise.sigma2 must be non-negative");
}

void read_spectral(const json& s, RunConfig& c) {
  auto& sp = c.spectral;
  if (s.contains("L_t")) sp.segments = get<int>(s, "L_t", "spectral");
  if (s.contains("T_t")) sp.segment_length = get<int>(s, "T_t", "spectral");
  if (s.contains("L_f")) sp.frequencies = get<int>(s, "L_f", "spectral");
  if (s.contains("n_w")) sp.nw = get<double>(s, "n_w", "spectral");
  if (s.contains("L")) sp.tapers = get<int>(s, "L", "spectral");
  if (sp.segments <= 0 || sp.segment_length <= 0 || sp.frequencies <= 0 || sp.nw <= 0.0 || sp.tapers < 0) {
    throw UsageError("config: spectral sizes must be positive");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config: top level must be an object");
  RunConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key != "seed" && !value.is_object()) throw UsageError("config: section " + key + " must be an object");
  }
  if (doc.contains("transform")) read_transform(doc.at("transform"), c);
  if (doc.contains("threshold")) read_threshold(doc.at("threshold"), c);
  if (doc.contains("noise")) read_noise(doc.at("noise"), c);
  if (doc.contains("spectral")) read_spectral(doc.at("spectral"), c);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw UsageError("config: seed must be a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  c.noise.seed = c.seed;
  c.spectral.order = c.order;
  c.spectral.lambda = c.lambda;
  if (c.max_scale) c.spectral.max_scale = c.max_scale;
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

namespace {

bool parse_int(std::string_view s, int& out) {
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

std::pair<int, int> parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  int a = 0, b = 0;
  if (comma == std::string::npos || !parse_int(std::string_view(text).substr(0, comma), a) ||
      !parse_int(std::string_view(text).substr(comma + 1), b)) {
    throw UsageError(std::string(what) + " must look like A,B: " + text);
  }
  return {a, b};
}

}  // namespace

Order parse_order(const std::string& text) {
  const auto [a, b] = parse_pair(text, "--order");
  const Order o{a, b};
  try {
    validate_order(o);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return o;
}

std::pair<int, int> parse_size(const std::string& text) {
  const auto size = parse_pair(text, "--size");
  if (size.first <= 0 || size.second <= 0) throw UsageError("--size entries must be positive");
  return size;
}

std::optional<double> parse_lambda(const std::string& text) {
  if (text == "universal") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && v >= 0.0) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("lambda must be \"universal\" or a non-negative number: " + text);
}

void parse_noise_kind(const std::string& text, RunConfig& config) {
  config.noise_enabled = true;
  if (text == "normal") {
    config.noise.kind = NoiseSpec::Kind::IntrinsicNormal;
  } else if (text == "wishart") {
    config.noise.kind = NoiseSpec::Kind::RescaledWishart;
  } else if (text == "none") {
    config.noise_enabled = false;
  } else {
    throw UsageError("noise kind must be normal, wishart or none: " + text);
  }
}

}  // namespace hpdwav::cli
