#include "cmetric/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cmetric/error.hpp"
#include "json_support.hpp"

namespace cmetric {

void Config::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::config, what); };
  if (!std::isfinite(mu) || mu <= 0.0) fail("mu must be positive and finite");
  if (window < 3 || window % 2 == 0) fail("window must be an odd integer >= 3");
  if (poly_degree < 1) fail("poly_degree must be >= 1");
  if (window < poly_degree + 2) fail("window must be >= poly_degree + 2");
  if (epsilon < 1) fail("epsilon must be >= 1");
  if (!std::isfinite(frame_rate_hz) || frame_rate_hz <= 0.0) fail("frame_rate_hz must be positive and finite");
  if (n_max < 1) fail("n_max must be >= 1");
  const auto& t = thresholds;
  for (double v : {t.overspeed, t.overtake, t.sharp_tol, t.zero_tol})
    if (!std::isfinite(v) || v < 0.0) fail("thresholds must be non-negative and finite");
  if (t.min_extrema < 1) fail("min_extrema must be >= 1");
  if (range && range->first > range->second) fail("range must satisfy first <= last");
}

namespace detail {

nlohmann::ordered_json config_json(const Config& c) {
  nlohmann::ordered_json j;
  j["mu"] = c.mu;
  j["window"] = c.window;
  j["poly_degree"] = c.poly_degree;
  j["epsilon"] = c.epsilon;
  j["frame_rate_hz"] = c.frame_rate_hz;
  j["n_max"] = c.n_max;
  nlohmann::ordered_json t;
  t["overspeed"] = c.thresholds.overspeed;
  t["overtake"] = c.thresholds.overtake;
  t["sharp_tol"] = c.thresholds.sharp_tol;
  t["zero_tol"] = c.thresholds.zero_tol;
  t["min_extrema"] = c.thresholds.min_extrema;
  j["thresholds"] = std::move(t);
  if (c.range) {
    j["range"] = nlohmann::ordered_json::array({c.range->first, c.range->second});
  } else {
    j["range"] = nullptr;
  }
  return j;
}

namespace {

double number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw Error(ErrorKind::config, "'" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  throw Error(ErrorKind::config, "'" + key + "' must be an integer");
}

void apply_threshold(Thresholds& t, const std::string& key, const nlohmann::json& v) {
  if (key == "overspeed" || key == "threshold_overspeed") t.overspeed = number(v, key);
  else if (key == "overtake" || key == "threshold_overtake") t.overtake = number(v, key);
  else if (key == "sharp_tol") t.sharp_tol = number(v, key);
  else if (key == "zero_tol") t.zero_tol = number(v, key);
  else if (key == "min_extrema") t.min_extrema = static_cast<int>(integer(v, key));
  else throw Error(ErrorKind::config, "unknown threshold '" + key + "'");
}

}  // namespace

Config apply_config_json(const nlohmann::json& doc, Config c) {
  if (!doc.is_object()) throw Error(ErrorKind::config, "configuration must be an object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "mu") c.mu = number(v, key);
    else if (key == "window") c.window = static_cast<int>(integer(v, key));
    else if (key == "poly_degree") c.poly_degree = static_cast<int>(integer(v, key));
    else if (key == "epsilon") c.epsilon = static_cast<int>(integer(v, key));
    else if (key == "frame_rate_hz" || key == "fps") c.frame_rate_hz = number(v, key);
    else if (key == "n_max") {
      const auto n = integer(v, key);
      if (n < 1) throw Error(ErrorKind::config, "n_max must be >= 1");
      c.n_max = static_cast<std::size_t>(n);
    } else if (key == "range") {
      if (v.is_null()) {
        c.range.reset();
      } else if (v.is_array() && v.size() == 2) {
        c.range = std::make_pair(integer(v[0], key), integer(v[1], key));
      } else {
        throw Error(ErrorKind::config, "'range' must be [first, last] or null");
      }
    } else if (key == "thresholds") {
      if (!v.is_object()) throw Error(ErrorKind::config, "'thresholds' must be a table");
      for (const auto& [tk, tv] : v.items()) apply_threshold(c.thresholds, tk, tv);
    } else {
      apply_threshold(c.thresholds, key, v);
    }
  }
  return c;
}

nlohmann::ordered_json agent_json(const AgentId& id) {
  if (id.is_numeric()) return std::stoull(id.str());
  return id.str();
}

AgentId agent_from(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return AgentId(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return AgentId(static_cast<std::uint64_t>(j.get<std::int64_t>()));
  if (j.is_string() && !j.get_ref<const std::string&>().empty()) return AgentId(j.get<std::string>());
  throw Error(ErrorKind::parse, "agent_id must be a non-negative integer or a non-empty string");
}

}  // namespace detail

Config config_from_json(std::string_view text, Config base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  return detail::apply_config_json(doc, base);
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Scalars are integers, floats or booleans; arrays hold scalars.
nlohmann::json toml_value(std::string_view text, std::size_t line) {
  text = strip(text);
  if (text.empty()) throw Error(ErrorKind::config, "missing value", line);
  if (text.front() == '[') {
    if (text.back() != ']') throw Error(ErrorKind::config, "unterminated array", line);
    nlohmann::json arr = nlohmann::json::array();
    std::string_view body = strip(text.substr(1, text.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      arr.push_back(toml_value(body.substr(0, comma), line));
      if (comma == std::string_view::npos) break;
      body = strip(body.substr(comma + 1));
    }
    return arr;
  }
  if (text == "true") return true;
  if (text == "false") return false;
  std::string cleaned;
  for (char ch : text)
    if (ch != '_') cleaned += ch;
  std::int64_t i = 0;
  auto ri = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), i);
  if (ri.ec == std::errc{} && ri.ptr == cleaned.data() + cleaned.size()) return i;
  double d = 0.0;
  auto rd = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), d);
  if (rd.ec == std::errc{} && rd.ptr == cleaned.data() + cleaned.size()) return d;
  throw Error(ErrorKind::config, "unsupported value '" + std::string(text) + "'", line);
}

}  // namespace

Config config_from_toml(std::string_view text, Config base) {
  nlohmann::json doc = nlohmann::json::object();
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::config, "malformed table header", line_no);
      section = std::string(strip(line.substr(1, line.size() - 2)));
      if (section != "thresholds") throw Error(ErrorKind::config, "unknown table [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::config, "expected key = value", line_no);
    const std::string key(strip(line.substr(0, eq)));
    auto value = toml_value(line.substr(eq + 1), line_no);
    if (section.empty()) doc[key] = std::move(value);
    else doc[section][key] = std::move(value);
  }
  return detail::apply_config_json(doc, base);
}

Config load_config_file(const std::string& path, Config base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  auto ends_with = [&](const char* suffix) {
    const std::string s(suffix);
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".toml")) return config_from_toml(text, base);
  if (ends_with(".json")) return config_from_json(text, base);
  throw Error(ErrorKind::config, "config file must end in .json or .toml");
}

std::string config_to_json(const Config& config) { return detail::config_json(config).dump(); }

}  // namespace cmetric
