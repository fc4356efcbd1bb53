#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wpg/error.hpp"

namespace wpg::cli {
namespace {

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::kParameter, "invalid value for " + std::string(key) + ": '" + s + "'");
  }
  return v;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view text) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kParameter, "invalid integer for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw Error(ErrorKind::kParameter, "invalid boolean for " + std::string(key) + ": '" + std::string(text) + "'");
}

// Shortest text that parses back to the same double.
std::string show(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename Get>
Field real(Get member) {
  return {[member](RunConfig& c, std::string_view v) { member(c) = to_double("value", v); },
          [member](const RunConfig& c) { return show(member(c)); }};
}

template <typename Int, typename Get>
Field integer(Get member) {
  return {[member](RunConfig& c, std::string_view v) { member(c) = to_int<Int>("value", v); },
          [member](const RunConfig& c) { return std::to_string(member(c)); }};
}

template <typename Get>
Field boolean(Get member) {
  return {[member](RunConfig& c, std::string_view v) { member(c) = to_bool("value", v); },
          [member](const RunConfig& c) { return std::string(member(c) ? "true" : "false"); }};
}

// Generic accessors serve both the const getter and the setter.
#define WPG_FIELD(kind, expr) kind([](auto& c) -> auto& { return c.expr; })
#define WPG_INT_FIELD(type, expr) integer<type>([](auto& c) -> auto& { return c.expr; })

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"alpha", WPG_FIELD(real, tracker.graph.alpha)},
      {"beta", WPG_FIELD(real, tracker.graph.beta)},
      {"gamma", WPG_FIELD(real, tracker.graph.gamma)},
      {"lambda1", WPG_FIELD(real, tracker.graph.lambda1)},
      {"lambda2", WPG_FIELD(real, tracker.graph.lambda2)},
      {"lambda3", WPG_FIELD(real, tracker.graph.lambda3)},
      {"lambda4", WPG_FIELD(real, tracker.graph.lambda4)},
      {"neighbors", WPG_INT_FIELD(int, tracker.graph.neighbors)},
      {"mu0", WPG_FIELD(real, tracker.graph.mu0)},
      {"mu_max", WPG_FIELD(real, tracker.graph.mu_max)},
      {"rho", WPG_FIELD(real, tracker.graph.rho)},
      {"tol", WPG_FIELD(real, tracker.graph.tol)},
      {"max_iter", WPG_INT_FIELD(int, tracker.graph.max_iter)},
      {"unscaled_q", WPG_FIELD(boolean, tracker.graph.unscaled_q)},
      {"omega", WPG_FIELD(real, tracker.omega)},
      {"theta", WPG_FIELD(real, tracker.theta)},
      {"sigma", WPG_FIELD(real, tracker.sigma)},
      {"window_scale", WPG_FIELD(real, tracker.window_scale)},
      {"abrupt_window_scale", WPG_FIELD(real, tracker.abrupt_window_scale)},
      {"abrupt_motion", WPG_FIELD(real, tracker.abrupt_motion)},
      {"stride", WPG_INT_FIELD(int, tracker.stride)},
      {"polar_radii", WPG_INT_FIELD(int, tracker.polar_radii)},
      {"polar_angles", WPG_INT_FIELD(int, tracker.polar_angles)},
      {"svm_c", WPG_FIELD(real, tracker.svm.c)},
      {"svm_budget", WPG_INT_FIELD(int, tracker.svm.budget)},
      {"svm_reprocess", WPG_INT_FIELD(int, tracker.svm.reprocess_steps)},
      {"svm_optimize", WPG_INT_FIELD(int, tracker.svm.optimize_steps)},
      {"scale_interval", WPG_INT_FIELD(int, tracker.scale_interval)},
      {"scale_samples", WPG_INT_FIELD(int, tracker.sampling.count)},
      {"scale_std", WPG_FIELD(real, tracker.sampling.scale_std)},
      {"aspect_std", WPG_FIELD(real, tracker.sampling.aspect_std)},
      {"dx_std", WPG_FIELD(real, tracker.sampling.dx_std)},
      {"dy_std", WPG_FIELD(real, tracker.sampling.dy_std)},
      {"scale_xi", WPG_FIELD(real, tracker.scale_training.xi)},
      {"svrg_epochs", WPG_INT_FIELD(int, tracker.scale_training.epochs)},
      {"svrg_step", WPG_FIELD(real, tracker.scale_training.step)},
      {"gate_below_theta", WPG_FIELD(boolean, tracker.gate_below_theta)},
      {"min_side", WPG_FIELD(real, tracker.min_side)},
      {"seed", WPG_INT_FIELD(std::uint64_t, tracker.seed)},
      {"variant", {[](RunConfig& c, std::string_view v) {
                     parse_tracker_variant(v);
                     c.variant = std::string(v);
                   },
                   [](const RunConfig& c) { return c.variant; }}},
  };
  return table;
}

#undef WPG_FIELD
#undef WPG_INT_FIELD

const Field& lookup(std::string_view key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return field;
  }
  throw Error(ErrorKind::kParameter, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  try {
    lookup(key).set(*this, trim(value));
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (msg.find(std::string(key)) != std::string::npos) throw;
    throw Error(ErrorKind::kParameter, std::string(key) + ": " + msg);
  }
}

std::string RunConfig::get(std::string_view key) const { return lookup(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> k;
    for (const auto& [name, field] : fields()) k.push_back(name);
    return k;
  }();
  return out;
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInput, "cannot open config " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kFormat, path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    try {
      set(trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string RunConfig::describe() const {
  std::ostringstream out;
  for (const auto& [name, field] : fields()) out << name << ": " << field.get(*this) << '\n';
  return out.str();
}

TrackerParams RunConfig::resolved_tracker() const {
  TrackerParams p = tracker;
  p.variant = parse_tracker_variant(variant);
  p.validate();
  return p;
}

}  // namespace wpg::cli
