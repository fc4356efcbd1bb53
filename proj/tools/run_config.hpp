#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wpg/tracker.hpp"

namespace wpg::cli {

// Every tunable of a run. Defaults reproduce the published settings.
struct RunConfig {
  TrackerParams tracker;
  std::string variant = "full";

  // Throws a parameter error for an unknown key or an unparsable value.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();

  // key=value lines; '#' starts a comment, blank lines are skipped. Throws a
  // format error with the line number.
  void load_file(const std::filesystem::path& path);

  // "key: value" lines in a fixed order.
  std::string describe() const;

  // Resolves the variant string into the tracker parameters.
  TrackerParams resolved_tracker() const;
};

}  // namespace wpg::cli
