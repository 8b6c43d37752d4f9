#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weedsim {

// Flat "key = value" text with optional "[name]" section headers. Keys before
// the first header belong to the unnamed global section. '#' starts a comment.
struct ConfigSection {
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  std::optional<std::string> get(std::string_view key) const;
};

struct ConfigFile {
  ConfigSection global;
  std::vector<ConfigSection> sections;
};

ConfigFile parse_config(std::istream& in, const std::string& source);
ConfigFile read_config(const std::filesystem::path& path);

// Comma-separated list with surrounding whitespace removed.
std::vector<std::string> split_list(std::string_view value);

}  // namespace weedsim
