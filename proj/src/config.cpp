#include "weedsim/config.hpp"

#include <fstream>

#include "weedsim/error.hpp"
#include "weedsim/io.hpp"

namespace weedsim {

std::optional<std::string> ConfigSection::get(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

ConfigFile parse_config(std::istream& in, const std::string& source) {
  ConfigFile file;
  ConfigSection* current = &file.global;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw IngestError(source, number, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw IngestError(source, number, "empty section name");
      file.sections.push_back({std::string(name), number, {}});
      current = &file.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw IngestError(source, number, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw IngestError(source, number, "empty key");
    if (current->get(key)) throw IngestError(source, number, "duplicate key '" + std::string(key) + "'");
    current->entries.emplace_back(std::string(key), std::string(value));
  }
  return file;
}

ConfigFile read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(path.string(), 0, "cannot open file");
  return parse_config(in, path.string());
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  for (const auto& part : split(value, ',')) {
    const auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace weedsim
