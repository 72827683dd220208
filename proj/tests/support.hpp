#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace support {

inline std::string source_path(const std::string& relative) { return std::string(RHETOR_SOURCE_DIR) + "/" + relative; }

inline std::string read_file(const std::string& relative) {
  std::ifstream in(source_path(relative));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Plain comma split; the fixtures never quote fields.
inline std::vector<std::vector<std::string>> read_csv(const std::string& relative, bool skip_header = true) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(relative));
  std::string line;
  bool header = skip_header;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream cells(line);
    while (std::getline(cells, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace support
