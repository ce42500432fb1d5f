#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace spdc {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

// Flat "dotted.key = value" text. Blank lines and '#' comments are skipped.
// Duplicate keys and lines without '=' throw ConfigError.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string read_text_file(const std::string& path);

// Strict numeric parse of a whole token; throws ConfigError naming the key.
double parse_number(std::string_view token, std::string_view key);

}  // namespace spdc
