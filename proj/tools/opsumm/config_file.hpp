#pragma once

#include <map>
#include <string>

namespace opsumm::cli {

// Flat INI-style config: `[section]` headers, `key = value` lines, `#` or `;`
// comments. Values keep inner whitespace; keys are unique per section.
using ConfigFile = std::map<std::string, std::map<std::string, std::string>>;

ConfigFile parse_config_file(const std::string& path);

}  // namespace opsumm::cli
