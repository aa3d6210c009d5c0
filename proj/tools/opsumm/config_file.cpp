#include "config_file.hpp"

#include <fstream>

#include "opsumm/errors.hpp"

namespace opsumm::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path, 0);
    ConfigFile config;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw ParseError("unterminated section header: " + text, lineno);
            section = trim(text.substr(1, text.size() - 2));
            if (section.empty()) throw ParseError("empty section header", lineno);
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value': " + text, lineno);
        const std::string key = trim(text.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", lineno);
        config[section][key] = trim(text.substr(eq + 1));
    }
    return config;
}

}  // namespace opsumm::cli
