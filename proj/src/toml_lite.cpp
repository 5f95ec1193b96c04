#include "gridtargets/toml_lite.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridtargets {

namespace {

std::string strip(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

TomlLite::Value parse_scalar(const std::string& raw, int line_no) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
        return raw.substr(1, raw.size() - 2);
    if (raw == "true") return true;
    if (raw == "false") return false;
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used == raw.size()) return v;
    } catch (const std::exception&) {
    }
    std::ostringstream msg;
    msg << "toml: line " << line_no << ": cannot parse value '" << raw << "'";
    throw std::invalid_argument(msg.str());
}

TomlLite::Value parse_value(const std::string& raw, int line_no) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') {
            std::ostringstream msg;
            msg << "toml: line " << line_no << ": unterminated array";
            throw std::invalid_argument(msg.str());
        }
        std::vector<double> nums;
        std::vector<std::string> strs;
        bool any_string = false;
        std::string body = raw.substr(1, raw.size() - 2);
        std::istringstream in(body);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = strip(item);
            if (item.empty()) continue;
            const TomlLite::Value v = parse_scalar(item, line_no);
            if (std::holds_alternative<double>(v)) {
                nums.push_back(std::get<double>(v));
            } else if (std::holds_alternative<std::string>(v)) {
                any_string = true;
                strs.push_back(std::get<std::string>(v));
            } else {
                std::ostringstream msg;
                msg << "toml: line " << line_no << ": arrays hold numbers or strings";
                throw std::invalid_argument(msg.str());
            }
        }
        if (any_string) {
            if (!nums.empty()) {
                std::ostringstream msg;
                msg << "toml: line " << line_no << ": mixed array types";
                throw std::invalid_argument(msg.str());
            }
            return strs;
        }
        return nums;
    }
    return parse_scalar(raw, line_no);
}

}  // namespace

TomlLite TomlLite::parse(const std::string& text) {
    TomlLite out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("toml: line " + std::to_string(line_no) +
                                            ": malformed section header");
            section = strip(line.substr(1, line.size() - 2));
            out.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("toml: line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("toml: line " + std::to_string(line_no) +
                                        ": empty key or value");
        out.sections_[section][key] = parse_value(value, line_no);
    }
    return out;
}

TomlLite TomlLite::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream body;
    body << in.rdbuf();
    return parse(body.str());
}

bool TomlLite::has(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    return sec != sections_.end() && sec->second.count(key) > 0;
}

const TomlLite::Value& TomlLite::get(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end() || sec->second.count(key) == 0)
        throw std::invalid_argument("toml: missing [" + section + "] " + key);
    return sec->second.at(key);
}

double TomlLite::number(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (!std::holds_alternative<double>(v))
        throw std::invalid_argument("toml: [" + section + "] " + key + " is not a number");
    return std::get<double>(v);
}

double TomlLite::number_or(const std::string& section, const std::string& key,
                           double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

bool TomlLite::boolean_or(const std::string& section, const std::string& key,
                          bool fallback) const {
    if (!has(section, key)) return fallback;
    const Value& v = get(section, key);
    if (!std::holds_alternative<bool>(v))
        throw std::invalid_argument("toml: [" + section + "] " + key + " is not a boolean");
    return std::get<bool>(v);
}

std::string TomlLite::text(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (!std::holds_alternative<std::string>(v))
        throw std::invalid_argument("toml: [" + section + "] " + key + " is not a string");
    return std::get<std::string>(v);
}

std::string TomlLite::text_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    return has(section, key) ? text(section, key) : fallback;
}

std::vector<double> TomlLite::numbers(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (!std::holds_alternative<std::vector<double>>(v))
        throw std::invalid_argument("toml: [" + section + "] " + key + " is not a number array");
    return std::get<std::vector<double>>(v);
}

}  // namespace gridtargets
