#include "bosegas/toml.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bosegas/errors.hpp"

namespace bosegas {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

TomlTable TomlTable::parse_string(const std::string& text, const std::string& origin) {
    TomlTable table;
    table.origin_ = origin;
    table.raw_ = text;

    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(origin, line_no, "empty section name");
            table.sections_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string rhs = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");
        if (rhs.empty()) fail(origin, line_no, "missing value for key '" + key + "'");

        auto parse_scalar = [&](const std::string& tok) {
            Value v;
            v.line = line_no;
            if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
                v.kind = Value::Kind::String;
                v.str = tok.substr(1, tok.size() - 2);
                return v;
            }
            if (tok == "true" || tok == "false") {
                v.kind = Value::Kind::Boolean;
                v.boolean = tok == "true";
                return v;
            }
            try {
                std::size_t used = 0;
                const double num = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                v.kind = Value::Kind::Number;
                v.num = num;
                v.is_integer = tok.find_first_of(".eE") == std::string::npos &&
                               num == std::floor(num);
                return v;
            } catch (const std::exception&) {
                fail(origin, line_no, "cannot parse value '" + tok + "' for key '" + key + "'");
            }
        };

        Value value;
        value.line = line_no;
        if (rhs.front() == '[') {
            if (rhs.back() != ']') fail(origin, line_no, "unterminated array for key '" + key + "'");
            value.kind = Value::Kind::Array;
            std::string body = trim(rhs.substr(1, rhs.size() - 2));
            if (!body.empty()) {
                std::size_t start = 0;
                bool in_string = false;
                for (std::size_t i = 0; i <= body.size(); ++i) {
                    if (i < body.size() && body[i] == '"') in_string = !in_string;
                    if (i == body.size() || (body[i] == ',' && !in_string)) {
                        const std::string tok = trim(body.substr(start, i - start));
                        if (tok.empty()) fail(origin, line_no, "empty array element");
                        value.items.push_back(parse_scalar(tok));
                        start = i + 1;
                    }
                }
            }
        } else {
            value = parse_scalar(rhs);
        }
        table.sections_[section][key] = value;
    }
    return table;
}

bool TomlTable::has(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    return sec != sections_.end() && sec->second.count(key) > 0;
}

bool TomlTable::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

const TomlTable::Value& TomlTable::lookup(const std::string& section,
                                          const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) {
        throw ConfigError(origin_ + ": missing [" + section + "] table");
    }
    const auto it = sec->second.find(key);
    if (it == sec->second.end()) {
        throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    }
    return it->second;
}

std::string TomlTable::get_string(const std::string& section, const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::String) {
        fail(origin_, v.line, "key '" + key + "' must be a string");
    }
    return v.str;
}

double TomlTable::get_double(const std::string& section, const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::Number) fail(origin_, v.line, "key '" + key + "' must be a number");
    return v.num;
}

long long TomlTable::get_int(const std::string& section, const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::Number || !v.is_integer) {
        fail(origin_, v.line, "key '" + key + "' must be an integer");
    }
    return static_cast<long long>(v.num);
}

bool TomlTable::get_bool(const std::string& section, const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::Boolean) fail(origin_, v.line, "key '" + key + "' must be a bool");
    return v.boolean;
}

std::vector<double> TomlTable::get_double_array(const std::string& section,
                                                const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::Array) fail(origin_, v.line, "key '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& item : v.items) {
        if (item.kind != Value::Kind::Number) {
            fail(origin_, v.line, "array '" + key + "' must hold numbers");
        }
        out.push_back(item.num);
    }
    return out;
}

std::vector<long long> TomlTable::get_int_array(const std::string& section,
                                                const std::string& key) const {
    const Value& v = lookup(section, key);
    if (v.kind != Value::Kind::Array) fail(origin_, v.line, "key '" + key + "' must be an array");
    std::vector<long long> out;
    for (const auto& item : v.items) {
        if (item.kind != Value::Kind::Number || !item.is_integer) {
            fail(origin_, v.line, "array '" + key + "' must hold integers");
        }
        out.push_back(static_cast<long long>(item.num));
    }
    return out;
}

std::string TomlTable::get_string_or(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double TomlTable::get_double_or(const std::string& section, const std::string& key,
                                double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long long TomlTable::get_int_or(const std::string& section, const std::string& key,
                                long long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

}  // namespace bosegas
