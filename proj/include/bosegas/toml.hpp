#pragma once

#include <map>
#include <string>
#include <vector>

namespace bosegas {

// Minimal key/value configuration reader: [section] tables, scalar values
// (integer, float, bool, "string") and flat arrays. Enough structure for
// the run files; errors carry line numbers and key paths.
class TomlTable {
public:
    static TomlTable parse_file(const std::string& path);
    static TomlTable parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<double> get_double_array(const std::string& section,
                                         const std::string& key) const;
    std::vector<long long> get_int_array(const std::string& section,
                                         const std::string& key) const;

    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    long long get_int_or(const std::string& section, const std::string& key,
                         long long fallback) const;

    const std::string& raw_text() const { return raw_; }

private:
    struct Value {
        enum class Kind { String, Number, Boolean, Array } kind;
        std::string str;
        double num = 0.0;
        bool boolean = false;
        bool is_integer = false;
        std::vector<Value> items;
        int line = 0;
    };

    const Value& lookup(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, Value>> sections_;
    std::string origin_;
    std::string raw_;
};

}  // namespace bosegas
