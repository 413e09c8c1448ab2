#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace bosegas {

using json = nlohmann::ordered_json;

// %.17g rendering used in every CSV cell so reruns are byte-identical.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<double>& cells);
    void add_row_raw(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::size_t width_;
};

void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

// Common header fields stamped into every JSON report.
json report_preamble(const std::string& config_hash, const std::string& subcommand);

}  // namespace bosegas
