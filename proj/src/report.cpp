#include "bosegas/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bosegas/errors.hpp"

namespace bosegas {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        text_ += header[i];
        text_ += i + 1 == header.size() ? '\n' : ',';
    }
}

void CsvWriter::add_row(const std::vector<double>& cells) {
    std::vector<std::string> raw;
    raw.reserve(cells.size());
    for (double c : cells) raw.push_back(format_double(c));
    add_row_raw(raw);
}

void CsvWriter::add_row_raw(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw ValidationError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        text_ += cells[i];
        text_ += i + 1 == cells.size() ? '\n' : ',';
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("cannot create output directory " + path + ": " + ec.message());
}

json report_preamble(const std::string& config_hash, const std::string& subcommand) {
    json j;
    j["artifact"] = "bosegas";
    j["version"] = "0.1.0";
    j["subcommand"] = subcommand;
    j["config_hash"] = config_hash;
    j["scgf_convention"] =
        "Lambda_N(lambda) = ln E[exp(lambda * sum_j centered O_j)] / N; the exponent carries "
        "the total sum, the 1/N sits outside the logarithm";
    return j;
}

}  // namespace bosegas
