#include "csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace subdiv::cli {

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    out_ << header << '\n';
}

CsvWriter& CsvWriter::field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    if (row_started_) out_ << ',';
    out_ << buf;
    row_started_ = true;
    return *this;
}

CsvWriter& CsvWriter::field(std::int64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%" PRId64, v);
    if (row_started_) out_ << ',';
    out_ << buf;
    row_started_ = true;
    return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
    if (row_started_) out_ << ',';
    out_ << buf;
    row_started_ = true;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    row_started_ = false;
}

}  // namespace subdiv::cli
