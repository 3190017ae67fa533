#pragma once

#include <cstdint>
#include <fstream>
#include <string>

namespace subdiv::cli {

/// Minimal CSV writer. Doubles are printed with %.17g so identical runs
/// produce byte-identical files; rows are newline-terminated.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);

    CsvWriter& field(double v);
    CsvWriter& field(std::int64_t v);
    CsvWriter& field(std::uint64_t v);
    CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
    void end_row();

private:
    std::ofstream out_;
    bool row_started_ = false;
};

}  // namespace subdiv::cli
