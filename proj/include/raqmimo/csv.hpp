// SPDX-License-Identifier: Apache-2.0
// Locale-independent CSV output with round-trip double formatting.
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace raqmimo {

/// Shortest representation that parses back to the same double. Non-finite
/// values become an empty field (a missing value).
std::string format_double(double value);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    CsvWriter& field(double value);
    CsvWriter& field(long long value);
    CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
    CsvWriter& field(const std::string& value);
    CsvWriter& missing();
    /// Ends the current row; throws if the field count does not match the header.
    void end_row();

    std::size_t rows() const { return rows_; }

private:
    void separator();

    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
    std::size_t current_{0};
    std::size_t rows_{0};
};

/// Reads a CSV produced by CsvWriter back into header + string cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace raqmimo
