// SPDX-License-Identifier: Apache-2.0
#include "raqmimo/csv.hpp"

#include <charconv>
#include <cmath>
#include <locale>
#include <sstream>
#include <stdexcept>

namespace raqmimo {

namespace {

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

std::string format_double(double value)
{
    if (!std::isfinite(value)) return "";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::out | std::ios::trunc), path_(path), columns_(header.size())
{
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    out_.imbue(std::locale::classic());
    for (const auto& h : header) field(h);
    end_row();
    rows_ = 0;
}

void CsvWriter::separator()
{
    if (current_ > 0) out_ << ',';
    ++current_;
}

CsvWriter& CsvWriter::field(double value)
{
    separator();
    out_ << format_double(value);
    return *this;
}

CsvWriter& CsvWriter::field(long long value)
{
    separator();
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out_.write(buf, res.ptr - buf);
    return *this;
}

CsvWriter& CsvWriter::field(const std::string& value)
{
    separator();
    out_ << quote(value);
    return *this;
}

CsvWriter& CsvWriter::missing()
{
    separator();
    return *this;
}

void CsvWriter::end_row()
{
    if (current_ != columns_) {
        throw std::logic_error("CsvWriter: row has " + std::to_string(current_) + " fields, header has " +
                               std::to_string(columns_));
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed for '" + path_ + "'");
    current_ = 0;
    ++rows_;
}

int CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            t.header = split_line(line);
            first = false;
        } else {
            t.rows.push_back(split_line(line));
        }
    }
    return t;
}

}  // namespace raqmimo
