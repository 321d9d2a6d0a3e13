#pragma once

// Byte-stable CSV: 9 significant digits, '.' separator, LF endings, `inf` for
// divergences.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "su11/error.hpp"

namespace su11 {

inline std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0.0) {
        x = 0.0; // drops the sign of -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
    [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    [[nodiscard]] std::size_t size() const { return rows_.size(); }

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) {
            throw Error("row width does not match the header");
        }
        rows_.push_back(std::move(cells));
    }

    void add_row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) {
            cells.push_back(format_number(v));
        }
        add_row(std::move(cells));
    }

    /// Column by header name.
    [[nodiscard]] std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (header_[i] == name) {
                return i;
            }
        }
        throw Error("no column " + name);
    }

    /// Numeric column ("inf" parses as infinity).
    [[nodiscard]] std::vector<double> numbers(const std::string& name) const {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows_.size());
        for (const auto& row : rows_) {
            out.push_back(std::stod(row[c]));
        }
        return out;
    }

    void write(std::ostream& os) const {
        write_line(os, header_);
        for (const auto& row : rows_) {
            write_line(os, row);
        }
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

  private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                os << ',';
            }
            os << cells[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace su11
