#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace subrisk::csv {

// Shortest-exact formatting: a value printed with %.17g parses back to the
// identical double, so emitted tables round-trip bit-exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_uint(std::uint64_t v) { return std::to_string(v); }

inline double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw std::runtime_error("csv: not a number: '" + s + "'");
    }
    return v;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    const std::string& cell(std::size_t row, const std::string& column) const {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == column) return rows.at(row).at(c);
        }
        throw std::runtime_error("csv: no column '" + column + "'");
    }

    double number(std::size_t row, const std::string& column) const {
        return parse_double(cell(row, column));
    }
};

// Plain comma separation, LF line endings, header always present. Emitted
// fields never contain commas or quotes, so no quoting layer is needed.
inline void write(const Table& t, std::ostream& os) {
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

inline Table read(std::istream& is) {
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && is.peek() == EOF) break;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::runtime_error("csv: missing header");
    return t;
}

}  // namespace subrisk::csv
