#pragma once
// Deterministic CSV output: '#' metadata lines, one header row, then data.
// Doubles are written as the shortest decimal string that parses back to the
// same bits (at most 17 significant digits), via std::to_chars, which is
// locale-independent.

#include <charconv>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nhse/common.hpp"

namespace nhse::io {

inline constexpr const char* version = "0.1.0";

inline std::string format_double(double v) {
    if (v == 0.0)
        return "0"; // folds -0 as well
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    const auto res = std::to_chars(buf, buf + sizeof buf, h, 16);
    std::string hex(buf, res.ptr);
    return std::string(16 - hex.size(), '0') + hex;
}

/// One output cell. Empty cells mark values that do not apply.
class Cell {
public:
    Cell() = default;
    Cell(double v) : text_(format_double(v)) {}
    Cell(long v) : text_(std::to_string(v)) {}
    Cell(int v) : text_(std::to_string(v)) {}
    Cell(std::size_t v) : text_(std::to_string(v)) {}
    Cell(bool v) : text_(v ? "1" : "0") {}
    Cell(const char* s) : text_(quote(s)) {}
    Cell(const std::string& s) : text_(quote(s)) {}

    const std::string& text() const { return text_; }

private:
    static std::string quote(std::string_view s) {
        if (s.find_first_of(",\"\n") == std::string_view::npos)
            return std::string(s);
        std::string out = "\"";
        for (char c : s) {
            if (c == '"')
                out += '"';
            out += c == '\n' ? ' ' : c;
        }
        return out + "\"";
    }

    std::string text_;
};

class CsvTable {
public:
    CsvTable(std::vector<std::string> metadata, std::vector<std::string> columns)
        : metadata_(std::move(metadata)), columns_(std::move(columns)) {}

    void row(const std::vector<Cell>& cells) {
        if (cells.size() != columns_.size())
            throw Error("CsvTable: row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(columns_.size()));
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                line += ',';
            line += cells[i].text();
        }
        rows_.push_back(std::move(line));
    }

    std::size_t rows() const { return rows_.size(); }

    std::string str() const {
        std::string out;
        for (const auto& m : metadata_)
            out += "# " + m + "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out += (i ? "," : "") + columns_[i];
        out += "\n";
        for (const auto& r : rows_)
            out += r + "\n";
        return out;
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw Error("cannot open " + path.string() + " for writing");
        f << str();
        if (!f)
            throw Error("write failed: " + path.string());
    }

private:
    std::vector<std::string> metadata_;
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

/// Parsed CSV: metadata lines (without '# '), header, and raw cell text.
struct CsvData {
    std::vector<std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    long column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return static_cast<long>(i);
        throw Error("CSV has no column '" + name + "'");
    }
};

/// Reader for files produced by CsvTable (no embedded newlines).
inline CsvData read_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                    cur += '"', ++i;
                else if (c == '"')
                    quoted = false;
                else
                    cur += c;
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                cells.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        cells.push_back(std::move(cur));
        return cells;
    };
    CsvData d;
    std::string line;
    bool header = false;
    while (std::getline(f, line)) {
        if (!header && line.rfind("#", 0) == 0) {
            d.metadata.push_back(line.size() > 2 ? line.substr(2) : "");
        } else if (!header) {
            d.columns = split(line);
            header = true;
        } else {
            d.rows.push_back(split(line));
        }
    }
    return d;
}

} // namespace nhse::io
