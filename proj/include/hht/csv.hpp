#pragma once

#include "hht/types.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hht {

/// Round-trip float formatting (17 significant digits).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot open output file '" + path + "'");
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

    class Row {
    public:
        explicit Row(std::ofstream& out) : out_(out) {}
        Row& col(double v) { return raw(format_double(v)); }
        Row& col(int v) { return raw(std::to_string(v)); }
        Row& col(long v) { return raw(std::to_string(v)); }
        Row& col(long long v) { return raw(std::to_string(v)); }
        Row& col(bool v) { return raw(v ? "1" : "0"); }
        Row& col(std::string_view v) { return raw(std::string(v)); }
        ~Row() { out_ << '\n'; }

    private:
        Row& raw(const std::string& s) {
            if (!first_) out_ << ',';
            first_ = false;
            out_ << s;
            return *this;
        }
        std::ofstream& out_;
        bool first_ = true;
    };

    Row begin_row() { return Row(out_); }

private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("CSV file '" + path + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(table.columns.size());
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                row.push_back(std::nan(""));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace hht
