#include "entx/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace entx {

std::string csv_rational(const Rat& r)
{
    return rat_to_string(r);
}

std::string csv_real(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

std::string escape(const std::string& field)
{
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string to_csv(const CsvTable& table)
{
    if (table.header.empty()) throw std::invalid_argument("csv: empty table");
    std::string out;
    auto emit = [&](const std::vector<std::string>& record) {
        for (size_t i = 0; i < record.size(); ++i) {
            if (i) out += ',';
            out += escape(record[i]);
        }
        out += '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("csv: row width does not match the header");
        emit(row);
    }
    return out;
}

void export_csv(const CsvTable& table, const std::string& path)
{
    std::string text = to_csv(table);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    out << text;
    if (!out) throw std::runtime_error("csv: write failed for " + path);
}

} // namespace entx
