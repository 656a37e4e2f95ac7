#ifndef ENTX_CSV_HPP
#define ENTX_CSV_HPP

#include <string>
#include <vector>

#include "entx/rational.hpp"

namespace entx {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Formatting used in every table: rationals as p/q, reals with 12
// significant digits (so identical runs give byte-identical files).
std::string csv_rational(const Rat& r);
std::string csv_real(double x);

// RFC-4180-style serialization with LF line endings; the header is always
// the first record.
std::string to_csv(const CsvTable& table);

// Throws std::invalid_argument on an empty table and std::runtime_error on
// I/O failure.
void export_csv(const CsvTable& table, const std::string& path);

} // namespace entx

#endif
