#ifndef LIFTNET_CSV_HPP
#define LIFTNET_CSV_HPP

/**
 * @file csv.hpp
 * @brief Minimal strict CSV support for the project's flat numeric schemas.
 *
 * All project files are comma-separated, UTF-8, `.` decimal separator, one
 * header row, no quoting (no field ever contains a comma). Numbers are
 * written with shortest round-trip formatting so write -> read is
 * bit-identical.
 */

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace liftnet::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws format_error if missing.
    std::size_t column(const std::string& name) const;

    /// Index of a header column, or npos if missing.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find_column(const std::string& name) const;
};

/// Parses a CSV stream. Trims trailing CR, skips blank lines, requires every
/// row to have exactly as many fields as the header.
Table read_stream(std::istream& in, const std::string& origin = "<stream>");

/// Parses a CSV file; throws format_error if the file cannot be opened.
Table read_file(const std::string& path);

void write_stream(std::ostream& out, const Table& table);
void write_file(const std::string& path, const Table& table);

/// Strict double parse of a full cell; throws format_error on anything else.
double to_double(const std::string& cell);

/// Shortest representation that parses back to the identical double.
std::string format_double(double v);

} // namespace liftnet::csv

#endif // LIFTNET_CSV_HPP
