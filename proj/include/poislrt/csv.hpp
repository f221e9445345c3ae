#ifndef POISLRT_CSV_HPP
#define POISLRT_CSV_HPP

#include <iosfwd>
#include <string>

#include "poislrt/model.hpp"

namespace poislrt {

// Reads a comma-separated table of nonnegative integer counts, one row per
// observation. A non-numeric first line is treated as a header. Throws
// CsvError (with a 1-based line number) on ragged rows, non-integer fields,
// negative values, or fewer than two columns.
CountMatrix read_count_matrix(std::istream& in);
CountMatrix read_count_matrix_file(const std::string& path);

// Writes counts with a y1..ym header; output re-ingestible by the reader.
void write_count_matrix(const CountMatrix& data, std::ostream& out);
void write_count_matrix_file(const CountMatrix& data, const std::string& path);

}  // namespace poislrt

#endif
