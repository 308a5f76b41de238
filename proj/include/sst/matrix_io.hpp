#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sst/types.hpp"

namespace sst {

// Plain CSV: n rows of n comma-separated decimals, no header. Blank trailing
// lines are ignored. Throws Error(kIoError) on unreadable files and
// Error(kInvalidArgument) on ragged or non-square content.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::string& path);

void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// "3,2,1" -> {3, 2, 1}
std::vector<int> parse_int_list(const std::string& text);
std::string join_ints(const std::vector<int>& values);

}  // namespace sst
