#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "opineq/matrix.hpp"

namespace opineq {

// Text format:
//
//   # comment lines start with '#'; blank lines are ignored
//   rows cols
//   re im re im ...        (rows*cols entries, row-major, any line breaks)
//
// Parse failures throw Error(Parse) with "<source>:<line>: <reason>".

Matrix parse_matrix(std::string_view text, std::string_view source = "<input>");
Matrix read_matrix_file(const std::filesystem::path& path);

/// One matrix row per line, 17 significant digits, so parsing the output
/// reproduces every finite entry exactly.
std::string serialize_matrix(const Matrix& m);
void write_matrix_file(const std::filesystem::path& path, const Matrix& m);

}  // namespace opineq
