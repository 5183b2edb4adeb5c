#include "opineq/matrix_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "opineq/error.hpp"

namespace opineq {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
};

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& why) {
  throw Error(ErrorCode::Parse, std::string(source) + ":" + std::to_string(line) + ": " + why);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits into lines; drops blank and comment lines.
std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i < line.size() && line[i] != '#') {
      while (i < line.size()) {
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) ++j;
        tokens.push_back({line.substr(i, j - i), line_no});
        while (j < line.size() && is_space(line[j])) ++j;
        i = j;
      }
      lines.push_back(std::move(tokens));
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

std::size_t parse_dimension(const Token& t, std::string_view source) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || value == 0) {
    fail(source, t.line, "dimension '" + std::string(t.text) + "' is not a positive integer");
  }
  return value;
}

double parse_real(const Token& t, std::string_view source) {
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) fail(source, t.line, "'" + std::string(t.text) + "' is not a number");
  if (!std::isfinite(value)) fail(source, t.line, "entry '" + std::string(t.text) + "' is not finite");
  return value;
}

}  // namespace

Matrix parse_matrix(std::string_view text, std::string_view source) {
  const auto lines = tokenize(text);
  if (lines.empty()) fail(source, 1, "missing header 'rows cols'");
  const auto& header = lines.front();
  if (header.size() != 2) fail(source, header.front().line, "header must be 'rows cols'");
  const std::size_t rows = parse_dimension(header[0], source);
  const std::size_t cols = parse_dimension(header[1], source);

  const std::size_t expected = 2 * rows * cols;
  std::vector<double> values;
  values.reserve(expected);
  std::size_t last_line = header.front().line;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    for (const Token& t : lines[l]) {
      if (values.size() == expected) {
        fail(source, t.line, "unexpected token '" + std::string(t.text) + "' after " + std::to_string(rows * cols) +
                                 " entries");
      }
      values.push_back(parse_real(t, source));
      last_line = t.line;
    }
  }
  if (values.size() != expected) {
    fail(source, last_line,
         "expected " + std::to_string(expected) + " numbers (re im pairs), found " + std::to_string(values.size()));
  }
  std::vector<Complex> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = {values[2 * k], values[2 * k + 1]};
  return Matrix(rows, cols, std::move(entries));
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), path.string());
}

std::string serialize_matrix(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%s%.17g %.17g", j == 0 ? "" : "  ", m(i, j).real(), m(i, j).imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Parse, path.string() + ": cannot write file");
  out << serialize_matrix(m);
  if (!out) throw Error(ErrorCode::Parse, path.string() + ": write failed");
}

}  // namespace opineq
