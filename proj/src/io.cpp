#include "dextra/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dextra::io {

std::string format_double(double v) {
  char buf[64];
  // %.17g always round-trips; prefer the shorter form when it does too.
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  if (std::strtod(buf, nullptr) != v)
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& file, const Matrix& m) {
  auto out = open_out(file);
  if (m.rows() == m.cols())
    out << m.rows() << "\n";
  else
    out << m.rows() << "," << m.cols() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ",";
      out << format_double(m(r, c));
    }
    out << "\n";
  }
}

Matrix read_matrix_csv(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("empty matrix file " + file.string());
  const auto dims = split(trim(header), ',');
  Eigen::Index rows = 0, cols = 0;
  if (dims.size() == 1) {
    rows = cols = std::stol(dims[0]);
  } else if (dims.size() == 2) {
    rows = std::stol(dims[0]);
    cols = std::stol(dims[1]);
  } else {
    throw std::runtime_error("bad matrix header in " + file.string());
  }
  Matrix m(rows, cols);
  std::string line;
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw std::runtime_error("truncated matrix in " + file.string());
    const auto cells = split(trim(line), ',');
    if (static_cast<Eigen::Index>(cells.size()) != cols)
      throw std::runtime_error("ragged matrix row in " + file.string());
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = std::stod(cells[c]);
  }
  return m;
}

void write_vector_csv(const std::filesystem::path& file, const Vector& v) {
  auto out = open_out(file);
  out << v.size() << ",1\n";
  for (Eigen::Index r = 0; r < v.size(); ++r)
    out << format_double(v(r)) << "\n";
}

Vector read_vector_csv(const std::filesystem::path& file) {
  const Matrix m = read_matrix_csv(file);
  if (m.cols() != 1)
    throw std::runtime_error("expected a single column in " + file.string());
  return m.col(0);
}

void write_csv_columns(const std::filesystem::path& file,
                       const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size())
    throw std::invalid_argument("header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows) throw std::invalid_argument("ragged columns");
  auto out = open_out(file);
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out << ",";
    out << names[c];
  }
  out << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ",";
      out << format_double(columns[c][r]);
    }
    out << "\n";
  }
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_csv_columns(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty csv " + file.string());
  const auto names = split(trim(line), ',');
  std::vector<std::vector<double>> columns(names.size());
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != names.size())
      throw std::runtime_error("ragged csv row in " + file.string());
    for (std::size_t c = 0; c < cells.size(); ++c)
      columns[c].push_back(std::stod(cells[c]));
  }
  return {names, columns};
}

void write_key_values(const std::filesystem::path& file, const KeyValues& kv) {
  auto out = open_out(file);
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

std::map<std::string, std::string> read_key_values(
    const std::filesystem::path& file) {
  auto in = open_in(file);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

Sections read_sections(const std::filesystem::path& file) {
  auto in = open_in(file);
  Sections sections;
  std::string current;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad config line in " + file.string() + ": " + t);
    sections[current][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return sections;
}

}  // namespace dextra::io
