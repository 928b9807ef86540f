#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dextra/linalg.hpp"

namespace dextra::io {

/// Shortest decimal that round-trips the double exactly.
std::string format_double(double v);

/// Dense CSV. Square matrices carry a single-number header line "n";
/// rectangular ones carry "rows,cols". Rows follow in row-major order.
void write_matrix_csv(const std::filesystem::path& file, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& file);

void write_vector_csv(const std::filesystem::path& file, const Vector& v);
Vector read_vector_csv(const std::filesystem::path& file);

/// Column-wise CSV with a header row, for traces and reports.
void write_csv_columns(const std::filesystem::path& file,
                       const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns);
/// Returns header names and columns; throws on ragged files.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_csv_columns(const std::filesystem::path& file);

/// Flat "key = value" text, one pair per line, written in the given order.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_key_values(const std::filesystem::path& file, const KeyValues& kv);
std::map<std::string, std::string> read_key_values(
    const std::filesystem::path& file);

/// "key = value" lines grouped under "[section]" headers. Keys before any
/// header land in the "" section. '#' starts a comment.
using Sections = std::map<std::string, std::map<std::string, std::string>>;
Sections read_sections(const std::filesystem::path& file);

}  // namespace dextra::io
