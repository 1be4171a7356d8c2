#pragma once

#include <cstdint>
#include <string>

#include "shortops/psd_core.hpp"

namespace shortops {

enum class MatrixFormat { DenseText, Csv };

MatrixFormat format_from_name(const std::string& name);  // "text" | "csv"
const char* format_name(MatrixFormat fmt);

/// Serialization uses 17 significant digits, which round-trips IEEE doubles
/// to identical bits. DenseText: first line the dimension n, then n
/// whitespace-separated rows. Csv: n comma-separated rows, dimension implied.
std::string format_matrix(const Matrix& m, MatrixFormat fmt);

/// Inverse of format_matrix; throws IoError on malformed input or a
/// non-square layout.
Matrix parse_matrix(const std::string& text, MatrixFormat fmt);

Matrix read_matrix_file(const std::string& path, MatrixFormat fmt);
void write_matrix_file(const std::string& path, const Matrix& m, MatrixFormat fmt);

std::uint64_t fnv1a64(const std::string& bytes);

/// Hash of the canonical DenseText serialization, as fixed-width hex.
std::string matrix_digest(const Matrix& m);
std::string pair_digest(const Matrix& g, const Matrix& x);

}  // namespace shortops
