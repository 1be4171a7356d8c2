#include "shortops/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace shortops {

MatrixFormat format_from_name(const std::string& name) {
  if (name == "text") return MatrixFormat::DenseText;
  if (name == "csv") return MatrixFormat::Csv;
  throw IoError("unknown matrix format '" + name + "' (expected text or csv)");
}

const char* format_name(MatrixFormat fmt) {
  return fmt == MatrixFormat::Csv ? "csv" : "text";
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string format_matrix(const Matrix& m, MatrixFormat fmt) {
  std::ostringstream out;
  const char sep = fmt == MatrixFormat::Csv ? ',' : ' ';
  if (fmt == MatrixFormat::DenseText) out << m.rows() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << sep;
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  return out.str();
}

Matrix parse_matrix(const std::string& text, MatrixFormat fmt) {
  if (fmt == MatrixFormat::DenseText) {
    std::istringstream in(text);
    long n = -1;
    if (!(in >> n) || n <= 0) {
      throw IoError("matrix parse: expected a positive dimension on the first line");
    }
    Matrix m(n, n);
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        if (!(in >> m(i, j))) {
          throw IoError("matrix parse: expected " + std::to_string(n * n) +
                        " entries, ran out at row " + std::to_string(i));
        }
      }
    }
    std::string leftover;
    if (in >> leftover) {
      throw IoError("matrix parse: trailing content after the matrix");
    }
    return m;
  }
  // CSV: one row per line, entries separated by commas.
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::istringstream value(cell);
      double v;
      if (!(value >> v)) {
        throw IoError("matrix parse: bad csv cell '" + cell + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("matrix parse: empty csv input");
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw IoError("matrix parse: csv row " + std::to_string(i) + " has " +
                    std::to_string(rows[i].size()) + " entries, expected " +
                    std::to_string(n) + " (square matrix required)");
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix read_matrix_file(const std::string& path, MatrixFormat fmt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix(buf.str(), fmt);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_matrix_file(const std::string& path, const Matrix& m, MatrixFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << format_matrix(m, fmt);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string matrix_digest(const Matrix& m) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(format_matrix(m, MatrixFormat::DenseText))));
  return buf;
}

std::string pair_digest(const Matrix& g, const Matrix& x) {
  return matrix_digest(g) + ":" + matrix_digest(x);
}

}  // namespace shortops
