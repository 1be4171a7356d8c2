#include <doctest.h>

#include "shortops/matrix_io.hpp"
#include "shortops/verify.hpp"

using namespace shortops;

TEST_CASE("dense text round trip is bitwise") {
  DetRng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 12);
    const Matrix m = rng.gaussian_matrix(n, n);
    const Matrix back =
        parse_matrix(format_matrix(m, MatrixFormat::DenseText), MatrixFormat::DenseText);
    CHECK(m == back);
    const Matrix back_csv =
        parse_matrix(format_matrix(m, MatrixFormat::Csv), MatrixFormat::Csv);
    CHECK(m == back_csv);
  }
}

TEST_CASE("dense text layout") {
  Matrix m(2, 2);
  m << 1.0, 0.5, 0.5, 2.0;
  const std::string text = format_matrix(m, MatrixFormat::DenseText);
  CHECK(text == "2\n1 0.5\n0.5 2\n");
  const std::string csv = format_matrix(m, MatrixFormat::Csv);
  CHECK(csv == "1,0.5\n0.5,2\n");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_matrix("", MatrixFormat::DenseText), IoError);
  CHECK_THROWS_AS(parse_matrix("0\n", MatrixFormat::DenseText), IoError);
  CHECK_THROWS_AS(parse_matrix("2\n1 2\n3\n", MatrixFormat::DenseText), IoError);
  CHECK_THROWS_AS(parse_matrix("1\n2 extra\n", MatrixFormat::DenseText), IoError);
  CHECK_THROWS_AS(parse_matrix("1,2\n", MatrixFormat::Csv), IoError);
  CHECK_THROWS_AS(parse_matrix("1,x\n2,3\n", MatrixFormat::Csv), IoError);
  CHECK_THROWS_AS(parse_matrix("", MatrixFormat::Csv), IoError);
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/file.txt", MatrixFormat::DenseText),
                  IoError);
}

TEST_CASE("format names") {
  CHECK(format_from_name("text") == MatrixFormat::DenseText);
  CHECK(format_from_name("csv") == MatrixFormat::Csv);
  CHECK_THROWS_AS(format_from_name("hdf5"), IoError);
}

TEST_CASE("digests are stable and content-sensitive") {
  Matrix m(2, 2);
  m << 1, 2, 2, 4;
  const std::string d1 = matrix_digest(m);
  CHECK(d1.size() == 16);
  CHECK(d1 == matrix_digest(m));
  m(0, 0) += 1e-15;
  CHECK(d1 != matrix_digest(m));
}

TEST_CASE("file write and read") {
  DetRng rng(89);
  const Matrix m = rng.gaussian_matrix(5, 5);
  const std::string path = "/tmp/shortops_io_test.txt";
  write_matrix_file(path, m, MatrixFormat::DenseText);
  CHECK(read_matrix_file(path, MatrixFormat::DenseText) == m);
}
