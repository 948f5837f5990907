#pragma once

#include <iosfwd>
#include <string>

#include "xrip/matrix.hpp"

namespace xrip {

// Matrix Market I/O. Writing uses the dense `array real general` format with
// column-major entries at 17 significant digits; reading also accepts the
// `coordinate real general` variant. Malformed input throws ParseError with
// the offending line number.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(const Matrix& M, std::ostream& out);
void write_matrix_file(const Matrix& M, const std::string& path);

}  // namespace xrip
