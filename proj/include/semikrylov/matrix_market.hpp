#pragma once

#include "semikrylov/dense.hpp"

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semikrylov {

/// Malformed Matrix Market input; `line()` is 1-based (0 when unknown).
class MatrixMarketError : public std::runtime_error {
public:
    MatrixMarketError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }
    /// The message without the line prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

/// Reads `array` or `coordinate` files with a `real` (or `integer`) field
/// and `general` or `symmetric` storage. Symmetric files list the lower
/// triangle, which is mirrored. Coordinate duplicates are summed.
DenseMatrix read_matrix_market(std::istream& in);
DenseMatrix read_matrix_market(std::string_view text);
DenseMatrix read_matrix_market_file(const std::filesystem::path& path);

/// `array real general`, column-major, 17 significant digits.
std::string write_matrix_market(const DenseMatrix& a);

/// An n×1 (or 1×n) file as a vector.
Vector read_vector_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace semikrylov
