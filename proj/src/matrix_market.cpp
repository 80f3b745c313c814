#include "semikrylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace semikrylov {

MatrixMarketError::MatrixMarketError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "Matrix Market line " + std::to_string(line) + ": " + what
                              : "Matrix Market: " + what),
      line_(line),
      detail_(what)
{
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank(const std::string& s)
{
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next line that is neither blank nor a comment; false at end of input.
    bool next_data(std::string& line)
    {
        while (std::getline(in_, line)) {
            ++number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (blank(line) || line.front() == '%') continue;
            return true;
        }
        return false;
    }

    bool first(std::string& line)
    {
        if (!std::getline(in_, line)) return false;
        ++number_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::size_t number() const noexcept { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

double parse_value(std::istringstream& is, std::size_t line)
{
    std::string token;
    if (!(is >> token)) throw MatrixMarketError(line, "missing value");
    // strtod rather than stod: subnormals set ERANGE but are valid values
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw MatrixMarketError(line, "cannot parse value '" + token + "'");
    if (!std::isfinite(v)) throw MatrixMarketError(line, "non-finite value '" + token + "'");
    return v;
}

std::size_t parse_index(std::istringstream& is, std::size_t line, const char* what)
{
    long long v = 0;
    if (!(is >> v)) throw MatrixMarketError(line, std::string("cannot parse ") + what);
    if (v < 0) throw MatrixMarketError(line, std::string(what) + " is negative");
    return static_cast<std::size_t>(v);
}

void expect_end(std::istringstream& is, std::size_t line)
{
    std::string extra;
    if (is >> extra) throw MatrixMarketError(line, "unexpected trailing token '" + extra + "'");
}

}  // namespace

DenseMatrix read_matrix_market(std::istream& in)
{
    LineReader reader(in);
    std::string line;
    if (!reader.first(line)) throw MatrixMarketError(1, "empty input");

    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    if (!(header >> banner >> object >> format >> field >> symmetry))
        throw MatrixMarketError(1, "malformed header '" + line + "'");
    if (banner != "%%MatrixMarket") throw MatrixMarketError(1, "missing %%MatrixMarket banner");
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix") throw MatrixMarketError(1, "unsupported object '" + object + "'");
    if (format != "array" && format != "coordinate")
        throw MatrixMarketError(1, "unsupported format '" + format + "'");
    if (field != "real" && field != "integer")
        throw MatrixMarketError(1, "unsupported field '" + field + "' (only real is supported)");
    if (symmetry != "general" && symmetry != "symmetric")
        throw MatrixMarketError(1, "unsupported symmetry '" + symmetry + "'");
    const bool symmetric = symmetry == "symmetric";

    if (!reader.next_data(line)) throw MatrixMarketError(reader.number(), "missing size line");
    std::istringstream size_line(line);
    const std::size_t rows = parse_index(size_line, reader.number(), "row count");
    const std::size_t cols = parse_index(size_line, reader.number(), "column count");
    if (rows == 0 || cols == 0) throw MatrixMarketError(reader.number(), "dimensions must be positive");
    if (symmetric && rows != cols)
        throw MatrixMarketError(reader.number(), "symmetric matrix must be square");

    DenseMatrix a(rows, cols);
    if (format == "array") {
        expect_end(size_line, reader.number());
        // Column-major; symmetric storage lists the lower triangle only.
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t i = symmetric ? j : 0; i < rows; ++i) {
                if (!reader.next_data(line))
                    throw MatrixMarketError(reader.number(), "unexpected end of file in array data");
                std::istringstream is(line);
                const double v = parse_value(is, reader.number());
                expect_end(is, reader.number());
                a(i, j) = v;
                if (symmetric) a(j, i) = v;
            }
        }
    } else {
        const std::size_t nnz = parse_index(size_line, reader.number(), "entry count");
        expect_end(size_line, reader.number());
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!reader.next_data(line))
                throw MatrixMarketError(reader.number(), "unexpected end of file after " +
                                                             std::to_string(k) + " of " +
                                                             std::to_string(nnz) + " entries");
            std::istringstream is(line);
            const std::size_t i = parse_index(is, reader.number(), "row index");
            const std::size_t j = parse_index(is, reader.number(), "column index");
            const double v = parse_value(is, reader.number());
            expect_end(is, reader.number());
            if (i < 1 || i > rows || j < 1 || j > cols) {
                throw MatrixMarketError(reader.number(), "index (" + std::to_string(i) + ", " +
                                                             std::to_string(j) + ") out of range for " +
                                                             std::to_string(rows) + "x" + std::to_string(cols));
            }
            if (symmetric && j > i)
                throw MatrixMarketError(reader.number(), "symmetric storage requires lower-triangle entries");
            a(i - 1, j - 1) += v;
            if (symmetric && i != j) a(j - 1, i - 1) += v;
        }
    }
    if (reader.next_data(line)) throw MatrixMarketError(reader.number(), "unexpected data after last entry");
    return a;
}

DenseMatrix read_matrix_market(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return read_matrix_market(in);
}

DenseMatrix read_matrix_market_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    try {
        return read_matrix_market(in);
    } catch (const MatrixMarketError& e) {
        throw MatrixMarketError(e.line(), e.detail() + " [" + path.string() + "]");
    }
}

std::string write_matrix_market(const DenseMatrix& a)
{
    std::string out = "%%MatrixMarket matrix array real general\n";
    out += std::to_string(a.rows()) + " " + std::to_string(a.cols()) + "\n";
    char buf[32];
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g\n", a(i, j));
            out += buf;
        }
    return out;
}

Vector read_vector_file(const std::filesystem::path& path)
{
    const DenseMatrix m = read_matrix_market_file(path);
    if (m.cols() != 1 && m.rows() != 1)
        throw std::runtime_error("'" + path.string() + "' is not a vector (" + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ")");
    return m.entries();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace semikrylov
