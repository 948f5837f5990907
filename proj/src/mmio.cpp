#include "xrip/mmio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "xrip/errors.hpp"

namespace xrip {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool next_data_line(std::istream& in, std::string& line, long& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        return true;
    }
    return false;
}

double parse_entry(const std::string& tok, long lineno) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError("invalid numeric entry '" + tok + "'", lineno);
    }
    if (pos != tok.size()) {
        throw ParseError("trailing characters in entry '" + tok + "'", lineno);
    }
    if (!std::isfinite(v)) {
        throw ParseError("non-finite entry '" + tok + "'", lineno);
    }
    return v;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
    long lineno = 0;
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty input", 1);
    }
    ++lineno;

    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw ParseError("missing %%MatrixMarket matrix header", lineno);
    }
    format = lower(format);
    if (format != "array" && format != "coordinate") {
        throw ParseError("unsupported format '" + format + "'", lineno);
    }
    if (lower(field) != "real" || lower(symmetry) != "general") {
        throw ParseError("only 'real general' matrices are supported", lineno);
    }

    if (!next_data_line(in, line, lineno)) {
        throw ParseError("missing dimension line", lineno + 1);
    }
    std::istringstream dims(line);
    long rows = -1, cols = -1, nnz = -1;
    dims >> rows >> cols;
    if (format == "coordinate") dims >> nnz;
    if (!dims || rows <= 0 || cols <= 0 || (format == "coordinate" && nnz < 0)) {
        throw ParseError("invalid dimension line '" + line + "'", lineno);
    }

    Matrix M = Matrix::Zero(rows, cols);
    if (format == "array") {
        // Column-major body, one entry per line.
        for (long c = 0; c < cols; ++c) {
            for (long r = 0; r < rows; ++r) {
                if (!next_data_line(in, line, lineno)) {
                    throw ParseError("body ended early: expected " + std::to_string(rows * cols) +
                                         " entries",
                                     lineno + 1);
                }
                std::istringstream es(line);
                std::string tok;
                es >> tok;
                M(r, c) = parse_entry(tok, lineno);
                std::string extra;
                if (es >> extra) {
                    throw ParseError("expected one entry per line", lineno);
                }
            }
        }
        if (next_data_line(in, line, lineno)) {
            throw ParseError("body has more entries than rows*cols", lineno);
        }
    } else {
        for (long e = 0; e < nnz; ++e) {
            if (!next_data_line(in, line, lineno)) {
                throw ParseError("coordinate body ended early", lineno + 1);
            }
            std::istringstream es(line);
            long r, c;
            std::string tok;
            es >> r >> c >> tok;
            if (!es || r < 1 || r > rows || c < 1 || c > cols) {
                throw ParseError("invalid coordinate entry '" + line + "'", lineno);
            }
            M(r - 1, c - 1) = parse_entry(tok, lineno);
        }
    }
    return M;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    return read_matrix(in);
}

void write_matrix(const Matrix& M, std::ostream& out) {
    validate_matrix(M);
    out << "%%MatrixMarket matrix array real general\n";
    out << M.rows() << " " << M.cols() << "\n";
    char buf[64];
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
        for (Eigen::Index r = 0; r < M.rows(); ++r) {
            std::snprintf(buf, sizeof(buf), "%.17g", M(r, c));
            out << buf << "\n";
        }
    }
}

void write_matrix_file(const Matrix& M, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write_matrix(M, out);
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

}  // namespace xrip
