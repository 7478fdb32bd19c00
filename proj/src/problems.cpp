#include "pipecg/problems.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pipecg {

SparseMatrixCsr poisson2d(int nx, int ny) {
    if (nx < 1 || ny < 1) throw DimensionMismatchError("grid extents must be >= 1");
    const std::int64_t n64 = static_cast<std::int64_t>(nx) * ny;
    if (n64 > 250'000'000) throw DimensionMismatchError("poisson2d grid too large");
    const int n = static_cast<int>(n64);

    std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> vals;
    col_idx.reserve(static_cast<std::size_t>(n) * 5);
    vals.reserve(static_cast<std::size_t>(n) * 5);

    auto id = [nx](int ix, int iy) { return iy * nx + ix; };
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int r = id(ix, iy);
            if (iy > 0) { col_idx.push_back(id(ix, iy - 1)); vals.push_back(-1.0); }
            if (ix > 0) { col_idx.push_back(id(ix - 1, iy)); vals.push_back(-1.0); }
            col_idx.push_back(r); vals.push_back(4.0);
            if (ix < nx - 1) { col_idx.push_back(id(ix + 1, iy)); vals.push_back(-1.0); }
            if (iy < ny - 1) { col_idx.push_back(id(ix, iy + 1)); vals.push_back(-1.0); }
            row_ptr[r + 1] = static_cast<int>(col_idx.size());
        }
    }
    return SparseMatrixCsr(n, std::move(row_ptr), std::move(col_idx), std::move(vals));
}

std::pair<DenseVector, DenseVector> rhs_from_solution(const SparseMatrixCsr& A,
                                                      RhsMode mode) {
    const int n = A.n();
    const double value = mode == RhsMode::ones ? 1.0 : 1.0 / std::sqrt(static_cast<double>(n));
    DenseVector x_true(static_cast<std::size_t>(n), value);
    DenseVector b = spmv(A, x_true);
    return {std::move(b), std::move(x_true)};
}

SpectralInterval spectral_interval_poisson(int nx, int ny) {
    const double cx = std::cos(std::numbers::pi / (nx + 1));
    const double cy = std::cos(std::numbers::pi / (ny + 1));
    SpectralInterval s;
    s.interval = {0.0, 8.0};
    s.exact = {4.0 - 2.0 * cx - 2.0 * cy, 4.0 + 2.0 * cx + 2.0 * cy};
    return s;
}

LinearSystem make_poisson_system(int nx, int ny, RhsMode mode) {
    SparseMatrixCsr A = poisson2d(nx, ny);
    auto [b, x_true] = rhs_from_solution(A, mode);
    LinearSystem sys{std::move(A), std::move(b),
                     DenseVector(static_cast<std::size_t>(nx) * ny, 0.0),
                     std::move(x_true), spectral_interval_poisson(nx, ny).interval};
    return sys;
}

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

SparseMatrixCsr load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path, 0);
    return load_matrix_market(in);
}

SparseMatrixCsr load_matrix_market(std::istream& in) {
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    strip_cr(line);
    ++lineno;
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix" ||
        lower(format) != "coordinate" || lower(field) != "real")
        throw ParseError("expected '%%MatrixMarket matrix coordinate real' header", lineno);
    const std::string sym = lower(symmetry);
    if (sym != "symmetric" && sym != "general")
        throw ParseError("unsupported symmetry kind: " + symmetry, lineno);

    // Comments, then the size line.
    long rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream sizes(line);
        if (!(sizes >> rows >> cols >> nnz))
            throw ParseError("malformed size line", lineno);
        break;
    }
    if (rows < 0) throw ParseError("missing size line", lineno);
    if (rows != cols) throw ParseError("matrix is not square", lineno);

    std::vector<SparseMatrixCsr::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(nnz) * (sym == "symmetric" ? 2 : 1));
    long seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line))
            throw ParseError("unexpected end of file: expected " +
                                 std::to_string(nnz) + " entries",
                             lineno);
        ++lineno;
        strip_cr(line);
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        long r, c;
        double v;
        if (!(entry >> r >> c >> v)) throw ParseError("malformed entry", lineno);
        if (r < 1 || r > rows || c < 1 || c > cols)
            throw ParseError("index out of range", lineno);
        entries.push_back({static_cast<int>(r - 1), static_cast<int>(c - 1), v});
        if (sym == "symmetric" && r != c)
            entries.push_back({static_cast<int>(c - 1), static_cast<int>(r - 1), v});
        ++seen;
    }

    try {
        return SparseMatrixCsr::from_triplets(static_cast<int>(rows), std::move(entries));
    } catch (const DimensionMismatchError& e) {
        throw ParseError(e.what(), 0);
    }
}

}  // namespace pipecg
