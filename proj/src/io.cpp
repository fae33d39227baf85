#include "archpursuit/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

#include "archpursuit/errors.hpp"

namespace archpursuit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size()) {
        throw FormatError("cannot parse cell (" + std::to_string(row) + "," + std::to_string(col) +
                              ") as a number: '" + std::string(cell) + "'",
                          row, col);
    }
    if (!std::isfinite(value)) {
        throw FormatError("non-finite value at (" + std::to_string(row) + "," + std::to_string(col) + ")",
                          row, col);
    }
    return value;
}

void put_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64_le(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

constexpr std::array<char, 4> kMagic{'A', 'P', 'M', 'X'};

} // namespace

Matrix parse_csv(std::istream& in, CsvOptions options) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::string line;
    bool header_pending = options.skip_header;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        ++rows;
        std::size_t col = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = view.find(',', start);
            const auto cell = view.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                 : comma - start);
            values.push_back(parse_cell(cell, rows, ++col));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 1) {
            cols = col;
        } else if (col != cols) {
            throw FormatError("ragged row " + std::to_string(rows) + ": expected " + std::to_string(cols) +
                                  " cells, found " + std::to_string(col),
                              rows);
        }
    }
    return Matrix(rows, cols, std::move(values));
}

Matrix load_csv(const std::filesystem::path& path, CsvOptions options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_csv(in, options);
}

void write_csv(const Matrix& m, std::ostream& out, const std::vector<std::string>& header) {
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
        out << '\n';
    }
    std::array<char, 64> buf{};
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            // Shortest representation that round-trips exactly.
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(i, j));
            if (j) out << ',';
            out.write(buf.data(), res.ptr - buf.data());
        }
        out << '\n';
    }
}

void save_csv(const Matrix& m, const std::filesystem::path& path, const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_csv(m, out, header);
    if (!out) throw IoError("write failed for " + path.string());
}

Matrix load_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw FormatError("bad magic in " + path.string(), 0);
    const std::uint64_t rows = get_u64_le(in);
    const std::uint64_t cols = get_u64_le(in);
    if (!in) throw FormatError("truncated header in " + path.string(), 0);
    std::vector<double> values(rows * cols);
    for (auto& v : values) {
        v = std::bit_cast<double>(get_u64_le(in));
        if (!in) throw FormatError("truncated payload in " + path.string(), 0);
    }
    Matrix m(rows, cols, std::move(values));
    if (!all_finite(m)) throw FormatError("non-finite value in " + path.string(), 0);
    return m;
}

void save_binary(const Matrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kMagic.data(), kMagic.size());
    put_u64_le(out, m.rows());
    put_u64_le(out, m.cols());
    for (double v : m.values()) put_u64_le(out, std::bit_cast<std::uint64_t>(v));
    if (!out) throw IoError("write failed for " + path.string());
}

Matrix load_matrix(const std::filesystem::path& path, CsvOptions options) {
    const auto ext = path.extension().string();
    if (ext == ".bin" || ext == ".apmx") return load_binary(path);
    return load_csv(path, options);
}

} // namespace archpursuit
