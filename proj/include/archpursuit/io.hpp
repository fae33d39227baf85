#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "archpursuit/matrix.hpp"

namespace archpursuit {

struct CsvOptions {
    bool skip_header = false;
};

/// Rectangular numeric CSV, C locale. Throws FormatError with 1-based
/// coordinates on ragged rows or unparsable cells, IoError if unreadable.
Matrix load_csv(const std::filesystem::path& path, CsvOptions options = {});
Matrix parse_csv(std::istream& in, CsvOptions options = {});

/// Writes values with 17 significant digits; an empty matrix yields an empty file.
void save_csv(const Matrix& m, const std::filesystem::path& path,
              const std::vector<std::string>& header = {});
void write_csv(const Matrix& m, std::ostream& out, const std::vector<std::string>& header = {});

// Binary layout: "APMX", u64 rows, u64 cols, rows*cols float64, all little-endian.
Matrix load_binary(const std::filesystem::path& path);
void save_binary(const Matrix& m, const std::filesystem::path& path);

/// Dispatches on extension: ".bin"/".apmx" is binary, anything else CSV.
Matrix load_matrix(const std::filesystem::path& path, CsvOptions options = {});

} // namespace archpursuit
