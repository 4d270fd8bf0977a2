#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpmean {

/// Raised on unreadable or malformed input; the CLI maps it to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed numeric column. Missing entries ("NA" or an empty CSV field) are
/// stored as NaN.
struct ParsedColumn {
    std::vector<double> values;
    bool had_missing = false;
};

/// Reads a plain numeric column (whitespace/newline separated) or a
/// single-column CSV with an optional header line. Reports bad rows with
/// their line numbers.
ParsedColumn parse_column(std::istream& in);
ParsedColumn parse_column_file(const std::string& path);  // "-" reads stdin

/// Compaction of a series with missing values, with the index map back to
/// the original time scale.
struct MissingRemap {
    std::vector<double> compact;
    std::vector<std::size_t> orig_index;  // orig_index[i] = j_{i+1}, 1-based
};

/// Drops NaN entries; requires at least one observed value.
MissingRemap remap_missing(const std::vector<double>& values);

/// Maps change-points of the compact series back: tau = j_{tau*}.
std::vector<std::size_t> map_back(const MissingRemap& remap,
                                  const std::vector<std::size_t>& compact_cps);

}  // namespace cpmean
