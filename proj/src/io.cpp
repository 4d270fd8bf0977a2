#include "cpmean/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cpmean {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_token(const std::string& token, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(token, &pos);
    } catch (...) {
        return false;
    }
    return pos == token.size();
}

}  // namespace

ParsedColumn parse_column(std::istream& in) {
    ParsedColumn col;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        const bool has_comma = line.find(',') != std::string::npos;
        std::vector<std::string> tokens;
        if (has_comma) {
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ',')) tokens.push_back(trim(field));
            if (!line.empty() && line.back() == ',') tokens.push_back("");
            if (tokens.size() > 1) {
                throw DataError("line " + std::to_string(line_no) +
                                ": expected a single column");
            }
        } else {
            std::stringstream ss(line);
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
        }
        if (tokens.empty()) {
            first_content_line = false;
            continue;
        }
        for (const std::string& tok : tokens) {
            double v = 0.0;
            if (tok.empty() || tok == "NA") {
                col.values.push_back(std::numeric_limits<double>::quiet_NaN());
                col.had_missing = true;
            } else if (parse_token(tok, v)) {
                if (std::isnan(v)) {
                    throw DataError("line " + std::to_string(line_no) +
                                    ": NaN row (use NA for missing values)");
                }
                col.values.push_back(v);
            } else if (first_content_line) {
                // Header line: skip it wholesale.
                col.values.clear();
                col.had_missing = false;
                break;
            } else {
                throw DataError("line " + std::to_string(line_no) +
                                ": cannot parse value '" + tok + "'");
            }
        }
        first_content_line = false;
    }
    if (col.values.empty()) throw DataError("no numeric values in input");
    return col;
}

ParsedColumn parse_column_file(const std::string& path) {
    if (path == "-") return parse_column(std::cin);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    return parse_column(in);
}

MissingRemap remap_missing(const std::vector<double>& values) {
    MissingRemap remap;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isnan(values[i])) {
            remap.compact.push_back(values[i]);
            remap.orig_index.push_back(i + 1);
        }
    }
    if (remap.compact.empty()) {
        throw DataError("remap_missing: all values are missing");
    }
    return remap;
}

std::vector<std::size_t> map_back(const MissingRemap& remap,
                                  const std::vector<std::size_t>& compact_cps) {
    std::vector<std::size_t> out(compact_cps.size());
    for (std::size_t i = 0; i < compact_cps.size(); ++i) {
        if (compact_cps[i] < 1 || compact_cps[i] > remap.orig_index.size()) {
            throw std::invalid_argument("map_back: index out of range");
        }
        out[i] = remap.orig_index[compact_cps[i] - 1];
    }
    return out;
}

}  // namespace cpmean
