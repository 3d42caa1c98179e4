#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace featgrid {

struct CsvRecord {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

// RFC 4180: comma separated, optional double quotes with "" escapes, quoted
// fields may span lines. Accepts LF or CRLF and a leading UTF-8 BOM. Blank
// lines are skipped. `source` prefixes error messages.
std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source);

}  // namespace featgrid
