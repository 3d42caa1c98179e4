#include "featgrid/csv.hpp"

#include "featgrid/error.hpp"

namespace featgrid {

std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<CsvRecord> records;
    CsvRecord current{1, {}};
    std::string field;
    std::size_t line = 1;
    bool in_quotes = false;
    bool closed_quote = false;  // current field was quoted and the quote closed
    bool any_quote = false;     // current record contains a quoted field

    auto fail = [&](const char* what) {
        throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
    };
    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        closed_quote = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.fields.size() == 1 && current.fields[0].empty() && !any_quote;
        if (!blank) records.push_back(std::move(current));
        current = CsvRecord{line, {}};
        any_quote = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                    closed_quote = true;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == ',') {
            end_field();
        } else if (c == '\n' || (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
            if (c == '\r') ++i;
            ++line;
            end_record();
        } else if (closed_quote) {
            fail("unexpected character after closing quote");
        } else if (c == '"') {
            if (!field.empty()) fail("stray quote inside unquoted field");
            in_quotes = true;
            any_quote = true;
        } else {
            field += c;
        }
    }
    if (in_quotes) fail("unterminated quoted field");
    if (!field.empty() || !current.fields.empty() || any_quote) end_record();
    return records;
}

}  // namespace featgrid
