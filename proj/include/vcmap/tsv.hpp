#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vcmap {

// One data row of a tab-separated file. line_no is 1-based and refers to the
// physical line in the file, comments and blanks included.
struct TsvRow {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
};

// Reads a TSV file. Blank lines and lines starting with '#' are skipped.
// The first data line must equal `header` exactly; it is consumed and not
// returned. Every remaining row must have the same number of fields as the
// header. Throws ParseError on any violation, NotFoundError if the file
// cannot be opened.
std::vector<TsvRow> read_tsv(const std::string& path,
                             const std::vector<std::string>& header);

// Splits one line on tabs. A trailing '\r' is stripped first.
std::vector<std::string> split_tabs(const std::string& line);

// Parses a strictly positive decimal integer; throws ParseError mentioning
// `context` otherwise.
std::int64_t parse_id(const std::string& text, const std::string& context);

// Parses a non-negative decimal integer; throws ParseError otherwise.
int parse_group_id(const std::string& text, const std::string& context);

// True if text is a lowercase code token: [a-z][a-z0-9_]*.
bool is_code_token(const std::string& text);

}  // namespace vcmap
