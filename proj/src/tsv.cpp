#include "vcmap/tsv.hpp"

#include <cctype>
#include <fstream>

#include "vcmap/errors.hpp"

namespace vcmap {

std::vector<std::string> split_tabs(const std::string& line) {
    std::string text = line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = text.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(text.substr(start));
            break;
        }
        fields.push_back(text.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::vector<TsvRow> read_tsv(const std::string& path,
                             const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw NotFoundError(path + ": cannot open file");

    std::vector<TsvRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() == 1 && fields[0].empty()) continue;  // whitespace-only
        if (!header_seen) {
            if (fields != header) {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected header row");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != header.size()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        rows.push_back(TsvRow{std::move(fields), line_no});
    }
    if (!header_seen) throw ParseError(path + ": missing header row");
    return rows;
}

std::int64_t parse_id(const std::string& text, const std::string& context) {
    if (text.empty() || text.size() > 18) {
        throw ParseError(context + ": bad id '" + text + "'");
    }
    std::int64_t value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw ParseError(context + ": bad id '" + text + "'");
        value = value * 10 + (c - '0');
    }
    if (value <= 0) throw ParseError(context + ": id must be positive, got '" + text + "'");
    return value;
}

int parse_group_id(const std::string& text, const std::string& context) {
    if (text.empty() || text.size() > 9) {
        throw ParseError(context + ": bad group id '" + text + "'");
    }
    int value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw ParseError(context + ": bad group id '" + text + "'");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

bool is_code_token(const std::string& text) {
    if (text.empty()) return false;
    if (text[0] < 'a' || text[0] > 'z') return false;
    for (char c : text) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

}  // namespace vcmap
