#include "rbds/io.hpp"

#include <charconv>
#include <string>

#include "rbds/error.hpp"

namespace rbds {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

bool to_double(std::string_view s, double& v) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
}

} // namespace

std::vector<double> parse_series(std::string_view text, std::size_t column) {
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;
    std::size_t lineno = 0;
    for (auto line : split(text, '\n')) {
        ++lineno;
        if (line.empty()) continue;
        rows.emplace_back(lineno, split(line, ','));
    }
    std::size_t first = 0;
    double v = 0;
    if (!rows.empty()) {
        const auto& head = rows[0].second;
        const auto probe = head.size() > column ? head[column] : head[0];
        if (!to_double(probe, v)) first = 1;
    }
    std::vector<double> out;
    // Table mode needs at least two rows of equal width; anything else is a
    // flat list of values split on commas and newlines.
    bool table = rows.size() - first >= 2;
    for (std::size_t i = first; i < rows.size() && table; ++i)
        table = rows[i].second.size() >= 2 && rows[i].second.size() == rows[first].second.size();
    if (!table) {
        if (column != 0) fail(ErrorCode::ParseError, "--column needs a table with one value per row and column");
        for (std::size_t i = first; i < rows.size(); ++i)
            for (auto field : rows[i].second) {
                if (field.empty()) continue;
                if (!to_double(field, v))
                    fail(ErrorCode::ParseError,
                         "line " + std::to_string(rows[i].first) + ": not a number: " + std::string(field));
                out.push_back(v);
            }
        return out;
    }
    for (std::size_t i = first; i < rows.size(); ++i) {
        const auto& [no, fields] = rows[i];
        if (fields.size() <= column)
            fail(ErrorCode::ParseError, "line " + std::to_string(no) + ": no column " + std::to_string(column));
        if (!to_double(fields[column], v))
            fail(ErrorCode::ParseError, "line " + std::to_string(no) + ": not a number: " + std::string(fields[column]));
        out.push_back(v);
    }
    return out;
}

} // namespace rbds
