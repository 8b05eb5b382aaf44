#include "srgbm/harness/table.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "srgbm/errors.hpp"

namespace srgbm::harness {

namespace {

std::string format_double_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s = buf;
    // Bare integer renderings would re-parse as int64; mark them as doubles.
    if (s.find_first_of(".eE") == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

ResultTable::Cell parse_cell(const std::string& token) {
    if (!token.empty()) {
        std::int64_t i = 0;
        const auto [p_int, ec_int] =
            std::from_chars(token.data(), token.data() + token.size(), i);
        if (ec_int == std::errc() && p_int == token.data() + token.size()) return i;
        try {
            std::size_t used = 0;
            const double d = std::stod(token, &used);
            if (used == token.size()) return d;
        } catch (const std::exception&) {
        }
    }
    return token;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string token;
    std::stringstream ss(line);
    while (std::getline(ss, token, ',')) out.push_back(token);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw ConfigError("a table needs at least one column");
}

void ResultTable::add_row(Row row) {
    if (row.size() != columns_.size()) {
        throw ConfigError("row width " + std::to_string(row.size()) +
                          " does not match column count " + std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string format_cell(const ResultTable::Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_double_cell(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    const auto& s = std::get<std::string>(cell);
    if (s.find_first_of(",\n\"") != std::string::npos) {
        throw ConfigError("table strings must not contain commas, quotes or newlines");
    }
    return s;
}

std::string ResultTable::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const Row& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_cell(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

ResultTable ResultTable::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV");
    ResultTable table(split_line(line));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tokens = split_line(line);
        ResultTable::Row row;
        row.reserve(tokens.size());
        for (const auto& token : tokens) row.push_back(parse_cell(token));
        table.add_row(std::move(row));
    }
    return table;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace srgbm::harness
