#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace srgbm::harness {

/// Column-named table of typed cells, emitted as CSV with one header row.
/// Doubles are written with 17 significant digits (and always carry a '.',
/// an exponent, or inf) so that parse(emit(T)) == T.
class ResultTable {
public:
    using Cell = std::variant<double, std::int64_t, std::string>;
    using Row = std::vector<Cell>;

    explicit ResultTable(std::vector<std::string> columns);

    void add_row(Row row);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<Row>& rows() const { return rows_; }
    std::size_t row_count() const { return rows_.size(); }

    std::string to_csv() const;
    static ResultTable from_csv(const std::string& text);

    bool operator==(const ResultTable& other) const = default;

private:
    std::vector<std::string> columns_;
    std::vector<Row> rows_;
};

/// Formats one cell the way to_csv() does.
std::string format_cell(const ResultTable::Cell& cell);

/// Writes text to path, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

std::string read_text_file(const std::string& path);

}  // namespace srgbm::harness
