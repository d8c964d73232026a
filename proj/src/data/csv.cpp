#include "modeswitch/data.hpp"
#include "modeswitch/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace modeswitch {

namespace {

constexpr std::string_view kResponseColumn = "switch";

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

Dataset read_csv(std::istream& in, const Schema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV: missing header");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_line(line);
    const std::size_t p = schema.features.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = trim(header[c]);
        const bool known = (c < p && name == schema.features[c].name) ||
                           (c == p && name == kResponseColumn);
        if (!known) {
            if (c < p + 1)
                throw DataError("unknown column '" + std::string(name) + "' at position " +
                                std::to_string(c + 1) + " (expected '" +
                                (c < p ? schema.features[c].name : std::string(kResponseColumn)) +
                                "')");
            throw DataError("unknown column '" + std::string(name) + "'");
        }
    }
    if (header.size() != p + 1)
        throw DataError("header has " + std::to_string(header.size()) + " columns, expected " +
                        std::to_string(p + 1));

    std::vector<double> rows;
    std::vector<int> response;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row_no;
        const auto cells = split_line(line);
        if (cells.size() != p + 1)
            throw DataError("row " + std::to_string(row_no) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(p + 1));
        for (std::size_t c = 0; c <= p; ++c) {
            const auto cell = trim(cells[c]);
            const std::string column = c < p ? schema.features[c].name : std::string(kResponseColumn);
            if (cell.empty())
                throw DataError("missing value at row " + std::to_string(row_no) + ", column " + column);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw DataError("non-numeric value '" + std::string(cell) + "' at row " +
                                std::to_string(row_no) + ", column " + column);
            if (c < p) {
                rows.push_back(value);
            } else {
                if (value != 0.0 && value != 1.0)
                    throw DataError("response not binary at row " + std::to_string(row_no));
                response.push_back(static_cast<int>(value));
            }
        }
    }
    return Dataset(schema.features, std::move(rows), std::move(response), schema.segment_keys,
                   schema.reference_segment);
}

Dataset load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (const auto& spec : data.specs()) out << spec.name << ',';
    out << kResponseColumn << '\n';
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        for (double v : data.row(i)) out << format_double(v) << ',';
        out << data.response(i) << '\n';
    }
}

} // namespace modeswitch
