#include "easta/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace easta {

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw ContractError("ResultTable: row arity does not match columns");
    }
    for (double v : row) {
        if (!std::isfinite(v)) {
            throw ContractError("ResultTable: entries must be finite");
        }
    }
    rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
    std::ostringstream out;
    for (const auto& [key, value] : metadata) {
        out << "# " << key << "=" << value << "\n";
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << format_sig12(row[c]) << (c + 1 < row.size() ? "," : "\n");
        }
    }
    return out.str();
}

void ResultTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw ContractError("ResultTable: cannot open '" + path + "' for writing");
    }
    out << to_csv();
}

} // namespace easta
