#pragma once

#include <map>
#include <string>
#include <vector>

#include "easta/errors.hpp"

namespace easta {

// Rectangular table of finite reals with embedded metadata; the CSV form
// is the plot-data interchange format (deterministic: 12 significant
// digits, metadata as leading "# key=value" comment lines).
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> metadata;

    void add_row(std::vector<double> row);  // rejects wrong arity / non-finite
    std::string to_csv() const;
    void write_csv(const std::string& path) const;
};

std::string format_sig12(double v);

} // namespace easta
