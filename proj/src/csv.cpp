#include "icct/csv.hpp"

#include <cstdio>
#include <fstream>

#include "icct/errors.hpp"

namespace icct {

namespace {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

void ResultBundle::add(const std::string& key, double value) { metadata.emplace_back(key, format_number(value)); }

void emit(const ResultBundle& bundle, std::ostream& os) {
    for (const auto& [key, value] : bundle.metadata) os << "# " << key << " = " << value << "\n";
    for (const ResultTable& table : bundle.tables) {
        os << "# table: " << table.name << "\n";
        for (size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
        os << "\n";
        for (const auto& row : table.rows) {
            if (row.size() != table.columns.size())
                throw Error("row width does not match the header of table " + table.name);
            for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
            os << "\n";
        }
    }
}

void emit(const ResultBundle& bundle, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    emit(bundle, f);
    if (!f) throw Error("write failed for " + path);
}

}  // namespace icct
