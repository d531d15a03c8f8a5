#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace icct {

/// One named table of numeric columns.
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // each row matches `columns`
};

/// Metadata plus any number of tables, written as one CSV document:
/// `# key = value` lines first, then per table a `# table: name` marker,
/// the header row and the data. Output is byte-deterministic (insertion
/// order, 9 significant digits).
struct ResultBundle {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<ResultTable> tables;

    void add(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }
    void add(const std::string& key, double value);
};

void emit(const ResultBundle& bundle, std::ostream& os);
void emit(const ResultBundle& bundle, const std::string& path);

}  // namespace icct
