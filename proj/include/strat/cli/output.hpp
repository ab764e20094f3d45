#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <variant>
#include <vector>

namespace strat::cli {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// The first table is the primary result; the rest are written next to it.
struct Document {
    nlohmann::ordered_json metadata;
    std::vector<Table> tables;
};

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite values).
[[nodiscard]] std::string format_double(double v);

/// Quotes a field when it contains a comma, quote or line break.
[[nodiscard]] std::string csv_escape(const std::string& s);

void write_csv_table(std::ostream& os, const Table& t);

/// Path of auxiliary table `name` next to `path`: dir/stem.name.ext.
[[nodiscard]] std::string aux_path(const std::string& path, const std::string& name);

/// CSV: the primary table goes to `path` and every other table to aux_path(path, name).
/// An empty path writes all tables to `os`, each introduced by a "# table: name" line.
/// Throws IoError.
void write_csv(const Document& doc, const std::string& path, std::ostream& os);

/// One JSON document holding the metadata and every table. Throws IoError.
void write_json(const Document& doc, const std::string& path, std::ostream& os);

/// Lists the files write_csv/write_json would create for `path`.
[[nodiscard]] std::vector<std::string> output_files(const Document& doc, const std::string& path,
                                                    const std::string& format);

}  // namespace strat::cli
