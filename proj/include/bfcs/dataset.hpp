#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "bfcs/errors.hpp"
#include "bfcs/text.hpp"

namespace bfcs {

enum class ColumnRole { Marker, Trait };

// Column-oriented numeric data: rows are samples, columns are variables
// tagged as genetic markers or expression traits. Values are kept raw;
// centering is applied by the correlation step.
struct Dataset {
    std::size_t n_samples = 0;
    std::vector<std::string> names;
    std::vector<ColumnRole> roles;
    std::vector<std::vector<double>> columns;

    std::size_t n_columns() const { return columns.size(); }

    std::vector<std::size_t> marker_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < roles.size(); ++i) {
            if (roles[i] == ColumnRole::Marker) out.push_back(i);
        }
        return out;
    }

    std::vector<std::size_t> trait_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < roles.size(); ++i) {
            if (roles[i] == ColumnRole::Trait) out.push_back(i);
        }
        return out;
    }
};

// A parsed numeric table: header row of names, then one row per sample.
struct NumericTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;  // column-major
    std::size_t n_rows = 0;
};

struct LoadOptions {
    char delimiter = 0;  // 0 = sniff from the header (tab, else comma)
};

// Reads a TSV/CSV numeric table. First row holds column names; every
// later row holds one numeric value per column, decimal point '.', no
// missing cells.
inline NumericTable read_numeric_table(const std::string& path,
                                       const LoadOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    const char sep = options.delimiter != 0 ? options.delimiter
                                            : sniff_separator(strip_cr(line));

    NumericTable table;
    for (const auto field : split_fields(strip_cr(line), sep)) {
        if (field.empty()) throw DataError(path + ": empty column name in header");
        table.names.emplace_back(field);
    }
    table.columns.resize(table.names.size());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;  // tolerate a trailing blank line
        const auto fields = split_fields(text, sep);
        if (fields.size() != table.names.size()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.names.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c].empty()) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": missing value in column '" + table.names[c] + "'");
            }
            table.columns[c].push_back(parse_double(
                fields[c], path + ":" + std::to_string(line_no) + " column '" +
                               table.names[c] + "'"));
        }
        ++table.n_rows;
    }
    return table;
}

namespace detail {

inline bool is_constant_column(const std::vector<double>& column) {
    for (double v : column) {
        if (v != column.front()) return false;
    }
    return true;
}

inline void append_columns(Dataset& d, NumericTable&& table, ColumnRole role,
                           const std::string& path) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (is_constant_column(table.columns[c])) {
            throw DataError(path + ": column '" + table.names[c] +
                            "' is constant (zero variance)");
        }
        d.names.push_back(std::move(table.names[c]));
        d.roles.push_back(role);
        d.columns.push_back(std::move(table.columns[c]));
    }
}

}  // namespace detail

// Loads and merges an expression table (traits) and a genotype table
// (markers); rows are aligned by order. Marker columns come first in the
// merged dataset. Constant columns are rejected here, once, so the
// correlation step never divides by a zero norm.
inline Dataset load_dataset(const std::string& expression_path,
                            const std::string& genotype_path,
                            const LoadOptions& options = {}) {
    NumericTable expression = read_numeric_table(expression_path, options);
    NumericTable genotype = read_numeric_table(genotype_path, options);
    if (expression.n_rows != genotype.n_rows) {
        throw DataError("dimension mismatch: " + expression_path + " has " +
                        std::to_string(expression.n_rows) + " rows, " + genotype_path +
                        " has " + std::to_string(genotype.n_rows));
    }
    if (expression.n_rows < 3) {
        throw DataError("need at least 3 samples, got " +
                        std::to_string(expression.n_rows));
    }
    Dataset d;
    d.n_samples = expression.n_rows;
    detail::append_columns(d, std::move(genotype), ColumnRole::Marker, genotype_path);
    detail::append_columns(d, std::move(expression), ColumnRole::Trait, expression_path);
    return d;
}

// In-memory construction with the same validation as the file path.
inline Dataset make_dataset(std::size_t n_samples, std::vector<std::string> names,
                            std::vector<ColumnRole> roles,
                            std::vector<std::vector<double>> columns) {
    if (names.size() != roles.size() || names.size() != columns.size()) {
        throw DataError("make_dataset: names, roles, columns must have equal length");
    }
    for (const auto& col : columns) {
        if (col.size() != n_samples) {
            throw DataError("make_dataset: column length does not match n_samples");
        }
    }
    Dataset d;
    d.n_samples = n_samples;
    d.names = std::move(names);
    d.roles = std::move(roles);
    d.columns = std::move(columns);
    return d;
}

}  // namespace bfcs
