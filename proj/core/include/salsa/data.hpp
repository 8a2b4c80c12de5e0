#pragma once

#include <optional>
#include <string>
#include <vector>

#include "salsa/normalization.hpp"

namespace salsa {

struct TabularDataset {
    Matrix x;                               // n x D features
    Vector y;                               // n targets
    std::vector<std::string> feature_names; // unique, target excluded
    std::string target_name;
    std::string source;

    long rows() const { return x.rows(); }
    long cols() const { return x.cols(); }
};

// Target column addressed by header name or 0-based index.
struct ColumnRef {
    static ColumnRef by_name(std::string name) { return {std::move(name), {}}; }
    static ColumnRef by_index(int index) { return {{}, index}; }
    // "name" if it matches a header, else a parseable integer index.
    static ColumnRef parse(const std::string& text);

    std::optional<std::string> name;
    std::optional<int> index;
};

struct CsvOptions {
    char delimiter = ',';
    // Off by default: dirty rows are errors, not silent drops.
    bool drop_bad_rows = false;
};

struct CsvLoadReport {
    std::vector<long> dropped_rows;  // 1-based data row numbers (header excluded)
};

TabularDataset load_csv(const std::string& path, const ColumnRef& target,
                        const CsvOptions& options = {},
                        CsvLoadReport* report = nullptr);

// Header row + rows of numeric cells, reals at 17 significant digits so a
// reload reproduces every value bit for bit.
void save_csv(const std::string& path, const TabularDataset& ds,
              const CsvOptions& options = {});
void save_matrix_csv(const std::string& path,
                     const std::vector<std::string>& column_names,
                     const Matrix& values, const CsvOptions& options = {},
                     const std::vector<std::string>& meta_lines = {});

struct SplitResult {
    TabularDataset train;
    TabularDataset test;
};

// Seeded shuffle, first ceil(fraction*n) rows to train; exact partition.
SplitResult train_test_split(const TabularDataset& ds, double fraction,
                             std::uint64_t seed);

// Per-column means/sds (population convention) plus target stats. Constant
// feature columns are an error naming the offending columns.
NormalizationStats normalization_stats(const TabularDataset& ds);
NormalizationStats normalization_stats(const Matrix& x, const Vector& y);

// "%.17g" (shortest exact decimal would also do; 17 digits is simplest to
// guarantee round-trip equality)
std::string format_real(double value);

}  // namespace salsa
