#include "salsa/data.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "salsa/rng.hpp"

namespace salsa {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

ColumnRef ColumnRef::parse(const std::string& text) {
    if (text.empty()) throw ValidationError("target column must not be empty");
    char* end = nullptr;
    errno = 0;
    const long value = std::strtol(text.c_str(), &end, 10);
    if (end && *end == '\0' && errno == 0) {
        return by_index(static_cast<int>(value));
    }
    return by_name(text);
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_cell(const std::string& raw, double* out) {
    const std::string text = trim(raw);
    if (text.empty()) return false;
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE) return false;
    if (!std::isfinite(value)) return false;
    *out = value;
    return true;
}

int resolve_target_index(const std::vector<std::string>& header, const ColumnRef& target) {
    if (target.index) {
        const int idx = *target.index;
        if (idx < 0 || idx >= static_cast<int>(header.size())) {
            throw MissingTarget("target column index out of range");
        }
        return idx;
    }
    if (target.name) {
        for (size_t i = 0; i < header.size(); ++i) {
            if (header[i] == *target.name) return static_cast<int>(i);
        }
        throw MissingTarget("target column '" + *target.name + "' not found in header");
    }
    throw MissingTarget("no target column specified");
}

}  // namespace

TabularDataset load_csv(const std::string& path, const ColumnRef& target,
                        const CsvOptions& options, CsvLoadReport* report) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile("empty file: " + path);
    std::vector<std::string> header = split_line(line, options.delimiter);
    for (auto& name : header) name = trim(name);
    if (header.empty()) throw EmptyFile("header row has no columns: " + path);

    std::set<std::string> unique(header.begin(), header.end());
    if (unique.size() != header.size()) {
        throw ValidationError("duplicate column names in header: " + path);
    }

    const int target_idx = resolve_target_index(header, target);
    const int total_cols = static_cast<int>(header.size());
    const int feature_cols = total_cols - 1;
    if (feature_cols < 1) throw ValidationError("no feature columns besides the target");

    std::vector<double> features;
    std::vector<double> targets;
    long data_row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++data_row;
        std::vector<std::string> cells = split_line(line, options.delimiter);
        if (static_cast<int>(cells.size()) != total_cols) {
            if (options.drop_bad_rows) {
                if (report) report->dropped_rows.push_back(data_row);
                continue;
            }
            throw ParseError("row " + std::to_string(data_row) + ": expected " +
                                 std::to_string(total_cols) + " cells, got " +
                                 std::to_string(cells.size()),
                             data_row, static_cast<long>(cells.size()) + 1);
        }
        std::vector<double> row(static_cast<size_t>(total_cols));
        bool ok = true;
        long bad_col = 0;
        for (int c = 0; c < total_cols; ++c) {
            if (!parse_cell(cells[static_cast<size_t>(c)], &row[static_cast<size_t>(c)])) {
                ok = false;
                bad_col = c + 1;
                break;
            }
        }
        if (!ok) {
            if (options.drop_bad_rows) {
                if (report) report->dropped_rows.push_back(data_row);
                continue;
            }
            throw ParseError("row " + std::to_string(data_row) + ", column " +
                                 std::to_string(bad_col) + ": not a finite number",
                             data_row, bad_col);
        }
        targets.push_back(row[static_cast<size_t>(target_idx)]);
        for (int c = 0; c < total_cols; ++c) {
            if (c != target_idx) features.push_back(row[static_cast<size_t>(c)]);
        }
    }
    if (targets.empty()) throw EmptyFile("no data rows: " + path);

    TabularDataset ds;
    const long n = static_cast<long>(targets.size());
    ds.x = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        features.data(), n, feature_cols);
    ds.y = Eigen::Map<Vector>(targets.data(), n);
    ds.target_name = header[static_cast<size_t>(target_idx)];
    for (int c = 0; c < total_cols; ++c) {
        if (c != target_idx) ds.feature_names.push_back(header[static_cast<size_t>(c)]);
    }
    ds.source = path;
    return ds;
}

void save_csv(const std::string& path, const TabularDataset& ds, const CsvOptions& options) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    const char d = options.delimiter;
    for (const auto& name : ds.feature_names) out << name << d;
    out << ds.target_name << "\n";
    for (long i = 0; i < ds.rows(); ++i) {
        for (long c = 0; c < ds.cols(); ++c) out << format_real(ds.x(i, c)) << d;
        out << format_real(ds.y[i]) << "\n";
    }
}

void save_matrix_csv(const std::string& path, const std::vector<std::string>& column_names,
                     const Matrix& values, const CsvOptions& options,
                     const std::vector<std::string>& meta_lines) {
    if (static_cast<long>(column_names.size()) != values.cols()) {
        throw DimensionMismatch("save_matrix_csv: header/column mismatch");
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    for (const auto& meta : meta_lines) out << "# meta: " << meta << "\n";
    const char d = options.delimiter;
    for (size_t c = 0; c < column_names.size(); ++c) {
        out << column_names[c] << (c + 1 < column_names.size() ? std::string(1, d) : "\n");
    }
    for (long i = 0; i < values.rows(); ++i) {
        for (long c = 0; c < values.cols(); ++c) {
            out << format_real(values(i, c)) << (c + 1 < values.cols() ? std::string(1, d) : "\n");
        }
    }
}

SplitResult train_test_split(const TabularDataset& ds, double fraction, std::uint64_t seed) {
    const long n = ds.rows();
    if (n < 2) throw TooFewRows("train_test_split: need at least 2 rows");
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ValidationError("train_test_split: fraction must be in (0, 1)");
    }
    const std::vector<long> order = shuffled_indices(n, seed);
    const long n_train = static_cast<long>(
        std::ceil(fraction * static_cast<double>(n)));

    auto take = [&](long begin, long end) {
        TabularDataset part;
        part.x.resize(end - begin, ds.cols());
        part.y.resize(end - begin);
        for (long i = begin; i < end; ++i) {
            part.x.row(i - begin) = ds.x.row(order[static_cast<size_t>(i)]);
            part.y[i - begin] = ds.y[order[static_cast<size_t>(i)]];
        }
        part.feature_names = ds.feature_names;
        part.target_name = ds.target_name;
        part.source = ds.source;
        return part;
    };
    return {take(0, n_train), take(n_train, n)};
}

NormalizationStats normalization_stats(const Matrix& x, const Vector& y) {
    const long n = x.rows();
    if (n < 2) throw TooFewRows("normalization_stats: need at least 2 rows");
    if (y.size() != n) throw DimensionMismatch("normalization_stats: X/Y row mismatch");
    if (!x.allFinite() || !y.allFinite()) {
        throw NonFinite("normalization_stats: non-finite values");
    }

    NormalizationStats stats;
    stats.means = x.colwise().mean();
    stats.sds.resize(x.cols());
    std::string degenerate;
    for (long c = 0; c < x.cols(); ++c) {
        const double lo = x.col(c).minCoeff();
        const double hi = x.col(c).maxCoeff();
        if (lo == hi) {
            degenerate += (degenerate.empty() ? "" : ", ") + std::to_string(c);
            continue;
        }
        stats.sds[c] = std::sqrt((x.col(c).array() - stats.means[c]).square().mean());
    }
    if (!degenerate.empty()) {
        throw DegenerateColumn("constant feature column(s): " + degenerate);
    }
    stats.y_mean = y.mean();
    stats.y_sd = std::sqrt((y.array() - stats.y_mean).square().mean());
    if (stats.y_sd < 1e-12) stats.y_sd = 1e-12;
    return stats;
}

NormalizationStats normalization_stats(const TabularDataset& ds) {
    return normalization_stats(ds.x, ds.y);
}

}  // namespace salsa
