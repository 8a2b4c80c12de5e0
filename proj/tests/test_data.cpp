#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <salsa/data.hpp>

#include "test_support.hpp"

using namespace salsa;

namespace {

struct TempFile {
    explicit TempFile(const std::string& contents) {
        char name[] = "/tmp/salsa_test_XXXXXX";
        const int fd = mkstemp(name);
        REQUIRE(fd >= 0);
        path = name;
        std::ofstream out(path);
        out << contents;
        close(fd);
    }
    ~TempFile() { std::remove(path.c_str()); }
    std::string path;
};

}  // namespace

TEST_CASE("load a small csv with the target in the last column") {
    TempFile file("a,b,target\n1,2,3\n4,5,6\n7,8,9\n");
    const TabularDataset ds = load_csv(file.path, ColumnRef::by_name("target"));
    CHECK(ds.rows() == 3);
    CHECK(ds.cols() == 2);
    CHECK(ds.y[2] == 9.0);
    CHECK(ds.x(1, 0) == 4.0);
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("blank cells are parse errors naming row and column") {
    TempFile file("a,b,y\n1,2,3\n4,,6\n");
    try {
        load_csv(file.path, ColumnRef::by_name("y"));
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.row == 2);
        CHECK(err.col == 2);
    }
}

TEST_CASE("drop-bad-rows mode reports what it dropped") {
    TempFile file("a,b,y\n1,2,3\nbad,5,6\n7,8,9\n");
    CsvOptions options;
    options.drop_bad_rows = true;
    CsvLoadReport report;
    const TabularDataset ds = load_csv(file.path, ColumnRef::by_index(2), options, &report);
    CHECK(ds.rows() == 2);
    REQUIRE(report.dropped_rows.size() == 1);
    CHECK(report.dropped_rows[0] == 2);
}

TEST_CASE("save then load reproduces every value") {
    TabularDataset ds;
    ds.x = testsup::random_matrix(5, 3, 41, -100.0, 100.0);
    ds.x(0, 0) = 1.0 / 3.0;
    ds.x(1, 1) = 1e-17;
    ds.y = testsup::random_vector(5, 42);
    ds.feature_names = {"f0", "f1", "f2"};
    ds.target_name = "y";

    TempFile file("");
    save_csv(file.path, ds);
    const TabularDataset back = load_csv(file.path, ColumnRef::by_name("y"));
    CHECK(back.x == ds.x);
    CHECK(back.y == ds.y);
}

TEST_CASE("missing target and empty files are rejected") {
    TempFile no_target("a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(no_target.path, ColumnRef::by_name("y")), MissingTarget);
    CHECK_THROWS_AS(load_csv(no_target.path, ColumnRef::by_index(5)), MissingTarget);
    TempFile empty("");
    CHECK_THROWS_AS(load_csv(empty.path, ColumnRef::by_name("y")), EmptyFile);
    TempFile header_only("a,b,y\n");
    CHECK_THROWS_AS(load_csv(header_only.path, ColumnRef::by_name("y")), EmptyFile);
    TempFile dup("a,a,y\n1,2,3\n");
    CHECK_THROWS_AS(load_csv(dup.path, ColumnRef::by_name("y")), ValidationError);
}

TEST_CASE("column ref parses names and indices") {
    const ColumnRef by_idx = ColumnRef::parse("3");
    CHECK(by_idx.index == 3);
    const ColumnRef by_name = ColumnRef::parse("price");
    CHECK(by_name.name == "price");
}

TEST_CASE("train/test split is an exact seeded partition") {
    TabularDataset ds;
    ds.x = testsup::random_matrix(10, 2, 7);
    ds.y = testsup::random_vector(10, 8);
    ds.feature_names = {"a", "b"};
    ds.target_name = "y";

    const SplitResult split = train_test_split(ds, 0.5, 99);
    CHECK(split.train.rows() == 5);
    CHECK(split.test.rows() == 5);

    const SplitResult again = train_test_split(ds, 0.5, 99);
    CHECK(split.train.x == again.train.x);
    CHECK(split.test.y == again.test.y);

    // partition: every original row appears exactly once across both parts
    std::vector<int> seen(10, 0);
    auto mark = [&](const TabularDataset& part) {
        for (long i = 0; i < part.rows(); ++i) {
            for (long r = 0; r < ds.rows(); ++r) {
                if (part.x.row(i) == ds.x.row(r) && part.y[i] == ds.y[r]) {
                    ++seen[static_cast<size_t>(r)];
                    break;
                }
            }
        }
    };
    mark(split.train);
    mark(split.test);
    for (int count : seen) CHECK(count == 1);

    CHECK_THROWS_AS(train_test_split(ds, 0.0, 1), ValidationError);
    CHECK_THROWS_AS(train_test_split(ds, 1.0, 1), ValidationError);
}

TEST_CASE("normalization stats basics") {
    Matrix x(2, 1);
    x << 1, -1;
    Vector y(2);
    y << 2, 4;
    const NormalizationStats stats = normalization_stats(x, y);
    CHECK(stats.means[0] == 0.0);
    CHECK(stats.sds[0] == 1.0);
    CHECK(stats.y_mean == 3.0);
    CHECK(stats.y_sd == 1.0);

    Matrix constant(2, 1);
    constant << 5, 5;
    CHECK_THROWS_AS(normalization_stats(constant, y), DegenerateColumn);
}

TEST_CASE("normalization applied to its own source standardizes it") {
    const Matrix x = testsup::random_matrix(40, 3, 50, -5.0, 9.0);
    const Vector y = testsup::random_vector(40, 51, 0.0, 100.0);
    const NormalizationStats stats = normalization_stats(x, y);
    const Matrix xn = stats.apply_x(x);
    for (long c = 0; c < 3; ++c) {
        CHECK(std::abs(xn.col(c).mean()) <= 1e-12);
        const double sd = std::sqrt((xn.col(c).array() - xn.col(c).mean()).square().mean());
        CHECK(std::abs(sd - 1.0) <= 1e-12);
    }
    // round trip
    CHECK((stats.invert_x(xn) - x).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((stats.invert_y(stats.apply_y(y)) - y).cwiseAbs().maxCoeff() <= 1e-12);
}
