#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mswig {

// Row-major numeric matrix.
struct Matrix {
    int n = 0, p = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int rows, int cols) : n(rows), p(cols), data(static_cast<size_t>(rows) * cols, 0.0) {}
    double* row(int i) { return data.data() + static_cast<size_t>(i) * p; }
    const double* row(int i) const { return data.data() + static_cast<size_t>(i) * p; }
    double& at(int i, int j) { return data[static_cast<size_t>(i) * p + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * p + j]; }
};

struct Column {
    std::string name;
    std::vector<double> values;     // undefined where missing
    std::vector<uint8_t> missing;   // 1 = missing
};

class Dataset {
public:
    int n() const { return n_; }
    const std::vector<Column>& columns() const { return cols_; }
    bool has(const std::string& name) const;
    const Column& col(const std::string& name) const;
    void add(Column c);

    // Missing cells read as empty fields or NA; written back as NA.
    static Dataset read_csv(const std::string& path);
    static Dataset from_csv_text(const std::string& text);
    std::string to_csv_text() const;
    void write_csv(const std::string& path) const;

    Matrix matrix(const std::vector<std::string>& names) const;  // errors on missing cells

private:
    int n_ = 0;
    std::vector<Column> cols_;
};

// Column roles for estimation.
struct Roles {
    std::string treatment;
    std::string selection;       // empty: outcome fully observed
    std::string outcome;         // proxy column
    std::vector<std::string> covariates;
    std::vector<std::string> strata;
    std::vector<std::string> heterogeneity;
};

Roles parse_roles_json(const std::string& text);

// treatment and selection binary with no missing cells; covariates complete;
// outcome missing exactly where selection = 0.
void validate_roles(const Dataset& d, const Roles& r);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace mswig
