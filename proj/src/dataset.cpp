#include "mswig/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mswig {

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool Dataset::has(const std::string& name) const {
    for (const auto& c : cols_)
        if (c.name == name) return true;
    return false;
}

const Column& Dataset::col(const std::string& name) const {
    for (const auto& c : cols_)
        if (c.name == name) return c;
    throw std::invalid_argument("unknown column: " + name);
}

void Dataset::add(Column c) {
    if (c.missing.empty()) c.missing.assign(c.values.size(), 0);
    if (c.values.size() != c.missing.size())
        throw std::invalid_argument("column " + c.name + " has inconsistent lengths");
    if (!cols_.empty() && static_cast<int>(c.values.size()) != n_)
        throw std::invalid_argument("column " + c.name + " length does not match dataset");
    if (has(c.name)) throw std::invalid_argument("duplicate column: " + c.name);
    n_ = static_cast<int>(c.values.size());
    cols_.push_back(std::move(c));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        size_t a = f.find_first_not_of(" \t");
        size_t b = f.find_last_not_of(" \t");
        f = a == std::string::npos ? "" : f.substr(a, b - a + 1);
    }
    return out;
}

}  // namespace

Dataset Dataset::from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty csv");
    auto header = split_line(line);
    std::vector<Column> cols(header.size());
    for (size_t j = 0; j < header.size(); ++j) {
        if (header[j].empty()) throw std::invalid_argument("empty column name in csv header");
        cols[j].name = header[j];
    }
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size())
            throw std::invalid_argument("csv row " + std::to_string(row) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(header.size()));
        for (size_t j = 0; j < fields.size(); ++j) {
            const std::string& f = fields[j];
            if (f.empty() || f == "NA" || f == "na" || f == "NaN" || f == "nan") {
                cols[j].values.push_back(std::nan(""));
                cols[j].missing.push_back(1);
            } else {
                double v;
                auto res = std::from_chars(f.data(), f.data() + f.size(), v);
                if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
                    throw std::invalid_argument("csv row " + std::to_string(row) + ", column " +
                                                cols[j].name + ": not a number: '" + f + "'");
                cols[j].values.push_back(v);
                cols[j].missing.push_back(0);
            }
        }
    }
    Dataset d;
    for (auto& c : cols) d.add(std::move(c));
    return d;
}

Dataset Dataset::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open csv file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_csv_text(os.str());
}

std::string Dataset::to_csv_text() const {
    std::ostringstream os;
    for (size_t j = 0; j < cols_.size(); ++j) {
        if (j) os << ",";
        os << cols_[j].name;
    }
    os << "\n";
    for (int i = 0; i < n_; ++i) {
        for (size_t j = 0; j < cols_.size(); ++j) {
            if (j) os << ",";
            os << (cols_[j].missing[i] ? "NA" : format_double(cols_[j].values[i]));
        }
        os << "\n";
    }
    return os.str();
}

void Dataset::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write csv file: " + path);
    out << to_csv_text();
}

Matrix Dataset::matrix(const std::vector<std::string>& names) const {
    Matrix m(n_, static_cast<int>(names.size()));
    for (size_t j = 0; j < names.size(); ++j) {
        const auto& c = col(names[j]);
        for (int i = 0; i < n_; ++i) {
            if (c.missing[i])
                throw std::invalid_argument("column " + names[j] + " has a missing value at row " +
                                            std::to_string(i));
            m.at(i, static_cast<int>(j)) = c.values[i];
        }
    }
    return m;
}

Roles parse_roles_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Roles r;
    r.treatment = j.value("treatment", "");
    r.selection = j.value("selection", "");
    r.outcome = j.value("outcome", "");
    if (r.outcome.empty()) r.outcome = j.value("outcomeProxy", "");
    if (j.count("covariates")) r.covariates = j["covariates"].get<std::vector<std::string>>();
    if (j.count("strata")) r.strata = j["strata"].get<std::vector<std::string>>();
    if (j.count("heterogeneity"))
        r.heterogeneity = j["heterogeneity"].get<std::vector<std::string>>();
    if (r.treatment.empty()) throw std::invalid_argument("roles: treatment is required");
    if (r.outcome.empty()) throw std::invalid_argument("roles: outcome is required");
    return r;
}

namespace {

void require_binary_complete(const Dataset& d, const std::string& name) {
    const auto& c = d.col(name);
    for (int i = 0; i < d.n(); ++i) {
        if (c.missing[i])
            throw std::invalid_argument("column " + name + " must have no missing values");
        if (c.values[i] != 0.0 && c.values[i] != 1.0)
            throw std::invalid_argument("column " + name + " must be binary 0/1");
    }
}

}  // namespace

void validate_roles(const Dataset& d, const Roles& r) {
    require_binary_complete(d, r.treatment);
    for (const auto& c : r.covariates) {
        const auto& col = d.col(c);
        for (int i = 0; i < d.n(); ++i)
            if (col.missing[i])
                throw std::invalid_argument("covariate " + c + " must have no missing values");
    }
    const auto& y = d.col(r.outcome);
    if (r.selection.empty()) {
        for (int i = 0; i < d.n(); ++i)
            if (y.missing[i])
                throw std::invalid_argument("outcome " + r.outcome +
                                            " has missing values but no selection column is set");
        return;
    }
    require_binary_complete(d, r.selection);
    const auto& s = d.col(r.selection);
    for (int i = 0; i < d.n(); ++i) {
        bool sel = s.values[i] == 1.0;
        if (sel && y.missing[i])
            throw std::invalid_argument("outcome missing at row " + std::to_string(i) +
                                        " although " + r.selection + "=1");
        if (!sel && !y.missing[i])
            throw std::invalid_argument("outcome present at row " + std::to_string(i) +
                                        " although " + r.selection + "=0");
    }
}

}  // namespace mswig
