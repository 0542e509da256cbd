#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mswig/dataset.hpp"
#include "mswig/independence.hpp"

namespace mswig {

// Tests a conditional independence statement against factual data. Statements
// carrying counterfactual labels are rejected with an error; statements that
// condition on selection are evaluated on the selected subsample.
enum class TestMethod {
    ChiSquareStratified,   // discrete columns only, strata over the given tuple
    PartialRegressionWald, // OLS of the single left variable with an HC0 Wald block test
    Permutation,           // permute left within given-strata, simulated null
};

TestMethod parse_test_method(const std::string& s);
const char* to_string(TestMethod m);

struct TestOptions {
    double alpha = 0.05;
    int permutations = 999;
    std::uint64_t seed = 0;
    double min_expected = 5.0;  // chi-square strata below this are merged with a neighbour
};

struct TestResult {
    std::string statement;
    TestMethod method = TestMethod::ChiSquareStratified;
    double statistic = 0.0;
    double dof = 0.0;  // 0 when the null is simulated
    double p_value = 1.0;
    bool reject = false;
    int n_used = 0;
    int strata_used = 0;
    std::string note;
};

TestResult test_independence(const Dataset& data, const CIStatement& stmt, TestMethod method,
                             const TestOptions& options = {});

struct CatalogTestRow {
    TestResult result;
    double p_adjusted = 1.0;  // Bonferroni over all tested statements
    bool reject_adjusted = false;
};

struct CatalogTestReport {
    std::vector<CatalogTestRow> rows;
    double alpha = 0.05;
    bool any_reject = false;
};

CatalogTestReport test_catalog(const Dataset& data, const std::vector<CIStatement>& statements,
                               TestMethod method, const TestOptions& options = {});

}  // namespace mswig
