#include <doctest.h>

#include <cmath>

#include "famicom/hashing.hpp"
#include "famicom/stats.hpp"

using namespace famicom;

namespace {

/// Classical tie-free oracle: 1 - 6*sum(d^2) / (n*(n^2-1)).
double classical_rho(const std::vector<double>& rx, const std::vector<double>& ry) {
    const double n = static_cast<double>(rx.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

std::vector<double> permutation_1_to_n(Rng& rng, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    rng.shuffle(v);
    return v;
}

}  // namespace

TEST_CASE("fractional ranks with and without ties") {
    CHECK(fractional_ranks({10, 20, 30}) == std::vector<double>{1, 2, 3});
    CHECK(fractional_ranks({1, 2, 2, 3}) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(fractional_ranks({5, 5, 5}) == std::vector<double>{2, 2, 2});
    CHECK(fractional_ranks({3, 1, 2}) == std::vector<double>{3, 1, 2});
}

TEST_CASE("spearman endpoints") {
    CHECK(spearman({1, 2, 3}, {10, 20, 30}).rho == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3}, {3, 2, 1}).rho == doctest::Approx(-1.0));
}

TEST_CASE("the classical five-point example") {
    const SpearmanResult r = spearman({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5});
    CHECK(r.rho == doctest::Approx(0.8).epsilon(1e-12));
    // Exact two-sided permutation p over 5! arrangements (16/120).
    CHECK(r.p_value == doctest::Approx(0.13333333333333333).epsilon(1e-12));
}

TEST_CASE("perfect three-point correlation has permutation p of one third") {
    const SpearmanResult r = spearman({1, 2, 3}, {10, 20, 30});
    CHECK(r.p_value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("ties use average ranks") {
    const SpearmanResult r = spearman({1, 1, 2}, {1, 2, 3});
    CHECK(r.rho == doctest::Approx(0.8660254037844387).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("t-approximation matches the reference implementation") {
    const std::vector<double> x = {4, 9, 13, 14, 15, 17, 11, 16, 2, 7,
                                   1, 8, 5, 19, 6, 20, 18, 3, 10, 12};
    const std::vector<double> y = {5, 1, 17, 13, 7, 15, 20, 6, 19, 11,
                                   10, 16, 3, 8, 18, 4, 9, 12, 2, 14};
    const SpearmanResult r = spearman(x, y);
    CHECK(r.rho == doctest::Approx(-0.15488721804511277).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(0.51438268007528265).epsilon(1e-9));

    std::vector<double> x12, y12 = {3, 1, 2, 5, 4, 7, 6, 9, 8, 11, 12, 10};
    for (int i = 1; i <= 12; ++i) x12.push_back(i);
    const SpearmanResult r12 = spearman(x12, y12);
    CHECK(r12.rho == doctest::Approx(0.9370629370629372).epsilon(1e-12));
    CHECK(r12.p_value == doctest::Approx(6.9931649532105398e-06).epsilon(1e-6));
}

TEST_CASE("oracle equivalence on tie-free vectors") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> x = permutation_1_to_n(rng, 20);
        const std::vector<double> y = permutation_1_to_n(rng, 20);
        CHECK(std::abs(spearman(x, y).rho - classical_rho(x, y)) < 1e-12);
    }
}

TEST_CASE("monotone transforms leave rho untouched") {
    Rng rng(78);
    const std::vector<double> x = permutation_1_to_n(rng, 15);
    const std::vector<double> y = permutation_1_to_n(rng, 15);
    std::vector<double> x_cubed(x);
    for (double& v : x_cubed) v = v * v * v;
    CHECK(spearman(x, y).rho == spearman(x_cubed, y).rho);
    std::vector<double> y_exp(y);
    for (double& v : y_exp) v = std::exp(v / 4.0);
    CHECK(spearman(x, y).rho == spearman(x, y_exp).rho);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(spearman({1, 1, 1}, {1, 2, 3}), DegenerateInput);
    CHECK_THROWS_AS(spearman({1, 2, 3}, {4, 4, 4}), DegenerateInput);
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2}), DegenerateInput);
    CHECK_THROWS_AS(spearman({1, 2, 3}, {1, 2}), DegenerateInput);
}

TEST_CASE("equal-frequency binning on a hand-worked case") {
    const std::vector<std::pair<double, bool>> points = {
        {1, false}, {2, false}, {3, true}, {4, false}, {5, true}, {6, true}};
    const CorrelationReport report = bin_and_correlate(points, 3);
    REQUIRE(report.bins.size() == 3);
    CHECK(report.bins[0].midpoint == doctest::Approx(1.5));
    CHECK(report.bins[1].midpoint == doctest::Approx(3.5));
    CHECK(report.bins[2].midpoint == doctest::Approx(5.5));
    CHECK(report.bins[0].accuracy == doctest::Approx(0.0));
    CHECK(report.bins[1].accuracy == doctest::Approx(0.5));
    CHECK(report.bins[2].accuracy == doctest::Approx(1.0));
    CHECK(report.rho == doctest::Approx(1.0));
    CHECK(report.n_records == 6);

    int total = 0;
    for (const MeasureBin& b : report.bins) total += b.count;
    CHECK(total == report.n_records);
}

TEST_CASE("uneven splits spread the remainder over the leading bins") {
    std::vector<std::pair<double, bool>> points;
    for (int i = 0; i < 7; ++i) points.emplace_back(i, i % 2 == 0);
    const CorrelationReport report = bin_and_correlate(points, 3);
    REQUIRE(report.bins.size() == 3);
    CHECK(report.bins[0].count == 3);
    CHECK(report.bins[1].count == 2);
    CHECK(report.bins[2].count == 2);
}

TEST_CASE("binning rejects degenerate shapes") {
    std::vector<std::pair<double, bool>> two = {{1, true}, {2, false}};
    CHECK_THROWS_AS(bin_and_correlate(two, 3), DegenerateInput);
    std::vector<std::pair<double, bool>> points;
    for (int i = 0; i < 10; ++i) points.emplace_back(i, true);
    CHECK_THROWS_AS(bin_and_correlate(points, 2), DegenerateInput);
    // Constant accuracy across bins degenerates inside spearman.
    CHECK_THROWS_AS(bin_and_correlate(points, 5), DegenerateInput);
}
