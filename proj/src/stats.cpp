#include "famicom/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace famicom {

std::vector<double> fractional_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double avg = static_cast<double>(i + j + 2) / 2.0;  // 1-based positions i..j
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace {

bool is_constant(const std::vector<double>& v) {
    for (double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

double exact_permutation_p(const std::vector<double>& rx, std::vector<double> ry, double rho_obs) {
    std::sort(ry.begin(), ry.end());
    std::uint64_t total = 0;
    std::uint64_t at_least = 0;
    const double threshold = std::abs(rho_obs) - 1e-12;
    do {
        ++total;
        if (std::abs(pearson(rx, ry)) >= threshold) ++at_least;
    } while (std::next_permutation(ry.begin(), ry.end()));
    return static_cast<double>(at_least) / static_cast<double>(total);
}

double t_approximation_p(double rho, std::size_t n) {
    if (std::abs(rho) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = rho * std::sqrt(df / (1.0 - rho * rho));
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DegenerateInput("spearman: length mismatch");
    if (x.size() < 3) throw DegenerateInput("spearman: need at least 3 points");
    if (is_constant(x) || is_constant(y)) throw DegenerateInput("spearman: constant sequence");

    const std::vector<double> rx = fractional_ranks(x);
    const std::vector<double> ry = fractional_ranks(y);

    SpearmanResult out;
    out.rho = pearson(rx, ry);
    out.p_value = x.size() <= 10 ? exact_permutation_p(rx, ry, out.rho)
                                 : t_approximation_p(out.rho, x.size());
    return out;
}

CorrelationReport bin_and_correlate(const std::vector<std::pair<double, bool>>& points, int n_bins) {
    if (n_bins < 3) throw DegenerateInput("bin_and_correlate: need at least 3 bins");
    if (points.size() < static_cast<std::size_t>(n_bins)) {
        throw DegenerateInput("bin_and_correlate: fewer records than bins");
    }

    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Stable over ties so bin membership is identical across platforms.
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return points[a].first < points[b].first; });

    CorrelationReport report;
    report.n_bins = n_bins;
    report.n_records = static_cast<int>(points.size());

    const std::size_t base = points.size() / static_cast<std::size_t>(n_bins);
    const std::size_t extra = points.size() % static_cast<std::size_t>(n_bins);
    std::size_t cursor = 0;
    for (int b = 0; b < n_bins; ++b) {
        const std::size_t size = base + (static_cast<std::size_t>(b) < extra ? 1 : 0);
        MeasureBin bin;
        bin.count = static_cast<int>(size);
        const double lo = points[idx[cursor]].first;
        const double hi = points[idx[cursor + size - 1]].first;
        bin.midpoint = (lo + hi) / 2.0;
        int correct = 0;
        for (std::size_t i = cursor; i < cursor + size; ++i) {
            if (points[idx[i]].second) ++correct;
        }
        bin.accuracy = static_cast<double>(correct) / static_cast<double>(size);
        report.bins.push_back(bin);
        cursor += size;
    }

    std::vector<double> mids, accs;
    mids.reserve(report.bins.size());
    accs.reserve(report.bins.size());
    for (const MeasureBin& b : report.bins) {
        mids.push_back(b.midpoint);
        accs.push_back(b.accuracy);
    }
    const SpearmanResult s = spearman(mids, accs);
    report.rho = s.rho;
    report.p_value = s.p_value;
    return report;
}

}  // namespace famicom
