#pragma once

#include <utility>
#include <vector>

#include "famicom/errors.hpp"

namespace famicom {

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;
};

/// Fractional (average) ranks, 1-based; ties share the mean of their positions.
std::vector<double> fractional_ranks(const std::vector<double>& values);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Spearman rank correlation with average ranks for ties. Two-sided p-value:
/// exact permutation for n <= 10, t-approximation with n-2 df otherwise.
/// Rejects constant sequences and n < 3.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

struct MeasureBin {
    double midpoint = 0.0;  // (min + max) / 2 of the bin's measure values
    double accuracy = 0.0;
    int count = 0;
};

struct CorrelationReport {
    std::vector<MeasureBin> bins;
    double rho = 0.0;
    double p_value = 1.0;
    int n_bins = 0;
    int n_records = 0;
};

/// Equal-frequency binning of (measure, correct) points by measure value,
/// then Spearman of (bin midpoint, bin accuracy).
CorrelationReport bin_and_correlate(const std::vector<std::pair<double, bool>>& points, int n_bins);

}  // namespace famicom
