#include "arbohub/scoring/point_metrics.hpp"

#include <cmath>

#include "arbohub/scoring/gaussian.hpp"

namespace arbohub::scoring {

namespace {

void check_lengths(std::span<const double> pred, std::span<const double> obs) {
    if (pred.size() != obs.size()) {
        throw ScoringError(ScoringErrc::length_mismatch, "prediction and observation lengths differ");
    }
    if (pred.empty()) throw ScoringError(ScoringErrc::empty_input, "no values to score");
}

}  // namespace

double mae(std::span<const double> pred, std::span<const double> obs) {
    check_lengths(pred, obs);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - obs[i]);
    return sum / static_cast<double>(pred.size());
}

double mse(std::span<const double> pred, std::span<const double> obs) {
    check_lengths(pred, obs);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - obs[i];
        sum += e * e;
    }
    return sum / static_cast<double>(pred.size());
}

}  // namespace arbohub::scoring
