#pragma once

#include <span>

namespace arbohub::scoring {

// Mean absolute and mean squared error. Both throw ScoringError on empty or
// length-mismatched input.
double mae(std::span<const double> pred, std::span<const double> obs);
double mse(std::span<const double> pred, std::span<const double> obs);

}  // namespace arbohub::scoring
