#include "arbohub/scoring/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace arbohub::scoring {

const char* to_string(ScoringErrc code) {
    switch (code) {
        case ScoringErrc::degenerate_interval: return "DegenerateInterval";
        case ScoringErrc::invalid_number: return "InvalidNumber";
        case ScoringErrc::invalid_scale: return "InvalidScale";
        case ScoringErrc::length_mismatch: return "LengthMismatch";
        case ScoringErrc::empty_input: return "EmptyInput";
        case ScoringErrc::no_overlap: return "NoOverlap";
    }
    return "ScoringError";
}

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ScoringError(ScoringErrc::invalid_number, std::string{name} + " is not finite");
    }
}

void require_scale(double sigma) {
    if (!std::isfinite(sigma) || !(sigma > 0.0)) {
        throw ScoringError(ScoringErrc::invalid_scale, "sigma must be positive and finite");
    }
}

}  // namespace

double sigma_from_interval(double lower, double upper) {
    require_finite(lower, "lower");
    require_finite(upper, "upper");
    if (!(upper > lower)) {
        throw ScoringError(ScoringErrc::degenerate_interval, "upper must exceed lower");
    }
    return (upper - lower) / 4.0;
}

GaussianForecast GaussianForecast::from_interval(double pred, double lower, double upper) {
    require_finite(pred, "pred");
    return GaussianForecast{pred, sigma_from_interval(lower, upper)};
}

double crps_normal(double mu, double sigma, double y) {
    require_scale(sigma);
    require_finite(mu, "mu");
    require_finite(y, "y");
    const double w = (y - mu) / sigma;
    const double pdf = std::exp(-0.5 * w * w) / std::sqrt(2.0 * std::numbers::pi);
    // 2 Phi(w) - 1 == erf(w / sqrt(2)), which keeps precision in both tails.
    const double two_cdf_minus_one = std::erf(w / std::numbers::sqrt2);
    // The bracket is convex in w with its minimum 0.2337 at w = 0.
    return sigma * (w * two_cdf_minus_one + 2.0 * pdf - 1.0 / std::sqrt(std::numbers::pi));
}

double log_score_normal(double mu, double sigma, double y) {
    require_scale(sigma);
    require_finite(mu, "mu");
    require_finite(y, "y");
    const double w = (y - mu) / sigma;
    return -0.5 * w * w - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma);
}

}  // namespace arbohub::scoring
