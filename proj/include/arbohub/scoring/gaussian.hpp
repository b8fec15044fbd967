#pragma once

#include <stdexcept>
#include <string>

namespace arbohub::scoring {

enum class ScoringErrc {
    degenerate_interval,
    invalid_number,
    invalid_scale,
    length_mismatch,
    empty_input,
    no_overlap,
};

const char* to_string(ScoringErrc code);

class ScoringError : public std::runtime_error {
public:
    ScoringError(ScoringErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ScoringErrc code() const noexcept { return code_; }

private:
    ScoringErrc code_;
};

// Normal predictive distribution N(mu, sigma) built from a median and a
// prediction interval.
struct GaussianForecast {
    double mu = 0.0;
    double sigma = 1.0;

    static GaussianForecast from_interval(double pred, double lower, double upper);
};

// The interval is read as a 95% band: sigma = (upper - lower) / 4.
double sigma_from_interval(double lower, double upper);

// Closed-form CRPS of N(mu, sigma) at observation y:
//   sigma * (w * (2 Phi(w) - 1) + 2 phi(w) - 1/sqrt(pi)),  w = (y - mu) / sigma.
// Always >= 0. Lower is better.
double crps_normal(double mu, double sigma, double y);

// log(phi(w) / sigma), the log predictive density at y. Higher is better.
double log_score_normal(double mu, double sigma, double y);

}  // namespace arbohub::scoring
