#include "arbohub/scoring/score_report.hpp"

#include <cmath>
#include <stdexcept>

#include "arbohub/scoring/gaussian.hpp"
#include "arbohub/scoring/point_metrics.hpp"

namespace arbohub::scoring {

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::mae: return "mae";
        case Metric::mse: return "mse";
        case Metric::log_score: return "log_score";
        case Metric::crps: return "crps";
    }
    return "crps";
}

std::string_view to_string(Orientation orientation) {
    return orientation == Orientation::lower_is_better ? "lower_is_better" : "higher_is_better";
}

std::optional<Metric> parse_metric(std::string_view text) {
    for (auto m : kAllMetrics) {
        if (to_string(m) == text) return m;
    }
    return std::nullopt;
}

Orientation orientation_of(Metric metric) {
    return metric == Metric::log_score ? Orientation::higher_is_better
                                       : Orientation::lower_is_better;
}

void ObservationSeries::add(CivilDate date, std::string adm_key, double value) {
    if (!std::isfinite(value) || value < 0.0) {
        throw std::invalid_argument("observed value must be a nonnegative number");
    }
    auto key = std::make_pair(date, adm_key);
    if (index_.contains(key)) {
        throw std::invalid_argument("duplicate observation for " + date.to_string() + ", " +
                                    adm_key);
    }
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back({date, std::move(adm_key), value});
}

std::optional<double> ObservationSeries::find(CivilDate date, const std::string& adm_key) const {
    auto it = index_.find(std::make_pair(date, adm_key));
    if (it == index_.end()) return std::nullopt;
    return entries_[it->second].value;
}

double ScoreReport::value(Metric metric) const {
    switch (metric) {
        case Metric::mae: return mae;
        case Metric::mse: return mse;
        case Metric::log_score: return log_score;
        case Metric::crps: return crps;
    }
    return crps;
}

ScoreReport score_prediction(const PredictionRecord& prediction, AdmLevel level,
                             const ObservationSeries& observations) {
    ScoreReport report;
    report.prediction_id = prediction.id;

    std::vector<double> preds, observed;
    double crps_sum = 0.0, log_sum = 0.0;
    for (std::size_t i = 0; i < prediction.rows.size(); ++i) {
        const auto& row = prediction.rows[i];
        const auto key = row.adm_key(level);
        if (!key) {
            report.unmatched.push_back({i, "row has no " + adm_column(level) + " value"});
            continue;
        }
        const auto y = observations.find(row.date, *key);
        if (!y) {
            report.unmatched.push_back(
                {i, "no observation for " + row.date.to_string() + ", " + *key});
            continue;
        }
        GaussianForecast forecast;
        try {
            forecast = GaussianForecast::from_interval(row.pred, row.lower, row.upper);
        } catch (const ScoringError& e) {
            report.unmatched.push_back({i, std::string{to_string(e.code())} + ": " + e.what()});
            continue;
        }
        crps_sum += crps_normal(forecast.mu, forecast.sigma, *y);
        log_sum += log_score_normal(forecast.mu, forecast.sigma, *y);
        preds.push_back(row.pred);
        observed.push_back(*y);
        if (report.n_matched == 0 || row.date < report.first_matched) report.first_matched = row.date;
        if (report.n_matched == 0 || row.date > report.last_matched) report.last_matched = row.date;
        ++report.n_matched;
    }
    report.n_unmatched = report.unmatched.size();
    if (report.n_matched == 0) {
        throw ScoringError(ScoringErrc::no_overlap,
                           "no prediction row matches an observation");
    }
    const auto n = static_cast<double>(report.n_matched);
    report.crps = crps_sum / n;
    report.log_score = log_sum / n;
    report.mae = mae(preds, observed);
    report.mse = mse(preds, observed);
    return report;
}

nlohmann::json to_json(const ScoreReport& report, std::optional<Metric> only) {
    nlohmann::json scores = nlohmann::json::object();
    nlohmann::json orientation = nlohmann::json::object();
    for (auto m : kAllMetrics) {
        if (only && *only != m) continue;
        scores[std::string{to_string(m)}] = report.value(m);
        orientation[std::string{to_string(m)}] = to_string(orientation_of(m));
    }
    auto unmatched = nlohmann::json::array();
    for (const auto& u : report.unmatched) {
        unmatched.push_back({{"row", u.row}, {"reason", u.reason}});
    }
    return {
        {"prediction_id", report.prediction_id},
        {"scores", std::move(scores)},
        {"orientation", std::move(orientation)},
        {"n_matched", report.n_matched},
        {"n_unmatched", report.n_unmatched},
        {"matched_range",
         {{"start", report.first_matched.to_string()}, {"end", report.last_matched.to_string()}}},
        {"unmatched", std::move(unmatched)},
    };
}

}  // namespace arbohub::scoring
