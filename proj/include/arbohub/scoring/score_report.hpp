#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arbohub/domain/civil_date.hpp"
#include "arbohub/domain/model.hpp"
#include "arbohub/domain/prediction.hpp"
#include "json.hpp"

namespace arbohub::scoring {

enum class Metric { mae, mse, log_score, crps };
enum class Orientation { lower_is_better, higher_is_better };

inline constexpr std::array<Metric, 4> kAllMetrics{Metric::mae, Metric::mse, Metric::log_score,
                                                   Metric::crps};

std::string_view to_string(Metric metric);
std::string_view to_string(Orientation orientation);
std::optional<Metric> parse_metric(std::string_view text);
Orientation orientation_of(Metric metric);

struct Observation {
    CivilDate date;
    std::string adm_key;
    double value = 0.0;
};

// Observed counts keyed by (date, adm key).
class ObservationSeries {
public:
    // Throws std::invalid_argument on a repeated (date, adm key) pair or a
    // negative or non-finite value.
    void add(CivilDate date, std::string adm_key, double value);

    std::optional<double> find(CivilDate date, const std::string& adm_key) const;

    const std::vector<Observation>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<Observation> entries_;
    std::map<std::pair<CivilDate, std::string>, std::size_t> index_;
};

struct UnmatchedRow {
    std::size_t row = 0;
    std::string reason;
};

struct ScoreReport {
    std::int64_t prediction_id = 0;
    double crps = 0.0;
    double log_score = 0.0;
    double mae = 0.0;
    double mse = 0.0;
    std::size_t n_matched = 0;
    std::size_t n_unmatched = 0;
    CivilDate first_matched;
    CivilDate last_matched;
    std::vector<UnmatchedRow> unmatched;

    double value(Metric metric) const;
};

// Inner-joins prediction rows to observations on (date, adm key at `level`)
// and averages the four metrics over matched rows in row order. Rows with a
// zero-width interval are excluded and reported. Throws ScoringError
// (no_overlap) when nothing matches.
ScoreReport score_prediction(const PredictionRecord& prediction, AdmLevel level,
                             const ObservationSeries& observations);

// {"prediction_id", "scores", "orientation", "n_matched", "n_unmatched",
//  "matched_range", "unmatched"}. With `only` set, "scores" and
// "orientation" carry that metric alone.
nlohmann::json to_json(const ScoreReport& report, std::optional<Metric> only = std::nullopt);

}  // namespace arbohub::scoring
