#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "arbohub/datastore/dataset_store.hpp"
#include "arbohub/datastore/records.hpp"
#include "arbohub/domain/model.hpp"
#include "arbohub/domain/prediction.hpp"
#include "arbohub/scoring/score_report.hpp"

namespace arbohub::datastore {

// Which infodengue column serves as ground truth.
enum class ObservedColumn { casos, casos_est };

std::string_view to_string(ObservedColumn column);
std::optional<ObservedColumn> parse_observed_column(std::string_view text);

inline constexpr std::string_view kNationalKey = "BR";

class UnknownAdmKey : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Canonical key at `level`: "BR", an uppercase UF or a municipality geocode.
// Throws UnknownAdmKey; level 3 has no observed data.
std::string canonical_adm_key(AdmLevel level, std::string_view key);

// Sums weekly cases per (data_iniSE, key at `level`). Weeks without data are
// absent. Records of every disease passed in are summed together.
scoring::ObservationSeries aggregate_case_weeks(std::span<const CaseWeekRecord> records,
                                                AdmLevel level,
                                                ObservedColumn column = ObservedColumn::casos);

// Observed series for one unit, restricted to [start, end] on data_iniSE.
scoring::ObservationSeries observed_series_for(const DatasetStore& store, Disease disease,
                                               AdmLevel level, std::string_view adm_key,
                                               std::optional<CivilDate> start = std::nullopt,
                                               std::optional<CivilDate> end = std::nullopt,
                                               ObservedColumn column = ObservedColumn::casos);

struct ScoreWindow {
    std::optional<CivilDate> start;
    std::optional<CivilDate> end;
};

// Scores the rows dated inside `window` against `cases`. Rows outside the
// window are ignored; unmatched row indices refer to the full prediction.
scoring::ScoreReport score_with_cases(const PredictionRecord& prediction, AdmLevel level,
                                      std::span<const CaseWeekRecord> cases,
                                      const ScoreWindow& window = {},
                                      ObservedColumn column = ObservedColumn::casos);

// Loads the cases covering the prediction's dates from `store`, then scores.
scoring::ScoreReport score_against_store(const DatasetStore& store,
                                         const PredictionRecord& prediction,
                                         const ModelRecord& model, const ScoreWindow& window = {},
                                         ObservedColumn column = ObservedColumn::casos);

}  // namespace arbohub::datastore
