#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "arbohub/domain/prediction.hpp"

namespace arbohub {
namespace {

const std::string kCommit = "0123456789abcdef0123456789abcdef01234567";

ModelRecord state_model() {
    ModelRecord m;
    m.id = 1;
    m.name = "BB-M";
    m.adm_level = AdmLevel::state;
    m.time_resolution = TimeResolution::week;
    return m;
}

nlohmann::json weekly_rows(int n, const nlohmann::json& adm1 = "MG") {
    auto rows = nlohmann::json::array();
    CivilDate date = CivilDate::from_ymd(2022, 10, 9);
    for (int i = 0; i < n; ++i) {
        rows.push_back({{"date", date.to_string()},
                        {"pred", 10.0 + i},
                        {"lower", 5.0 + i},
                        {"upper", 20.0 + i},
                        {"adm_1", adm1}});
        date = date.plus_days(7);
    }
    return rows;
}

nlohmann::json submission(nlohmann::json rows) {
    return {{"model", 1},
            {"description", "weekly forecast"},
            {"commit", kCommit},
            {"predict_date", "2022-10-01"},
            {"prediction", std::move(rows)}};
}

bool has_error(const ValidationErrors& errors, const std::string& field,
               std::optional<std::size_t> row) {
    return std::any_of(errors.begin(), errors.end(), [&](const FieldError& e) {
        return e.field == field && e.row == row;
    });
}

TEST(ValidatePredictionTest, AcceptsStateRows) {
    auto result = validate_prediction(submission(weekly_rows(4)), state_model());
    ASSERT_TRUE(result.ok()) << to_json(result.errors).dump();
    EXPECT_EQ(result.value->rows.size(), 4u);
    EXPECT_EQ(result.value->rows[0].adm_1, "MG");
}

TEST(ValidatePredictionTest, NormalizesStateGeocodeToUf) {
    auto result = validate_prediction(submission(weekly_rows(2, 31)), state_model());
    ASSERT_TRUE(result.ok());
    EXPECT_EQ(result.value->rows[1].adm_1, "MG");
    result = validate_prediction(submission(weekly_rows(2, "31")), state_model());
    ASSERT_TRUE(result.ok());
    EXPECT_EQ(result.value->rows[0].adm_1, "MG");
    result = validate_prediction(submission(weekly_rows(2, "mg")), state_model());
    ASSERT_TRUE(result.ok());
    EXPECT_EQ(result.value->rows[0].adm_1, "MG");
}

TEST(ValidatePredictionTest, RejectsRowsLackingModelAdmColumn) {
    auto rows = weekly_rows(3);
    for (auto& r : rows) {
        r.erase("adm_1");
        r["adm_2"] = 3106200;
    }
    auto result = validate_prediction(submission(rows), state_model());
    ASSERT_FALSE(result.ok());
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(has_error(result.errors, "adm_1", i)) << i;
    }
    EXPECT_EQ(result.errors[0].reason, "adm_1 required");
}

TEST(ValidatePredictionTest, NullAdmCountsAsMissing) {
    auto rows = weekly_rows(2);
    rows[1]["adm_1"] = nullptr;
    auto result = validate_prediction(submission(rows), state_model());
    ASSERT_FALSE(result.ok());
    EXPECT_TRUE(has_error(result.errors, "adm_1", 1u));
}

TEST(ValidatePredictionTest, RejectsIntervalOrderingViolations) {
    auto rows = weekly_rows(3);
    rows[1]["lower"] = 10;
    rows[1]["pred"] = 5;
    rows[1]["upper"] = 20;
    rows[2]["pred"] = 25.0;
    auto result = validate_prediction(submission(rows), state_model());
    ASSERT_FALSE(result.ok());
    EXPECT_TRUE(has_error(result.errors, "pred", 1u));
    EXPECT_TRUE(has_error(result.errors, "pred", 2u));
    EXPECT_FALSE(has_error(result.errors, "pred", 0u));
}

TEST(ValidatePredictionTest, RejectsNullsInRequiredColumns) {
    auto rows = weekly_rows(4);
    rows[0]["date"] = nullptr;
    rows[1]["pred"] = nullptr;
    rows[2].erase("lower");
    rows[3]["upper"] = "20";
    auto result = validate_prediction(submission(rows), state_model());
    ASSERT_FALSE(result.ok());
    EXPECT_TRUE(has_error(result.errors, "date", 0u));
    EXPECT_TRUE(has_error(result.errors, "pred", 1u));
    EXPECT_TRUE(has_error(result.errors, "lower", 2u));
    EXPECT_TRUE(has_error(result.errors, "upper", 3u));
}

TEST(ValidatePredictionTest, RejectsMalformedCommit) {
    auto body = submission(weekly_rows(1));
    for (const char* bad : {"abc", "0123456789abcdef0123456789abcdef0123456",
                            "0123456789abcdef0123456789abcdef0123456g"}) {
        body["commit"] = bad;
        auto result = validate_prediction(body, state_model());
        ASSERT_FALSE(result.ok());
        EXPECT_TRUE(has_error(result.errors, "commit", std::nullopt));
    }
}

TEST(ValidatePredictionTest, RejectsDuplicateDateAdmPairs) {
    auto rows = weekly_rows(2);
    rows.push_back(rows[0]);
    rows[2]["adm_1"] = 31;  // same unit as "MG" once normalized
    auto result = validate_prediction(submission(rows), state_model());
    ASSERT_FALSE(result.ok());
    EXPECT_TRUE(has_error(result.errors, "date", 2u));
}

TEST(ValidatePredictionTest, AllowsSeveralUnitsInOneUpload) {
    auto rows = weekly_rows(2);
    auto sp = weekly_rows(2, "SP");
    rows.insert(rows.end(), sp.begin(), sp.end());
    EXPECT_TRUE(validate_prediction(submission(rows), state_model()).ok());
}

TEST(ValidatePredictionTest, RowCapAndEmptiness) {
    PredictionValidationOptions options;
    options.max_rows = 3;
    EXPECT_FALSE(validate_prediction(submission(weekly_rows(4)), state_model(), options).ok());
    EXPECT_TRUE(validate_prediction(submission(weekly_rows(3)), state_model(), options).ok());
    EXPECT_FALSE(validate_prediction(submission(nlohmann::json::array()), state_model()).ok());
}

TEST(ValidatePredictionTest, ModelIdMustMatch) {
    auto body = submission(weekly_rows(1));
    body["model"] = 2;
    auto result = validate_prediction(body, state_model());
    ASSERT_FALSE(result.ok());
    EXPECT_TRUE(has_error(result.errors, "model", std::nullopt));
}

TEST(ValidatePredictionTest, StrictSpacingOnlyWarns) {
    auto rows = weekly_rows(3);
    rows[2]["date"] = "2022-10-30";  // 14 days after the previous row
    PredictionValidationOptions options;
    auto plain = validate_prediction(submission(rows), state_model(), options);
    ASSERT_TRUE(plain.ok());
    EXPECT_TRUE(plain.warnings.empty());
    options.strict_spacing = true;
    auto strict = validate_prediction(submission(rows), state_model(), options);
    ASSERT_TRUE(strict.ok());
    ASSERT_EQ(strict.warnings.size(), 1u);
    EXPECT_EQ(strict.warnings[0].row, 2u);
}

TEST(ValidatePredictionTest, MunicipalityLevelAcceptsStringGeocode) {
    auto m = state_model();
    m.adm_level = AdmLevel::municipality;
    auto rows = weekly_rows(2);
    rows[0]["adm_2"] = 3106200;
    rows[1]["adm_2"] = "3106200";
    auto result = validate_prediction(submission(rows), m);
    ASSERT_TRUE(result.ok()) << to_json(result.errors).dump();
    EXPECT_EQ(result.value->rows[1].adm_2, 3106200);
    rows[1]["adm_2"] = 123;
    EXPECT_FALSE(validate_prediction(submission(rows), m).ok());
}

TEST(ValidatePredictionTest, PrevalidationSkipsModelRules) {
    auto rows = weekly_rows(2);
    for (auto& r : rows) r.erase("adm_1");
    EXPECT_TRUE(prevalidate_prediction(submission(rows)).ok());
    auto body = submission(rows);
    body["commit"] = std::string(39, 'a');
    EXPECT_FALSE(prevalidate_prediction(body).ok());
}

// Generated submissions: anything accepted re-validates to the same record,
// and every accepted row satisfies the interval and non-null invariants.
TEST(ValidatePredictionProperty, AcceptedRecordsAreFixedPoints) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> value(-5.0, 50.0);
    std::uniform_int_distribution<int> coin(0, 9);
    const std::vector<nlohmann::json> adm_values{"MG", "SP", 31, "35", "rj", "XX", nullptr};
    int accepted = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto rows = nlohmann::json::array();
        const int n = 1 + coin(rng);
        for (int i = 0; i < n; ++i) {
            double a = value(rng), b = value(rng), c = value(rng);
            if (coin(rng) > 1) {
                double v[3] = {a, b, c};
                std::sort(v, v + 3);
                a = v[0], b = v[1], c = v[2];
            }
            rows.push_back({{"date", CivilDate::from_ymd(2023, 1, 1).plus_days(7 * (coin(rng))).to_string()},
                            {"lower", a},
                            {"pred", b},
                            {"upper", c},
                            {"adm_1", adm_values[static_cast<std::size_t>(coin(rng)) % adm_values.size()]}});
        }
        auto first = validate_prediction(submission(rows), state_model());
        if (!first.ok()) continue;
        ++accepted;
        for (const auto& row : first.value->rows) {
            ASSERT_LE(row.lower, row.pred);
            ASSERT_LE(row.pred, row.upper);
            ASSERT_TRUE(row.adm_1.has_value());
        }
        auto second = validate_prediction(to_submission_json(*first.value), state_model());
        ASSERT_TRUE(second.ok());
        ASSERT_EQ(*second.value, *first.value);
    }
    EXPECT_GT(accepted, 20);
}

TEST(PredictionJsonTest, StoredFormRoundTrips) {
    auto rec = *validate_prediction(submission(weekly_rows(3)), state_model()).value;
    rec.id = 42;
    const auto j = to_json(rec);
    EXPECT_EQ(j.at("prediction").at(0).size(), 8u);
    EXPECT_EQ(prediction_from_json(j), rec);
}

}  // namespace
}  // namespace arbohub
