#include "arbohub/domain/prediction.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "arbohub/domain/geo.hpp"

namespace arbohub {

std::optional<std::string> PredictionRow::adm_key(AdmLevel level) const {
    switch (level) {
        case AdmLevel::national: return adm_0;
        case AdmLevel::state: return adm_1;
        case AdmLevel::municipality:
            return adm_2 ? std::optional<std::string>{std::to_string(*adm_2)} : std::nullopt;
        case AdmLevel::submunicipality:
            return adm_3 ? std::optional<std::string>{std::to_string(*adm_3)} : std::nullopt;
    }
    return std::nullopt;
}

bool is_commit_hash(std::string_view text) {
    return text.size() == 40 &&
           std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isxdigit(c); });
}

namespace {

const std::set<std::string, std::less<>> kSubmissionFields{"model", "description", "commit",
                                                           "predict_date", "prediction"};

bool is_digits(const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Integer geocode given either as a JSON integer or a string of digits.
std::optional<std::int64_t> integer_code(const nlohmann::json& v) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (is_digits(s) && s.size() <= 18) return std::stoll(s);
    }
    return std::nullopt;
}

std::optional<PredictionRow> parse_row(const nlohmann::json& j, std::size_t index,
                                       ValidationErrors& errors) {
    const auto before = errors.size();
    auto fail = [&](std::string field, std::string reason) {
        errors.push_back({std::move(field), std::move(reason), index});
    };
    if (!j.is_object()) {
        fail("", "row must be a JSON object");
        return std::nullopt;
    }
    for (const auto& [key, _] : j.items()) {
        if (std::find(kPredictionColumns.begin(), kPredictionColumns.end(), key) ==
            kPredictionColumns.end()) {
            fail(key, "unknown column");
        }
    }

    PredictionRow row;
    if (auto it = j.find("date"); it == j.end()) {
        fail("date", "required column missing");
    } else if (it->is_null()) {
        fail("date", "must not be null");
    } else if (!it->is_string()) {
        fail("date", "must be a YYYY-mm-dd string");
    } else if (auto d = CivilDate::parse(it->get<std::string>())) {
        row.date = *d;
    } else {
        fail("date", "must be a YYYY-mm-dd string");
    }

    auto number = [&](const char* name, double& dest) {
        auto it = j.find(name);
        if (it == j.end()) {
            fail(name, "required column missing");
        } else if (it->is_null()) {
            fail(name, "must not be null");
        } else if (!it->is_number()) {
            fail(name, "must be a number");
        } else {
            dest = it->get<double>();
            if (!std::isfinite(dest)) fail(name, "must be finite");
        }
    };
    number("pred", row.pred);
    number("lower", row.lower);
    number("upper", row.upper);

    auto present = [&](const char* name) -> const nlohmann::json* {
        auto it = j.find(name);
        if (it == j.end() || it->is_null()) return nullptr;
        return &*it;
    };
    if (auto v = present("adm_0")) {
        if (v->is_string() && geo::is_country_code(v->get<std::string>())) {
            row.adm_0 = v->get<std::string>();
        } else {
            fail("adm_0", "must be an ISO 3166-1 alpha-2 country code");
        }
    }
    if (auto v = present("adm_1")) {
        std::optional<std::string> uf;
        if (v->is_string()) {
            uf = geo::normalize_uf(v->get<std::string>());
        } else if (v->is_number_integer()) {
            if (auto u = geo::unit_by_code(v->get<int>())) uf = std::string{u->uf};
        }
        if (uf) {
            row.adm_1 = *uf;
        } else {
            fail("adm_1", "must be a state UF or two-digit state geocode");
        }
    }
    if (auto v = present("adm_2")) {
        auto code = integer_code(*v);
        if (code && geo::is_municipality_geocode(*code)) {
            row.adm_2 = *code;
        } else {
            fail("adm_2", "must be a 7-digit municipality geocode");
        }
    }
    if (auto v = present("adm_3")) {
        auto code = integer_code(*v);
        if (code && *code > 0) {
            row.adm_3 = *code;
        } else {
            fail("adm_3", "must be a positive integer geocode");
        }
    }

    if (errors.size() == before) {
        if (row.lower > row.upper) {
            fail("lower", "ordering violation: lower must not exceed upper");
        } else if (row.lower > row.pred) {
            fail("pred", "ordering violation: pred below lower");
        } else if (row.pred > row.upper) {
            fail("pred", "ordering violation: pred above upper");
        }
    }
    if (errors.size() != before) return std::nullopt;
    return row;
}

Validated<PredictionRecord> parse_submission(const nlohmann::json& candidate,
                                             const PredictionValidationOptions& options) {
    Validated<PredictionRecord> out;
    auto& errors = out.errors;
    if (!candidate.is_object()) {
        errors.push_back({"", "body must be a JSON object", std::nullopt});
        return out;
    }
    for (const auto& [key, _] : candidate.items()) {
        if (!kSubmissionFields.contains(key)) errors.push_back({key, "unknown field", std::nullopt});
    }

    PredictionRecord rec;
    if (auto it = candidate.find("model"); it == candidate.end() || it->is_null()) {
        errors.push_back({"model", "required field missing", std::nullopt});
    } else if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
        errors.push_back({"model", "must be a positive integer model id", std::nullopt});
    } else {
        rec.model = it->get<std::int64_t>();
    }
    if (auto it = candidate.find("description"); it != candidate.end() && !it->is_null()) {
        if (it->is_string()) {
            rec.description = it->get<std::string>();
        } else {
            errors.push_back({"description", "must be a string", std::nullopt});
        }
    }
    if (auto it = candidate.find("commit"); it == candidate.end() || it->is_null()) {
        errors.push_back({"commit", "required field missing", std::nullopt});
    } else if (!it->is_string() || !is_commit_hash(it->get<std::string>())) {
        errors.push_back({"commit", "must be a 40-character hexadecimal git hash", std::nullopt});
    } else {
        rec.commit = it->get<std::string>();
    }
    if (auto it = candidate.find("predict_date"); it == candidate.end() || it->is_null()) {
        errors.push_back({"predict_date", "required field missing", std::nullopt});
    } else if (auto d = it->is_string() ? CivilDate::parse(it->get<std::string>()) : std::nullopt) {
        rec.predict_date = *d;
    } else {
        errors.push_back({"predict_date", "must be a YYYY-mm-dd string", std::nullopt});
    }

    auto rows = candidate.find("prediction");
    if (rows == candidate.end() || rows->is_null()) {
        errors.push_back({"prediction", "required field missing", std::nullopt});
    } else if (!rows->is_array()) {
        errors.push_back({"prediction", "must be an array of row objects", std::nullopt});
    } else if (rows->empty()) {
        errors.push_back({"prediction", "must contain at least one row", std::nullopt});
    } else if (rows->size() > options.max_rows) {
        errors.push_back({"prediction",
                          "more than " + std::to_string(options.max_rows) + " rows", std::nullopt});
    } else {
        rec.rows.reserve(rows->size());
        for (std::size_t i = 0; i < rows->size(); ++i) {
            if (auto row = parse_row((*rows)[i], i, errors)) rec.rows.push_back(std::move(*row));
        }
    }

    if (errors.empty()) out.value = std::move(rec);
    return out;
}

// Clamps to the last day of the month when the day does not exist there.
CivilDate clamp(std::chrono::year_month_day ymd) {
    using namespace std::chrono;
    if (ymd.ok()) return CivilDate{sys_days{ymd}};
    return CivilDate{sys_days{ymd.year() / ymd.month() / last}};
}

long expected_gap_days(TimeResolution r, CivilDate from) {
    switch (r) {
        case TimeResolution::day: return 1;
        case TimeResolution::week: return 7;
        case TimeResolution::month: return from.days_until(clamp(from.ymd() + std::chrono::months{1}));
        case TimeResolution::year: return from.days_until(clamp(from.ymd() + std::chrono::years{1}));
    }
    return 0;
}

// Normalized adm key of a raw row cell, or nullopt when the cell is malformed
// (shape errors are reported by parse_row).
std::optional<std::string> raw_adm_key(const nlohmann::json& v, AdmLevel level) {
    switch (level) {
        case AdmLevel::national:
            if (v.is_string()) return v.get<std::string>();
            return std::nullopt;
        case AdmLevel::state:
            if (v.is_string()) return geo::normalize_uf(v.get<std::string>());
            if (v.is_number_integer()) {
                if (auto u = geo::unit_by_code(v.get<int>())) return std::string{u->uf};
            }
            return std::nullopt;
        case AdmLevel::municipality:
        case AdmLevel::submunicipality:
            if (auto code = integer_code(v)) return std::to_string(*code);
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

Validated<PredictionRecord> prevalidate_prediction(const nlohmann::json& candidate,
                                                   const PredictionValidationOptions& options) {
    return parse_submission(candidate, options);
}

Validated<PredictionRecord> validate_prediction(const nlohmann::json& candidate,
                                                const ModelRecord& model,
                                                const PredictionValidationOptions& options) {
    auto out = parse_submission(candidate, options);
    const auto column = adm_column(model.adm_level);

    if (auto it = candidate.is_object() ? candidate.find("model") : candidate.end();
        it != candidate.end() && it->is_number_integer() && it->get<std::int64_t>() != model.id) {
        out.errors.push_back({"model", "does not match the target model", std::nullopt});
    }

    // Model-dependent row rules run over the raw rows so that every failing
    // row is reported even when other rows failed shape checks.
    const auto rows = candidate.is_object() ? candidate.find("prediction") : candidate.end();
    if (rows != candidate.end() && rows->is_array() && rows->size() <= options.max_rows) {
        std::map<std::pair<std::string, std::string>, std::size_t> seen;
        for (std::size_t i = 0; i < rows->size(); ++i) {
            const auto& r = (*rows)[i];
            if (!r.is_object()) continue;
            auto adm = r.find(column);
            if (adm == r.end() || adm->is_null()) {
                out.errors.push_back({column, column + " required", i});
                continue;
            }
            auto date = r.find("date");
            if (date == r.end() || !date->is_string()) continue;
            auto key = raw_adm_key(*adm, model.adm_level);
            if (!key) continue;
            auto [pos, inserted] = seen.emplace(std::make_pair(date->get<std::string>(), *key), i);
            if (!inserted) {
                out.errors.push_back({"date",
                                      "duplicate (date, " + column + ") pair; first seen in row " +
                                          std::to_string(pos->second),
                                      i});
            }
        }
    }

    if (!out.errors.empty()) {
        out.value.reset();
        auto order = [](const FieldError& e) { return e.row ? *e.row + 1 : 0; };
        std::stable_sort(out.errors.begin(), out.errors.end(),
                         [&](const auto& a, const auto& b) { return order(a) < order(b); });
        return out;
    }

    if (options.strict_spacing) {
        std::map<std::string, std::vector<std::pair<CivilDate, std::size_t>>> by_unit;
        for (std::size_t i = 0; i < out.value->rows.size(); ++i) {
            const auto& row = out.value->rows[i];
            by_unit[*row.adm_key(model.adm_level)].emplace_back(row.date, i);
        }
        for (auto& [unit, dates] : by_unit) {
            std::sort(dates.begin(), dates.end());
            for (std::size_t k = 1; k < dates.size(); ++k) {
                const long gap = dates[k - 1].first.days_until(dates[k].first);
                if (gap != expected_gap_days(model.time_resolution, dates[k - 1].first)) {
                    out.warnings.push_back(
                        {"date",
                         "spacing of " + std::to_string(gap) + " days does not match " +
                             std::string{to_string(model.time_resolution)} + " resolution",
                         dates[k].second});
                }
            }
        }
    }
    return out;
}

nlohmann::json to_json(const PredictionRow& row) {
    auto opt = [](const auto& v) -> nlohmann::json {
        if (v) return *v;
        return nullptr;
    };
    return {
        {"date", row.date.to_string()}, {"pred", row.pred},       {"lower", row.lower},
        {"upper", row.upper},           {"adm_0", opt(row.adm_0)}, {"adm_1", opt(row.adm_1)},
        {"adm_2", opt(row.adm_2)},      {"adm_3", opt(row.adm_3)},
    };
}

nlohmann::json to_submission_json(const PredictionRecord& record) {
    auto rows = nlohmann::json::array();
    for (const auto& r : record.rows) rows.push_back(to_json(r));
    return {
        {"model", record.model},
        {"description", record.description},
        {"commit", record.commit},
        {"predict_date", record.predict_date.to_string()},
        {"prediction", std::move(rows)},
    };
}

nlohmann::json to_json(const PredictionRecord& record) {
    auto j = to_submission_json(record);
    j["id"] = record.id;
    return j;
}

PredictionRecord prediction_from_json(const nlohmann::json& j) {
    auto body = j;
    std::int64_t id = 0;
    if (auto it = body.find("id"); it != body.end()) {
        id = it->get<std::int64_t>();
        body.erase("id");
    }
    auto parsed = parse_submission(body, PredictionValidationOptions{.max_rows = SIZE_MAX});
    if (!parsed.ok()) {
        throw std::invalid_argument("stored prediction does not validate: " +
                                    to_json(parsed.errors).dump());
    }
    parsed.value->id = id;
    return std::move(*parsed.value);
}

}  // namespace arbohub
