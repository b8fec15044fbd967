#include <gtest/gtest.h>

#include <sstream>

#include "arbohub/datastore/ingest.hpp"
#include "support.hpp"

using namespace arbohub;
using namespace arbohub::datastore;
using arbohub::testing::case_week;
using arbohub::testing::climate_day;
using arbohub::testing::epi_params;
using arbohub::testing::records_as;
using arbohub::testing::to_csv;
using arbohub::testing::trap;

namespace {

const std::string kInfodengueHeader =
    "data_iniSE,SE,casos,casos_est,casos_prov,municipio_geocodigo,p_rt1,p_inc100k,nivel,"
    "versao_modelo,Rt,municipio_nome,pop,receptivo,transmissao,nivel_inc,disease\n";

ParsedDataset parse(DatasetKind kind, const std::string& text, IngestOptions options = {}) {
    std::istringstream in(text);
    return parse_dataset_csv(kind, in, options);
}

std::vector<CaseWeekRecord> sample_cases() {
    std::vector<CaseWeekRecord> out;
    for (auto week : arbohub::testing::weeks_from(EpiWeek{2023, 50}, 6)) {
        out.push_back(case_week(3106200, week, 40 + week.week));
        out.push_back(case_week(3304557, week, 7, Disease::zika));
    }
    out[0].versao_modelo = "2024-01-02";
    out[0].municipio_nome = "Belo Horizonte";
    out[0].casos_prov = 3;
    return out;
}

}  // namespace

TEST(Ingest, InfodengueRoundTripsFieldForField) {
    const auto cases = sample_cases();
    auto parsed = parse(DatasetKind::infodengue, to_csv(DatasetKind::infodengue, cases));
    EXPECT_TRUE(parsed.rejections.empty());
    EXPECT_EQ(records_as<CaseWeekRecord>(parsed.records), cases);
}

TEST(Ingest, ClimateEpiscannerOvitrapRoundTrip) {
    std::vector<ClimateDayRecord> days{climate_day(*CivilDate::parse("2024-01-01")),
                                       climate_day(*CivilDate::parse("2024-01-02"))};
    auto c = parse(DatasetKind::climate, to_csv(DatasetKind::climate, days));
    EXPECT_TRUE(c.rejections.empty());
    EXPECT_EQ(records_as<ClimateDayRecord>(c.records), days);

    std::vector<EpidemicParamsRecord> params{epi_params()};
    auto e = parse(DatasetKind::episcanner, to_csv(DatasetKind::episcanner, params));
    EXPECT_TRUE(e.rejections.empty());
    EXPECT_EQ(records_as<EpidemicParamsRecord>(e.records), params);

    std::vector<OvitrapRecord> traps{trap("MG-001", 0), trap("MG-002", 57)};
    auto o = parse(DatasetKind::ovitrap, to_csv(DatasetKind::ovitrap, traps));
    EXPECT_TRUE(o.rejections.empty());
    EXPECT_EQ(records_as<OvitrapRecord>(o.records), traps);
}

TEST(Ingest, NivelOutOfRangeRejectsRowWithReason) {
    const std::string csv = kInfodengueHeader +
                            "2023-12-31,202401,10,11.5,,3106200,0.4,1.2,7,,0.9,,2300000,1,0,0,dengue\n"
                            "2023-12-31,202401,10,11.5,,3106201,0.4,1.2,2,,0.9,,2300000,1,0,0,dengue\n";
    auto parsed = parse(DatasetKind::infodengue, csv);
    ASSERT_EQ(parsed.rejections.size(), 1u);
    EXPECT_EQ(parsed.rejections[0].line, 2u);
    EXPECT_EQ(parsed.rejections[0].reason, "nivel out of range 1..4");
    EXPECT_EQ(parsed.records.size(), 1u);
    EXPECT_EQ(parsed.read, 2u);
}

TEST(Ingest, InvariantViolationsAreAllReported) {
    const std::string csv = kInfodengueHeader +
                            "2024-01-07,202401,-1,11.5,,3106200,1.4,1.2,2,,0.9,,0,5,0,0,dengue\n";
    auto parsed = parse(DatasetKind::infodengue, csv);
    ASSERT_EQ(parsed.rejections.size(), 1u);
    const auto& reason = parsed.rejections[0].reason;
    for (const char* part : {"casos must be >= 0", "p_rt1 out of range", "pop must be > 0",
                             "receptivo out of range", "data_iniSE is not the Sunday"}) {
        EXPECT_NE(reason.find(part), std::string::npos) << part << " in " << reason;
    }
}

TEST(Ingest, InvariantColumnsCannotBeEmpty) {
    const std::string csv = kInfodengueHeader +
                            "2023-12-31,202401,10,11.5,,3106200,0.4,1.2,,,0.9,,2300000,1,0,0,dengue\n";
    auto parsed = parse(DatasetKind::infodengue, csv);
    ASSERT_EQ(parsed.rejections.size(), 1u);
    EXPECT_EQ(parsed.rejections[0].reason, "nivel is required");
}

TEST(Ingest, IntegralDecimalsAccepted) {
    const std::string csv = kInfodengueHeader +
                            "2023-12-31,202401,10.0,11.5,2.0,3106200,0.4,1.2,2,,0.9,,2300000,1,0,0,dengue\n";
    auto parsed = parse(DatasetKind::infodengue, csv);
    ASSERT_TRUE(parsed.rejections.empty()) << parsed.rejections[0].reason;
    EXPECT_EQ(std::get<CaseWeekRecord>(parsed.records[0]).casos, 10);
}

TEST(Ingest, MissingRequiredColumnRejectsFile) {
    const std::string csv = "data_iniSE,SE,casos\n2023-12-31,202401,10\n";
    EXPECT_THROW(parse(DatasetKind::infodengue, csv), IngestError);
}

TEST(Ingest, DiseaseFromOptionWhenColumnAbsent) {
    std::string header = kInfodengueHeader.substr(0, kInfodengueHeader.size() - 9) + "\n";
    const std::string csv = header +
                            "2023-12-31,202401,10,11.5,,3106200,0.4,1.2,2,,0.9,,2300000,1,0,0\n";
    EXPECT_THROW(parse(DatasetKind::infodengue, csv), IngestError);
    auto parsed = parse(DatasetKind::infodengue, csv, {.disease = Disease::chikungunya});
    ASSERT_EQ(parsed.records.size(), 1u);
    EXPECT_EQ(std::get<CaseWeekRecord>(parsed.records[0]).disease, Disease::chikungunya);
}

TEST(Ingest, WrongFieldCountAndExtraColumns) {
    const std::string csv = "extra," + kInfodengueHeader +
                            "x,2023-12-31,202401,10,11.5,,3106200,0.4,1.2,2,,0.9,,2300000,1,0,0,dengue\n"
                            "x,2023-12-31,202401\n";
    auto parsed = parse(DatasetKind::infodengue, csv);
    EXPECT_EQ(parsed.records.size(), 1u);
    ASSERT_EQ(parsed.rejections.size(), 1u);
    EXPECT_EQ(parsed.rejections[0].line, 3u);
}

TEST(Ingest, ClimateAndOvitrapInvariants) {
    auto bad_day = climate_day(*CivilDate::parse("2024-01-01"));
    bad_day.temp_min = 40;
    bad_day.umid_max = 101;
    auto c = parse(DatasetKind::climate,
                   to_csv(DatasetKind::climate, std::vector<ClimateDayRecord>{bad_day}));
    ASSERT_EQ(c.rejections.size(), 1u);
    EXPECT_NE(c.rejections[0].reason.find("temp_min <= temp_med <= temp_max"), std::string::npos);

    auto bad_trap = trap("T", 0);
    bad_trap.status = TrapStatus::positive;
    auto o = parse(DatasetKind::ovitrap,
                   to_csv(DatasetKind::ovitrap, std::vector<OvitrapRecord>{bad_trap}));
    ASSERT_EQ(o.rejections.size(), 1u);
    EXPECT_EQ(o.rejections[0].reason, "status must be positive exactly when egg_count > 0");

    auto late = epi_params();
    late.ep_ini = "202330";
    auto e = parse(DatasetKind::episcanner,
                   to_csv(DatasetKind::episcanner, std::vector<EpidemicParamsRecord>{late}));
    ASSERT_EQ(e.rejections.size(), 1u);
    EXPECT_EQ(e.rejections[0].reason, "ep_ini is after ep_end");
}

TEST(Ingest, UnknownKindRejected) {
    arbohub::testing::TempDir dir;
    auto store = arbohub::testing::open_store(dir);
    std::istringstream in("a\n");
    EXPECT_THROW(ingest_dataset(*store, "weather", in), IngestError);
}

TEST(Ingest, UpsertIsIdempotent) {
    arbohub::testing::TempDir dir;
    auto store = arbohub::testing::open_store(dir);
    const auto csv = to_csv(DatasetKind::infodengue, sample_cases());

    std::istringstream first(csv);
    auto r1 = ingest_dataset(*store, DatasetKind::infodengue, first);
    EXPECT_EQ(r1.read, 12u);
    EXPECT_EQ(r1.inserted, 12u);
    EXPECT_EQ(r1.updated, 0u);
    const auto before = store->select(DatasetKind::infodengue, {});

    std::istringstream second(csv);
    auto r2 = ingest_dataset(*store, DatasetKind::infodengue, second);
    EXPECT_EQ(r2.inserted, 0u);
    EXPECT_EQ(r2.updated, 12u);
    EXPECT_EQ(store->select(DatasetKind::infodengue, {}), before);
}

TEST(Ingest, StoredRecordsEqualAcceptedRows) {
    arbohub::testing::TempDir dir;
    auto store = arbohub::testing::open_store(dir);
    auto cases = sample_cases();
    std::istringstream in(to_csv(DatasetKind::infodengue, cases));
    ingest_dataset(*store, DatasetKind::infodengue, in);
    auto stored = records_as<CaseWeekRecord>(store->select(DatasetKind::infodengue, {}));
    ASSERT_EQ(stored.size(), cases.size());
    for (const auto& c : cases) {
        EXPECT_NE(std::find(stored.begin(), stored.end(), c), stored.end());
    }
}

TEST(Ingest, ReportJsonShape) {
    IngestReport report{3, 1, 1, 1, {{4, "nivel out of range 1..4"}}};
    auto j = to_json(report);
    EXPECT_EQ(j["rejections"][0]["line"], 4);
    EXPECT_EQ(j["rejected"], 1);
}
