#include "arbohub/datastore/ingest.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "arbohub/datastore/csv.hpp"
#include "arbohub/domain/geo.hpp"

namespace arbohub::datastore {

nlohmann::json to_json(const IngestReport& report) {
    auto rejections = nlohmann::json::array();
    for (const auto& r : report.rejections) {
        rejections.push_back({{"line", r.line}, {"reason", r.reason}});
    }
    return {{"read", report.read},
            {"inserted", report.inserted},
            {"updated", report.updated},
            {"rejected", report.rejected},
            {"rejections", std::move(rejections)}};
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Typed access to one CSV row; every problem is appended to `reasons`.
class RowReader {
public:
    RowReader(const std::vector<std::string>& cells, const std::map<std::string, std::size_t>& index)
        : cells_(cells), index_(index) {}

    std::vector<std::string> reasons;

    std::optional<std::string> text(const std::string& col, bool required) {
        auto it = index_.find(col);
        std::string_view cell;
        if (it != index_.end()) cell = trim(cells_[it->second]);
        if (cell.empty()) {
            if (required) reasons.push_back(col + " is required");
            return std::nullopt;
        }
        return std::string{cell};
    }

    std::optional<std::int64_t> integer(const std::string& col, bool required) {
        auto cell = text(col, required);
        if (!cell) return std::nullopt;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(cell->data(), cell->data() + cell->size(), v);
        if (ec == std::errc{} && ptr == cell->data() + cell->size()) return v;
        // Integral values written with a decimal point, e.g. "12.0".
        double d = 0;
        auto [dptr, dec] = std::from_chars(cell->data(), cell->data() + cell->size(), d);
        if (dec == std::errc{} && dptr == cell->data() + cell->size() && std::isfinite(d) &&
            d == std::floor(d) && std::abs(d) < 9.0e15) {
            return static_cast<std::int64_t>(d);
        }
        reasons.push_back(col + " is not an integer");
        return std::nullopt;
    }

    std::optional<double> real(const std::string& col, bool required) {
        auto cell = text(col, required);
        if (!cell) return std::nullopt;
        double v = 0;
        auto [ptr, ec] = std::from_chars(cell->data(), cell->data() + cell->size(), v);
        if (ec != std::errc{} || ptr != cell->data() + cell->size() || !std::isfinite(v)) {
            reasons.push_back(col + " is not a number");
            return std::nullopt;
        }
        return v;
    }

    std::optional<CivilDate> date(const std::string& col) {
        auto cell = text(col, true);
        if (!cell) return std::nullopt;
        auto d = CivilDate::parse(*cell);
        if (!d) reasons.push_back(col + " is not a YYYY-mm-dd date");
        return d;
    }

    std::optional<EpiWeek> epiweek(const std::string& col) {
        auto cell = text(col, true);
        if (!cell) return std::nullopt;
        auto w = EpiWeek::parse(*cell);
        if (!w) reasons.push_back(col + " is not a valid YYYYWW epidemiological week");
        return w;
    }

    void check(bool ok, std::string reason) {
        if (!ok) reasons.push_back(std::move(reason));
    }

private:
    const std::vector<std::string>& cells_;
    const std::map<std::string, std::size_t>& index_;
};

template <class T>
T get(const std::optional<T>& v) {
    return v.value_or(T{});
}

bool in_range(std::optional<std::int64_t> v, std::int64_t lo, std::int64_t hi) {
    return !v || (*v >= lo && *v <= hi);
}

void check_geocode(RowReader& r, const std::optional<std::int64_t>& code, const std::string& col) {
    r.check(!code || geo::is_municipality_geocode(*code),
            col + " is not a 7-digit municipality geocode");
}

std::optional<DatasetRecord> parse_infodengue(RowReader& r, const IngestOptions& options) {
    CaseWeekRecord rec;
    auto start = r.date("data_iniSE");
    auto se = r.epiweek("SE");
    auto casos = r.integer("casos", true);
    auto casos_est = r.real("casos_est", true);
    rec.casos_prov = r.integer("casos_prov", false);
    auto geocode = r.integer("municipio_geocodigo", true);
    auto p_rt1 = r.real("p_rt1", true);
    auto p_inc = r.real("p_inc100k", true);
    auto nivel = r.integer("nivel", true);
    rec.versao_modelo = r.text("versao_modelo", false);
    auto rt = r.real("Rt", true);
    rec.municipio_nome = r.text("municipio_nome", false);
    auto pop = r.integer("pop", true);
    auto receptivo = r.integer("receptivo", true);
    auto transmissao = r.integer("transmissao", true);
    auto nivel_inc = r.integer("nivel_inc", true);
    auto disease_text = r.text("disease", !options.disease.has_value());

    r.check(!casos || *casos >= 0, "casos must be >= 0");
    r.check(!casos_est || *casos_est >= 0, "casos_est must be >= 0");
    check_geocode(r, geocode, "municipio_geocodigo");
    r.check(!p_rt1 || (*p_rt1 >= 0 && *p_rt1 <= 1), "p_rt1 out of range 0..1");
    r.check(!p_inc || *p_inc >= 0, "p_inc100k must be >= 0");
    r.check(in_range(nivel, 1, 4), "nivel out of range 1..4");
    r.check(!rt || *rt >= 0, "Rt must be >= 0");
    r.check(!pop || *pop > 0, "pop must be > 0");
    r.check(in_range(receptivo, 0, 3), "receptivo out of range 0..3");
    r.check(in_range(transmissao, 0, 3), "transmissao out of range 0..3");
    r.check(in_range(nivel_inc, 0, 2), "nivel_inc out of range 0..2");
    if (start && se) {
        r.check(epiweek_to_start_date(*se) == *start, "data_iniSE is not the Sunday opening SE");
    }
    std::optional<Disease> disease = options.disease;
    if (disease_text) {
        disease = parse_disease(*disease_text);
        r.check(disease.has_value(), "disease must be one of dengue, zika, chikungunya");
    }
    if (!r.reasons.empty()) return std::nullopt;

    rec.data_iniSE = *start;
    rec.SE = *se;
    rec.casos = *casos;
    rec.casos_est = *casos_est;
    rec.municipio_geocodigo = *geocode;
    rec.p_rt1 = *p_rt1;
    rec.p_inc100k = *p_inc;
    rec.nivel = static_cast<int>(*nivel);
    rec.Rt = *rt;
    rec.pop = *pop;
    rec.receptivo = static_cast<int>(*receptivo);
    rec.transmissao = static_cast<int>(*transmissao);
    rec.nivel_inc = static_cast<int>(*nivel_inc);
    rec.disease = *disease;
    return rec;
}

std::optional<DatasetRecord> parse_climate(RowReader& r) {
    ClimateDayRecord rec;
    auto date = r.date("date");
    auto geocode = r.integer("geocodigo", true);
    check_geocode(r, geocode, "geocodigo");
    struct Triple {
        const char* prefix;
        double* min;
        double* med;
        double* max;
    };
    const Triple triples[] = {
        {"temp", &rec.temp_min, &rec.temp_med, &rec.temp_max},
        {"precip", &rec.precip_min, &rec.precip_med, &rec.precip_max},
        {"pressao", &rec.pressao_min, &rec.pressao_med, &rec.pressao_max},
        {"umid", &rec.umid_min, &rec.umid_med, &rec.umid_max},
    };
    for (const auto& t : triples) {
        const std::string p = t.prefix;
        auto lo = r.real(p + "_min", true);
        auto mid = r.real(p + "_med", true);
        auto hi = r.real(p + "_max", true);
        if (lo && mid && hi) {
            r.check(*lo <= *mid && *mid <= *hi, p + "_min <= " + p + "_med <= " + p + "_max violated");
        }
        *t.min = get(lo);
        *t.med = get(mid);
        *t.max = get(hi);
    }
    auto tot = r.real("precip_tot", true);
    rec.precip_tot = get(tot);
    if (r.reasons.empty()) {
        for (double v : {rec.umid_min, rec.umid_med, rec.umid_max}) {
            r.check(v >= 0 && v <= 100, "relative humidity out of range 0..100");
        }
        for (double v : {rec.precip_min, rec.precip_med, rec.precip_max, rec.precip_tot}) {
            r.check(v >= 0, "precipitation must be >= 0");
        }
    }
    if (!r.reasons.empty()) return std::nullopt;
    rec.date = *date;
    rec.geocodigo = *geocode;
    return rec;
}

std::optional<DatasetRecord> parse_episcanner(RowReader& r) {
    EpidemicParamsRecord rec;
    auto disease = r.text("disease", true);
    rec.CID10 = r.text("CID10", false);
    auto year = r.integer("year", true);
    auto geocode = r.integer("geocode", true);
    rec.muni_name = r.text("muni_name", false);
    rec.peak_week = r.real("peak_week", false);
    rec.beta = r.real("beta", false);
    rec.gamma = r.real("gamma", false);
    auto r0 = r.real("R0", true);
    auto total = r.integer("total_cases", true);
    rec.alpha = r.real("alpha", false);
    rec.sum_res = r.real("sum_res", false);
    auto ep_ini = r.epiweek("ep_ini");
    auto ep_end = r.epiweek("ep_end");
    auto ep_dur = r.integer("ep_dur", true);

    r.check(!disease || *disease == "dengue" || *disease == "zika" || *disease == "chik" ||
                *disease == "chikungunya",
            "disease must be one of dengue, zika, chik, chikungunya");
    r.check(in_range(year, 1, 9999), "year out of range");
    check_geocode(r, geocode, "geocode");
    r.check(!r0 || *r0 > 0, "R0 must be > 0");
    r.check(!total || *total >= 0, "total_cases must be >= 0");
    r.check(!ep_dur || *ep_dur >= 1, "ep_dur must be >= 1");
    if (ep_ini && ep_end) {
        r.check(*ep_ini <= *ep_end, "ep_ini is after ep_end");
        if (ep_dur && *ep_ini <= *ep_end) {
            // Accept either counting convention (exclusive or inclusive) within one week.
            const long span = epiweek_to_start_date(*ep_ini).days_until(epiweek_to_start_date(*ep_end)) / 7;
            r.check(*ep_dur >= span - 1 && *ep_dur <= span + 2,
                    "ep_dur inconsistent with ep_ini..ep_end");
        }
    }
    if (!r.reasons.empty()) return std::nullopt;
    rec.disease = *disease;
    rec.year = static_cast<int>(*year);
    rec.geocode = *geocode;
    rec.R0 = *r0;
    rec.total_cases = *total;
    rec.ep_ini = std::to_string(ep_ini->encoded());
    rec.ep_end = std::to_string(ep_end->encoded());
    rec.ep_dur = static_cast<int>(*ep_dur);
    return rec;
}

std::optional<DatasetRecord> parse_ovitrap(RowReader& r) {
    OvitrapRecord rec;
    auto trap = r.text("trap_id", true);
    auto lat = r.real("latitude", true);
    auto lon = r.real("longitude", true);
    auto installed = r.date("install_date");
    auto collected = r.date("collection_date");
    auto week = r.epiweek("epi_week");
    auto year = r.integer("year", true);
    auto eggs = r.integer("egg_count", true);
    auto status = r.text("status", true);
    auto geocode = r.integer("geocode", true);

    r.check(!lat || (*lat >= -90 && *lat <= 90), "latitude out of range -90..90");
    r.check(!lon || (*lon >= -180 && *lon <= 180), "longitude out of range -180..180");
    r.check(!installed || !collected || *collected >= *installed,
            "collection_date is before install_date");
    r.check(in_range(year, 1, 9999), "year out of range");
    r.check(!eggs || *eggs >= 0, "egg_count must be >= 0");
    r.check(!status || *status == "positive" || *status == "negative",
            "status must be positive or negative");
    if (eggs && status && (*status == "positive" || *status == "negative")) {
        r.check((*status == "positive") == (*eggs > 0),
                "status must be positive exactly when egg_count > 0");
    }
    check_geocode(r, geocode, "geocode");
    if (!r.reasons.empty()) return std::nullopt;
    rec.trap_id = *trap;
    rec.latitude = *lat;
    rec.longitude = *lon;
    rec.install_date = *installed;
    rec.collection_date = *collected;
    rec.epi_week = *week;
    rec.year = static_cast<int>(*year);
    rec.egg_count = *eggs;
    rec.status = *status == "positive" ? TrapStatus::positive : TrapStatus::negative;
    rec.geocode = *geocode;
    return rec;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
    return out;
}

}  // namespace

ParsedDataset parse_dataset_csv(DatasetKind kind, std::istream& source,
                                const IngestOptions& options) {
    CsvReader reader(source);
    std::vector<std::string> header;
    try {
        if (!reader.next(header)) throw IngestError("missing header row");
    } catch (const std::runtime_error& e) {
        throw IngestError(e.what());
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name{trim(header[i])};
        if (!index.emplace(name, i).second) throw IngestError("duplicate column " + name);
    }
    std::string missing;
    for (const auto& col : columns_of(kind)) {
        if (col.nullable || index.contains(std::string{col.name})) continue;
        if (kind == DatasetKind::infodengue && col.name == "disease" && options.disease) continue;
        missing += (missing.empty() ? "" : ", ") + std::string{col.name};
    }
    if (!missing.empty()) throw IngestError("missing required column(s): " + missing);

    ParsedDataset out;
    std::vector<std::string> cells;
    for (;;) {
        try {
            if (!reader.next(cells)) break;
        } catch (const std::runtime_error& e) {
            throw IngestError(e.what());
        }
        ++out.read;
        if (cells.size() != header.size()) {
            out.rejections.push_back({reader.line(), "expected " + std::to_string(header.size()) +
                                                         " fields, found " +
                                                         std::to_string(cells.size())});
            continue;
        }
        RowReader row(cells, index);
        std::optional<DatasetRecord> record;
        switch (kind) {
            case DatasetKind::infodengue: record = parse_infodengue(row, options); break;
            case DatasetKind::climate: record = parse_climate(row); break;
            case DatasetKind::episcanner: record = parse_episcanner(row); break;
            case DatasetKind::ovitrap: record = parse_ovitrap(row); break;
        }
        if (record) {
            out.records.push_back(std::move(*record));
        } else {
            out.rejections.push_back({reader.line(), join(row.reasons)});
        }
    }
    return out;
}

IngestReport ingest_dataset(DatasetStore& store, DatasetKind kind, std::istream& source,
                            const IngestOptions& options) {
    auto parsed = parse_dataset_csv(kind, source, options);
    IngestReport report;
    report.read = parsed.read;
    report.rejected = parsed.rejections.size();
    report.rejections = std::move(parsed.rejections);
    if (!parsed.records.empty()) {
        const auto counts = store.upsert(kind, parsed.records);
        report.inserted = counts.inserted;
        report.updated = counts.updated;
    }
    return report;
}

IngestReport ingest_dataset(DatasetStore& store, std::string_view kind, std::istream& source,
                            const IngestOptions& options) {
    auto parsed_kind = parse_dataset_kind(kind);
    if (!parsed_kind) throw IngestError("unknown dataset kind '" + std::string{kind} + "'");
    return ingest_dataset(store, *parsed_kind, source, options);
}

}  // namespace arbohub::datastore
