#pragma once

// Flat key-value report records: JSON (lossless round trip) and CSV.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "robmom/distributions.hpp"
#include "robmom/error.hpp"
#include "robmom/estimators.hpp"
#include "robmom/verify.hpp"

namespace robmom {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

template <class R>
struct RecordName;
template <>
struct RecordName<MomentEstimate> {
    static constexpr std::string_view value = "moment-estimate";
};
template <>
struct RecordName<CongruenceVerdict> {
    static constexpr std::string_view value = "congruence-verdict";
};
template <>
struct RecordName<ShapeProbe> {
    static constexpr std::string_view value = "shape-probe";
};
template <>
struct RecordName<VarianceComparison> {
    static constexpr std::string_view value = "variance-comparison";
};
template <>
struct RecordName<SupportProbe> {
    static constexpr std::string_view value = "support-probe";
};
template <>
struct RecordName<EquivarianceReport> {
    static constexpr std::string_view value = "equivariance";
};

inline Congruence congruence_from_string(std::string_view s)
{
    if (s == "congruent") return Congruence::Congruent;
    if (s == "non-congruent") return Congruence::NonCongruent;
    if (s == "inconclusive") return Congruence::Inconclusive;
    throw ParseError("unknown congruence verdict '" + std::string(s) + "'");
}

// Field lists shared by the JSON and CSV writers. `visit(name, member)`
// is called once per field in output order.
template <class V>
void fields(MomentEstimate& r, V&& visit)
{
    visit("value", r.value);
    visit("k", r.k);
    visit("eps0", r.eps0);
    visit("gamma", r.gamma);
    visit("eps", r.eps);
    visit("n", r.n);
    visit("pseudo_n", r.pseudo_n);
    visit("method", r.method);
    visit("seed", r.seed);
}

template <class V>
void fields(CongruenceVerdict& r, V&& visit)
{
    visit("family", r.family);
    visit("parameter", r.parameter);
    visit("gamma", r.gamma);
    visit("verdict", r.verdict);
    visit("eps", r.eps);
    visit("derivatives", r.derivatives);
    visit("signs", r.signs);
}

template <class V>
void fields(ShapeProbe& r, V&& visit)
{
    visit("kind", r.kind);
    visit("family", r.family);
    visit("k", r.k);
    visit("N", r.N);
    visit("seed", r.seed);
    visit("median", r.median);
    visit("sigma", r.sigma);
    visit("mode_bin", r.mode_bin);
    visit("zero_bin", r.zero_bin);
    visit("monotone_left", r.monotone_left);
    visit("monotone_right", r.monotone_right);
    visit("pairs_left", r.pairs_left);
    visit("pairs_right", r.pairs_right);
    visit("edges", r.edges);
    visit("counts", r.counts);
}

template <class V>
void fields(VarianceComparison& r, V&& visit)
{
    visit("family", r.family);
    visit("replications", r.replications);
    visit("eps", r.eps);
    visit("seed", r.seed);
    visit("n_values", r.n_values);
    visit("mean_eq1", r.mean_eq1);
    visit("mean_eq2", r.mean_eq2);
    visit("var_eq1", r.var_eq1);
    visit("var_eq2", r.var_eq2);
    visit("ratio", r.ratio);
}

template <class V>
void fields(SupportProbe& r, V&& visit)
{
    visit("k", r.k);
    visit("resolution", r.resolution);
    visit("observed_min", r.observed_min);
    visit("observed_max", r.observed_max);
    visit("bound_lower", r.bound_lower);
    visit("bound_upper", r.bound_upper);
}

template <class V>
void fields(EquivarianceReport& r, V&& visit)
{
    visit("trials", r.trials);
    visit("seed", r.seed);
    visit("max_kernel_dev", r.max_kernel_dev);
    visit("max_kernel_dev_general", r.max_kernel_dev_general);
    visit("max_shift_dev", r.max_shift_dev);
    visit("max_standardized_dev", r.max_standardized_dev);
    visit("odd_reflection_exact", r.odd_reflection_exact);
}

namespace detail {

template <class T>
Json field_to_json(const T& v)
{
    if constexpr (std::is_same_v<T, Congruence>)
        return to_string(v);
    else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>)
        return v ? Json(*v) : Json(nullptr);
    else
        return Json(v);
}

template <class T>
void field_from_json(const Json& j, T& v)
{
    if constexpr (std::is_same_v<T, Congruence>)
        v = congruence_from_string(j.get<std::string>());
    else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>)
        v = j.is_null() ? std::nullopt : std::optional<std::uint64_t>(j.get<std::uint64_t>());
    else
        v = j.get<T>();
}

inline std::string format_number(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T>
std::string csv_cell(const T& v)
{
    if constexpr (std::is_same_v<T, Congruence>)
        return to_string(v);
    else if constexpr (std::is_same_v<T, std::string>)
        return v;
    else if constexpr (std::is_same_v<T, bool>)
        return v ? "true" : "false";
    else if constexpr (std::is_same_v<T, double>)
        return format_number(v);
    else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>)
        return v ? std::to_string(*v) : std::string();
    else if constexpr (std::is_arithmetic_v<T>)
        return std::to_string(v);
    else {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ';';
            out += csv_cell(v[i]);
        }
        return out;
    }
}

inline std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

} // namespace detail

template <class R>
Json to_json(const R& rec)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["record"] = RecordName<R>::value;
    R copy = rec;
    fields(copy, [&](const char* name, const auto& v) { j[name] = detail::field_to_json(v); });
    return j;
}

template <class R>
R from_json(const Json& j)
{
    try {
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw ParseError("unsupported report schema version");
        if (j.at("record").get<std::string>() != RecordName<R>::value)
            throw ParseError("expected a '" + std::string(RecordName<R>::value) + "' record");
        R rec;
        fields(rec, [&](const char* name, auto& v) { detail::field_from_json(j.at(name), v); });
        return rec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

using ReportRecord = std::variant<MomentEstimate, CongruenceVerdict, ShapeProbe, VarianceComparison, SupportProbe,
                                  EquivarianceReport>;

/// Parses any record type from JSON text.
inline ReportRecord parse_report(std::string_view text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("record")) throw ParseError("report has no record type");
    const std::string name = j["record"].is_string() ? j["record"].get<std::string>() : "";
    if (name == RecordName<MomentEstimate>::value) return from_json<MomentEstimate>(j);
    if (name == RecordName<CongruenceVerdict>::value) return from_json<CongruenceVerdict>(j);
    if (name == RecordName<ShapeProbe>::value) return from_json<ShapeProbe>(j);
    if (name == RecordName<VarianceComparison>::value) return from_json<VarianceComparison>(j);
    if (name == RecordName<SupportProbe>::value) return from_json<SupportProbe>(j);
    if (name == RecordName<EquivarianceReport>::value) return from_json<EquivarianceReport>(j);
    throw ParseError("unknown record type '" + name + "'");
}

enum class ReportFormat { Json, Csv };

inline ReportFormat parse_format(std::string_view s)
{
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    throw ParseError("unknown output format '" + std::string(s) + "' (expected json or csv)");
}

/// Header "key,value", then one row per field; list fields are joined by ';'.
template <class R>
void write_csv(std::ostream& os, const R& rec)
{
    os << "key,value\n";
    os << "schema_version," << kSchemaVersion << '\n';
    os << "record," << RecordName<R>::value << '\n';
    R copy = rec;
    fields(copy, [&](const char* name, const auto& v) { os << name << ',' << detail::csv_quote(detail::csv_cell(v)) << '\n'; });
}

template <class R>
void write_report(std::ostream& os, const R& rec, ReportFormat fmt)
{
    if (fmt == ReportFormat::Json)
        os << to_json(rec).dump(2) << '\n';
    else
        write_csv(os, rec);
}

} // namespace robmom
