#include "rlnclab/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlnclab/field.hpp"
#include "rlnclab/formulas.hpp"
#include "rlnclab/network.hpp"
#include "rlnclab/polynomial.hpp"
#include "rlnclab/probability.hpp"
#include "rlnclab/rational.hpp"

namespace rlnclab::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& s) {
    if (s == "table") return Format::Table;
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ParseError("unknown output format '" + s + "'; expected table, csv, or json");
}

Rational parse_probability(const std::string& text) {
    Rational p = Rational::from_string(text);
    if (p < Rational(0) || p > Rational(1))
        throw ParseError("probability '" + text + "' is outside [0, 1]");
    return p;
}

std::string double_str(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

json prob_json(const Rational& failure, int precision) {
    const Rational success = Rational(1) - failure;
    return json{{"failure",
                 {{"exact", failure.to_fraction_string()},
                  {"decimal", failure.to_decimal_string(precision)}}},
                {"success",
                 {{"exact", success.to_fraction_string()},
                  {"decimal", success.to_decimal_string(precision)}}}};
}

json estimate_json(const Estimate& e) {
    const ConfidenceInterval ci = confidence_interval(e);
    return json{{"failure_mean", e.mean},    {"success_mean", 1.0 - e.mean},
                {"std_error", e.std_error},  {"ci_low", ci.low},
                {"ci_high", ci.high},        {"wilson", ci.wilson}};
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

void emit_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ",";
        out << cells[i];
    }
    out << "\n";
}

// Fixed-width table rendering: column widths fit the widest cell.
void emit_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << "  ";
            out << std::left << std::setw(static_cast<int>(width[i])) << row[i];
        }
        out << "\n";
    }
}

std::string polynomial_str(const RationalPolynomial& poly) {
    if (poly.coefficients().empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < poly.coefficients().size(); ++k) {
        const Rational& c = poly.coefficients()[k];
        if (c.is_zero()) continue;
        const Rational mag = c.abs();
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        os << mag.to_fraction_string();
        if (k == 1) os << " p";
        if (k > 1) os << " p^" << k;
    }
    return first ? "0" : os.str();
}

std::vector<std::string> poly_coeff_strings(const RationalPolynomial& poly) {
    std::vector<std::string> out;
    for (const auto& c : poly.coefficients()) out.push_back(c.to_fraction_string());
    return out;
}

struct CommonOptions {
    std::string network = "builtin:butterfly";
    std::string field;
    std::string erasure;
    std::string format = "table";
    int precision = 6;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::uint64_t budget = 1ULL << 26;
};

std::optional<ErasureModel> erasure_model_of(const CommonOptions& opt) {
    if (opt.erasure.empty()) return std::nullopt;
    return ErasureModel(parse_probability(opt.erasure));
}

// ---- formula ---------------------------------------------------------------

int cmd_formula(const CommonOptions& opt, std::ostream& out) {
    const BigInt q(parse_field_order(opt.field));
    const Rational p = opt.erasure.empty() ? Rational(0) : parse_probability(opt.erasure);
    const FormulaInput input(q, p);

    const Rational sink = butterfly_failure(input, Target::Sink);
    const Rational network = butterfly_failure(input, Target::Network);
    const Rational average = butterfly_failure(input, Target::Average);

    const Format format = parse_format(opt.format);
    if (format == Format::Json) {
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "formula"},
                 {"q", q.str()},
                 {"erasure_p", p.to_fraction_string()},
                 {"precision", opt.precision},
                 {"results",
                  {{"per_sink", {{"t1", prob_json(sink, opt.precision)},
                                 {"t2", prob_json(sink, opt.precision)}}},
                   {"network", prob_json(network, opt.precision)},
                   {"average", prob_json(average, opt.precision)}}}};
        emit_json(out, doc);
        return 0;
    }

    std::vector<std::pair<std::string, Rational>> rows{
        {"t1", sink}, {"t2", sink}, {"network", network}, {"average", average}};
    if (format == Format::Csv) {
        emit_csv_row(out, {"target", "failure_exact", "failure_decimal", "success_exact",
                           "success_decimal"});
        for (const auto& [name, failure] : rows) {
            const Rational success = Rational(1) - failure;
            emit_csv_row(out, {name, failure.to_fraction_string(),
                               failure.to_decimal_string(opt.precision),
                               success.to_fraction_string(),
                               success.to_decimal_string(opt.precision)});
        }
        return 0;
    }

    out << "butterfly failure probabilities (closed form), q = " << q.str()
        << ", erasure p = " << p.to_fraction_string() << "\n";
    std::vector<std::vector<std::string>> table{
        {"target", "failure", "~failure", "success", "~success"}};
    for (const auto& [name, failure] : rows) {
        const Rational success = Rational(1) - failure;
        table.push_back({name, failure.to_fraction_string(),
                         failure.to_decimal_string(opt.precision), success.to_fraction_string(),
                         success.to_decimal_string(opt.precision)});
    }
    emit_table(out, table);
    return 0;
}

// ---- enumerate -------------------------------------------------------------

int cmd_enumerate(const CommonOptions& opt, std::ostream& out) {
    const NetworkSpec spec = NetworkSpec::resolve(opt.network);
    const FieldPtr field = parse_field(opt.field);
    const auto erasure = erasure_model_of(opt);
    EnumerationOptions options;
    options.max_evaluations = opt.budget;
    const EnumerationResult result = enumerate_detailed(spec, field, erasure, options);

    const Format format = parse_format(opt.format);
    const Rational p = erasure ? erasure->p : Rational(0);
    if (format == Format::Json) {
        json sinks = json::object();
        for (const auto& [id, failure] : result.probabilities.per_sink) {
            json entry = prob_json(failure, opt.precision);
            if (result.sink_success_counts)
                entry["success_count"] = result.sink_success_counts->at(id).str();
            sinks[id] = std::move(entry);
        }
        json network = prob_json(result.probabilities.network, opt.precision);
        if (result.network_success_count)
            network["success_count"] = result.network_success_count->str();
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "enumerate"},
                 {"network", opt.network},
                 {"q", std::to_string(field->order())},
                 {"erasure_p", erasure ? json(p.to_fraction_string()) : json(nullptr)},
                 {"precision", opt.precision},
                 {"total_assignments", result.total_assignments.str()},
                 {"evaluations", result.evaluations},
                 {"results",
                  {{"per_sink", std::move(sinks)},
                   {"network", std::move(network)},
                   {"average", prob_json(result.probabilities.average, opt.precision)}}}};
        emit_json(out, doc);
        return 0;
    }

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"target", "failure", "~failure", "success", "~success", "success_count"});
    auto add_row = [&](const std::string& name, const Rational& failure,
                       const std::optional<BigInt>& count) {
        const Rational success = Rational(1) - failure;
        rows.push_back({name, failure.to_fraction_string(),
                        failure.to_decimal_string(opt.precision), success.to_fraction_string(),
                        success.to_decimal_string(opt.precision), count ? count->str() : ""});
    };
    for (const auto& [id, failure] : result.probabilities.per_sink)
        add_row(id, failure,
                result.sink_success_counts
                    ? std::optional<BigInt>(result.sink_success_counts->at(id))
                    : std::nullopt);
    add_row("network", result.probabilities.network, result.network_success_count);
    add_row("average", result.probabilities.average, std::nullopt);

    if (format == Format::Csv) {
        for (auto& row : rows) emit_csv_row(out, row);
        return 0;
    }
    out << "exhaustive enumeration, network = " << opt.network << ", field = gf("
        << field->order() << ")";
    if (erasure) out << ", erasure p = " << p.to_fraction_string();
    out << "\n"
        << "assignments = " << result.total_assignments.str()
        << ", evaluations = " << result.evaluations << "\n";
    emit_table(out, rows);
    return 0;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const CommonOptions& opt, std::ostream& out) {
    if (opt.trials < 1) throw ParseError("--trials must be >= 1");
    const NetworkSpec spec = NetworkSpec::resolve(opt.network);
    const FieldPtr field = parse_field(opt.field);
    const auto erasure = erasure_model_of(opt);
    const MonteCarloResult result =
        monte_carlo_detailed(spec, field, erasure, opt.trials, opt.seed);

    const Format format = parse_format(opt.format);
    if (format == Format::Json) {
        json sinks = json::object();
        for (const auto& [id, estimate] : result.probabilities.per_sink) {
            json entry = estimate_json(estimate);
            entry["failure_count"] = result.sink_failure_counts.at(id);
            sinks[id] = std::move(entry);
        }
        json network = estimate_json(result.probabilities.network);
        network["failure_count"] = result.network_failure_count;
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "simulate"},
                 {"network", opt.network},
                 {"q", std::to_string(field->order())},
                 {"erasure_p",
                  erasure ? json(erasure->p.to_fraction_string()) : json(nullptr)},
                 {"trials", result.trials},
                 {"seed", result.seed},
                 {"results",
                  {{"per_sink", std::move(sinks)},
                   {"network", std::move(network)},
                   {"average", estimate_json(result.probabilities.average)}}}};
        emit_json(out, doc);
        return 0;
    }

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"target", "failure_mean", "success_mean", "std_error", "ci95", "count"});
    auto add_row = [&](const std::string& name, const Estimate& e,
                       std::optional<std::uint64_t> count) {
        const ConfidenceInterval ci = confidence_interval(e);
        std::string interval = "[" + double_str(ci.low, opt.precision) + ", " +
                               double_str(ci.high, opt.precision) + "]" +
                               (ci.wilson ? " (wilson)" : "");
        rows.push_back({name, double_str(e.mean, opt.precision),
                        double_str(1.0 - e.mean, opt.precision),
                        double_str(e.std_error, opt.precision), interval,
                        count ? std::to_string(*count) : ""});
    };
    for (const auto& [id, estimate] : result.probabilities.per_sink)
        add_row(id, estimate, result.sink_failure_counts.at(id));
    add_row("network", result.probabilities.network, result.network_failure_count);
    add_row("average", result.probabilities.average, std::nullopt);

    if (format == Format::Csv) {
        for (auto& row : rows) emit_csv_row(out, row);
        return 0;
    }
    out << "monte carlo, network = " << opt.network << ", field = gf(" << field->order()
        << "), trials = " << result.trials << ", seed = " << result.seed;
    if (erasure) out << ", erasure p = " << erasure->p.to_fraction_string();
    out << "\n";
    emit_table(out, rows);
    return 0;
}

// ---- polynomial ------------------------------------------------------------

int cmd_polynomial(const CommonOptions& opt, std::ostream& out) {
    const NetworkSpec spec = NetworkSpec::resolve(opt.network);
    const FieldPtr field = parse_field(opt.field);
    EnumerationOptions options;
    options.max_evaluations = opt.budget;
    const ErasurePolynomials polys = erasure_polynomial(spec, field, options);

    auto success_poly = [](const RationalPolynomial& failure) {
        return RationalPolynomial::constant(Rational(1)) - failure;
    };

    const Format format = parse_format(opt.format);
    if (format == Format::Json) {
        json sinks = json::object();
        for (const auto& [id, poly] : polys.sink_failure)
            sinks[id] = {{"failure_coefficients", poly_coeff_strings(poly)},
                         {"success_coefficients", poly_coeff_strings(success_poly(poly))}};
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "polynomial"},
                 {"network", opt.network},
                 {"q", std::to_string(field->order())},
                 {"variable", "p"},
                 {"results",
                  {{"per_sink", std::move(sinks)},
                   {"network",
                    {{"failure_coefficients", poly_coeff_strings(polys.network_failure)},
                     {"success_coefficients",
                      poly_coeff_strings(success_poly(polys.network_failure))}}},
                   {"average",
                    {{"failure_coefficients", poly_coeff_strings(polys.average_failure)},
                     {"success_coefficients",
                      poly_coeff_strings(success_poly(polys.average_failure))}}}}}};
        emit_json(out, doc);
        return 0;
    }

    std::vector<std::pair<std::string, const RationalPolynomial*>> rows;
    for (const auto& [id, poly] : polys.sink_failure) rows.emplace_back(id, &poly);
    rows.emplace_back("network", &polys.network_failure);
    rows.emplace_back("average", &polys.average_failure);

    if (format == Format::Csv) {
        emit_csv_row(out, {"target", "kind", "coefficients_ascending"});
        for (const auto& [name, poly] : rows) {
            auto join = [](const std::vector<std::string>& v) {
                std::string s;
                for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + v[i];
                return s;
            };
            emit_csv_row(out, {name, "failure", join(poly_coeff_strings(*poly))});
            emit_csv_row(out, {name, "success", join(poly_coeff_strings(success_poly(*poly)))});
        }
        return 0;
    }

    out << "failure probabilities as exact polynomials in p, network = " << opt.network
        << ", field = gf(" << field->order() << ")\n";
    for (const auto& [name, poly] : rows) {
        out << name << " failure:  " << polynomial_str(*poly) << "\n";
        out << name << " success:  " << polynomial_str(success_poly(*poly)) << "\n";
    }
    return 0;
}

// ---- threshold -------------------------------------------------------------

int cmd_threshold(const std::string& success_text, const CommonOptions& opt, std::ostream& out) {
    const Rational target = Rational::from_string(success_text);
    const ThresholdResult result = threshold_search(target);

    const Format format = parse_format(opt.format);
    if (format == Format::Json) {
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "threshold"},
                 {"target_success", target.to_fraction_string()},
                 {"minimal_integer_q", result.minimal_integer_q.str()},
                 {"minimal_prime_power_q", result.minimal_prime_power_q.str()},
                 {"success_below",
                  {{"exact", result.success_below.to_fraction_string()},
                   {"decimal", result.success_below.to_decimal_string(opt.precision)}}},
                 {"success_at",
                  {{"exact", result.success_at.to_fraction_string()},
                   {"decimal", result.success_at.to_decimal_string(opt.precision)}}}};
        emit_json(out, doc);
        return 0;
    }
    if (format == Format::Csv) {
        emit_csv_row(out, {"target_success", "minimal_integer_q", "minimal_prime_power_q",
                           "success_below", "success_at"});
        emit_csv_row(out, {target.to_fraction_string(), result.minimal_integer_q.str(),
                           result.minimal_prime_power_q.str(),
                           result.success_below.to_fraction_string(),
                           result.success_at.to_fraction_string()});
        return 0;
    }
    out << "smallest q with network success >= " << target.to_fraction_string() << "\n"
        << "minimal integer q:      " << result.minimal_integer_q.str() << "\n"
        << "minimal prime power q:  " << result.minimal_prime_power_q.str() << "\n"
        << "success at q-1:         " << result.success_below.to_fraction_string() << " ~ "
        << result.success_below.to_decimal_string(opt.precision) << "\n"
        << "success at q:           " << result.success_at.to_fraction_string() << " ~ "
        << result.success_at.to_decimal_string(opt.precision) << "\n";
    return 0;
}

// ---- sweep -----------------------------------------------------------------

std::vector<std::uint64_t> parse_q_list(const std::string& text) {
    std::vector<std::uint64_t> qs;
    std::stringstream ss(text);
    std::string item;
    auto parse_u64 = [&](const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
                return std::isdigit(c);
            }))
            throw ParseError("bad field order '" + s + "' in '" + text + "'");
        return static_cast<std::uint64_t>(std::stoull(s));
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (auto dots = item.find(".."); dots != std::string::npos) {
            const std::uint64_t lo = parse_u64(item.substr(0, dots));
            const std::uint64_t hi = parse_u64(item.substr(dots + 2));
            if (lo > hi) throw ParseError("empty range '" + item + "'");
            for (std::uint64_t q = lo; q <= hi; ++q) qs.push_back(q);
        } else {
            qs.push_back(parse_u64(item));
        }
    }
    for (std::uint64_t q : qs)
        if (q < 2) throw ParseError("field orders in a sweep must be >= 2");
    return qs;
}

int cmd_sweep(const std::string& fields_text, const std::string& erasures_text,
              const std::string& columns_text, const CommonOptions& opt, std::ostream& out) {
    const std::vector<std::uint64_t> qs = parse_q_list(fields_text);
    std::vector<Rational> ps;
    {
        std::stringstream ss(erasures_text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) ps.push_back(parse_probability(item));
        if (ps.empty()) ps.push_back(Rational(0));
    }
    bool want_formula = false, want_enumerate = false, want_simulate = false, want_rate = false;
    {
        std::stringstream ss(columns_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "formula") want_formula = true;
            else if (item == "enumerate") want_enumerate = true;
            else if (item == "simulate") want_simulate = true;
            else if (item == "rate") want_rate = true;
            else if (!item.empty())
                throw ParseError("unknown sweep column '" + item +
                                 "'; expected formula, enumerate, simulate, rate");
        }
    }
    if ((want_formula || want_rate) && opt.network != "builtin:butterfly")
        throw ParseError("formula and rate columns apply to builtin:butterfly only");
    const NetworkSpec spec = NetworkSpec::resolve(opt.network);

    std::vector<std::string> sink_ids;
    for (const auto& t : spec.sinks()) sink_ids.push_back(t);
    std::sort(sink_ids.begin(), sink_ids.end());

    std::vector<std::string> columns{"q", "p"};
    if (want_formula)
        for (const char* t : {"sink", "network", "average"}) {
            columns.push_back(std::string("formula_failure_") + t);
            columns.push_back(std::string("formula_success_dec_") + t);
        }
    if (want_enumerate) {
        for (const auto& id : sink_ids) columns.push_back("enumerate_failure_" + id);
        columns.push_back("enumerate_failure_network");
        columns.push_back("enumerate_failure_average");
        columns.push_back("enumerate_success_dec_network");
    }
    if (want_simulate) {
        for (const auto& id : sink_ids) columns.push_back("simulate_failure_mean_" + id);
        columns.push_back("simulate_failure_mean_network");
        columns.push_back("simulate_failure_mean_average");
        columns.push_back("simulate_std_error_network");
    }
    if (want_rate) {
        columns.push_back("rate_sink");
        columns.push_back("rate_network");
    }

    std::vector<std::vector<std::string>> rows;
    for (std::uint64_t q : qs) {
        for (const Rational& p : ps) {
            std::vector<std::string> row{std::to_string(q), p.to_fraction_string()};
            if (want_formula) {
                const FormulaInput input(BigInt(q), p);
                for (Target t : {Target::Sink, Target::Network, Target::Average}) {
                    const Rational failure = butterfly_failure(input, t);
                    row.push_back(failure.to_fraction_string());
                    row.push_back((Rational(1) - failure).to_decimal_string(opt.precision));
                }
            }
            if (want_enumerate || want_simulate) {
                FieldPtr field;
                std::uint64_t fp = 0;
                std::uint32_t fm = 0;
                if (factor_prime_power(q, fp, fm)) field = Field::create(fp, fm);
                const auto erasure = p.is_zero() ? std::optional<ErasureModel>()
                                                 : std::optional<ErasureModel>(ErasureModel(p));
                if (want_enumerate) {
                    bool filled = false;
                    if (field) {
                        EnumerationOptions options;
                        options.max_evaluations = opt.budget;
                        try {
                            const auto exact =
                                enumerate_exact(spec, field, erasure, options);
                            for (const auto& id : sink_ids)
                                row.push_back(exact.per_sink.at(id).to_fraction_string());
                            row.push_back(exact.network.to_fraction_string());
                            row.push_back(exact.average.to_fraction_string());
                            row.push_back(
                                (Rational(1) - exact.network).to_decimal_string(opt.precision));
                            filled = true;
                        } catch (const SearchSpaceTooLarge&) {
                            // out of budget: leave the cells empty
                        }
                    }
                    if (!filled)
                        for (std::size_t i = 0; i < sink_ids.size() + 3; ++i) row.push_back("");
                }
                if (want_simulate) {
                    if (field) {
                        const auto mc = monte_carlo(spec, field, erasure, opt.trials, opt.seed);
                        for (const auto& id : sink_ids)
                            row.push_back(double_str(mc.per_sink.at(id).mean, opt.precision));
                        row.push_back(double_str(mc.network.mean, opt.precision));
                        row.push_back(double_str(mc.average.mean, opt.precision));
                        row.push_back(double_str(mc.network.std_error, opt.precision));
                    } else {
                        for (std::size_t i = 0; i < sink_ids.size() + 3; ++i) row.push_back("");
                    }
                }
            }
            if (want_rate) {
                const FormulaInput input(BigInt(q), p);
                const Rational rate_sink =
                    Rational(BigInt(q)) * butterfly_failure(input, Target::Sink);
                const Rational rate_network =
                    Rational(BigInt(q)) * butterfly_failure(input, Target::Network);
                row.push_back(rate_sink.to_decimal_string(opt.precision));
                row.push_back(rate_network.to_decimal_string(opt.precision));
            }
            rows.push_back(std::move(row));
        }
    }

    const Format format = parse_format(opt.format);
    if (format == Format::Json) {
        json jrows = json::array();
        for (const auto& row : rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < columns.size(); ++i)
                obj[columns[i]] = row[i].empty() ? json(nullptr) : json(row[i]);
            jrows.push_back(std::move(obj));
        }
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "sweep"},
                 {"network", opt.network},
                 {"columns", columns},
                 {"rows", std::move(jrows)}};
        emit_json(out, doc);
        return 0;
    }
    if (format == Format::Csv) {
        emit_csv_row(out, columns);
        for (const auto& row : rows) emit_csv_row(out, row);
        return 0;
    }
    std::vector<std::vector<std::string>> table{columns};
    table.insert(table.end(), rows.begin(), rows.end());
    emit_table(out, table);
    return 0;
}

// ---- limits ----------------------------------------------------------------

int cmd_limits(const std::string& rate_q_text, const CommonOptions& opt, std::ostream& out) {
    const Rational p = opt.erasure.empty() ? Rational(0) : parse_probability(opt.erasure);
    std::vector<std::uint64_t> rate_qs;
    if (!rate_q_text.empty()) rate_qs = parse_q_list(rate_q_text);

    const Rational sink = limit_failure(p, Target::Sink);
    const Rational network = limit_failure(p, Target::Network);

    std::vector<BigInt> qs_big(rate_qs.begin(), rate_qs.end());
    const auto sink_rates = convergence_rate_check(Target::Sink, qs_big);
    const auto network_rates = convergence_rate_check(Target::Network, qs_big);

    const Format format = parse_format(opt.format);
    if (format == Format::Json) {
        json rates = json::array();
        for (std::size_t i = 0; i < qs_big.size(); ++i)
            rates.push_back({{"q", qs_big[i].str()},
                             {"rate_sink", sink_rates[i].second.to_decimal_string(opt.precision)},
                             {"rate_network",
                              network_rates[i].second.to_decimal_string(opt.precision)}});
        json doc{{"schema_version", kSchemaVersion},
                 {"command", "limits"},
                 {"erasure_p", p.to_fraction_string()},
                 {"limits",
                  {{"sink", prob_json(sink, opt.precision)},
                   {"average", prob_json(sink, opt.precision)},
                   {"network", prob_json(network, opt.precision)}}},
                 {"rates", std::move(rates)}};
        emit_json(out, doc);
        return 0;
    }
    if (format == Format::Csv) {
        emit_csv_row(out, {"target", "limit_failure_exact", "limit_failure_decimal"});
        emit_csv_row(out, {"sink", sink.to_fraction_string(), sink.to_decimal_string(opt.precision)});
        emit_csv_row(out,
                     {"average", sink.to_fraction_string(), sink.to_decimal_string(opt.precision)});
        emit_csv_row(out, {"network", network.to_fraction_string(),
                           network.to_decimal_string(opt.precision)});
        if (!qs_big.empty()) {
            emit_csv_row(out, {});
            emit_csv_row(out, {"q", "rate_sink", "rate_network"});
            for (std::size_t i = 0; i < qs_big.size(); ++i)
                emit_csv_row(out, {qs_big[i].str(),
                                   sink_rates[i].second.to_decimal_string(opt.precision),
                                   network_rates[i].second.to_decimal_string(opt.precision)});
        }
        return 0;
    }

    out << "failure probability limits as q grows, erasure p = " << p.to_fraction_string() << "\n";
    std::vector<std::vector<std::string>> table{{"target", "limit failure", "~"}};
    table.push_back({"sink", sink.to_fraction_string(), sink.to_decimal_string(opt.precision)});
    table.push_back({"average", sink.to_fraction_string(), sink.to_decimal_string(opt.precision)});
    table.push_back(
        {"network", network.to_fraction_string(), network.to_decimal_string(opt.precision)});
    emit_table(out, table);
    if (!qs_big.empty()) {
        out << "\nconvergence rates q * failure(q, p=0); sink -> 5, network -> 9\n";
        std::vector<std::vector<std::string>> rt{{"q", "rate_sink", "rate_network"}};
        for (std::size_t i = 0; i < qs_big.size(); ++i)
            rt.push_back({qs_big[i].str(),
                          sink_rates[i].second.to_decimal_string(opt.precision),
                          network_rates[i].second.to_decimal_string(opt.precision)});
        emit_table(out, rt);
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"random linear network coding laboratory for multicast DAGs"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string threshold_success;
    std::string sweep_fields;
    std::string sweep_erasures;
    std::string sweep_columns = "formula,rate";
    std::string limits_rate_q;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "output format: table, csv, or json");
        cmd->add_option("--precision", opt.precision, "significant digits for decimals")
            ->check(CLI::Range(1, 50));
    };

    CLI::App* formula = app.add_subcommand("formula", "closed-form butterfly failure probabilities");
    formula->add_option("--field", opt.field, "field as gf(q); any integer q >= 2")->required();
    formula->add_option("--erasure", opt.erasure, "per-channel failure probability (a/b or decimal)");
    add_format(formula);

    CLI::App* enumerate = app.add_subcommand("enumerate", "exact exhaustive enumeration");
    enumerate->add_option("--network", opt.network, "builtin:butterfly or a network file");
    enumerate->add_option("--field", opt.field, "field as gf(q), q a prime power")->required();
    enumerate->add_option("--erasure", opt.erasure, "per-channel failure probability");
    enumerate->add_option("--budget", opt.budget, "maximum number of propagations");
    add_format(enumerate);

    CLI::App* simulate = app.add_subcommand("simulate", "seeded monte carlo estimates");
    simulate->add_option("--network", opt.network, "builtin:butterfly or a network file");
    simulate->add_option("--field", opt.field, "field as gf(q), q a prime power")->required();
    simulate->add_option("--erasure", opt.erasure, "per-channel failure probability");
    simulate->add_option("--trials", opt.trials, "number of trials");
    simulate->add_option("--seed", opt.seed, "master seed");
    add_format(simulate);

    CLI::App* polynomial = app.add_subcommand("polynomial",
                                              "failure probabilities as polynomials in p");
    polynomial->add_option("--network", opt.network, "builtin:butterfly or a network file");
    polynomial->add_option("--field", opt.field, "field as gf(q), q a prime power")->required();
    polynomial->add_option("--budget", opt.budget, "maximum number of propagations");
    add_format(polynomial);

    CLI::App* threshold = app.add_subcommand("threshold", "smallest q reaching a success target");
    threshold->add_option("--success", threshold_success, "network success target in (0, 1)")
        ->required();
    add_format(threshold);

    CLI::App* sweep = app.add_subcommand("sweep", "table over field orders and erasure grid");
    sweep->add_option("--fields", sweep_fields, "field orders, e.g. 2..4 or 2,3,8")->required();
    sweep->add_option("--erasures", sweep_erasures, "erasure probabilities, comma separated");
    sweep->add_option("--columns", sweep_columns,
                      "column groups: formula, enumerate, simulate, rate");
    sweep->add_option("--network", opt.network, "builtin:butterfly or a network file");
    sweep->add_option("--trials", opt.trials, "trials for simulate columns");
    sweep->add_option("--seed", opt.seed, "seed for simulate columns");
    sweep->add_option("--budget", opt.budget, "budget for enumerate columns");
    add_format(sweep);

    CLI::App* limits = app.add_subcommand("limits", "large-field limits and convergence rates");
    limits->add_option("--erasure", opt.erasure, "per-channel failure probability");
    limits->add_option("--rate-q", limits_rate_q, "orders for the q * failure rate table");
    add_format(limits);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (formula->parsed()) return cmd_formula(opt, out);
        if (enumerate->parsed()) return cmd_enumerate(opt, out);
        if (simulate->parsed()) return cmd_simulate(opt, out);
        if (polynomial->parsed()) return cmd_polynomial(opt, out);
        if (threshold->parsed()) return cmd_threshold(threshold_success, opt, out);
        if (sweep->parsed()) return cmd_sweep(sweep_fields, sweep_erasures, sweep_columns, opt, out);
        if (limits->parsed()) return cmd_limits(limits_rate_q, opt, out);
        err << "error: no command given\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SearchSpaceTooLarge& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rlnclab::cli
