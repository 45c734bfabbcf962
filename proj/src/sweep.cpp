#include "radsum/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "radsum/construct.hpp"
#include "radsum/decimal.hpp"
#include "radsum/lattice.hpp"
#include "radsum/oracle.hpp"
#include "radsum/parallel.hpp"
#include "radsum/taylor.hpp"

namespace radsum {

namespace {

std::size_t column_index(const std::string& column) {
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i)
        if (column == kRecordColumns[i]) return i;
    throw InputError("unknown record column '" + column + "'");
}

using Cell = std::map<std::string, std::string>;

const std::map<std::string, std::vector<std::string>>& method_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"construct", {"d", "k", "N", "beta"}},
        {"oracle-g", {"d", "k", "N"}},
        {"oracle-inhom", {"d", "k", "N", "beta"}},
        {"dual-scan", {"d", "primes", "H", "sigma"}},
        {"taylor-verify", {"family", "M"}},
    };
    return keys;
}

std::string value_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto& x : v) out += (out.empty() ? "" : " ") + value_text(x);
        return out;
    }
    if (v.is_number()) return v.dump();
    throw InputError("sweep: unsupported grid value " + v.dump());
}

std::vector<Cell> expand_grid(const std::string& method, const nlohmann::json& grid) {
    auto it = method_keys().find(method);
    if (it == method_keys().end()) throw InputError("sweep: unknown method '" + method + "'");
    std::vector<Cell> cells{Cell{}};
    for (const auto& key : it->second) {
        if (!grid.contains(key)) throw InputError("sweep: grid is missing '" + key + "'");
        const auto& values = grid.at(key);
        std::vector<std::string> texts;
        // A primes entry is itself a list; a bare list of numbers is one value.
        if (values.is_array() && !(key == "primes" && !values.empty() && !values.front().is_array())) {
            for (const auto& v : values) texts.push_back(value_text(v));
        } else {
            texts.push_back(value_text(values));
        }
        std::vector<Cell> next;
        for (const auto& c : cells)
            for (const auto& t : texts) {
                Cell n = c;
                n[key] = t;
                next.push_back(std::move(n));
            }
        cells = std::move(next);
    }
    return cells;
}

std::string join(const std::vector<mpz_class>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : " ") + x.get_str();
    return out;
}

// Accepts "2 3" and "2,3".
std::vector<mpz_class> split_integers(std::string s) {
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<mpz_class> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_integer(tok));
    return out;
}

std::uint64_t to_u64(const mpz_class& z, const char* what) {
    if (z < 1 || !z.fits_ulong_p()) throw InputError(std::string("sweep: ") + what + " out of range");
    return z.get_ui();
}

void put_value(ExperimentRecord& r, const Ball& v) {
    DecimalInterval dec = to_decimal(v);
    r["value_mid"] = dec.mid;
    r["value_rad"] = dec.rad;
}

void put_distance(ExperimentRecord& r, const CertifiedDistance& c) {
    put_value(r, c.value);
    r["exact"] = c.exact_integer ? "true" : "false";
}

ExperimentRecord run_cell(const std::string& method, const Cell& cell, const EvalOptions& eval) {
    ExperimentRecord r;
    r["method"] = method;
    for (const auto& [key, value] : cell)
        if (key != "family") r[key] = value;
    r["status"] = "ok";
    try {
        if (method == "construct") {
            ConstructOptions opts;
            opts.inhom.eval = eval;
            auto res = construct(static_cast<unsigned>(to_u64(parse_integer(cell.at("d")), "d")),
                                 to_u64(parse_integer(cell.at("k")), "k"), parse_integer(cell.at("N")),
                                 parse_rational(cell.at("beta")), opts);
            r["primes"] = join(res.plan.primes);
            r["max_radicand"] = std::max_element(res.tuple.radicands.begin(), res.tuple.radicands.end())->get_str();
            r["witness"] = join(res.tuple.radicands);
            put_distance(r, res.distance);
        } else if (method == "oracle-g" || method == "oracle-inhom") {
            OracleOptions opts;
            opts.eval = eval;
            auto d = static_cast<unsigned>(to_u64(parse_integer(cell.at("d")), "d"));
            auto k = to_u64(parse_integer(cell.at("k")), "k");
            auto N = to_u64(parse_integer(cell.at("N")), "N");
            OracleResult res = method == "oracle-g" ? g_min(k, d, N, opts)
                                                    : inhom_min(k, d, N, parse_rational(cell.at("beta")), opts);
            r["max_radicand"] =
                std::max_element(res.witness.radicands.begin(), res.witness.radicands.end())->get_str();
            r["witness"] = join(res.witness.radicands);
            put_distance(r, res.minimum);
        } else if (method == "dual-scan") {
            DualScanOptions opts;
            opts.precision_cap = eval.precision_cap;
            auto d = static_cast<unsigned>(to_u64(parse_integer(cell.at("d")), "d"));
            ThetaVector theta = ThetaVector::from_primes(split_integers(cell.at("primes")), d, 128);
            auto rep = dual_scan(theta, to_u64(parse_integer(cell.at("H")), "H"), parse_rational(cell.at("sigma")),
                                 opts);
            r["witness"] = std::to_string(rep.witness_h);
            put_value(r, rep.worst_quality);
            r["exact"] = "false";
        } else if (method == "taylor-verify") {
            const std::string fam = cell.at("family");
            if (fam.size() != 2 || (fam[0] != 'S' && fam[0] != 's') || fam[1] < '2' || fam[1] > '4')
                throw InputError("sweep: family must be S2, S3 or S4");
            std::size_t k = static_cast<std::size_t>(fam[1] - '0');
            auto sol = square_root_family(k);
            r["d"] = "2";
            r["k"] = std::to_string(k);
            auto entries = verify_order(sol, {parse_integer(cell.at("M"))}, eval);
            const auto& e = entries.front();
            if (!e.error.empty()) throw InputError(e.error);
            r["max_radicand"] = e.max_radicand.get_str();
            r["witness"] = join(e.radicands);
            put_distance(r, *e.distance);
            if (e.ratio) r["ratio"] = to_decimal(*e.ratio).mid;
        }
    } catch (const InfeasibleError& e) {
        r["status"] = "infeasible";
        r["error"] = e.what();
    } catch (const UndecidedError& e) {
        r["status"] = "undecided";
        r["error"] = e.what();
    } catch (const BudgetError& e) {
        r["status"] = "budget";
        r["error"] = e.what();
    } catch (const InputError& e) {
        r["status"] = "input-error";
        r["error"] = e.what();
    } catch (const std::exception& e) {
        r["status"] = "error";
        r["error"] = e.what();
    }
    return r;
}

std::vector<std::vector<std::string>> as_table(const std::vector<ExperimentRecord>& records) {
    std::vector<std::vector<std::string>> table;
    table.emplace_back(kRecordColumns.begin(), kRecordColumns.end());
    for (const auto& r : records) table.emplace_back(r.fields.begin(), r.fields.end());
    return table;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string& ExperimentRecord::operator[](const std::string& column) { return fields[column_index(column)]; }
const std::string& ExperimentRecord::operator[](const std::string& column) const {
    return fields[column_index(column)];
}

SweepResult run_sweep(const std::string& spec_json, unsigned workers, long precision_cap) {
    nlohmann::json spec;
    try {
        spec = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("sweep: invalid JSON: ") + e.what());
    }
    if (!spec.is_object() || !spec.contains("method") || !spec.contains("grid"))
        throw InputError("sweep: spec needs 'method' and 'grid'");

    SweepResult result;
    result.method = spec.at("method").get<std::string>();
    std::vector<Cell> cells = expand_grid(result.method, spec.at("grid"));
    EvalOptions eval;
    eval.precision_cap = precision_cap;

    result.records.resize(cells.size());
    result.wall_seconds.resize(cells.size());
    parallel_tasks(cells.size(), workers, [&](unsigned, std::uint64_t i) {
        auto start = std::chrono::steady_clock::now();
        result.records[i] = run_cell(result.method, cells[i], eval);
        result.wall_seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    if (spec.value("fit", false)) {
        try {
            result.fit = fit_exponent(fit_points(as_table(result.records), spec.value("fit_x", "auto")));
        } catch (const InputError& e) {
            result.fit_error = e.what();
        }
    }
    return result;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    for (const auto& row : as_table(records)) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << "\r\n";
    }
}

void write_json(std::ostream& out, const SweepResult& result) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = "1";
    doc["method"] = result.method;
    doc["records"] = nlohmann::ordered_json::array();
    for (const auto& r : result.records) {
        nlohmann::ordered_json row;
        for (std::size_t i = 0; i < kRecordColumns.size(); ++i) row[kRecordColumns[i]] = r.fields[i];
        doc["records"].push_back(row);
    }
    if (result.fit) {
        nlohmann::ordered_json fit;
        fit["slope"] = result.fit->slope;
        fit["slope_rational"] = result.fit->slope_rational.get_str();
        fit["intercept"] = result.fit->intercept;
        fit["residual_norm"] = result.fit->residual_norm;
        fit["points"] = nlohmann::ordered_json::array();
        for (const auto& p : result.fit->points) fit["points"].push_back({p.x, p.y});
        doc["fit"] = fit;
    } else {
        doc["fit"] = nullptr;
    }
    if (!result.fit_error.empty()) doc["fit_error"] = result.fit_error;
    nlohmann::ordered_json meta;
    meta["wall_seconds"] = result.wall_seconds;
    double total = 0;
    for (double s : result.wall_seconds) total += s;
    meta["total_wall_seconds"] = total;
    doc["metadata"] = meta;
    out << doc.dump(2) << "\n";
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    char c;
    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get(c);
            end_row();
        } else if (c == '\n') {
            end_row();
        } else {
            field += c;
        }
    }
    if (quoted) throw InputError("csv: unterminated quoted field");
    if (any || !field.empty() || !row.empty()) end_row();
    return rows;
}

std::vector<FitPoint> fit_points(const std::vector<std::vector<std::string>>& table, const std::string& x_column) {
    if (table.empty()) throw InputError("fit: empty table");
    const auto& header = table.front();
    auto find = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    auto y = find("value_mid");
    if (!y) throw InputError("fit: table has no value_mid column");
    auto status = find("status");
    auto exact = find("exact");

    std::vector<const std::vector<std::string>*> usable;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& row = table[i];
        if (row.size() != header.size()) throw InputError("fit: ragged row " + std::to_string(i));
        if (status && row[*status] != "ok") continue;
        if (exact && row[*exact] == "true") continue;
        usable.push_back(&row);
    }

    std::optional<std::size_t> x;
    if (x_column == "auto") {
        for (const char* name : {"N", "max_radicand", "H"}) {
            auto idx = find(name);
            if (idx && !usable.empty() &&
                std::all_of(usable.begin(), usable.end(), [&](auto* r) { return !(*r)[*idx].empty(); })) {
                x = idx;
                break;
            }
        }
        if (!x) throw InputError("fit: no x column is filled in every usable row");
    } else {
        x = find(x_column);
        if (!x) throw InputError("fit: table has no column '" + x_column + "'");
    }

    std::vector<FitPoint> points;
    for (auto* r : usable)
        points.push_back({parse_rational((*r)[*x]).get_d(), parse_rational((*r)[*y]).get_d()});
    std::sort(points.begin(), points.end(), [](const FitPoint& a, const FitPoint& b) { return a.x < b.x; });
    return points;
}

}  // namespace radsum
