#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "radsum/fit.hpp"

namespace radsum {

inline constexpr std::array<const char*, 17> kRecordColumns = {
    "method", "d",     "k",     "N",       "M",        "H",       "beta",    "sigma", "primes",
    "max_radicand",    "value_mid",        "value_rad", "exact",  "ratio",   "witness", "status", "error"};

/// One grid cell.  Every field is kept as the exact text that is emitted, so
/// CSV and JSON carry identical values.
struct ExperimentRecord {
    std::array<std::string, kRecordColumns.size()> fields;

    std::string& operator[](const std::string& column);
    const std::string& operator[](const std::string& column) const;
};

struct SweepResult {
    std::string method;
    std::vector<ExperimentRecord> records;
    std::vector<double> wall_seconds;
    std::optional<ExponentFit> fit;
    std::string fit_error;
};

/// Parses a JSON sweep description and runs it.  Cells run on `workers`
/// threads; records come back in grid order.
///
///   {"method": "construct", "grid": {"d": [2], "k": [2], "N": [10000], "beta": ["1/3"]},
///    "fit": true}
///
/// Methods and their grid keys (rightmost varies fastest):
///   construct      d k N beta
///   oracle-g       d k N
///   oracle-inhom   d k N beta
///   dual-scan      d primes H sigma
///   taylor-verify  family M          (family is S2, S3 or S4)
SweepResult run_sweep(const std::string& spec_json, unsigned workers = 1, long precision_cap = 1L << 20);

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_json(std::ostream& out, const SweepResult& result);

/// RFC 4180 reader: header row plus data rows.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// Points for fit_exponent from a record table: x from x_column (or the first
/// of N, max_radicand, H that is filled when x_column is "auto") and y from
/// value_mid.  Rows that are not "ok" or are exact are skipped.
std::vector<FitPoint> fit_points(const std::vector<std::vector<std::string>>& table,
                                 const std::string& x_column = "auto");

}  // namespace radsum
