// Command-line front end: constructions, oracles, dual scans, Taylor
// cancellation, sweeps and exponent fits.
//
// Exit codes: 0 success, 2 infeasible or invalid input, 3 precision cap
// reached before a result could be certified, 1 anything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "radsum/construct.hpp"
#include "radsum/decimal.hpp"
#include "radsum/fit.hpp"
#include "radsum/lattice.hpp"
#include "radsum/oracle.hpp"
#include "radsum/sweep.hpp"
#include "radsum/taylor.hpp"

using namespace radsum;

namespace {

unsigned workers_from_env() {
    if (const char* env = std::getenv("RADSUM_WORKERS")) {
        try {
            long w = std::stol(env);
            if (w >= 1) return static_cast<unsigned>(w);
        } catch (const std::exception&) {
        }
        throw InputError("RADSUM_WORKERS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<mpz_class> parse_list(const std::string& s) {
    std::vector<mpz_class> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) out.push_back(parse_integer(tok));
    if (out.empty()) throw InputError("empty list '" + s + "'");
    return out;
}

std::pair<long, long> parse_range(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) {
        long v = parse_integer(s).get_si();
        return {v, v};
    }
    return {parse_integer(s.substr(0, colon)).get_si(), parse_integer(s.substr(colon + 1)).get_si()};
}

// "u:v,u:v,..." with rational u and v.
std::vector<ExpansionParams> parse_params(const std::string& s, unsigned d) {
    std::vector<ExpansionParams> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw InputError("parameter '" + tok + "' must be u:v");
        out.push_back({d, parse_rational(tok.substr(0, colon)), parse_rational(tok.substr(colon + 1))});
    }
    return out;
}

std::string join(const std::vector<mpz_class>& xs, const char* sep = " ") {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : sep) + x.get_str();
    return out;
}

void print_ball(const char* label, const Ball& b) {
    auto dec = to_decimal(b);
    std::cout << label << ": " << dec.mid << " +/- " << dec.rad << "\n";
}

void print_distance(const CertifiedDistance& c) {
    if (c.exact_integer) {
        std::cout << "distance: 0 (exact integer)\n";
        return;
    }
    print_ball("distance", c.value);
    std::cout << "precision_bits: " << c.achieved_precision << "\n";
}

void print_series(const RationalSeries& s) {
    for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it)
        std::cout << "M^" << it->first << ": " << it->second.get_str() << "\n";
    std::cout << "remainder: O(M^" << s.truncation_order - 1 << ")\n";
}

void print_solution(const CancellationSolution& s) {
    std::cout << "params:";
    for (const auto& p : s.params) std::cout << " (" << p.u.get_str() << "," << p.v.get_str() << ")";
    std::cout << "\nweights: " << join(s.integer_weights) << "\n";
    std::cout << "leading: " << s.leading_coefficient.get_str() << " * M^-" << s.leading_order << "\n";
    std::cout << "linear: " << s.linear_slope.get_str() << " * M + " << s.linear_constant.get_str() << "\n";
    if (s.signed_weights) std::cout << "signed_weights: true\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sums of d-th roots of integers modulo one"};
    app.require_subcommand(1);
    long precision_cap = 1L << 20;
    app.add_option("--precision-cap", precision_cap, "Largest working precision in bits")->check(CLI::Range(64L, 1L << 30));

    std::string d_text = "2", k_text = "1", n_text, beta_text = "0", primes_text, h_text, sigma_text = "1";

    auto* c_construct = app.add_subcommand("construct", "Build a radicand tuple approximating beta");
    c_construct->add_option("--d", d_text, "Root degree")->required();
    c_construct->add_option("--k", k_text, "Number of radicals")->required();
    c_construct->add_option("--N", n_text, "Radicand bound")->required();
    c_construct->add_option("--beta", beta_text, "Target as a/b or decimal");
    c_construct->add_option("--primes", primes_text, "Comma-separated distinct primes instead of the first k");

    auto* c_oracle = app.add_subcommand("oracle", "Exhaustive minima over all tuples");
    c_oracle->require_subcommand(1);
    auto* c_g = c_oracle->add_subcommand("g", "Smallest non-zero distance to an integer");
    auto* c_inhom = c_oracle->add_subcommand("inhom", "Smallest distance to beta modulo one");
    for (auto* c : {c_g, c_inhom}) {
        c->add_option("--d", d_text)->required();
        c->add_option("--k", k_text)->required();
        c->add_option("--N", n_text)->required();
    }
    c_inhom->add_option("--beta", beta_text)->required();

    auto* c_dual = app.add_subcommand("dual-scan", "Scan h^sigma * max_i ||h theta_i||");
    c_dual->add_option("--d", d_text)->required();
    c_dual->add_option("--primes", primes_text, "Comma-separated primes")->required();
    c_dual->add_option("--H", h_text)->required();
    c_dual->add_option("--sigma", sigma_text)->required();

    auto* c_taylor = app.add_subcommand("taylor", "Laurent expansions and cancellation");
    c_taylor->require_subcommand(1);
    std::string u_text = "0", v_text = "0", params_text, family, u_range = "0", v_range = "0", m_text;
    long order = 7;
    std::uint64_t limit = 0, resume = 0;
    bool allow_signed = false;
    auto* t_expand = c_taylor->add_subcommand("expand", "Expand ((M+u)^d+v)^(1/d)");
    t_expand->add_option("--d", d_text);
    t_expand->add_option("--u", u_text);
    t_expand->add_option("--v", v_text);
    t_expand->add_option("--order", order, "Keep terms down to M^-order");
    auto* t_solve = c_taylor->add_subcommand("solve", "Cancelling weights for given parameters");
    t_solve->add_option("--d", d_text);
    t_solve->add_option("--params", params_text, "u:v,u:v,...")->required();
    t_solve->add_flag("--signed", allow_signed, "Allow weights of both signs (exploratory)");
    auto* t_search = c_taylor->add_subcommand("search", "Scan parameter grids for cancellations");
    t_search->add_option("--d", d_text);
    t_search->add_option("--k", k_text)->required();
    t_search->add_option("--u-range", u_range, "lo:hi");
    t_search->add_option("--v-range", v_range, "lo:hi");
    t_search->add_option("--limit", limit, "Subsets per run (0 = all)");
    t_search->add_option("--resume", resume, "Resumption token from a previous run");
    t_search->add_flag("--signed", allow_signed);
    auto* t_verify = c_taylor->add_subcommand("verify", "Measure the order of a cancellation family");
    t_verify->add_option("--family", family, "S2, S3 or S4");
    t_verify->add_option("--params", params_text, "u:v,u:v,... (solved first)");
    t_verify->add_option("--d", d_text);
    t_verify->add_option("--M", m_text, "Comma-separated M values")->required();

    std::string spec_path, csv_path, json_path, input_path, x_column = "auto";
    auto* c_sweep = app.add_subcommand("sweep", "Run a JSON experiment grid");
    c_sweep->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
    c_sweep->add_option("--csv", csv_path, "CSV output (default: stdout)");
    c_sweep->add_option("--json", json_path, "JSON output");

    auto* c_fit = app.add_subcommand("fit", "Fit log(distance) against log(x)");
    c_fit->add_option("--input", input_path, "Sweep CSV")->required()->check(CLI::ExistingFile);
    c_fit->add_option("--x", x_column, "x column (default: N, max_radicand or H)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        EvalOptions eval;
        eval.precision_cap = precision_cap;
        const unsigned d = static_cast<unsigned>(parse_integer(d_text).get_ui());

        if (c_construct->parsed()) {
            ConstructOptions opts;
            opts.inhom.eval = eval;
            if (!primes_text.empty()) opts.primes = parse_list(primes_text);
            auto res = construct(d, parse_integer(k_text).get_ui(), parse_integer(n_text),
                                 parse_rational(beta_text), opts);
            std::cout << "primes: " << join(res.plan.primes) << "\nQ: " << res.plan.Q << "\nT: " << res.plan.T
                      << "\nq: " << join(res.q) << "\nc: " << join(res.c)
                      << "\nradicands: " << join(res.tuple.radicands) << "\n";
            print_distance(res.distance);
        } else if (c_oracle->parsed()) {
            OracleOptions opts;
            opts.eval = eval;
            opts.workers = workers_from_env();
            auto k = parse_integer(k_text).get_ui();
            auto N = parse_integer(n_text).get_ui();
            auto res = c_g->parsed() ? g_min(k, d, N, opts) : inhom_min(k, d, N, parse_rational(beta_text), opts);
            std::cout << "witness: " << join(res.witness.radicands) << "\ntuples_scanned: " << res.tuples_scanned
                      << "\nexclusions: " << res.exclusions << "\n";
            print_distance(res.minimum);
        } else if (c_dual->parsed()) {
            DualScanOptions opts;
            opts.workers = workers_from_env();
            opts.precision_cap = precision_cap;
            auto theta = ThetaVector::from_primes(parse_list(primes_text), d, 128);
            auto rep = dual_scan(theta, parse_integer(h_text).get_ui(), parse_rational(sigma_text), opts);
            print_ball("worst_quality", rep.worst_quality);
            std::cout << "witness_h: " << rep.witness_h << "\n";
            for (const auto& dec : rep.decades) {
                std::cout << "decade [" << dec.lo << ", " << dec.hi << "] h=" << dec.witness << " ";
                print_ball("quality", dec.quality);
            }
        } else if (t_expand->parsed()) {
            print_series(expand_radical({d, parse_rational(u_text), parse_rational(v_text)}, order));
        } else if (t_solve->parsed()) {
            auto sols = solve_cancellation(parse_params(params_text, d), allow_signed);
            if (sols.empty()) std::cout << "no solution\n";
            for (const auto& s : sols) print_solution(s);
        } else if (t_search->parsed()) {
            SearchOptions opts;
            opts.limit = limit;
            opts.resume_from = resume;
            opts.allow_signed = allow_signed;
            opts.workers = workers_from_env();
            auto [ulo, uhi] = parse_range(u_range);
            auto [vlo, vhi] = parse_range(v_range);
            auto res = search_params(d, parse_integer(k_text).get_ui(), ulo, uhi, vlo, vhi, opts);
            for (const auto& s : res.solutions) print_solution(s);
            std::cout << "subsets_examined: " << res.subsets_examined << "\n";
            if (res.resume_token) std::cout << "resume: " << *res.resume_token << "\n";
        } else if (t_verify->parsed()) {
            CancellationSolution sol;
            if (!family.empty()) {
                if (family.size() != 2 || (family[0] != 'S' && family[0] != 's'))
                    throw InputError("family must be S2, S3 or S4");
                sol = square_root_family(static_cast<std::size_t>(family[1] - '0'));
            } else if (!params_text.empty()) {
                auto sols = solve_cancellation(parse_params(params_text, d));
                if (sols.empty()) throw InfeasibleError("no positive cancelling weights for these parameters");
                sol = sols.front();
            } else {
                throw InputError("taylor verify needs --family or --params");
            }
            print_solution(sol);
            bool failed = false;
            for (const auto& e : verify_order(sol, parse_list(m_text), eval)) {
                std::cout << "M=" << e.M << " ";
                if (!e.error.empty()) {
                    std::cout << "error: " << e.error << "\n";
                    failed = true;
                } else if (e.exact) {
                    std::cout << "exact integer (excluded)\n";
                } else {
                    auto dist = to_decimal(e.distance->value);
                    auto ratio = to_decimal(*e.ratio);
                    std::cout << "max_radicand=" << e.max_radicand << " distance=" << dist.mid << " +/- " << dist.rad
                              << " ratio=" << ratio.mid << " +/- " << ratio.rad << "\n";
                }
            }
            if (failed) return 2;
        } else if (c_sweep->parsed()) {
            std::ifstream in(spec_path);
            std::stringstream buf;
            buf << in.rdbuf();
            auto result = run_sweep(buf.str(), workers_from_env(), precision_cap);
            if (csv_path.empty()) {
                write_csv(std::cout, result.records);
            } else {
                std::ofstream out(csv_path, std::ios::binary);
                write_csv(out, result.records);
            }
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                write_json(out, result);
            }
            if (result.fit)
                std::cerr << "fit slope: " << result.fit->slope << " (~" << result.fit->slope_rational.get_str() << ")\n";
            else if (!result.fit_error.empty())
                std::cerr << "fit: " << result.fit_error << "\n";
        } else if (c_fit->parsed()) {
            std::ifstream in(input_path, std::ios::binary);
            auto fit = fit_exponent(fit_points(read_csv(in), x_column));
            std::cout << "points: " << fit.points.size() << "\nslope: " << fit.slope
                      << "\nslope_rational: " << fit.slope_rational.get_str() << "\nintercept: " << fit.intercept
                      << "\nresidual_norm: " << fit.residual_norm << "\n";
        }
    } catch (const UndecidedError& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
