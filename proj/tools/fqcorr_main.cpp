// Command-line workbench: factoring, arithmetic-function evaluation, local
// densities, singular series, group averages, and the experiment drivers.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqcorr/fqcorr.hpp"

namespace {

using namespace fqcorr;

std::string bounded_str(const BoundedReal& b) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g ± %.3g", b.value, b.error_bound);
    return buf;
}

// "a..b" (inclusive) filtered to odd primes, or a comma-separated list.
std::vector<uint32_t> parse_prime_list(const std::string& text) {
    auto is_odd_prime = [](uint32_t n) {
        if (n < 3 || n % 2 == 0) return false;
        for (uint32_t d = 3; uint64_t(d) * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    };
    std::vector<uint32_t> out;
    size_t dots = text.find("..");
    if (dots != std::string::npos) {
        uint32_t lo = uint32_t(std::stoul(text.substr(0, dots)));
        uint32_t hi = uint32_t(std::stoul(text.substr(dots + 2)));
        for (uint32_t v = lo; v <= hi; ++v)
            if (is_odd_prime(v)) out.push_back(v);
    } else {
        size_t pos = 0;
        while (pos <= text.size()) {
            size_t comma = text.find(',', pos);
            std::string piece =
                text.substr(pos, comma == std::string::npos ? comma : comma - pos);
            uint32_t v = uint32_t(std::stoul(piece));
            if (!is_odd_prime(v)) throw std::invalid_argument(piece + " is not an odd prime");
            out.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (out.empty()) throw std::invalid_argument("prime list '" + text + "' is empty");
    return out;
}

std::pair<int, int> parse_range(const std::string& text) {
    size_t dots = text.find("..");
    if (dots == std::string::npos) {
        int v = std::stoi(text);
        return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

void emit_table(const ResultTable& table, const std::string& csv_path,
                const std::string& json_path, bool verbose) {
    if (csv_path.empty() || csv_path == "-")
        table.write_csv(std::cout);
    else
        table.save_csv(csv_path);
    if (!json_path.empty()) table.save_json(json_path);
    if (verbose) {
        for (const auto& row : table.rows) {
            std::string line;
            for (size_t i = 0; i < table.columns.size(); ++i) {
                if (i) line += "  ";
                line += table.columns[i] + "=" + (row[i].empty() ? "-" : row[i]);
            }
            std::cerr << line << "\n";
        }
    }
}

ArithmeticFunction lookup_function(const std::string& name) {
    auto fn = find_function(name);
    if (!fn)
        throw std::invalid_argument("unknown function '" + name +
                                    "'; available: " + registry_help());
    return *fn;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlations of arithmetic functions over F_q[T]"};
    app.require_subcommand(1);

    try {
        // ---- factor ----------------------------------------------------
        uint32_t q = 3;
        uint64_t seed = 0;
        std::string poly_text;
        auto* factor_cmd = app.add_subcommand("factor", "factor a polynomial into irreducibles");
        factor_cmd->add_option("--q", q, "odd prime modulus")->required();
        factor_cmd->add_option("--seed", seed, "random seed for the splitting step");
        factor_cmd->add_option("poly", poly_text, "polynomial literal, e.g. \"T^3+2*T+1\"")
            ->required();
        factor_cmd->callback([&] {
            PrimeField F(q);
            RandomSource rng(seed);
            Factorization fac = factor(parse_poly(poly_text, F), rng);
            if (fac.unit.value() != 1) std::cout << "unit: " << fac.unit.value() << "\n";
            for (const auto& [prime, exponent] : fac.factors) {
                std::cout << "(" << prime.str() << ")";
                if (exponent > 1) std::cout << "^" << exponent;
                int chi = prime.chi();
                std::cout << "  chi=" << (chi > 0 ? "+1" : chi < 0 ? "-1" : "0") << "\n";
            }
        });

        // ---- eval ------------------------------------------------------
        std::string func_name;
        auto* eval_cmd = app.add_subcommand("eval", "evaluate a registry function at a polynomial");
        eval_cmd->add_option("--q", q, "odd prime modulus")->required();
        eval_cmd->add_option("--seed", seed, "random seed for factorization");
        eval_cmd->add_option("function", func_name, "registry function name")->required();
        eval_cmd->add_option("poly", poly_text, "polynomial literal")->required();
        eval_cmd->callback([&] {
            PrimeField F(q);
            ArithmeticFunction fn = lookup_function(func_name);
            Poly f = parse_poly(poly_text, F);
            if (!f.is_monic()) throw std::invalid_argument("functions are defined on monic polynomials");
            RandomSource rng(seed);
            std::cout << fn(sft_of_poly(f, rng)).str() << "\n";
        });

        // ---- delta -----------------------------------------------------
        std::string shifts_text, prime_text;
        uint64_t residue_budget = kDefaultResidueBudget;
        auto* delta_cmd = app.add_subcommand("delta", "exact local density at a prime");
        delta_cmd->add_option("--q", q, "odd prime modulus")->required();
        delta_cmd->add_option("--h", shifts_text, "shift tuple, e.g. 0,1,T")->required();
        delta_cmd->add_option("--P", prime_text, "monic irreducible polynomial")->required();
        delta_cmd->add_option("--budget", residue_budget, "residue enumeration budget");
        delta_cmd->callback([&] {
            PrimeField F(q);
            Poly P = parse_poly(prime_text, F);
            if (P.degree() < 1 || !is_irreducible(P))
                throw std::invalid_argument("--P must be irreducible of degree >= 1");
            P = P.monic();
            ShiftTuple h = parse_shift_tuple(shifts_text, F);
            std::cout << rat_str(delta(P, h, residue_budget).value) << "\n";
        });

        // ---- series ----------------------------------------------------
        int cutoff = 12;
        auto* series_cmd =
            app.add_subcommand("series", "singular series with a rigorous truncation bound");
        series_cmd->add_option("--q", q, "odd prime modulus")->required();
        series_cmd->add_option("--h", shifts_text, "shift tuple")->required();
        series_cmd->add_option("--cutoff", cutoff, "prime degree cutoff");
        series_cmd->add_option("--seed", seed, "random seed");
        series_cmd->add_option("--budget", residue_budget, "residue enumeration budget");
        series_cmd->callback([&] {
            PrimeField F(q);
            ShiftTuple h = parse_shift_tuple(shifts_text, F);
            RandomSource rng(seed);
            std::cout << bounded_str(singular_series(h, cutoff, rng, residue_budget)) << "\n";
        });

        // ---- kq ----------------------------------------------------------
        auto* kq_cmd = app.add_subcommand("kq", "mean-value constant of b with truncation bound");
        kq_cmd->add_option("--q", q, "odd prime modulus")->required();
        kq_cmd->add_option("--cutoff", cutoff, "prime degree cutoff");
        kq_cmd->callback([&] {
            std::cout << bounded_str(landau_constant(PrimeField(q), cutoff)) << "\n";
        });

        // ---- tq ----------------------------------------------------------
        std::string h1_text;
        auto* tq_cmd =
            app.add_subcommand("tq", "prime-to-sum-of-squares constant with truncation bound");
        tq_cmd->add_option("--q", q, "odd prime modulus")->required();
        tq_cmd->add_option("--h", h1_text, "nonzero shift polynomial")->required();
        tq_cmd->add_option("--cutoff", cutoff, "prime degree cutoff");
        tq_cmd->add_option("--seed", seed, "random seed");
        tq_cmd->callback([&] {
            PrimeField F(q);
            RandomSource rng(seed);
            std::cout << bounded_str(T_constant(F, parse_poly(h1_text, F), cutoff, rng)) << "\n";
        });

        // ---- obstruction -------------------------------------------------
        auto* obstruction_cmd =
            app.add_subcommand("obstruction", "find a prime with vanishing local density");
        obstruction_cmd->add_option("--q", q, "odd prime modulus")->required();
        obstruction_cmd->add_option("--h", shifts_text, "shift tuple")->required();
        obstruction_cmd->add_option("--seed", seed, "random seed");
        obstruction_cmd->add_option("--budget", residue_budget, "residue enumeration budget");
        obstruction_cmd->callback([&] {
            PrimeField F(q);
            RandomSource rng(seed);
            auto P = has_local_obstruction(parse_shift_tuple(shifts_text, F), rng, residue_budget);
            std::cout << (P ? P->str() : "none") << "\n";
        });

        // ---- group-average -------------------------------------------------
        int degree_n = 3;
        auto* gavg_cmd =
            app.add_subcommand("group-average", "exact mean over signed permutations");
        gavg_cmd->add_option("--n", degree_n, "group degree")->required();
        gavg_cmd->add_option("function", func_name, "registry function name")->required();
        gavg_cmd->callback([&] {
            std::cout << rat_str(average(lookup_function(func_name), degree_n)) << "\n";
        });

        // ---- predict --------------------------------------------------------
        std::string funcs_text;
        auto* predict_cmd = app.add_subcommand(
            "predict", "large-q main term of a correlation (exact rational)");
        predict_cmd->add_option("--q", q, "odd prime modulus for interpreting shifts")
            ->default_val(3);
        predict_cmd->add_option("--n", degree_n, "polynomial degree")->required();
        predict_cmd->add_option("--h", shifts_text, "shift tuple")->required();
        predict_cmd->add_option("functions", funcs_text, "comma list of registry functions")
            ->required();
        predict_cmd->callback([&] {
            PrimeField F(q);
            ShiftTuple h = parse_shift_tuple(shifts_text, F);
            std::cout << rat_str(
                             predicted_correlation(parse_function_list(funcs_text), h, degree_n))
                      << "\n";
        });

        // ---- experiment -----------------------------------------------------
        auto* exp_cmd = app.add_subcommand("experiment", "experiment drivers producing CSV/JSON");
        exp_cmd->require_subcommand(1);
        std::string out_path, json_path;
        bool verbose = false;
        int workers = 0;

        auto add_common = [&](CLI::App* sub) {
            sub->add_option("-o,--output", out_path, "CSV output path ('-' = stdout)");
            sub->add_option("--json", json_path, "JSON output path");
            sub->add_flag("--verbose", verbose, "print one summary line per row");
            sub->add_option("--workers", workers, "worker threads (0 = machine parallelism)");
            sub->add_option("--seed", seed, "random seed");
            sub->set_config("--config", "", "read options from an INI-style config file");
        };

        // varying-h
        int degree_flag = 100;
        uint64_t max_h_index = 728, samples = 0;
        auto* vh = exp_cmd->add_subcommand("varying-h", "sampled two-point ratios across shifts");
        vh->add_option("--q", q, "odd prime modulus")->default_val(3);
        vh->add_option("--n", degree_flag, "polynomial degree");
        vh->add_option("--max-h-index", max_h_index, "largest shift index (h = 0 is skipped)");
        vh->add_option("--samples", samples, "sample count (0 = 5 n^2)");
        vh->add_option("--budget", residue_budget, "residue enumeration budget");
        add_common(vh);
        vh->callback([&] {
            VaryingHParams params{PrimeField(q)};
            params.degree = degree_flag;
            params.max_h_index = max_h_index;
            params.samples = samples;
            params.seed = seed;
            params.workers = workers;
            params.residue_budget = residue_budget;
            emit_table(experiment_varying_h(params), out_path, json_path, verbose);
        });

        // varying-n
        std::string n_range_text = "3..99";
        auto* vn = exp_cmd->add_subcommand("varying-n",
                                           "normalized autocorrelation against the singular series");
        vn->add_option("--q", q, "odd prime modulus")->default_val(5);
        vn->add_option("--h", shifts_text, "shift tuple")->default_val("0,1");
        vn->add_option("--n", n_range_text, "degree range a..b (inclusive)");
        vn->add_option("--samples", samples, "per-degree sample count (0 = ceil(q n^2.5))");
        vn->add_option("--cutoff", cutoff, "series cutoff (0 = automatic)")->default_val(0);
        vn->add_option("--budget", residue_budget, "residue enumeration budget");
        add_common(vn);
        vn->callback([&] {
            PrimeField F(q);
            VaryingNParams params(F, parse_shift_tuple(shifts_text, F));
            auto [lo, hi] = parse_range(n_range_text);
            params.n_lo = lo;
            params.n_hi = hi;
            params.samples_override = samples;
            params.seed = seed;
            params.workers = workers;
            params.series_cutoff = cutoff;
            params.residue_budget = residue_budget;
            emit_table(experiment_varying_n(params), out_path, json_path, verbose);
        });

        // varying-q
        std::string primes_text = "3..29", degree_range_text = "3..49";
        uint64_t samples_per_degree = 1000;
        auto* vq = exp_cmd->add_subcommand("varying-q", "shift-T to shift-1 ratio against 2 + 1/q");
        vq->add_option("--primes", primes_text, "prime list: a..b or comma separated");
        vq->add_option("--n", degree_range_text, "degree range a..b pooled per prime");
        vq->add_option("--samples-per-degree", samples_per_degree, "draws per (q, degree)");
        add_common(vq);
        vq->callback([&] {
            VaryingQParams params;
            params.primes = parse_prime_list(primes_text);
            auto [lo, hi] = parse_range(degree_range_text);
            params.n_lo = lo;
            params.n_hi = hi;
            params.samples_per_degree = samples_per_degree;
            params.seed = seed;
            params.workers = workers;
            emit_table(experiment_varying_q(params), out_path, json_path, verbose);
        });

        // short-interval
        std::string f0_text, eps_text, eps_max_text = "0.1";
        uint64_t eval_budget = 100'000'000;
        auto* si = exp_cmd->add_subcommand("short-interval",
                                           "deterministic interval means against the prediction");
        si->add_option("--q", q, "odd prime modulus")->default_val(3);
        si->add_option("--h", shifts_text, "shift tuple")->default_val("0,1");
        si->add_option("--f0", f0_text, "interval center (epsilon-grid mode)");
        si->add_option("--eps-max", eps_max_text, "largest epsilon on the grid");
        si->add_option("--eps", eps_text, "fixed epsilon (degree-grid mode)");
        si->add_option("--n", n_range_text, "degree range for the degree grid");
        si->add_option("--cutoff", cutoff, "series cutoff (0 = automatic)")->default_val(0);
        si->add_option("--eval-budget", eval_budget, "interval size budget");
        si->add_option("--budget", residue_budget, "residue enumeration budget");
        add_common(si);
        si->callback([&] {
            PrimeField F(q);
            ShortIntervalParams params(F, parse_shift_tuple(shifts_text, F));
            if (!f0_text.empty()) {
                params.center = parse_poly(f0_text, F);
                params.eps_max = parse_rational(eps_max_text);
            } else {
                if (eps_text.empty())
                    throw std::invalid_argument("need --f0 (epsilon grid) or --eps (degree grid)");
                params.fixed_eps = parse_rational(eps_text);
                auto [lo, hi] = parse_range(n_range_text);
                params.n_lo = lo;
                params.n_hi = hi;
            }
            params.seed = seed;
            params.workers = workers;
            params.series_cutoff = cutoff;
            params.eval_budget = eval_budget;
            params.residue_budget = residue_budget;
            emit_table(experiment_short_interval(params), out_path, json_path, verbose);
        });

        // residual-sweep
        auto* rs = exp_cmd->add_subcommand(
            "residual-sweep", "exhaustive correlations against the group-average main term");
        rs->add_option("--primes", primes_text, "prime list: a..b or comma separated")
            ->default_val("3..97");
        rs->add_option("--n", degree_flag, "correlation degree")->default_val(3);
        rs->add_option("--h", shifts_text, "shift tuple literals")->default_val("0,1");
        rs->add_option("--functions", funcs_text, "comma list of registry functions")
            ->default_val("b,b");
        rs->add_option("--eval-budget", eval_budget, "exhaustive evaluation budget");
        add_common(rs);
        rs->callback([&] {
            ResidualSweepParams params;
            params.primes = parse_prime_list(primes_text);
            params.degree = degree_flag;
            params.shift_literals = shifts_text;
            params.function_names = funcs_text;
            params.seed = seed;
            params.workers = workers;
            params.eval_budget = eval_budget;
            emit_table(experiment_residual_sweep(params), out_path, json_path, verbose);
        });

        CLI11_PARSE(app, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
