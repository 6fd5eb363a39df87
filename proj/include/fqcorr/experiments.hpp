#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fqcorr/bigint.hpp"
#include "fqcorr/factor.hpp"
#include "fqcorr/hyperoctahedral.hpp"
#include "fqcorr/local_density.hpp"
#include "fqcorr/output.hpp"
#include "fqcorr/poly.hpp"
#include "fqcorr/poly_parse.hpp"
#include "fqcorr/rng.hpp"
#include "fqcorr/series.hpp"
#include "fqcorr/sft.hpp"
#include "fqcorr/shifts.hpp"

namespace fqcorr {

namespace detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Runs body(chunk_index, lo, hi) over [0, total) split into fixed-size
// chunks. The chunk grid is independent of the worker count, so per-chunk
// derived random streams make results reproducible at any parallelism.
inline void parallel_for_chunks(uint64_t total, uint64_t chunk_size, int workers,
                                const std::function<void(uint64_t, uint64_t, uint64_t)>& body) {
    if (total == 0) return;
    uint64_t nchunks = (total + chunk_size - 1) / chunk_size;
    std::atomic<uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            uint64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            uint64_t lo = c * chunk_size;
            uint64_t hi = std::min(total, lo + chunk_size);
            try {
                body(c, lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    int n_threads = std::min<uint64_t>(uint64_t(resolve_workers(workers)), nchunks);
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

constexpr uint64_t kChunkSize = 4096;

}  // namespace detail

enum class CorrelationMode { exhaustive, monte_carlo, short_interval };

inline std::string mode_name(CorrelationMode m) {
    switch (m) {
        case CorrelationMode::exhaustive: return "exhaustive";
        case CorrelationMode::monte_carlo: return "monte_carlo";
        default: return "short_interval";
    }
}

struct CorrelationSpec {
    PrimeField field;
    int degree;
    ShiftTuple shifts;
    std::vector<ArithmeticFunction> functions;  // one per shift
    CorrelationMode mode = CorrelationMode::exhaustive;
    uint64_t samples = 0;  // monte carlo draws
    uint64_t seed = 0;
    std::optional<ShortInterval> interval;  // short-interval mode
    int workers = 0;                        // 0 = machine parallelism
    uint64_t eval_budget = 100'000'000;

    void validate() const {
        if (degree < 1) throw std::invalid_argument("degree must be >= 1");
        if (int(functions.size()) != shifts.k())
            throw std::invalid_argument("need exactly one function per shift");
        if (shifts.max_degree() >= degree)
            throw std::invalid_argument("shift degrees must be below the correlation degree");
        if (mode == CorrelationMode::monte_carlo && samples == 0)
            throw std::invalid_argument("monte carlo mode needs samples >= 1");
        if (mode == CorrelationMode::short_interval && !interval)
            throw std::invalid_argument("short interval mode needs an interval");
    }
};

struct CorrelationResult {
    double estimate = 0.0;
    std::optional<Rat> exact;  // deterministic modes report the exact mean
    double std_error = 0.0;    // 0 in deterministic modes
    uint64_t sample_count = 0;
    uint64_t seed = 0;
    int workers = 1;
    std::string mode;
    double seconds = 0.0;
};

// One product term psi_1(f+h_1)...psi_k(f+h_k), stopping at the first zero
// factor (most registry functions vanish often, so this dominates runtime).
inline Int correlation_term(const Poly& f, const ShiftTuple& shifts,
                            const std::vector<ArithmeticFunction>& functions,
                            RandomSource& rng) {
    Int prod = 1;
    for (int i = 0; i < shifts.k(); ++i) {
        Int v = functions[size_t(i)](sft_of_poly(f + shifts.at(i), rng));
        if (v == 0) return Int(0);
        prod *= v;
    }
    return prod;
}

inline CorrelationResult correlate(const CorrelationSpec& spec) {
    spec.validate();
    auto start = std::chrono::steady_clock::now();
    const PrimeField& F = spec.field;
    RandomSource root(spec.seed);

    Int total_int;
    std::function<Poly(uint64_t, RandomSource&)> draw;
    switch (spec.mode) {
        case CorrelationMode::exhaustive:
            total_int = monic_count(F, spec.degree);
            draw = [&](uint64_t i, RandomSource&) {
                return Poly::monic_by_index(F, spec.degree, i);
            };
            break;
        case CorrelationMode::short_interval:
            if (spec.interval->center.degree() != spec.degree)
                throw std::invalid_argument("interval center degree mismatch");
            total_int = spec.interval->size();
            draw = [&](uint64_t i, RandomSource&) { return spec.interval->member(i); };
            break;
        case CorrelationMode::monte_carlo:
            total_int = spec.samples;
            draw = [&](uint64_t, RandomSource& rng) {
                return Poly::random_monic(F, spec.degree, rng);
            };
            break;
    }
    if (spec.mode != CorrelationMode::monte_carlo && total_int > spec.eval_budget)
        throw BudgetExceeded(total_int);
    uint64_t total = total_int.convert_to<uint64_t>();

    uint64_t nchunks = (total + detail::kChunkSize - 1) / detail::kChunkSize;
    std::vector<Int> sums(nchunks), squares(nchunks);
    detail::parallel_for_chunks(total, detail::kChunkSize, spec.workers,
                                [&](uint64_t c, uint64_t lo, uint64_t hi) {
                                    RandomSource rng = root.derive(c);
                                    Int s = 0, s2 = 0;
                                    for (uint64_t i = lo; i < hi; ++i) {
                                        Int v = correlation_term(draw(i, rng), spec.shifts,
                                                                 spec.functions, rng);
                                        if (v != 0) {
                                            s += v;
                                            s2 += v * v;
                                        }
                                    }
                                    sums[c] = std::move(s);
                                    squares[c] = std::move(s2);
                                });
    Int sum = 0, sum_sq = 0;
    for (uint64_t c = 0; c < nchunks; ++c) {
        sum += sums[c];
        sum_sq += squares[c];
    }

    CorrelationResult result;
    result.sample_count = total;
    result.seed = spec.seed;
    result.workers = detail::resolve_workers(spec.workers);
    result.mode = mode_name(spec.mode);
    Rat mean = Rat(sum, Int(total));
    result.estimate = rat_double(mean);
    if (spec.mode == CorrelationMode::monte_carlo) {
        if (total > 1) {
            Rat variance = (Rat(sum_sq) - Rat(sum * sum, Int(total))) / Rat(Int(total) - 1);
            result.std_error = std::sqrt(std::max(0.0, rat_double(variance) / double(total)));
        }
    } else {
        result.exact = mean;
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Experiment drivers
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json base_metadata(const std::string& experiment, uint64_t seed,
                                            int workers) {
    nlohmann::ordered_json m;
    m["experiment"] = experiment;
    m["version"] = "0.1.0";
    m["seed"] = seed;
    m["workers"] = resolve_workers(workers);
    return m;
}

inline void finish_metadata(nlohmann::ordered_json& m,
                            std::chrono::steady_clock::time_point start) {
    m["timing_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// b-values for a block of sampled polynomials, in parallel.
inline std::vector<uint8_t> b_flags(const std::vector<Poly>& polys, const RandomSource& base,
                                    int workers) {
    std::vector<uint8_t> flags(polys.size(), 0);
    parallel_for_chunks(polys.size(), kChunkSize, workers,
                        [&](uint64_t c, uint64_t lo, uint64_t hi) {
                            RandomSource rng = base.derive(c);
                            for (uint64_t i = lo; i < hi; ++i)
                                flags[i] =
                                    b_of_sft(sft_of_poly(polys[i], rng)) != 0 ? 1 : 0;
                        });
    return flags;
}

// Sum of b(f + shift) over a list of polynomials, in parallel.
inline uint64_t sum_b_shifted(const std::vector<Poly>& polys, const Poly& shift,
                              const RandomSource& base, int workers) {
    uint64_t nchunks = (polys.size() + kChunkSize - 1) / kChunkSize;
    std::vector<uint64_t> partial(nchunks, 0);
    parallel_for_chunks(polys.size(), kChunkSize, workers,
                        [&](uint64_t c, uint64_t lo, uint64_t hi) {
                            RandomSource rng = base.derive(c);
                            uint64_t s = 0;
                            for (uint64_t i = lo; i < hi; ++i)
                                if (b_of_sft(sft_of_poly(polys[i] + shift, rng)) != 0) ++s;
                            partial[c] = s;
                        });
    uint64_t total = 0;
    for (uint64_t v : partial) total += v;
    return total;
}

// Smallest cutoff with tail bound <= target, at least min_cutoff, holding
// the prime enumeration to roughly enum_cap polynomials per degree.
inline int auto_series_cutoff(const PrimeField& field, int k, int min_cutoff,
                              double target = 1e-4, double enum_cap = 5e6) {
    int d = std::max(1, min_cutoff);
    auto bound = [&](int D) {
        return double(k) * k * std::pow(double(field.q()), -double(D)) / double(field.q() - 1);
    };
    while (bound(d) > target && std::pow(double(field.q()), double(d + 1)) <= enum_cap) ++d;
    return d;
}

}  // namespace detail

// Varying h (two-point): one shared sample of monic degree-n polynomials,
// evaluated against every shift h = 1, 2, ... up to max_h_index in
// enumeration order (the h = 0 row is skipped). Reports the sampled ratio
//   N1(h) = sum b(f) b(f+h) / sum b(f) b(f+1)
// against the exact singular-series ratio H1(h).
struct VaryingHParams {
    PrimeField field;
    int degree = 100;
    uint64_t max_h_index = 728;     // paper-scale default: all h of degree < 6 over F_3
    uint64_t samples = 0;           // 0 -> 5 n^2
    uint64_t seed = 0;
    int workers = 0;
    uint64_t residue_budget = kDefaultResidueBudget;
};

inline ResultTable experiment_varying_h(const VaryingHParams& p) {
    auto start = std::chrono::steady_clock::now();
    const PrimeField& F = p.field;
    uint64_t samples = p.samples ? p.samples : uint64_t(5) * p.degree * p.degree;
    RandomSource root(p.seed);

    // Shared sample; only the b(f) = 1 survivors matter for every row.
    RandomSource sample_rng = root.derive(0);
    std::vector<Poly> sample;
    sample.reserve(samples);
    for (uint64_t i = 0; i < samples; ++i)
        sample.push_back(Poly::random_monic(F, p.degree, sample_rng));
    std::vector<uint8_t> flags = detail::b_flags(sample, root.derive(1), p.workers);
    std::vector<Poly> survivors;
    for (uint64_t i = 0; i < samples; ++i)
        if (flags[i]) survivors.push_back(std::move(sample[i]));

    Poly one = Poly::one(F);
    uint64_t denom = detail::sum_b_shifted(survivors, one, root.derive(2), p.workers);

    RandomSource ratio_rng = root.derive(3);
    ShiftTuple base_tuple(std::vector<Poly>{Poly::zero(F), one});

    ResultTable table;
    table.columns = {"h_index", "h", "sum_bb", "N1_exact", "N1", "H1_exact", "H1", "flag"};
    table.metadata = detail::base_metadata("varying-h", p.seed, p.workers);
    table.metadata["q"] = F.q();
    table.metadata["n"] = p.degree;
    table.metadata["samples"] = samples;
    table.metadata["survivors"] = survivors.size();
    table.metadata["denominator_bb1"] = denom;
    table.metadata["sample_reuse"] = "one f-sample shared across all shifts";

    for (uint64_t idx = 1; idx <= p.max_h_index; ++idx) {
        Poly h = Poly::from_index(F, idx);
        if (h.degree() >= p.degree) break;
        uint64_t num = detail::sum_b_shifted(survivors, h, root.derive(100 + idx), p.workers);
        Rat ratio = singular_series_ratio(ShiftTuple({Poly::zero(F), h}), base_tuple,
                                          ratio_rng, p.residue_budget);
        std::string flag, n1_exact, n1;
        if (denom == 0) {
            flag = "degenerate";
        } else {
            Rat est = Rat(num, denom);
            n1_exact = rat_str(est);
            n1 = format_double(rat_double(est));
        }
        table.add_row({std::to_string(idx), h.str(), std::to_string(num), n1_exact, n1,
                       rat_str(ratio), format_double(rat_double(ratio)), flag});
    }
    detail::finish_metadata(table.metadata, start);
    return table;
}

// Varying n: per-degree Monte Carlo estimate of the normalized k-point
// autocorrelation of b against the singular series reference value.
struct VaryingNParams {
    PrimeField field;
    ShiftTuple shifts;
    int n_lo = 3;
    int n_hi = 99;
    uint64_t samples_override = 0;  // 0 -> ceil(q * n^(5/2))
    uint64_t seed = 0;
    int workers = 0;
    int series_cutoff = 0;  // 0 -> automatic
    uint64_t residue_budget = kDefaultResidueBudget;

    VaryingNParams(PrimeField f, ShiftTuple h) : field(f), shifts(std::move(h)) {}
};

inline ResultTable experiment_varying_n(const VaryingNParams& p) {
    auto start = std::chrono::steady_clock::now();
    const PrimeField& F = p.field;
    int k = p.shifts.k();
    if (p.shifts.max_degree() >= p.n_lo)
        throw std::invalid_argument("shift degrees must be below every n in the range");
    RandomSource root(p.seed);

    int cutoff = p.series_cutoff
                     ? p.series_cutoff
                     : detail::auto_series_cutoff(F, k,
                                                  std::max(1, p.shifts.difference_product().degree()));
    RandomSource series_rng = root.derive(0);
    BoundedReal reference = singular_series(p.shifts, cutoff, series_rng, p.residue_budget);

    ResultTable table;
    table.columns = {"n",  "samples",   "sum_prod", "sum_b", "N2",
                     "S_qh", "S_qh_error", "flag"};
    table.metadata = detail::base_metadata("varying-n", p.seed, p.workers);
    table.metadata["q"] = F.q();
    table.metadata["h"] = p.shifts.str();
    table.metadata["series_cutoff"] = cutoff;

    for (int n = p.n_lo; n <= p.n_hi; ++n) {
        uint64_t samples =
            p.samples_override
                ? p.samples_override
                : uint64_t(std::ceil(double(F.q()) * std::pow(double(n), 2.5)));
        RandomSource row_root = root.derive(1000 + uint64_t(n));
        uint64_t nchunks = (samples + detail::kChunkSize - 1) / detail::kChunkSize;
        std::vector<uint64_t> prod_part(nchunks, 0), b_part(nchunks, 0);
        detail::parallel_for_chunks(
            samples, detail::kChunkSize, p.workers, [&](uint64_t c, uint64_t lo, uint64_t hi) {
                RandomSource rng = row_root.derive(c);
                uint64_t sp = 0, sb = 0;
                for (uint64_t i = lo; i < hi; ++i) {
                    Poly f = Poly::random_monic(F, n, rng);
                    if (b_of_sft(sft_of_poly(f, rng)) != 0) ++sb;
                    bool all = true;
                    for (int j = 0; j < k && all; ++j)
                        all = b_of_sft(sft_of_poly(f + p.shifts.at(j), rng)) != 0;
                    if (all) ++sp;
                }
                prod_part[c] = sp;
                b_part[c] = sb;
            });
        Int sum_prod = 0, sum_b = 0;
        for (uint64_t c = 0; c < nchunks; ++c) {
            sum_prod += prod_part[c];
            sum_b += b_part[c];
        }
        std::string n2, flag;
        if (sum_b == 0) {
            flag = "degenerate";
        } else {
            Rat est = Rat(int_pow(Int(samples), unsigned(k - 1)) * sum_prod,
                          int_pow(sum_b, unsigned(k)));
            n2 = format_double(rat_double(est));
        }
        table.add_row({std::to_string(n), std::to_string(samples), sum_prod.str(), sum_b.str(),
                       n2, format_double(reference.value), format_double(reference.error_bound),
                       flag});
    }
    detail::finish_metadata(table.metadata, start);
    return table;
}

// Varying q: the sampled ratio of b-autocorrelations at shifts T and 1,
// pooled over a degree range, against H3(q) = 2 + 1/q.
struct VaryingQParams {
    std::vector<uint32_t> primes;
    int n_lo = 3;
    int n_hi = 49;
    uint64_t samples_per_degree = 1000;
    uint64_t seed = 0;
    int workers = 0;
};

inline ResultTable experiment_varying_q(const VaryingQParams& p) {
    auto start = std::chrono::steady_clock::now();
    ResultTable table;
    table.columns = {"q", "sum_bbT", "sum_bb1", "N3", "H3_exact", "H3", "flag"};
    table.metadata = detail::base_metadata("varying-q", p.seed, p.workers);
    table.metadata["n_lo"] = p.n_lo;
    table.metadata["n_hi"] = p.n_hi;
    table.metadata["samples_per_degree"] = p.samples_per_degree;
    RandomSource root(p.seed);

    for (uint32_t q : p.primes) {
        PrimeField F(q);
        Poly T = Poly::variable(F), one = Poly::one(F);
        uint64_t degrees = uint64_t(p.n_hi - p.n_lo + 1);
        uint64_t total = degrees * p.samples_per_degree;
        uint64_t nchunks = (total + detail::kChunkSize - 1) / detail::kChunkSize;
        std::vector<uint64_t> numT(nchunks, 0), num1(nchunks, 0);
        RandomSource q_root = root.derive(q);
        detail::parallel_for_chunks(
            total, detail::kChunkSize, p.workers, [&](uint64_t c, uint64_t lo, uint64_t hi) {
                RandomSource rng = q_root.derive(c);
                uint64_t sT = 0, s1 = 0;
                for (uint64_t i = lo; i < hi; ++i) {
                    int n = p.n_lo + int(i / p.samples_per_degree);
                    Poly f = Poly::random_monic(F, n, rng);
                    if (b_of_sft(sft_of_poly(f, rng)) == 0) continue;
                    if (b_of_sft(sft_of_poly(f + T, rng)) != 0) ++sT;
                    if (b_of_sft(sft_of_poly(f + one, rng)) != 0) ++s1;
                }
                numT[c] = sT;
                num1[c] = s1;
            });
        uint64_t sum_T = 0, sum_1 = 0;
        for (uint64_t c = 0; c < nchunks; ++c) {
            sum_T += numT[c];
            sum_1 += num1[c];
        }
        Rat h3 = 2 + Rat(1, q);
        std::string n3, flag;
        if (sum_1 == 0) {
            flag = "degenerate";
        } else {
            n3 = format_double(double(sum_T) / double(sum_1));
        }
        table.add_row({std::to_string(q), std::to_string(sum_T), std::to_string(sum_1), n3,
                       rat_str(h3), format_double(rat_double(h3)), flag});
    }
    detail::finish_metadata(table.metadata, start);
    return table;
}

// Short intervals: the deterministic mean of prod b(f + h_i) over nested
// short intervals around f0, either on an epsilon grid (one row per
// attainable coefficient cutoff) or on a degree grid at fixed epsilon.
// The reference is H4 = S_{q,h} (K_q C(2n,n)/4^n)^k with its first-order
// approximation S K^k (pi n)^{-k/2}.
struct ShortIntervalParams {
    PrimeField field;
    ShiftTuple shifts;
    std::optional<Poly> center;      // epsilon-grid mode: fixed f0
    Rat eps_max = Rat(1, 10);        // epsilon-grid mode: rows for eps = i/n <= eps_max
    std::optional<Rat> fixed_eps;    // degree-grid mode: fixed epsilon, f0 = T^n
    int n_lo = 0, n_hi = 0;          // degree-grid mode range
    uint64_t seed = 0;
    int workers = 0;
    int series_cutoff = 0;  // 0 -> automatic
    uint64_t eval_budget = 100'000'000;
    uint64_t residue_budget = kDefaultResidueBudget;

    ShortIntervalParams(PrimeField f, ShiftTuple h) : field(f), shifts(std::move(h)) {}
};

inline ResultTable experiment_short_interval(const ShortIntervalParams& p) {
    auto start = std::chrono::steady_clock::now();
    const PrimeField& F = p.field;
    int k = p.shifts.k();
    RandomSource root(p.seed);

    int cutoff = p.series_cutoff
                     ? p.series_cutoff
                     : detail::auto_series_cutoff(F, k,
                                                  std::max(1, p.shifts.difference_product().degree()));
    RandomSource series_rng = root.derive(0);
    BoundedReal series = singular_series(p.shifts, cutoff, series_rng, p.residue_budget);
    BoundedReal kq = landau_constant(F, cutoff);

    auto h4_for = [&](int n) -> std::pair<double, double> {
        double mean_b = rat_double(Rat(binomial(2 * n, n), int_pow(Int(4), unsigned(n))));
        double base = kq.value * mean_b;
        double value = series.value * std::pow(base, k);
        // First-order propagation of the two bounded factors.
        double rel = (series.value > 0 ? series.error_bound / series.value : 0.0) +
                     double(k) * (kq.value > 0 ? kq.error_bound / kq.value : 0.0);
        return {value, std::abs(value) * rel * 1.0000001 + 1e-300};
    };
    auto h4_approx_for = [&](int n) {
        return series.value * std::pow(kq.value, k) *
               std::pow(3.14159265358979323846 * n, -double(k) / 2);
    };

    ResultTable table;
    table.columns = {"n",  "coeff_cutoff", "epsilon",  "interval_size", "sum_prod",
                     "N4_exact", "N4",       "H4", "H4_error",      "H4_approx", "flag"};
    table.metadata = detail::base_metadata("short-interval", p.seed, p.workers);
    table.metadata["q"] = F.q();
    table.metadata["h"] = p.shifts.str();
    table.metadata["series_cutoff"] = cutoff;
    table.metadata["S_qh"] = series.value;
    table.metadata["K_q"] = kq.value;

    // Evaluates the interval prefix sums for f0 at cutoffs 0..j_max; emits
    // one row per cutoff j at epsilon = j/n (exact, within its constancy
    // window).
    auto emit_rows = [&](const Poly& f0, int j_max, uint64_t stream) {
        int n = f0.degree();
        Int size_max = int_pow(Int(F.q()), unsigned(j_max) + 1);
        if (size_max > p.eval_budget) throw BudgetExceeded(size_max);
        uint64_t total = size_max.convert_to<uint64_t>();
        uint64_t nchunks = (total + detail::kChunkSize - 1) / detail::kChunkSize;
        std::vector<Int> partial(nchunks);
        RandomSource interval_root = root.derive(stream);
        detail::parallel_for_chunks(total, detail::kChunkSize, p.workers,
                                    [&](uint64_t c, uint64_t lo, uint64_t hi) {
                                        RandomSource rng = interval_root.derive(c);
                                        Int s = 0;
                                        for (uint64_t i = lo; i < hi; ++i) {
                                            Poly f = f0 + Poly::from_index(F, i);
                                            Int one_if = 1;
                                            for (int j = 0; j < k; ++j) {
                                                if (b_of_sft(sft_of_poly(f + p.shifts.at(j),
                                                                         rng)) == 0) {
                                                    one_if = 0;
                                                    break;
                                                }
                                            }
                                            s += one_if;
                                        }
                                        partial[c] = std::move(s);
                                    });
        auto [h4, h4_err] = h4_for(n);
        Int prefix = 0;
        uint64_t consumed_chunks = 0;
        uint64_t boundary = 1;
        for (int j = 0; j <= j_max; ++j) {
            boundary *= F.q();  // q^(j+1)
            uint64_t chunks_needed = (boundary + detail::kChunkSize - 1) / detail::kChunkSize;
            // Chunk grid is aligned to powers of q only when boundary is a
            // multiple of the chunk size; accumulate element-exact instead.
            while (consumed_chunks < chunks_needed && consumed_chunks < nchunks) {
                uint64_t lo = consumed_chunks * detail::kChunkSize;
                uint64_t hi = std::min(total, lo + detail::kChunkSize);
                if (hi <= boundary) {
                    prefix += partial[consumed_chunks];
                    ++consumed_chunks;
                } else {
                    break;
                }
            }
            Int sum = prefix;
            uint64_t covered = std::min<uint64_t>(consumed_chunks * detail::kChunkSize, total);
            if (covered < boundary) {
                // Finish the partially covered chunk range serially.
                RandomSource rng = root.derive(stream + 500000 + uint64_t(j));
                for (uint64_t i = covered; i < boundary; ++i) {
                    Poly f = f0 + Poly::from_index(F, i);
                    bool all = true;
                    for (int jj = 0; jj < k && all; ++jj)
                        all = b_of_sft(sft_of_poly(f + p.shifts.at(jj), rng)) != 0;
                    if (all) sum += 1;
                }
            }
            Rat est = Rat(sum, Int(boundary));
            Rat eps_exact(j, n);
            table.add_row({std::to_string(n), std::to_string(j), rat_str(eps_exact),
                           std::to_string(boundary), sum.str(), rat_str(est),
                           format_double(rat_double(est)), format_double(h4),
                           format_double(h4_err), format_double(h4_approx_for(n)), ""});
        }
    };

    if (p.center) {
        Poly f0 = *p.center;
        if (!f0.is_monic() || f0.degree() < 1)
            throw std::invalid_argument("f0 must be monic of degree >= 1");
        if (p.shifts.max_degree() >= f0.degree())
            throw std::invalid_argument("shift degrees must be below deg f0");
        int n = f0.degree();
        Int jm = boost::multiprecision::numerator(p.eps_max) * n /
                 boost::multiprecision::denominator(p.eps_max);
        emit_rows(f0, jm.convert_to<int>(), 1);
    } else {
        if (!p.fixed_eps) throw std::invalid_argument("degree grid needs a fixed epsilon");
        for (int n = p.n_lo; n <= p.n_hi; ++n) {
            if (p.shifts.max_degree() >= n)
                throw std::invalid_argument("shift degrees must be below every n");
            Poly f0 = Poly::monic_by_index(F, n, 0);  // T^n
            Int j = boost::multiprecision::numerator(*p.fixed_eps) * n /
                    boost::multiprecision::denominator(*p.fixed_eps);
            emit_rows(f0, j.convert_to<int>(), 1000 + uint64_t(n));
        }
    }
    detail::finish_metadata(table.metadata, start);
    return table;
}

// Residual sweep: exhaustive correlations across a prime list at fixed
// degree, against the exact group-average main term, with the residual
// scaled by sqrt(q) to exhibit the O(q^{-1/2}) error envelope.
struct ResidualSweepParams {
    std::vector<uint32_t> primes;
    int degree = 3;
    std::string shift_literals = "0,1";
    std::string function_names = "b,b";
    uint64_t seed = 0;
    int workers = 0;
    uint64_t eval_budget = 100'000'000;
};

inline ResultTable experiment_residual_sweep(const ResidualSweepParams& p) {
    auto start = std::chrono::steady_clock::now();
    std::vector<ArithmeticFunction> functions = parse_function_list(p.function_names);

    ResultTable table;
    table.columns = {"q",         "measured_exact", "measured", "predicted_exact",
                     "predicted", "scaled_residual", "flag"};
    table.metadata = detail::base_metadata("residual-sweep", p.seed, p.workers);
    table.metadata["n"] = p.degree;
    table.metadata["h"] = p.shift_literals;
    table.metadata["functions"] = p.function_names;

    for (uint32_t q : p.primes) {
        PrimeField F(q);
        std::string flag;
        try {
            ShiftTuple shifts = parse_shift_tuple(p.shift_literals, F);
            CorrelationSpec spec{F, p.degree, shifts, functions};
            spec.mode = CorrelationMode::exhaustive;
            spec.seed = p.seed;
            spec.workers = p.workers;
            spec.eval_budget = p.eval_budget;
            CorrelationResult res = correlate(spec);
            Rat predicted = predicted_correlation(functions, shifts, p.degree);
            Rat residual = *res.exact - predicted;
            double scaled = std::abs(rat_double(residual)) * std::sqrt(double(q));
            table.add_row({std::to_string(q), rat_str(*res.exact),
                           format_double(res.estimate), rat_str(predicted),
                           format_double(rat_double(predicted)), format_double(scaled), ""});
        } catch (const std::invalid_argument& e) {
            table.add_row({std::to_string(q), "", "", "", "", "", std::string("invalid: ") + e.what()});
        }
    }
    detail::finish_metadata(table.metadata, start);
    return table;
}

}  // namespace fqcorr
