#include "cubeslice/section_volume.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include "cubeslice/big_rational.hpp"
#include "cubeslice/error.hpp"
#include "cubeslice/quadrature.hpp"

namespace cubeslice {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

double factorial_double(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

/// Neumaier summation of values ordered by decreasing magnitude.
double compensated_sum(std::vector<double>& values) {
    std::sort(values.begin(), values.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
    double sum = 0.0;
    double carry = 0.0;
    for (double x : values) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + carry;
}

struct FloatTerms {
    std::span<const double> a;
    double m = 0.0;
    int power = 0;
    std::vector<double> terms;
    double rounding = 0.0;  // first-order bound on the absolute error of the terms

    void collect(std::size_t i, double s, bool odd) {
        if (s >= m) return;  // every extension is also >= m, so all terms vanish
        if (i == a.size()) {
            const double x = m - s;
            const double xp = std::pow(x, power);
            terms.push_back(odd ? -xp : xp);
            const double k = static_cast<double>(a.size());
            const double dx = (k + 1.0) * kUnitRoundoff * (m + s);
            rounding += power * std::pow(x, power - 1) * dx + (k + 2.0) * kUnitRoundoff * xp;
            return;
        }
        collect(i + 1, s, odd);
        collect(i + 1, s + a[i], !odd);
    }
};

struct ExactTerms {
    const std::vector<BigInt>* weights = nullptr;  // 2 * a_i in a common dyadic unit
    BigInt m;                                      // sum a_i in the same unit
    unsigned power = 0;
    BigInt sum = 0;

    void collect(std::size_t i, const BigInt& s, bool odd) {
        if (s >= m) return;
        if (i == weights->size()) {
            BigInt term = boost::multiprecision::pow(BigInt(m - s), power);
            if (odd) {
                sum -= term;
            } else {
                sum += term;
            }
            return;
        }
        collect(i + 1, s, odd);
        collect(i + 1, s + (*weights)[i], !odd);
    }
};

/// The same alternating sum over the exact binary values of the inputs.
double exact_dyadic_volume(std::span<const double> a) {
    const std::size_t k = a.size();
    std::vector<std::int64_t> mant(k);
    std::vector<int> expo(k);
    int min_exp = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < k; ++i) {
        int e = 0;
        const double f = std::frexp(a[i], &e);
        mant[i] = static_cast<std::int64_t>(std::ldexp(f, 53));
        expo[i] = e - 53;
        min_exp = std::min(min_exp, expo[i]);
    }
    // Unit 2^(min_exp - 1): a_i -> 2 * M_i * 2^(e_i - min_exp), m -> sum M_i 2^(e_i - min_exp).
    std::vector<BigInt> weights(k);
    BigInt m = 0;
    long long exp_sum = 0;
    BigInt mant_prod = 1;
    for (std::size_t i = 0; i < k; ++i) {
        const BigInt w = BigInt(mant[i]) << (expo[i] - min_exp);
        weights[i] = 2 * w;
        m += w;
        exp_sum += expo[i];
        mant_prod *= mant[i];
    }
    ExactTerms terms{&weights, m, static_cast<unsigned>(k - 1), 0};
    terms.collect(0, BigInt(0), false);

    BigInt fact = 1;
    for (std::size_t i = 2; i < k; ++i) fact *= static_cast<unsigned>(i);
    // value = sum * 2^((min_exp - 1)(k - 1)) / ((k-1)! * mant_prod * 2^exp_sum)
    const long long shift = static_cast<long long>(min_exp - 1) * static_cast<long long>(k - 1) - exp_sum;
    BigInt num = terms.sum;
    BigInt den = fact * mant_prod;
    if (shift >= 0) {
        num <<= static_cast<unsigned>(shift);
    } else {
        den <<= static_cast<unsigned>(-shift);
    }
    return BigRational(num, den).to_double();
}

inline double sinc(double x) noexcept {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

}  // namespace

std::string to_string(VolumeMethod m) {
    switch (m) {
        case VolumeMethod::exact: return "exact";
        case VolumeMethod::quadrature: return "quadrature";
        case VolumeMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

VolumeMethod parse_volume_method(const std::string& name) {
    if (name == "exact") return VolumeMethod::exact;
    if (name == "quad" || name == "quadrature") return VolumeMethod::quadrature;
    if (name == "mc" || name == "monte_carlo") return VolumeMethod::monte_carlo;
    throw UsageError("unknown volume method '" + name + "' (expected exact|quad|mc)");
}

std::vector<double> reduced_coordinates(std::span<const double> v) {
    std::vector<double> a;
    a.reserve(v.size());
    for (double c : v) {
        if (std::abs(c) >= kZeroCoordinate) a.push_back(std::abs(c));
    }
    std::sort(a.begin(), a.end(), std::greater<>());
    return a;
}

VolumeEstimate volume_exact(const UnitDirection& v, const ExactOptions& opts) {
    const std::vector<double> a = reduced_coordinates(v.coords());
    const std::size_t k = a.size();
    if (k == 0) throw UsageError("volume_exact: direction has no nonzero coordinate");
    if (k == 1) return {1.0, VolumeMethod::exact, 0.0};
    if (k > opts.max_k) {
        throw EngineError("volume_exact: " + std::to_string(k) + " nonzero coordinates exceed the cap of " +
                          std::to_string(opts.max_k));
    }

    double total = 0.0;
    for (double x : a) total += x;
    FloatTerms terms{a, 0.5 * total, static_cast<int>(k - 1), {}, 0.0};
    terms.terms.reserve(std::size_t{1} << std::min<std::size_t>(k - 1, 16));
    terms.collect(0, 0.0, false);

    double abs_sum = 0.0;
    for (double t : terms.terms) abs_sum += std::abs(t);
    const double n_terms = static_cast<double>(terms.terms.size());
    const double sum = compensated_sum(terms.terms);

    double denom = factorial_double(k - 1);
    for (double x : a) denom *= x;
    const double value = sum / denom;
    const double kk = static_cast<double>(k);
    const double sum_error =
        terms.rounding + 2.0 * kUnitRoundoff * std::abs(sum) + n_terms * kUnitRoundoff * kUnitRoundoff * abs_sum;
    const double error = 2.0 * (sum_error / denom + (2.0 * kk + 2.0) * kUnitRoundoff * std::abs(value));

    if (error > opts.refine_above && k <= opts.refine_max_k) {
        const double refined = exact_dyadic_volume(a);
        return {refined, VolumeMethod::exact, 2.0 * kUnitRoundoff * std::abs(refined)};
    }
    return {value, VolumeMethod::exact, error};
}

VolumeEstimate volume_quadrature(const UnitDirection& v, double eps, const QuadratureOptions& opts) {
    if (!(eps > 0.0 && eps <= 1e-2)) throw UsageError("volume_quadrature needs eps in (0, 1e-2]");
    const std::vector<double> a = reduced_coordinates(v.coords());
    const std::size_t k = a.size();
    if (k == 0) throw UsageError("volume_quadrature: direction has no nonzero coordinate");
    if (k == 1) return {1.0, VolumeMethod::quadrature, 0.0};

    constexpr double two_over_pi = 2.0 / std::numbers::pi;
    const double half_period = std::numbers::pi / a[0];
    const double tail_budget = 0.25 * eps;

    // |prod sinc(a_i t)| <= (prod_{i<j} a_i)^-1 t^-j for the j largest
    // coordinates; pick the j giving the earliest truncation point.
    auto subset_tail_bound = [&](double T) {
        double best = std::numeric_limits<double>::infinity();
        double log_prod = std::log(a[0]);
        for (std::size_t j = 2; j <= k; ++j) {
            log_prod += std::log(a[j - 1]);
            const double jj = static_cast<double>(j);
            best = std::min(best, two_over_pi * std::exp(-log_prod - (jj - 1.0) * std::log(T)) / (jj - 1.0));
        }
        return best;
    };
    double t_direct = std::numeric_limits<double>::infinity();
    {
        double log_prod = std::log(a[0]);
        for (std::size_t j = 2; j <= k; ++j) {
            log_prod += std::log(a[j - 1]);
            const double jj = static_cast<double>(j);
            const double log_t = (std::log(two_over_pi / ((jj - 1.0) * tail_budget)) - log_prod) / (jj - 1.0);
            t_direct = std::min(t_direct, std::exp(log_t));
        }
    }

    bool analytic_tail = false;
    double panels_needed = std::ceil(t_direct / half_period);
    if (panels_needed > static_cast<double>(opts.max_direct_panels)) {
        if (k > opts.analytic_tail_max_k) {
            throw EngineError("volume_quadrature: truncation point out of reach and k=" + std::to_string(k) +
                              " exceeds the analytic tail cap");
        }
        // Analytic tail: its rounding error is about 2^k * u times the full
        // product tail bound, so T only needs to make that product small.
        double log_prod = 0.0;
        for (double x : a) log_prod += std::log(x);
        const double kk = static_cast<double>(k);
        const double amplification = std::ldexp(64.0 * kUnitRoundoff, static_cast<int>(k));
        const double log_t =
            (std::log(two_over_pi * amplification / ((kk - 1.0) * tail_budget)) - log_prod) / (kk - 1.0);
        panels_needed = std::max(8.0, std::ceil(std::exp(log_t) / half_period));
        analytic_tail = true;
    }
    if (panels_needed > static_cast<double>(opts.max_panels)) {
        throw EngineError("volume_quadrature: needs " + std::to_string(panels_needed) + " panels, budget is " +
                          std::to_string(opts.max_panels));
    }
    const auto panels = static_cast<std::size_t>(std::max(1.0, panels_needed));
    const double T = static_cast<double>(panels) * half_period;

    auto integrand = [&a](double t) {
        double p = 1.0;
        for (double x : a) p *= sinc(x * t);
        return p;
    };

    // Finite part gets eps/2 in total (before the 2/pi factor is applied).
    const double panel_tol = 0.5 * eps / two_over_pi / static_cast<double>(panels);
    std::size_t budget = opts.max_evaluations;
    std::vector<double> pieces;
    pieces.reserve(panels + 1);
    double quad_error = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const auto r = quad::integrate_adaptive(integrand, static_cast<double>(i) * half_period,
                                                static_cast<double>(i + 1) * half_period, panel_tol, budget);
        pieces.push_back(r.value);
        quad_error += r.error;
    }

    double tail = 0.0;
    double tail_error = 0.0;
    if (analytic_tail) {
        // prod sin(a_i t) = (2i)^-k sum_eps (prod eps_i) e^{i <eps, a> t}; pair eps
        // with -eps and keep eps_0 = +1.
        const int ki = static_cast<int>(k);
        const std::size_t combos = std::size_t{1} << (k - 1);
        double log_prod = 0.0;
        for (double x : a) log_prod += std::log(x);
        std::vector<double> parts;
        parts.reserve(combos);
        for (std::size_t mask = 0; mask < combos; ++mask) {
            double c = a[0];
            bool negative = false;
            for (std::size_t i = 1; i < k; ++i) {
                if (mask & (std::size_t{1} << (i - 1))) {
                    c -= a[i];
                    negative = !negative;
                } else {
                    c += a[i];
                }
            }
            const std::complex<double> j = quad::oscillatory_tail(ki, c, T);
            const double part = (ki % 2 == 0) ? j.real() * ((ki / 2) % 2 == 0 ? 1.0 : -1.0)
                                               : j.imag() * (((ki - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
            parts.push_back(negative ? -part : part);
        }
        const double scale = std::ldexp(1.0, 1 - ki) * std::exp(-log_prod);
        tail = scale * compensated_sum(parts);
        const double full_bound = std::exp(-log_prod - (static_cast<double>(k) - 1.0) * std::log(T)) /
                                  (static_cast<double>(k) - 1.0);
        tail_error = std::ldexp(64.0 * kUnitRoundoff, ki) * full_bound;
    } else {
        tail_error = subset_tail_bound(T) / two_over_pi;
    }

    pieces.push_back(tail);
    const double integral = compensated_sum(pieces);
    const double value = two_over_pi * integral;
    const double error = two_over_pi * (quad_error + tail_error) + 4.0 * kUnitRoundoff * std::abs(value);
    if (error > eps) {
        throw EngineError("volume_quadrature: error estimate " + std::to_string(error) + " exceeds eps " +
                          std::to_string(eps));
    }
    return {value, VolumeMethod::quadrature, error};
}

namespace {

/// Point s has coordinates from Philox blocks (s, 0), (s, 1), ...
inline bool slab_hit(std::span<const double> w, std::uint64_t s, double half_width, const SeedStream& stream) {
    double x = 0.0;
    const std::size_t m = w.size();
    for (std::size_t j = 0; j < m; j += 2) {
        const auto bits = stream.block(s, static_cast<std::uint32_t>(j / 2));
        x += w[j] * (to_unit_double(bits[0]) - 0.5);
        if (j + 1 < m) x += w[j + 1] * (to_unit_double(bits[1]) - 0.5);
    }
    return std::abs(x) <= half_width;
}

void check_mc_args(std::uint64_t n, double delta) {
    if (n < 1000) throw UsageError("volume_monte_carlo needs n >= 1000");
    if (!(delta > 0.0 && delta <= 0.2)) throw UsageError("volume_monte_carlo needs delta in (0, 0.2]");
}

}  // namespace

std::uint64_t slab_hits_serial(std::span<const double> coords, std::uint64_t n, double delta,
                               const SeedStream& stream) {
    check_mc_args(n, delta);
    const double half_width = 0.5 * delta;
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
        if (slab_hit(coords, s, half_width, stream)) ++hits;
    }
    return hits;
}

std::uint64_t slab_hits(std::span<const double> coords, std::uint64_t n, double delta, const SeedStream& stream) {
    check_mc_args(n, delta);
    const double half_width = 0.5 * delta;
    std::uint64_t hits = 0;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (std::int64_t s = 0; s < count; ++s) {
        if (slab_hit(coords, static_cast<std::uint64_t>(s), half_width, stream)) ++hits;
    }
    return hits;
}

VolumeEstimate volume_monte_carlo(const UnitDirection& v, std::uint64_t n, double delta, Seed seed, Execution exec) {
    check_mc_args(n, delta);
    // Zero coordinates do not move <v, u>; sample only the others.
    std::vector<double> w;
    for (double c : v.coords()) {
        if (std::abs(c) >= kZeroCoordinate) w.push_back(c);
    }
    if (w.empty()) throw UsageError("volume_monte_carlo: direction has no nonzero coordinate");
    const SeedStream stream(seed);
    const std::uint64_t hits =
        exec == Execution::parallel ? slab_hits(w, n, delta, stream) : slab_hits_serial(w, n, delta, stream);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    // With zero hits the plug-in deviation is 0; use one hit instead.
    const double p_sd = std::max(p, 1.0 / nn);
    const double sd = std::sqrt(p_sd * (1.0 - p_sd) / nn) / delta;
    return {p / delta, VolumeMethod::monte_carlo, sd};
}

VolumeEstimate section_volume(const UnitDirection& v, const EngineConfig& cfg) {
    switch (cfg.method) {
        case VolumeMethod::exact:
            if (reduced_coordinates(v.coords()).size() > cfg.exact.max_k) {
                return volume_quadrature(v, cfg.eps, cfg.quadrature);
            }
            return volume_exact(v, cfg.exact);
        case VolumeMethod::quadrature:
            return volume_quadrature(v, cfg.eps, cfg.quadrature);
        case VolumeMethod::monte_carlo:
            return volume_monte_carlo(v, cfg.mc_samples, cfg.mc_delta, cfg.seed, cfg.mc_execution);
    }
    throw UsageError("unknown volume method");
}

VolumeEstimate section_volume(const UnitDirection& v, const EngineConfig& cfg, std::uint64_t stream_index) {
    if (cfg.method != VolumeMethod::monte_carlo) return section_volume(v, cfg);
    EngineConfig derived = cfg;
    derived.seed = Seed{SeedStream(cfg.seed).split(stream_index).key()};
    return section_volume(v, derived);
}

CrossValidationReport cross_validate(const UnitDirection& v, double eps, std::uint64_t n, double delta, Seed seed,
                                     Execution exec) {
    CrossValidationReport report;
    const ExactOptions exact_opts;
    if (reduced_coordinates(v.coords()).size() <= exact_opts.max_k) report.exact = volume_exact(v, exact_opts);
    report.quadrature = volume_quadrature(v, eps);
    report.monte_carlo = volume_monte_carlo(v, n, delta, seed, exec);
    report.bias_allowance = 0.01 * delta * delta;

    const VolumeEstimate& reference = report.exact ? *report.exact : report.quadrature;
    const double reference_error = report.exact ? report.exact->error_bound : report.quadrature.error_bound;
    if (report.exact) {
        report.quad_discrepancy = std::abs(report.exact->value - report.quadrature.value);
        report.quad_flag = report.quad_discrepancy > eps + report.exact->error_bound;
    }
    report.mc_discrepancy = std::abs(reference.value - report.monte_carlo.value);
    report.mc_flag =
        report.mc_discrepancy > 3.0 * report.monte_carlo.error_bound + report.bias_allowance + reference_error;
    return report;
}

}  // namespace cubeslice
