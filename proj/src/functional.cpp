#include "cubeslice/functional.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "cubeslice/error.hpp"
#include "cubeslice/sinc.hpp"

namespace cubeslice {

namespace {

double bound_for(std::size_t d) { return v_d_bound(static_cast<int>(d)).to_double(); }

double f_value(const UnitDirection& u, const EngineConfig& engine, std::uint64_t stream) {
    return u.norm1() * section_volume(u, engine, stream).value;
}

}  // namespace

FunctionalReport evaluate_f(const UnitDirection& u, const EngineConfig& engine) {
    const VolumeEstimate vol = section_volume(u, engine);
    const double l1 = u.norm1();
    const double f = l1 * vol.value;
    const double bound = bound_for(u.dim());
    return {u, f, bound, bound - f, vol, l1 * vol.error_bound};
}

FunctionalReport evaluate_f(const Direction& v, const EngineConfig& engine) { return evaluate_f(normalize(v), engine); }

std::vector<double> evaluate_f_batch_serial(const std::vector<UnitDirection>& dirs, const EngineConfig& engine) {
    std::vector<double> out(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) out[i] = f_value(dirs[i], engine, i);
    return out;
}

std::vector<double> evaluate_f_batch(const std::vector<UnitDirection>& dirs, const EngineConfig& engine,
                                     Execution exec) {
    if (exec == Execution::serial) return evaluate_f_batch_serial(dirs, engine);
    std::vector<double> out(dirs.size());
    const auto n = static_cast<std::int64_t>(dirs.size());
    // Exceptions may not escape an OpenMP region; carry the first one out.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                f_value(dirs[static_cast<std::size_t>(i)], engine, static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical(cubeslice_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<UnitDirection> structured_directions(std::size_t d) {
    if (d < 2) throw UsageError("structured_directions needs d >= 2");
    std::vector<UnitDirection> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back(axis(d, i));
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            std::vector<double> c(d, 0.0);
            c[i] = r;
            c[j] = r;
            out.emplace_back(std::move(c));
        }
    }
    out.push_back(diagonal(d));
    for (std::size_t k = 1; k <= d; ++k) {
        std::vector<double> c(d, 0.0);
        for (std::size_t i = 0; i < k; ++i) c[i] = 1.0;
        out.push_back(normalize(Direction(std::move(c))));
    }
    return out;
}

std::vector<UnitDirection> random_directions(std::size_t d, std::size_t count, Seed seed) {
    const SeedStream root(seed);
    std::vector<UnitDirection> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng = root.split(i).generator();
        out.push_back(random_unit_direction(d, rng));
    }
    return out;
}

VerificationSummary verify_theorem(std::size_t d, std::size_t n_samples, Seed seed, const EngineConfig& engine,
                                   const VerifyOptions& opts) {
    if (d < 2) throw UsageError("verify_theorem needs d >= 2");
    if (n_samples < 1 && !opts.include_structured) throw UsageError("verify_theorem needs at least one sample");

    std::vector<UnitDirection> dirs;
    if (opts.include_structured) dirs = structured_directions(d);
    const std::size_t structured = dirs.size();
    auto random = random_directions(d, n_samples, seed);
    dirs.insert(dirs.end(), std::make_move_iterator(random.begin()), std::make_move_iterator(random.end()));

    const std::vector<double> values = evaluate_f_batch(dirs, engine, opts.exec);
    const double bound = bound_for(d);
    const UnitDirection h = diagonal(d);

    VerificationSummary s{.d = d,
                          .random_samples = n_samples,
                          .structured_samples = structured,
                          .bound = bound,
                          .tol = opts.tol,
                          .max_f = -1.0,
                          .argmax = h,
                          .worst_gap = std::numeric_limits<double>::infinity(),
                          .near_equality_tol = opts.near_equality_tol,
                          .violating = {}};
    std::size_t best = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = values[i];
        const double gap = bound - f;
        s.worst_gap = std::min(s.worst_gap, gap);
        if (f > bound + opts.tol) {
            ++s.violations;
            if (s.violating.size() < 8) s.violating.push_back(dirs[i]);
        }
        if (gap <= opts.near_equality_tol) ++s.near_equality;
        // Ties go to the direction closer to the diagonal (of its canonical form).
        if (f > s.max_f ||
            (f == s.max_f && angle_between(canonicalize(dirs[i]).coords(), h.coords()) <
                                 angle_between(canonicalize(dirs[best]).coords(), h.coords()))) {
            s.max_f = f;
            best = i;
        }
    }
    s.argmax = dirs[best];
    s.angle_to_diagonal = angle_between(canonicalize(s.argmax).coords(), h.coords());
    return s;
}

SincBoundResult sinc_bound_check(const UnitDirection& s, double eps) {
    const VolumeEstimate vol = volume_quadrature(s, eps);
    const double d = static_cast<double>(s.dim());
    // (2/pi) int prod sinc = vol, so lhs = ||s||_1 / d * vol.
    const double scale = s.norm1() / d;
    SincBoundResult r;
    r.lhs = scale * vol.value;
    r.sigma = sigma_value(static_cast<int>(s.dim()));
    r.slack = r.sigma - r.lhs;
    r.error_bound = scale * vol.error_bound;
    r.holds = r.lhs <= r.sigma + eps;
    return r;
}

}  // namespace cubeslice
