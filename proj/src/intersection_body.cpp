#include "cubeslice/intersection_body.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "cubeslice/error.hpp"
#include "cubeslice/sinc.hpp"

namespace cubeslice {

NormalizationScale NormalizationScale::for_dimension(std::size_t d) {
    if (d < 2) throw UsageError("normalized cube needs d >= 2");
    const double diag = diagonal_section_value(static_cast<int>(d));
    const double scale = std::pow(diag, -1.0 / (static_cast<double>(d) - 1.0));
    return {d, scale, 1.0 / diag};
}

IntersectionBody::IntersectionBody(std::size_t d, EngineConfig engine)
    : scale_(NormalizationScale::for_dimension(d)), engine_(std::move(engine)) {}

VolumeEstimate IntersectionBody::q_section(const UnitDirection& u, std::uint64_t stream) const {
    if (u.dim() != dim()) throw UsageError("direction dimension does not match the body");
    VolumeEstimate v = section_volume(canonicalize(u), engine_, stream);
    v.value *= scale_.section_factor;
    v.error_bound *= scale_.section_factor;
    return v;
}

double IntersectionBody::distance(const Direction& x) const {
    if (x.dim() != dim()) throw UsageError("point dimension does not match the body");
    const Direction c = canonicalize(x);
    return c.norm2() / q_section(normalize(c)).value;
}

double IntersectionBody::distance(std::span<const double> x) const {
    if (std::all_of(x.begin(), x.end(), [](double c) { return c == 0.0; })) return 0.0;
    return distance(Direction(std::vector<double>(x.begin(), x.end())));
}

BoundaryPoint IntersectionBody::boundary_point(const UnitDirection& u) const {
    const VolumeEstimate q = q_section(u);
    BoundaryPoint p;
    p.coords.assign(u.coords().begin(), u.coords().end());
    for (double& c : p.coords) c *= q.value;
    p.volume = q;
    p.volume.value /= scale_.section_factor;
    p.volume.error_bound /= scale_.section_factor;
    return p;
}

namespace {

template <class Body>
void parallel_for(std::size_t n, Execution exec, Body&& body) {
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(cubeslice_ibody_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

SupportReport support_check(const IntersectionBody& body, std::size_t samples, Seed seed, double tol,
                            double equality_tol, Execution exec) {
    if (samples < 1) throw UsageError("support_check needs samples >= 1");
    const std::size_t d = body.dim();
    const SeedStream root(seed);
    std::vector<double> sums(samples);
    std::vector<double> errors(samples);
    std::vector<std::vector<double>> points(samples);
    parallel_for(samples, exec, [&](std::size_t i) {
        CounterRng rng = root.split(i).generator();
        const UnitDirection u = canonicalize(random_unit_direction(d, rng));
        const VolumeEstimate q = body.q_section(u, i);
        std::vector<double> p(u.coords().begin(), u.coords().end());
        double sum = 0.0;
        for (double& c : p) {
            c *= q.value;
            sum += c;
        }
        sums[i] = sum;
        errors[i] = u.norm1() * q.error_bound;
        points[i] = std::move(p);
    });

    SupportReport r;
    r.d = d;
    r.samples = samples;
    r.sqrt_d = std::sqrt(static_cast<double>(d));
    r.tol = tol >= 0.0 ? tol : 0.0;
    r.max_sum = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = tol >= 0.0 ? tol : 10.0 * errors[i];
        if (tol < 0.0) r.tol = std::max(r.tol, t);
        if (sums[i] > r.sqrt_d + t) ++r.violations;
        if (sums[i] > r.max_sum) {
            r.max_sum = sums[i];
            r.argmax = points[i];
        }
    }
    const UnitDirection h = diagonal(d);
    const BoundaryPoint ph = body.boundary_point(h);
    double hs = 0.0;
    for (double c : ph.coords) hs += c;
    r.diagonal_sum = hs;
    const double eq_t = equality_tol >= 0.0 ? equality_tol
                                            : 10.0 * h.norm1() * ph.volume.error_bound * body.scale().section_factor;
    r.diagonal_equality = std::abs(hs - r.sqrt_d) <= eq_t;
    if (hs > r.sqrt_d + (tol >= 0.0 ? tol : eq_t)) ++r.violations;
    if (hs >= r.max_sum) {
        r.max_sum = hs;
        r.argmax = ph.coords;
    }
    return r;
}

BusemannReport busemann_convexity_check(const IntersectionBody& body, std::size_t pairs, Seed seed, double tol,
                                        Execution exec) {
    if (pairs < 1) throw UsageError("busemann_convexity_check needs pairs >= 1");
    const std::size_t d = body.dim();
    const SeedStream root(seed);
    std::vector<double> slack(pairs);
    parallel_for(pairs, exec, [&](std::size_t i) {
        CounterRng rng = root.split(i).generator();
        const BoundaryPoint x = body.boundary_point(random_unit_direction(d, rng));
        const BoundaryPoint y = body.boundary_point(random_unit_direction(d, rng));
        std::vector<double> sum(d);
        for (std::size_t j = 0; j < d; ++j) sum[j] = x.coords[j] + y.coords[j];
        slack[i] = body.distance(x.coords) + body.distance(y.coords) - body.distance(sum);
    });
    BusemannReport r{d, pairs, tol, std::numeric_limits<double>::infinity(), 0};
    for (double s : slack) {
        r.worst_slack = std::min(r.worst_slack, s);
        if (s < -tol) ++r.violations;
    }
    return r;
}

CyclicAverageResult cyclic_average_check(const IntersectionBody& body, const Direction& p, double tol) {
    const std::size_t d = body.dim();
    if (p.dim() != d) throw UsageError("point dimension does not match the body");
    for (double c : p.coords()) {
        if (!(c > 0.0)) throw UsageError("cyclic_average_check needs strictly positive coordinates");
    }
    CyclicAverageResult r;
    r.f_p = body.distance(p);
    if (r.f_p > 1.0 + tol) {
        throw UsageError("cyclic_average_check: point is outside the intersection body (f = " +
                         std::to_string(r.f_p) + ")");
    }
    // y = (1/d) (p_1 + ... + p_d), p_i the i-th cyclic shift of p.
    r.average.assign(d, 0.0);
    for (std::size_t shift = 0; shift < d; ++shift) {
        for (std::size_t j = 0; j < d; ++j) r.average[j] += p[(j + shift) % d];
    }
    for (double& c : r.average) c /= static_cast<double>(d);
    r.f_average = body.distance(r.average);
    r.holds = r.f_average <= 1.0 + tol;
    return r;
}

}  // namespace cubeslice
