#include "cubeslice/sphere_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>

#include "cubeslice/error.hpp"
#include "cubeslice/sinc.hpp"

namespace cubeslice {

namespace {

/// Fold into the closed nonnegative orthant and renormalize. Returns
/// nothing when every coordinate folds to zero.
std::optional<UnitDirection> fold(std::vector<double> y) {
    double n2 = 0.0;
    for (double& c : y) {
        c = std::max(c, 0.0);
        n2 += c * c;
    }
    if (n2 == 0.0) return std::nullopt;
    return normalize(Direction(std::move(y)));
}

/// Poll directions: +-e_i then +-(e_i - e_j), i < j.
std::vector<std::vector<double>> poll_directions(std::size_t d) {
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < d; ++i) {
        for (double s : {1.0, -1.0}) {
            std::vector<double> e(d, 0.0);
            e[i] = s;
            dirs.push_back(std::move(e));
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            for (double s : {1.0, -1.0}) {
                std::vector<double> e(d, 0.0);
                e[i] = s;
                e[j] = -s;
                dirs.push_back(std::move(e));
            }
        }
    }
    return dirs;
}

struct Evaluator {
    const EngineConfig& engine;
    std::size_t start;
    std::size_t count = 0;

    double operator()(const UnitDirection& u) {
        const std::uint64_t stream = (static_cast<std::uint64_t>(start) << 32) | count;
        ++count;
        return u.norm1() * section_volume(u, engine, stream).value;
    }
};

StartTrace run_start(std::size_t index, const UnitDirection& initial, std::size_t budget, const EngineConfig& engine,
                     const MaximizeOptions& opts, const std::vector<std::vector<double>>& dirs,
                     const UnitDirection& h) {
    const std::size_t d = initial.dim();
    auto folded = fold(std::vector<double>(initial.coords().begin(), initial.coords().end()));
    if (!folded) throw UsageError("start point folds to zero");
    UnitDirection x = *folded;
    Evaluator f{engine, index};
    double fx = f(x);

    StartTrace t;
    t.start = index;
    t.initial.assign(x.coords().begin(), x.coords().end());
    t.initial_value = fx;

    double step = opts.initial_step;
    std::vector<double> tangent(d);
    while (step >= opts.final_step && f.count < budget) {
        bool improved = false;
        const double cs = std::cos(step);
        const double sn = std::sin(step);
        for (const auto& dir : dirs) {
            if (f.count >= budget) break;
            const double along = dot(dir, x.coords());
            double n2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                tangent[i] = dir[i] - along * x[i];
                n2 += tangent[i] * tangent[i];
            }
            if (n2 < 1e-24) continue;
            const double inv = 1.0 / std::sqrt(n2);
            std::vector<double> y(d);
            for (std::size_t i = 0; i < d; ++i) y[i] = cs * x[i] + sn * inv * tangent[i];
            auto candidate = fold(std::move(y));
            if (!candidate) continue;
            const double fy = f(*candidate);
            if (fy > fx) {
                x = std::move(*candidate);
                fx = fy;
                improved = true;
                ++t.accepted_moves;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    t.final_point.assign(x.coords().begin(), x.coords().end());
    t.final_value = fx;
    t.angle_to_diagonal = angle_between(canonicalize(x).coords(), h.coords());
    t.evaluations = f.count;
    t.final_step = step;
    t.converged = step < opts.final_step;
    return t;
}

/// Strictly better: larger value, then closer to h, then lexicographically
/// smaller canonical form.
bool better(double va, double aa, const std::vector<double>& ca, double vb, double ab, const std::vector<double>& cb) {
    if (va != vb) return va > vb;
    if (aa != ab) return aa < ab;
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

std::vector<double> canonical_vector(std::span<const double> x) {
    std::vector<double> c(x.begin(), x.end());
    for (double& v : c) v = std::abs(v);
    std::sort(c.begin(), c.end(), std::greater<>());
    return c;
}

}  // namespace

MaximizeReport maximize_from(std::vector<UnitDirection> starts, std::size_t budget, const EngineConfig& engine,
                             const MaximizeOptions& opts) {
    if (starts.empty()) throw UsageError("maximize needs at least one start");
    if (budget < 100) throw UsageError("maximize needs a budget of at least 100 evaluations per start");
    const std::size_t d = starts.front().dim();
    for (const auto& s : starts) {
        if (s.dim() != d) throw UsageError("start points have mixed dimensions");
    }
    const UnitDirection h = diagonal(d);
    const auto dirs = poll_directions(d);

    std::vector<StartTrace> traces(starts.size());
    auto run = [&](std::size_t i) { traces[i] = run_start(i, starts[i], budget, engine, opts, dirs, h); };
    if (opts.exec == Execution::serial) {
        for (std::size_t i = 0; i < starts.size(); ++i) run(i);
    } else {
        std::exception_ptr failure;
        const auto n = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                run(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(cubeslice_maximize_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    MaximizeReport r;
    r.d = d;
    r.starts = starts.size();
    r.bound = v_d_bound(static_cast<int>(d)).to_double();
    std::size_t best = 0;
    std::vector<double> best_canon = canonical_vector(traces[0].final_point);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        r.evaluations += traces[i].evaluations;
        r.budget_exhausted = r.budget_exhausted || !traces[i].converged;
        if (i == 0) continue;
        auto canon = canonical_vector(traces[i].final_point);
        if (better(traces[i].final_value, traces[i].angle_to_diagonal, canon, traces[best].final_value,
                   traces[best].angle_to_diagonal, best_canon)) {
            best = i;
            best_canon = std::move(canon);
        }
    }
    r.best = best_canon;
    r.best_value = traces[best].final_value;
    r.angle_to_diagonal = traces[best].angle_to_diagonal;
    r.best_start = best;
    r.traces = std::move(traces);
    return r;
}

MaximizeReport maximize(std::size_t d, std::size_t starts, std::size_t budget, Seed seed, const EngineConfig& engine,
                        const MaximizeOptions& opts) {
    if (d < 2) throw UsageError("maximize needs d >= 2");
    if (starts < 1) throw UsageError("maximize needs starts >= 1");
    std::vector<UnitDirection> points;
    points.push_back(diagonal(d));
    if (starts > 1) points.push_back(axis(d, 0));
    const SeedStream root(seed);
    for (std::size_t i = 2; i < starts; ++i) {
        CounterRng rng = root.split(i).generator();
        const UnitDirection g = random_unit_direction(d, rng);
        std::vector<double> a(g.coords().begin(), g.coords().end());
        for (double& c : a) c = std::abs(c);
        points.push_back(normalize(Direction(std::move(a))));
    }
    return maximize_from(std::move(points), budget, engine, opts);
}

ScanReport grid_scan(std::size_t d, std::size_t resolution, const EngineConfig& engine, double tol, bool keep_rows,
                     Execution exec) {
    if (d != 2 && d != 3) throw UsageError("grid_scan supports d = 2 or 3 only");
    if (resolution < 10) throw UsageError("grid_scan needs resolution >= 10");
    const double step = 0.5 * std::numbers::pi / static_cast<double>(resolution);
    const std::size_t per_axis = resolution + 1;
    const std::size_t total = d == 2 ? per_axis : per_axis * per_axis;

    auto angles_of = [&](std::size_t idx) -> std::vector<double> {
        if (d == 2) return {step * static_cast<double>(idx)};
        return {step * static_cast<double>(idx / per_axis), step * static_cast<double>(idx % per_axis)};
    };
    auto point_of = [&](const std::vector<double>& ang) -> std::vector<double> {
        if (d == 2) return {std::cos(ang[0]), std::sin(ang[0])};
        return {std::sin(ang[0]) * std::cos(ang[1]), std::sin(ang[0]) * std::sin(ang[1]), std::cos(ang[0])};
    };

    std::vector<double> values(total);
    auto eval = [&](std::size_t i) {
        const auto u = normalize(Direction(point_of(angles_of(i))));
        values[i] = u.norm1() * section_volume(u, engine, i).value;
    };
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < total; ++i) eval(i);
    } else {
        std::exception_ptr failure;
        const auto n = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                eval(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(cubeslice_scan_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    ScanReport r;
    r.d = d;
    r.resolution = resolution;
    r.points = total;
    r.bound = v_d_bound(static_cast<int>(d)).to_double();
    r.tol = tol;
    const UnitDirection h = diagonal(d);
    std::size_t best = 0;
    double best_angle = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < total; ++i) {
        if (values[i] > r.bound + tol) ++r.violations;
        const auto ang = angles_of(i);
        const auto p = point_of(ang);
        const double a = angle_between(normalize(Direction(p)).coords(), h.coords());
        if (i == 0 || values[i] > values[best] || (values[i] == values[best] && a < best_angle)) {
            best = i;
            best_angle = a;
        }
        if (keep_rows) r.rows.push_back({ang, values[i]});
    }
    r.max_value = values[best];
    r.argmax_angles = angles_of(best);
    const auto best_point = normalize(Direction(point_of(r.argmax_angles)));
    r.argmax.assign(best_point.coords().begin(), best_point.coords().end());
    r.angle_to_diagonal = best_angle;
    return r;
}

}  // namespace cubeslice
