#include "cubeslice/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "cubeslice/error.hpp"
#include "cubeslice/functional.hpp"
#include "cubeslice/intersection_body.hpp"
#include "cubeslice/parallel.hpp"
#include "cubeslice/section_volume.hpp"
#include "cubeslice/sinc.hpp"
#include "cubeslice/sphere_optimizer.hpp"

namespace cubeslice::cli {

using json = nlohmann::ordered_json;

nlohmann::ordered_json to_json(const OutputRecord& r) {
    json j;
    j["command"] = r.command;
    j["parameters"] = r.parameters;
    j["result"] = r.result;
    j["error_bounds"] = r.error_bounds;
    j["seed"] = r.seed;
    if (r.wall_time) j["wall_time_s"] = *r.wall_time;
    return j;
}

OutputRecord record_from_json(const nlohmann::ordered_json& j) {
    OutputRecord r;
    r.command = j.at("command").get<std::string>();
    r.parameters = j.at("parameters");
    r.result = j.at("result");
    r.error_bounds = j.at("error_bounds");
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("wall_time_s")) r.wall_time = j.at("wall_time_s").get<double>();
    return r;
}

namespace {

std::size_t parse_size(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("bad " + what + " '" + s + "'");
    }
    if (pos != s.size()) throw UsageError("bad " + what + " '" + s + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

Direction parse_direction(const std::string& text) {
    if (text.rfind("diag:", 0) == 0) {
        const std::size_t d = parse_size(text.substr(5), "dimension");
        return Direction(std::vector<double>(d, 1.0));
    }
    if (text.rfind("axis:", 0) == 0) {
        const std::string rest = text.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw UsageError("axis shorthand is axis:d:i");
        const std::size_t d = parse_size(rest.substr(0, colon), "dimension");
        const std::size_t i = parse_size(rest.substr(colon + 1), "axis index");
        if (i < 1 || i > d) throw UsageError("axis index must be in 1..d");
        std::vector<double> e(d, 0.0);
        e[i - 1] = 1.0;
        return Direction(std::move(e));
    }
    std::vector<double> coords;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw UsageError("bad coordinate '" + item + "'");
        }
        if (pos != item.size()) throw UsageError("bad coordinate '" + item + "'");
        coords.push_back(v);
    }
    return Direction(std::move(coords));
}

namespace {

json vec(std::span<const double> x) { return json(std::vector<double>(x.begin(), x.end())); }

double half_ulp(double x) { return 0.5 * (std::nextafter(std::abs(x), std::numeric_limits<double>::infinity()) - std::abs(x)); }

/// Options shared by every subcommand.
struct Globals {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string engine = "exact";
    double eps = 1e-9;
    std::uint64_t mc_n = 1'000'000;
    double mc_delta = 0.02;
    std::string out_path;
    bool csv = false;
    bool timing = false;

    EngineConfig engine_config() const {
        EngineConfig cfg;
        cfg.method = parse_volume_method(engine);
        cfg.eps = eps;
        cfg.mc_samples = mc_n;
        cfg.mc_delta = mc_delta;
        cfg.seed = Seed{seed};
        cfg.mc_execution = Execution::parallel;
        return cfg;
    }

    json engine_json() const {
        json j;
        j["engine"] = parse_volume_method(engine) == VolumeMethod::exact        ? "exact"
                      : parse_volume_method(engine) == VolumeMethod::quadrature ? "quadrature"
                                                                               : "monte_carlo";
        j["eps"] = eps;
        if (parse_volume_method(engine) == VolumeMethod::monte_carlo) {
            j["mc_n"] = mc_n;
            j["mc_delta"] = mc_delta;
        }
        return j;
    }
};

class Emitter {
public:
    Emitter(std::ostream& out, const Globals& g) : out_(&out), globals_(g) {
        if (!g.out_path.empty()) {
            file_.open(g.out_path);
            if (!file_) throw UsageError("cannot open output file '" + g.out_path + "'");
            out_ = &file_;
        }
        start_ = std::chrono::steady_clock::now();
    }

    void record(OutputRecord r) {
        r.seed = globals_.seed;
        if (globals_.timing) {
            r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        }
        *out_ << to_json(r).dump() << '\n';
    }

    void line(const std::string& s) { *out_ << s << '\n'; }

    void flush() { out_->flush(); }

private:
    std::ostream* out_;
    std::ofstream file_;
    const Globals& globals_;
    std::chrono::steady_clock::time_point start_;
};

json violation_kind(RatioViolation::Kind k) {
    return k == RatioViolation::Kind::below_lower_bound ? "below_lower_bound" : "not_below_one";
}

int cmd_sigma(Emitter& em, int d, bool exact) {
    const BigRational s = sigma_exact(d);
    OutputRecord r;
    r.command = "sigma";
    r.parameters = {{"d", d}, {"exact", exact}};
    const double value = s.to_double();
    r.result["d"] = d;
    r.result["value"] = value;
    r.result["decimal"] = s.to_decimal(15);
    if (exact) {
        r.result["numerator"] = s.numerator().str();
        r.result["denominator"] = s.denominator().str();
        r.error_bounds = "exact";
    } else {
        r.error_bounds = {{"value", half_ulp(value)}};
    }
    em.record(std::move(r));
    return kOk;
}

int cmd_ratio(Emitter& em, const Globals& g, int d_max) {
    const RatioCheckResult res = ratio_check(d_max);
    if (g.csv) {
        em.line("d,ratio,ratio_decimal,lower_bound,holds");
        for (const auto& row : res.rows) {
            em.line(std::to_string(row.d) + "," + row.ratio.str() + "," + row.ratio.to_decimal(15) + "," +
                    row.lower_bound.str() + "," + (row.holds ? "true" : "false"));
        }
    } else {
        for (const auto& row : res.rows) {
            OutputRecord r;
            r.command = "ratio";
            r.parameters = {{"d_max", d_max}};
            r.result = {{"d", row.d},
                        {"ratio", row.ratio.str()},
                        {"ratio_decimal", row.ratio.to_decimal(15)},
                        {"lower_bound", row.lower_bound.str()},
                        {"holds", row.holds}};
            em.record(std::move(r));
        }
        OutputRecord summary;
        summary.command = "ratio";
        summary.parameters = {{"d_max", d_max}};
        json violations = json::array();
        for (const auto& v : res.violations) {
            violations.push_back({{"d", v.d}, {"ratio", v.ratio.str()}, {"kind", violation_kind(v.kind)}});
        }
        summary.result = {{"summary", true}, {"pairs_checked", res.rows.size()}, {"violations", violations}};
        em.record(std::move(summary));
    }
    return res.violations.empty() ? kOk : kViolations;
}

int cmd_volume(Emitter& em, const Globals& g, const std::string& dir, const std::string& method,
               std::uint64_t n, double delta) {
    const Direction v = parse_direction(dir);
    const UnitDirection u = normalize(v);
    EngineConfig cfg = g.engine_config();
    cfg.method = parse_volume_method(method.empty() ? g.engine : method);
    if (n != 0) cfg.mc_samples = n;
    if (delta != 0.0) cfg.mc_delta = delta;
    const VolumeEstimate est = section_volume(u, cfg);
    OutputRecord r;
    r.command = "volume";
    r.parameters = {{"dir", dir}, {"d", u.dim()}, {"method", to_string(cfg.method)}, {"eps", cfg.eps}};
    if (cfg.method == VolumeMethod::monte_carlo) {
        r.parameters["n"] = cfg.mc_samples;
        r.parameters["delta"] = cfg.mc_delta;
    }
    r.result = {{"value", est.value}, {"method", to_string(est.method)}, {"direction", vec(u.coords())}};
    r.error_bounds = {{"value", est.error_bound},
                      {"kind", est.method == VolumeMethod::monte_carlo ? "1sigma" : "absolute"}};
    em.record(std::move(r));
    return kOk;
}

int cmd_functional(Emitter& em, const Globals& g, const std::string& dir) {
    const Direction v = parse_direction(dir);
    const FunctionalReport f = evaluate_f(v, g.engine_config());
    OutputRecord r;
    r.command = "functional";
    r.parameters = {{"dir", dir}, {"d", v.dim()}};
    r.parameters.update(g.engine_json());
    r.result = {{"f_value", f.f_value},
                {"bound", f.bound},
                {"gap", f.gap},
                {"volume", f.volume.value},
                {"method", to_string(f.volume.method)},
                {"direction", vec(f.direction.coords())}};
    r.error_bounds = {{"f_value", f.error_bound},
                      {"bound", half_ulp(f.bound)},
                      {"gap", f.error_bound + half_ulp(f.bound)},
                      {"volume", f.volume.error_bound}};
    em.record(std::move(r));
    return kOk;
}

int cmd_verify(Emitter& em, const Globals& g, std::size_t d, std::size_t samples, double tol, bool structured) {
    VerifyOptions opts;
    opts.tol = tol;
    opts.include_structured = structured;
    const VerificationSummary s = verify_theorem(d, samples, Seed{g.seed}, g.engine_config(), opts);
    OutputRecord r;
    r.command = "verify";
    r.parameters = {{"d", d}, {"samples", samples}, {"tol", tol}, {"structured", structured}};
    r.parameters.update(g.engine_json());
    json violating = json::array();
    for (const auto& v : s.violating) violating.push_back(vec(v.coords()));
    r.result = {{"d", s.d},
                {"random_samples", s.random_samples},
                {"structured_samples", s.structured_samples},
                {"bound", s.bound},
                {"max_f", s.max_f},
                {"argmax", vec(s.argmax.coords())},
                {"argmax_angle_to_diagonal", s.angle_to_diagonal},
                {"worst_gap", s.worst_gap},
                {"violations", s.violations},
                {"near_equality", s.near_equality},
                {"violating", violating}};
    r.error_bounds = {{"max_f", tol}, {"bound", half_ulp(s.bound)}};
    em.record(std::move(r));
    return s.violations == 0 ? kOk : kViolations;
}

int cmd_maximize(Emitter& em, const Globals& g, std::size_t d, std::size_t starts, std::size_t budget, bool traces) {
    const MaximizeReport m = maximize(d, starts, budget, Seed{g.seed}, g.engine_config());
    if (traces) {
        for (const auto& t : m.traces) {
            OutputRecord r;
            r.command = "maximize";
            r.parameters = {{"d", d}, {"starts", starts}, {"budget", budget}};
            r.result = {{"start", t.start},
                        {"initial", vec(t.initial)},
                        {"initial_value", t.initial_value},
                        {"final", vec(t.final_point)},
                        {"final_value", t.final_value},
                        {"angle_to_diagonal", t.angle_to_diagonal},
                        {"evaluations", t.evaluations},
                        {"accepted_moves", t.accepted_moves},
                        {"converged", t.converged}};
            r.error_bounds = {{"final_value", g.eps}};
            em.record(std::move(r));
        }
    }
    OutputRecord r;
    r.command = "maximize";
    r.parameters = {{"d", d}, {"starts", starts}, {"budget", budget}};
    r.parameters.update(g.engine_json());
    r.result = {{"d", m.d},
                {"best", vec(m.best)},
                {"best_value", m.best_value},
                {"bound", m.bound},
                {"angle_to_diagonal", m.angle_to_diagonal},
                {"best_start", m.best_start},
                {"starts", m.starts},
                {"evaluations", m.evaluations},
                {"budget_exhausted", m.budget_exhausted}};
    r.error_bounds = {{"best_value", g.eps}, {"bound", half_ulp(m.bound)}};
    em.record(std::move(r));
    return m.best_value <= m.bound + 10.0 * g.eps ? kOk : kViolations;
}

int cmd_scan(Emitter& em, const Globals& g, std::size_t d, std::size_t resolution, double tol, bool rows) {
    const ScanReport s = grid_scan(d, resolution, g.engine_config(), tol, rows || g.csv);
    if (g.csv) {
        em.line(d == 2 ? "theta,value" : "theta,phi,value");
        for (const auto& row : s.rows) {
            std::string line;
            for (double a : row.angles) line += json(a).dump() + ",";
            em.line(line + json(row.value).dump());
        }
        return s.violations == 0 ? kOk : kViolations;
    }
    if (rows) {
        for (const auto& row : s.rows) {
            OutputRecord r;
            r.command = "scan";
            r.parameters = {{"d", d}, {"resolution", resolution}};
            r.result = {{"angles", row.angles}, {"value", row.value}};
            r.error_bounds = {{"value", g.eps}};
            em.record(std::move(r));
        }
    }
    OutputRecord r;
    r.command = "scan";
    r.parameters = {{"d", d}, {"resolution", resolution}, {"tol", tol}};
    r.parameters.update(g.engine_json());
    r.result = {{"summary", true},
                {"points", s.points},
                {"max_value", s.max_value},
                {"argmax", vec(s.argmax)},
                {"argmax_angles", s.argmax_angles},
                {"angle_to_diagonal", s.angle_to_diagonal},
                {"bound", s.bound},
                {"violations", s.violations}};
    r.error_bounds = {{"max_value", g.eps}, {"bound", half_ulp(s.bound)}};
    em.record(std::move(r));
    return s.violations == 0 ? kOk : kViolations;
}

int cmd_ibody(Emitter& em, const Globals& g, std::size_t d, std::size_t samples, std::size_t pairs,
              const std::string& check, double tol, const std::string& point) {
    const IntersectionBody body(d, g.engine_config());
    bool violations = false;
    const json scale = {{"scale", body.scale().scale}, {"section_factor", body.scale().section_factor}};
    if (check == "support" || check == "all") {
        const SupportReport s = support_check(body, samples, Seed{g.seed}, tol, tol);
        OutputRecord r;
        r.command = "ibody-check";
        r.parameters = {{"check", "support"}, {"d", d}, {"samples", samples}, {"tol", tol}};
        r.parameters.update(g.engine_json());
        r.result = {{"normalization", scale},
                    {"sqrt_d", s.sqrt_d},
                    {"max_sum", s.max_sum},
                    {"argmax", vec(s.argmax)},
                    {"diagonal_sum", s.diagonal_sum},
                    {"diagonal_equality", s.diagonal_equality},
                    {"violations", s.violations}};
        r.error_bounds = {{"max_sum", tol}, {"diagonal_sum", tol}};
        em.record(std::move(r));
        violations = violations || s.violations > 0 || !s.diagonal_equality;
    }
    if (check == "busemann" || check == "all") {
        const BusemannReport b = busemann_convexity_check(body, pairs, Seed{g.seed}, tol);
        OutputRecord r;
        r.command = "ibody-check";
        r.parameters = {{"check", "busemann"}, {"d", d}, {"pairs", pairs}, {"tol", tol}};
        r.parameters.update(g.engine_json());
        r.result = {{"worst_slack", b.worst_slack}, {"violations", b.violations}};
        r.error_bounds = {{"worst_slack", tol}};
        em.record(std::move(r));
        violations = violations || b.violations > 0;
    }
    if (check == "cyclic" || (check == "all" && !point.empty())) {
        if (point.empty()) throw UsageError("cyclic check needs --point");
        const CyclicAverageResult c = cyclic_average_check(body, parse_direction(point), tol);
        OutputRecord r;
        r.command = "ibody-check";
        r.parameters = {{"check", "cyclic"}, {"d", d}, {"point", point}, {"tol", tol}};
        r.parameters.update(g.engine_json());
        r.result = {{"f_point", c.f_p}, {"average", vec(c.average)}, {"f_average", c.f_average}, {"holds", c.holds}};
        r.error_bounds = {{"f_average", tol}};
        em.record(std::move(r));
        violations = violations || !c.holds;
    }
    return violations ? kViolations : kOk;
}

void emit_error(std::ostream& out, std::ostream& err, const std::string& command, const std::string& kind,
                const std::string& reason) {
    json j;
    j["command"] = command;
    j["error"] = {{"kind", kind}, {"reason", reason}};
    out << j.dump() << '\n';
    err << "cubeslice: " << reason << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Central hyperplane sections of the cube: sinc integrals, section volumes, and checks", "cubeslice"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--threads", g.threads, "Worker threads (0: runtime default)")->envname("CUBESLICE_THREADS");
    app.add_option("--engine", g.engine, "Volume engine: exact|quad|mc")
        ->check(CLI::IsMember({"exact", "quad", "quadrature", "mc", "monte_carlo"}));
    app.add_option("--eps", g.eps, "Quadrature accuracy / reported engine tolerance");
    app.add_option("--mc-n", g.mc_n, "Monte Carlo sample count");
    app.add_option("--mc-delta", g.mc_delta, "Monte Carlo slab width");
    app.add_option("--out", g.out_path, "Write records to FILE")->envname("CUBESLICE_OUT");
    app.add_flag("--csv", g.csv, "Tabular output for ratio and scan");
    app.add_flag("--timing", g.timing, "Include wall time in records");

    int d = 0;
    bool exact = false;
    auto* sigma = app.add_subcommand("sigma", "Exact sinc integral sigma_d");
    sigma->add_option("--d", d, "Dimension")->required();
    sigma->add_flag("--exact", exact, "Include numerator and denominator");

    int d_max = 0;
    auto* ratio = app.add_subcommand("ratio", "Exact check of d/(d+1) <= sigma_{d+1}/sigma_d < 1");
    ratio->add_option("--d-max", d_max, "Largest d")->required();

    std::string dir;
    std::string method;
    std::uint64_t n = 0;
    double delta = 0.0;
    auto* volume = app.add_subcommand("volume", "Section volume vol(C^d cap v^perp)");
    volume->add_option("--dir", dir, "Direction: 1,2,3 | diag:d | axis:d:i")->required();
    volume->add_option("--method", method, "exact|quad|mc (default: --engine)");
    volume->add_option("--n", n, "Monte Carlo samples");
    volume->add_option("--delta", delta, "Monte Carlo slab width");

    auto* functional = app.add_subcommand("functional", "F(v) = ||v||_1/||v||_2 vol(C^d cap v^perp)");
    functional->add_option("--dir", dir, "Direction")->required();

    std::size_t dim = 0;
    std::size_t samples = 0;
    double tol = 1e-7;
    bool no_structured = false;
    auto* verify = app.add_subcommand("verify", "Sample F against d sigma_d");
    verify->add_option("--d", dim, "Dimension")->required();
    verify->add_option("--samples", samples, "Random directions")->required();
    verify->add_option("--tol", tol, "Violation tolerance");
    verify->add_flag("--no-structured", no_structured, "Skip the structured direction set");

    std::size_t starts = 16;
    std::size_t budget = 20000;
    bool traces = false;
    auto* maximize_cmd = app.add_subcommand("maximize", "Multistart search for max F");
    maximize_cmd->add_option("--d", dim, "Dimension")->required();
    maximize_cmd->add_option("--starts", starts, "Number of starts");
    maximize_cmd->add_option("--budget", budget, "Evaluations per start");
    maximize_cmd->add_flag("--traces", traces, "Emit one record per start");

    std::size_t resolution = 100;
    bool rows = false;
    auto* scan = app.add_subcommand("scan", "Angular grid scan of F (d = 2, 3)");
    scan->add_option("--d", dim, "Dimension")->required();
    scan->add_option("--resolution", resolution, "Grid steps per angle");
    scan->add_option("--tol", tol, "Violation tolerance");
    scan->add_flag("--rows", rows, "Emit every grid point");

    std::size_t pairs = 1000;
    std::string check = "all";
    std::string point;
    double ibody_tol = 1e-7;
    auto* ibody = app.add_subcommand("ibody-check", "Intersection body checks");
    ibody->add_option("--d", dim, "Dimension")->required();
    ibody->add_option("--samples", samples, "Support-check samples")->default_val(1000);
    ibody->add_option("--pairs", pairs, "Busemann pairs");
    ibody->add_option("--check", check, "support|busemann|cyclic|all")
        ->check(CLI::IsMember({"support", "busemann", "cyclic", "all"}));
    ibody->add_option("--point", point, "Point for the cyclic-average check");
    ibody->add_option("--tol", ibody_tol, "Tolerance");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    std::string command = "cubeslice";
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        emit_error(out, err, command, "usage", e.what());
        return kUsage;
    }
    for (auto* sub : app.get_subcommands()) command = sub->get_name();

    try {
        set_num_threads(g.threads);
        (void)parse_volume_method(g.engine);
        if (!(g.eps > 0.0 && g.eps <= 1e-2)) throw UsageError("--eps must lie in (0, 1e-2]");
        Emitter em(out, g);
        int code = kOk;
        if (sigma->parsed()) {
            code = cmd_sigma(em, d, exact);
        } else if (ratio->parsed()) {
            code = cmd_ratio(em, g, d_max);
        } else if (volume->parsed()) {
            code = cmd_volume(em, g, dir, method, n, delta);
        } else if (functional->parsed()) {
            code = cmd_functional(em, g, dir);
        } else if (verify->parsed()) {
            code = cmd_verify(em, g, dim, samples, tol, !no_structured);
        } else if (maximize_cmd->parsed()) {
            code = cmd_maximize(em, g, dim, starts, budget, traces);
        } else if (scan->parsed()) {
            code = cmd_scan(em, g, dim, resolution, tol, rows);
        } else if (ibody->parsed()) {
            code = cmd_ibody(em, g, dim, samples, pairs, check, ibody_tol, point);
        }
        em.flush();
        return code;
    } catch (const UsageError& e) {
        emit_error(out, err, command, "usage", e.what());
        return kUsage;
    } catch (const EngineError& e) {
        emit_error(out, err, command, "engine", e.what());
        return kEngineFailure;
    } catch (const std::exception& e) {
        emit_error(out, err, command, "engine", e.what());
        return kEngineFailure;
    }
}

}  // namespace cubeslice::cli
