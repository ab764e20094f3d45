#include "strat/cli/run.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "strat/coefficients.hpp"
#include "strat/evolution.hpp"
#include "strat/linearx.hpp"
#include "strat/riccati.hpp"
#include "strat/slabstack.hpp"

namespace strat::cli {

namespace {

constexpr const char* kVersion = "stratscat 1.0.0";

/// Runs f(0..n-1) on a small worker pool; results keep index order. The
/// exception of the lowest failing index is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned threads, F&& f) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::string method_list(const std::vector<xcheck::Method>& ms) {
    std::string s;
    for (const auto m : ms) s += (s.empty() ? "" : ",") + std::string(xcheck::to_string(m));
    return s;
}

nlohmann::ordered_json base_metadata(const RunConfig& cfg) {
    nlohmann::ordered_json m;
    m["program"] = kVersion;
    m["command"] = to_string(cfg.command);
    m["methods"] = method_list(cfg.methods);
    m["rtol"] = cfg.tol.rtol;
    m["atol"] = cfg.tol.atol;
    m["seed"] = cfg.seed;
    return m;
}

void push_complex(std::vector<Cell>& row, Complex z) {
    row.emplace_back(z.real());
    row.emplace_back(z.imag());
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

std::vector<std::string> amplitude_columns() {
    return {"re_rl", "im_rl", "re_rr", "im_rr", "re_t", "im_t", "abs_rl", "abs_rr", "abs_t", "arg_rl", "arg_rr", "arg_t"};
}

void push_amplitudes(std::vector<Cell>& row, const Amplitudes& a) {
    push_complex(row, a.r_left);
    push_complex(row, a.r_right);
    push_complex(row, a.t);
    row.emplace_back(std::abs(a.r_left));
    row.emplace_back(std::abs(a.r_right));
    row.emplace_back(std::abs(a.t));
    row.emplace_back(std::arg(a.r_left));
    row.emplace_back(std::arg(a.r_right));
    row.emplace_back(std::arg(a.t));
}

struct Solved {
    Amplitudes amps;
    std::optional<double> det_drift;
};

Solved solve_with(xcheck::Method m, const MediumProfile& profile, const WaveContext& ctx, const Tolerance& tol) {
    using xcheck::Method;
    switch (m) {
        case Method::SlabStack: {
            const auto mat = slab::piecewise_slices(profile, ctx, xcheck::kReportSlices);
            return {amplitudes_from_matrix(mat), mat.det_drift()};
        }
        case Method::Evolution: {
            const auto ev = evolution::evolve_transfer(profile, ctx, tol);
            return {amplitudes_from_matrix(ev.matrix), ev.max_det_drift};
        }
        case Method::Riccati: return {riccati::scatter(profile, ctx, tol), std::nullopt};
        case Method::LinearX: return {linearx::dissect_and_solve(profile, ctx, tol), std::nullopt};
        case Method::Helmholtz: return {xcheck::helmholtz_direct(profile, ctx, tol), std::nullopt};
        case Method::Psi: {
            const auto mat = xcheck::psi_two_component(profile, ctx, tol);
            return {amplitudes_from_matrix(mat), mat.det_drift()};
        }
    }
    throw InvalidArgument("unknown method");
}

struct Point {
    double k, theta_deg;
};

std::vector<Point> sweep_points(const RunConfig& cfg) {
    std::vector<Point> pts;
    for (double k : cfg.k) {
        for (double th : cfg.theta_deg) pts.push_back({k, th});
    }
    return pts;
}

Document run_scatter(const RunConfig& cfg) {
    const MediumProfile profile = build_profile(cfg.profile);
    const auto pts = sweep_points(cfg);
    const std::size_t nm = cfg.methods.size();
    using Row = std::vector<Cell>;
    const auto rows = parallel_map<Row>(pts.size() * nm, cfg.threads, [&](std::size_t i) {
        const Point& p = pts[i / nm];
        const xcheck::Method m = cfg.methods[i % nm];
        const WaveContext ctx(p.k, deg_to_rad(p.theta_deg), cfg.polarization);
        const Solved s = solve_with(m, profile, ctx, cfg.tol);
        Row row{p.k, p.theta_deg};
        push_amplitudes(row, s.amps);
        row.push_back(opt_cell(s.det_drift));
        row.emplace_back(std::string(xcheck::to_string(m)));
        row.emplace_back(std::string(to_string(cfg.polarization)));
        row.emplace_back(cfg.tol.rtol);
        row.emplace_back(cfg.tol.atol);
        return row;
    });
    Table t{"scatter", {"k", "theta_deg"}, rows};
    for (auto& c : amplitude_columns()) t.columns.push_back(c);
    for (const char* c : {"det_drift", "method", "polarization", "rtol", "atol"}) t.columns.emplace_back(c);

    Document doc;
    doc.metadata = base_metadata(cfg);
    doc.metadata["profile"] = cfg.profile.type;
    doc.metadata["polarization"] = std::string(to_string(cfg.polarization));
    doc.tables.push_back(std::move(t));
    return doc;
}

std::string mode_name(design::DesignMode m) {
    switch (m) {
        case design::DesignMode::TENonmagnetic: return "te_nonmagnetic";
        case design::DesignMode::SolveForBeta: return "solve_for_beta";
        case design::DesignMode::SolveForAlpha: return "solve_for_alpha";
    }
    return "unknown";
}

Document run_design(const RunConfig& cfg) {
    const design::DesignSpec spec = build_design(cfg.design);
    const MediumProfile profile = design::synthesize(spec);
    const WaveContext ctx = spec.context();
    const double a = spec.q.a;
    const double ell = spec.q.ell;

    Table prof{"profile", {"x", "re_eps", "im_eps", "re_mu", "im_mu", "re_q", "im_q"}, {}};
    double min_re_alpha = std::numeric_limits<double>::infinity();
    const std::size_t n = cfg.design.samples;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a + ell * static_cast<double>(i) / static_cast<double>(n - 1);
        const Material m = profile.at(x);
        const Complex q = spec.q(x);
        min_re_alpha = std::min(min_re_alpha, alpha_of(m, spec.polarization).real());
        prof.rows.push_back({x, m.eps.real(), m.eps.imag(), m.mu.real(), m.mu.imag(), q.real(), q.imag()});
    }

    const Amplitudes verify = riccati::scatter(profile, ctx, cfg.tol);
    std::optional<design::DesignedAmplitudes> da;
    if (spec.mode == design::DesignMode::TENonmagnetic) da = design::designed_amplitudes(spec);

    Table sum{"summary",
              {"family", "mode", "polarization", "k_star", "theta_star_deg", "kappa_star_ell", "re_t", "im_t", "abs_t",
               "re_rl", "im_rl", "abs_rl", "phi", "re_delta_ell", "im_delta_ell", "verify_method", "verify_abs_rr",
               "verify_abs_rl", "verify_abs_t", "pt_symmetric", "min_re_alpha", "rtol", "atol"},
              {}};
    std::vector<Cell> row{spec.q.family, mode_name(spec.mode), std::string(to_string(spec.polarization)), spec.k_star,
                          cfg.design.theta_star_deg, spec.kappa_star() * ell};
    if (da) {
        push_complex(row, da->t);
        row.emplace_back(std::abs(da->t));
        push_complex(row, da->r_left);
        row.emplace_back(std::abs(da->r_left));
        row.emplace_back(da->phi);
        push_complex(row, da->delta_ell);
    } else {
        row.resize(row.size() + 9);
    }
    row.emplace_back(std::string("riccati"));
    row.emplace_back(std::abs(verify.r_right));
    row.emplace_back(std::abs(verify.r_left));
    row.emplace_back(std::abs(verify.t));
    row.emplace_back(design::pt_symmetry_check(spec));
    row.emplace_back(min_re_alpha);
    row.emplace_back(cfg.tol.rtol);
    row.emplace_back(cfg.tol.atol);
    sum.rows.push_back(std::move(row));

    Document doc;
    doc.metadata = base_metadata(cfg);
    doc.metadata["methods"] = "riccati";
    doc.metadata["family"] = spec.q.family;
    doc.tables.push_back(std::move(prof));
    doc.tables.push_back(std::move(sum));
    return doc;
}

Document run_figure(const RunConfig& cfg) {
    const FigureBlock& fb = cfg.figure;
    const double theta = deg_to_rad(fb.theta_star_deg);
    const double c = std::abs(std::cos(theta));
    const double ell = 1.0;
    using Row = std::vector<Cell>;

    const auto phi_rows = parallel_map<Row>(fb.kappa_ell.size(), cfg.threads, [&](std::size_t i) {
        const double kl = fb.kappa_ell[i];
        const auto spec = design::parabolic_design(kl / ell, ell, 1.0 / (ell * c), theta);
        const Complex d = design::delta_numeric(spec.q, ell);
        const double closed = spec.q.delta(ell).real();
        return Row{kl, 1.0 - d.real() / ell, 1.0 - closed / ell};
    });

    const std::size_t nr = fb.rl_kappa_ell.size();
    const auto rl_rows = parallel_map<Row>(fb.kstar_ell.size() * nr, cfg.threads, [&](std::size_t i) {
        const double kse = fb.kstar_ell[i / nr];
        const double kl = fb.rl_kappa_ell[i % nr];
        const auto spec = design::parabolic_design(kl / ell, ell, kse / (ell * c), theta);
        const auto da = design::designed_amplitudes(spec);
        const double bound = 2.0 / 3.0 * kse * kl * kl;
        const double rl = std::abs(da.r_left);
        return Row{kse, kl, rl, std::abs(da.t), bound, rl <= bound};
    });

    Document doc;
    doc.metadata = base_metadata(cfg);
    doc.metadata["methods"] = "quadrature";
    doc.metadata["theta_star_deg"] = fb.theta_star_deg;
    doc.tables.push_back({"phi", {"kappa_ell", "phi", "phi_closed_form"}, phi_rows});
    doc.tables.push_back({"rl", {"kstar_ell", "kappa_ell", "abs_rl", "abs_t", "bound", "within_bound"}, rl_rows});
    return doc;
}

Document run_xcheck(const RunConfig& cfg) {
    std::vector<xcheck::SuiteCase> cases;
    if (cfg.xcheck.suite) {
        cases = xcheck::random_suite(cfg.seed, cfg.xcheck.count);
    } else {
        const MediumProfile profile = build_profile(cfg.profile);
        for (const auto& p : sweep_points(cfg)) {
            cases.push_back({cfg.profile.type, profile, WaveContext(p.k, deg_to_rad(p.theta_deg), cfg.polarization)});
        }
    }
    const auto reports = parallel_map<xcheck::ValidationReport>(cases.size(), cfg.threads, [&](std::size_t i) {
        return xcheck::cross_validate(cases[i].profile, cases[i].ctx, cfg.methods, cfg.tol);
    });

    Table methods{"xcheck", {"case", "label", "k", "theta_deg", "polarization", "method", "ok"}, {}};
    for (auto& col : amplitude_columns()) methods.columns.push_back(col);
    for (const char* col : {"det_drift", "abs_m22", "x_blow", "error", "rtol", "atol"}) methods.columns.emplace_back(col);
    Table summary{"summary",
                  {"case", "label", "k", "theta_deg", "polarization", "max_deviation", "reciprocity",
                   "fourier_residual", "pt_symmetric", "unitarity_residual", "passed"},
                  {}};
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& cs = cases[i];
        const auto& rep = reports[i];
        const double th = rad_to_deg(cs.ctx.theta());
        const std::string pol(to_string(cs.ctx.polarization()));
        for (const auto& r : rep.results) {
            std::vector<Cell> row{static_cast<std::int64_t>(i), cs.label, cs.ctx.k(), th, pol,
                                  std::string(xcheck::to_string(r.method)), r.ok()};
            if (r.ok()) {
                push_amplitudes(row, *r.amplitudes);
            } else {
                row.resize(row.size() + amplitude_columns().size());
            }
            row.push_back(opt_cell(r.det_drift));
            row.push_back(opt_cell(r.abs_m22));
            row.push_back(opt_cell(r.x_blow));
            row.emplace_back(r.error);
            row.emplace_back(cfg.tol.rtol);
            row.emplace_back(cfg.tol.atol);
            methods.rows.push_back(std::move(row));
        }
        summary.rows.push_back({static_cast<std::int64_t>(i), cs.label, cs.ctx.k(), th, pol, rep.max_deviation,
                                opt_cell(rep.reciprocity), opt_cell(rep.fourier_residual), rep.pt_symmetric,
                                opt_cell(rep.unitarity_residual), rep.passed});
    }

    Document doc;
    doc.metadata = base_metadata(cfg);
    doc.metadata["suite"] = cfg.xcheck.suite;
    doc.tables.push_back(std::move(methods));
    doc.tables.push_back(std::move(summary));
    return doc;
}

}  // namespace

Document execute(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Scatter: return run_scatter(cfg);
        case Command::Design: return run_design(cfg);
        case Command::XCheck: return run_xcheck(cfg);
        case Command::Figure: return run_figure(cfg);
    }
    throw InvalidArgument("unknown command");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const Document doc = execute(cfg);
        if (cfg.format == "json") {
            write_json(doc, cfg.out_path, out);
        } else {
            write_csv(doc, cfg.out_path, out);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const SpectralSingularity& e) {
        err << "solver error: SpectralSingularity: " << e.what();
        if (e.x_blow()) err << "; x_blow=" << format_double(*e.x_blow());
        err << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scattering of TE/TM waves by planar stratified media", "stratscat"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path, out_path, format, methods;
    std::optional<double> rtol, atol;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    const std::vector<std::pair<const char*, const char*>> subs{
        {"scatter", "Reflection and transmission amplitudes over a (k, theta) sweep"},
        {"design", "Synthesize a right-reflectionless profile from Q(x)"},
        {"xcheck", "Cross-validate the solvers against each other"},
        {"figure", "Tables of phi and |R^l| versus kappa*ell for the parabolic design"}};
    for (const auto& [name, help] : subs) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "YAML configuration file")->required();
        s->add_option("--out", out_path, "Output path (stdout when omitted)");
        s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--method", methods, "Comma-separated method list");
        s->add_option("--rtol", rtol, "Relative tolerance");
        s->add_option("--atol", atol, "Absolute tolerance");
        s->add_option("--threads", threads, "Worker threads for sweeps");
        s->add_option("--seed", seed, "Random seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    Command cmd = Command::Scatter;
    for (const auto* s : app.get_subcommands()) {
        const std::string n = s->get_name();
        cmd = n == "design" ? Command::Design : n == "xcheck" ? Command::XCheck : n == "figure" ? Command::Figure : cmd;
    }

    RunConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw IoError("cannot read config '" + config_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = parse_config(buf.str(), cmd);
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!format.empty()) cfg.format = format;
        if (!methods.empty()) {
            cfg.methods.clear();
            std::stringstream ss(methods);
            for (std::string item; std::getline(ss, item, ',');) {
                try {
                    cfg.methods.push_back(xcheck::method_from_string(item));
                } catch (const Error&) {
                    throw ValidationError("--method: unknown method '" + item + "'", 0, "methods");
                }
            }
        }
        if (rtol) cfg.tol.rtol = *rtol;
        if (atol) cfg.tol.atol = *atol;
        if (threads) cfg.threads = *threads;
        if (seed) cfg.seed = *seed;
        validate(cfg);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
    return run(cfg, out, err);
}

}  // namespace strat::cli
