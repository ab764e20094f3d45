#include "strat/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace strat::cli {

namespace {

int line_of(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.line >= 0 ? m.line + 1 : 0;
}

[[noreturn]] void parse_fail(const YAML::Node& n, const std::string& field, const std::string& msg) {
    const int line = line_of(n);
    throw ParseError("line " + std::to_string(line) + ", field '" + field + "': " + msg, line, field);
}

[[noreturn]] void invalid(int line, const std::string& field, const std::string& msg) {
    const std::string where = line > 0 ? "line " + std::to_string(line) + ", " : "";
    throw ValidationError(where + "field '" + field + "': " + msg, line, field);
}

void require_map(const YAML::Node& n, const std::string& field) {
    if (!n.IsMap()) parse_fail(n, field, "expected a mapping");
}

void reject_unknown(const YAML::Node& n, const std::string& field, std::initializer_list<const char*> allowed) {
    require_map(n, field);
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key)) {
            parse_fail(kv.first, field.empty() ? key : field + "." + key, "unknown key");
        }
    }
}

std::string join(const std::string& parent, const char* key) { return parent.empty() ? key : parent + "." + key; }

double as_double(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) parse_fail(n, field, "expected a number");
    try {
        const double v = n.as<double>();
        if (!std::isfinite(v)) parse_fail(n, field, "value must be finite");
        return v;
    } catch (const YAML::BadConversion&) {
        parse_fail(n, field, "expected a number, got '" + n.Scalar() + "'");
    }
}

long long as_int(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) parse_fail(n, field, "expected an integer");
    try {
        return n.as<long long>();
    } catch (const YAML::BadConversion&) {
        parse_fail(n, field, "expected an integer, got '" + n.Scalar() + "'");
    }
}

bool as_bool(const YAML::Node& n, const std::string& field) {
    try {
        return n.as<bool>();
    } catch (const YAML::BadConversion&) {
        parse_fail(n, field, "expected true or false");
    }
}

std::string as_string(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) parse_fail(n, field, "expected a string");
    return n.Scalar();
}

/// A number, [re, im] or {re, im}.
Complex as_complex(const YAML::Node& n, const std::string& field) {
    if (n.IsScalar()) return {as_double(n, field), 0.0};
    if (n.IsSequence()) {
        if (n.size() != 2) parse_fail(n, field, "complex values are [re, im]");
        return {as_double(n[0], field), as_double(n[1], field)};
    }
    if (n.IsMap()) {
        reject_unknown(n, field, {"re", "im"});
        return {n["re"] ? as_double(n["re"], field + ".re") : 0.0, n["im"] ? as_double(n["im"], field + ".im") : 0.0};
    }
    parse_fail(n, field, "expected a complex number");
}

/// A number, a list of numbers or {from, to, count, spacing}.
std::vector<double> as_sweep(const YAML::Node& n, const std::string& field) {
    if (n.IsScalar()) return {as_double(n, field)};
    std::vector<double> out;
    if (n.IsSequence()) {
        for (const auto& v : n) out.push_back(as_double(v, field));
        if (out.empty()) invalid(line_of(n), field, "sweep needs at least one point");
        return out;
    }
    reject_unknown(n, field, {"from", "to", "count", "spacing"});
    if (!n["from"] || !n["to"]) parse_fail(n, field, "sweep needs 'from' and 'to'");
    const double from = as_double(n["from"], field + ".from");
    const double to = as_double(n["to"], field + ".to");
    const long long count = n["count"] ? as_int(n["count"], field + ".count") : 2;
    const std::string spacing = n["spacing"] ? as_string(n["spacing"], field + ".spacing") : "linear";
    if (count < 1) invalid(line_of(n), field + ".count", "sweep needs at least one point");
    if (spacing != "linear" && spacing != "log") invalid(line_of(n), field + ".spacing", "expected linear or log");
    if (spacing == "log" && !(from > 0.0 && to > 0.0)) invalid(line_of(n), field, "log sweeps need positive bounds");
    for (long long i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(spacing == "log" ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                                       : from + t * (to - from));
    }
    out.front() = from;
    if (count > 1) out.back() = to;
    return out;
}

Polarization as_polarization(const YAML::Node& n, const std::string& field) {
    const std::string s = as_string(n, field);
    try {
        return polarization_from_string(s);
    } catch (const Error&) {
        parse_fail(n, field, "expected TE or TM, got '" + s + "'");
    }
}

design::DesignMode as_mode(const YAML::Node& n, const std::string& field) {
    const std::string s = as_string(n, field);
    if (s == "te_nonmagnetic") return design::DesignMode::TENonmagnetic;
    if (s == "solve_for_beta") return design::DesignMode::SolveForBeta;
    if (s == "solve_for_alpha") return design::DesignMode::SolveForAlpha;
    parse_fail(n, field, "expected te_nonmagnetic, solve_for_beta or solve_for_alpha");
}

std::vector<xcheck::Method> as_methods(const YAML::Node& n, const std::string& field) {
    std::vector<std::string> names;
    if (n.IsScalar()) {
        std::stringstream ss(n.Scalar());
        for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
    } else if (n.IsSequence()) {
        for (const auto& v : n) names.push_back(as_string(v, field));
    } else {
        parse_fail(n, field, "expected a method name or a list of names");
    }
    std::vector<xcheck::Method> out;
    for (const auto& s : names) {
        try {
            out.push_back(xcheck::method_from_string(s));
        } catch (const Error&) {
            parse_fail(n, field, "unknown method '" + s + "'");
        }
    }
    return out;
}

Material as_material(const YAML::Node& n, const std::string& field) {
    reject_unknown(n, field, {"eps_hat", "mu_hat"});
    Material m;
    if (n["eps_hat"]) m.eps = as_complex(n["eps_hat"], field + ".eps_hat");
    if (n["mu_hat"]) m.mu = as_complex(n["mu_hat"], field + ".mu_hat");
    return m;
}

DesignBlock parse_design(const YAML::Node& n, const std::string& field) {
    reject_unknown(n, field,
                   {"family", "ell", "a", "kappa_ell", "z", "n", "file", "k_star", "theta_star_deg", "polarization",
                    "mode", "samples"});
    DesignBlock d;
    d.line = line_of(n);
    if (n["family"]) d.family = as_string(n["family"], join(field, "family"));
    if (n["ell"]) d.ell = as_double(n["ell"], join(field, "ell"));
    if (n["a"]) d.a = as_double(n["a"], join(field, "a"));
    if (n["kappa_ell"]) d.kappa_ell = as_double(n["kappa_ell"], join(field, "kappa_ell"));
    if (n["z"]) d.z = as_complex(n["z"], join(field, "z"));
    if (n["n"]) d.n = static_cast<int>(as_int(n["n"], join(field, "n")));
    if (n["file"]) d.q_file = as_string(n["file"], join(field, "file"));
    if (n["k_star"]) d.k_star = as_double(n["k_star"], join(field, "k_star"));
    if (n["theta_star_deg"]) d.theta_star_deg = as_double(n["theta_star_deg"], join(field, "theta_star_deg"));
    if (n["polarization"]) d.polarization = as_polarization(n["polarization"], join(field, "polarization"));
    if (n["mode"]) d.mode = as_mode(n["mode"], join(field, "mode"));
    if (n["samples"]) {
        const long long s = as_int(n["samples"], join(field, "samples"));
        if (s < 2) invalid(line_of(n["samples"]), join(field, "samples"), "need at least 2 samples");
        d.samples = static_cast<std::size_t>(s);
    }

    if (d.family != "parabolic" && d.family != "sinusoidal" && d.family != "tabulated") {
        invalid(d.line, join(field, "family"), "expected parabolic, sinusoidal or tabulated");
    }
    if (!(d.ell > 0.0)) invalid(d.line, join(field, "ell"), "ell must be positive");
    if (d.family == "parabolic" && !(d.kappa_ell > 0.0)) {
        invalid(d.line, join(field, "kappa_ell"), "kappa must be positive");
    }
    if (d.family == "sinusoidal" && d.n == 0) invalid(d.line, join(field, "n"), "n must be nonzero");
    if (d.family == "tabulated" && d.q_file.empty()) invalid(d.line, join(field, "file"), "tabulated Q needs a file");
    if (d.k_star && !(*d.k_star > 0.0)) invalid(d.line, join(field, "k_star"), "k_star must be positive");
    if (std::abs(std::cos(deg_to_rad(d.theta_star_deg))) < kGrazingCutoff) {
        invalid(d.line, join(field, "theta_star_deg"), "GrazingIncidence: |cos(theta_star)| < 1e-6");
    }
    if (d.mode == design::DesignMode::TENonmagnetic && d.polarization != Polarization::TE) {
        invalid(d.line, join(field, "mode"), "te_nonmagnetic needs TE polarization");
    }
    return d;
}

ProfileSpec parse_profile(const YAML::Node& n) {
    const std::string f = "profile";
    reject_unknown(n, f,
                   {"type", "a", "ell", "eps_hat", "mu_hat", "layers", "left", "right", "file", "edge_jump",
                    "design", "seed", "magnetic"});
    ProfileSpec p;
    p.line = line_of(n);
    if (!n["type"]) parse_fail(n, f, "profile needs a 'type'");
    p.type = as_string(n["type"], "profile.type");
    if (n["a"]) p.a = as_double(n["a"], "profile.a");
    if (n["ell"]) p.ell = as_double(n["ell"], "profile.ell");
    if (n["eps_hat"]) p.eps = as_complex(n["eps_hat"], "profile.eps_hat");
    if (n["mu_hat"]) p.mu = as_complex(n["mu_hat"], "profile.mu_hat");
    if (n["left"]) p.left = as_material(n["left"], "profile.left");
    if (n["right"]) p.right = as_material(n["right"], "profile.right");
    if (n["file"]) p.file = as_string(n["file"], "profile.file");
    if (n["edge_jump"]) p.edge_jump = as_bool(n["edge_jump"], "profile.edge_jump");
    if (n["seed"]) p.seed = static_cast<std::uint64_t>(as_int(n["seed"], "profile.seed"));
    if (n["magnetic"]) p.magnetic = as_bool(n["magnetic"], "profile.magnetic");
    if (n["design"]) p.design = parse_design(n["design"], "profile.design");
    if (n["layers"]) {
        const auto& ls = n["layers"];
        if (!ls.IsSequence()) parse_fail(ls, "profile.layers", "expected a list of layers");
        for (const auto& l : ls) {
            reject_unknown(l, "profile.layers", {"thickness", "eps_hat", "mu_hat"});
            Layer layer;
            if (!l["thickness"]) parse_fail(l, "profile.layers", "layer needs a thickness");
            layer.thickness = as_double(l["thickness"], "profile.layers.thickness");
            if (l["eps_hat"]) layer.eps = as_complex(l["eps_hat"], "profile.layers.eps_hat");
            if (l["mu_hat"]) layer.mu = as_complex(l["mu_hat"], "profile.layers.mu_hat");
            if (!(layer.thickness > 0.0)) invalid(line_of(l), "profile.layers.thickness", "thickness must be positive");
            if (layer.eps == 0.0 || layer.mu == 0.0) invalid(line_of(l), "profile.layers", "eps_hat and mu_hat must be nonzero");
            p.layers.push_back(layer);
        }
    }

    static const std::set<std::string> types{"vacuum",    "homogeneous", "stack", "linear_ramp",
                                             "tabulated", "design",      "random"};
    if (!types.count(p.type)) {
        invalid(p.line, "profile.type",
                "expected vacuum, homogeneous, stack, linear_ramp, tabulated, design or random");
    }
    if (!(p.ell > 0.0)) invalid(p.line, "profile.ell", "ell must be positive");
    if (p.type == "homogeneous" && (p.eps == 0.0 || p.mu == 0.0)) {
        invalid(p.line, "profile.eps_hat", "eps_hat and mu_hat must be nonzero");
    }
    if (p.type == "stack" && p.layers.empty()) invalid(p.line, "profile.layers", "stack needs at least one layer");
    if (p.type == "tabulated" && p.file.empty()) invalid(p.line, "profile.file", "tabulated profile needs a file");
    if (p.type == "design" && !p.design) invalid(p.line, "profile.design", "design profile needs a design block");
    return p;
}

FigureBlock parse_figure(const YAML::Node& n) {
    reject_unknown(n, "figure", {"kappa_ell", "rl_kappa_ell", "kstar_ell", "theta_star_deg"});
    FigureBlock fb;
    YAML::Node def = YAML::Load("{from: 0.01, to: 50, count: 200, spacing: log}");
    fb.kappa_ell = as_sweep(n["kappa_ell"] ? n["kappa_ell"] : def, "figure.kappa_ell");
    fb.rl_kappa_ell = n["rl_kappa_ell"] ? as_sweep(n["rl_kappa_ell"], "figure.rl_kappa_ell") : fb.kappa_ell;
    if (n["kstar_ell"]) fb.kstar_ell = as_sweep(n["kstar_ell"], "figure.kstar_ell");
    if (n["theta_star_deg"]) fb.theta_star_deg = as_double(n["theta_star_deg"], "figure.theta_star_deg");
    const int line = line_of(n);
    auto positive = [&](const std::vector<double>& v, const char* field) {
        for (double x : v) {
            if (!(x > 0.0)) invalid(line, field, "values must be positive");
        }
    };
    positive(fb.kappa_ell, "figure.kappa_ell");
    positive(fb.rl_kappa_ell, "figure.rl_kappa_ell");
    positive(fb.kstar_ell, "figure.kstar_ell");
    if (std::abs(std::cos(deg_to_rad(fb.theta_star_deg))) < kGrazingCutoff) {
        invalid(line, "figure.theta_star_deg", "GrazingIncidence: |cos(theta_star)| < 1e-6");
    }
    return fb;
}

Command as_command(const YAML::Node& n) {
    const std::string s = as_string(n, "command");
    if (s == "scatter") return Command::Scatter;
    if (s == "design") return Command::Design;
    if (s == "xcheck") return Command::XCheck;
    if (s == "figure") return Command::Figure;
    parse_fail(n, "command", "expected scatter, design, xcheck or figure");
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Scatter: return "scatter";
        case Command::Design: return "design";
        case Command::XCheck: return "xcheck";
        case Command::Figure: return "figure";
    }
    return "unknown";
}

RunConfig parse_config(const std::string& text, std::optional<Command> forced) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        const int line = e.mark.line >= 0 ? e.mark.line + 1 : 0;
        throw ParseError("line " + std::to_string(line) + ": " + e.msg, line, "");
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    reject_unknown(root, "",
                   {"command", "profile", "polarization", "k", "theta_deg", "methods", "tolerance", "design", "figure",
                    "xcheck", "output", "seed", "threads"});

    RunConfig cfg;
    std::optional<Command> declared;
    if (root["command"]) declared = as_command(root["command"]);
    std::vector<Command> implied;
    if (root["design"]) implied.push_back(Command::Design);
    if (root["figure"]) implied.push_back(Command::Figure);
    if (root["xcheck"]) implied.push_back(Command::XCheck);
    if (forced && declared && *forced != *declared) {
        invalid(line_of(root["command"]), "command",
                "config declares '" + to_string(*declared) + "' but '" + to_string(*forced) + "' was requested");
    }
    if (forced) {
        cfg.command = *forced;
    } else if (declared) {
        cfg.command = *declared;
    } else if (implied.size() > 1) {
        invalid(line_of(root), "command", "more than one of design/figure/xcheck given; set 'command'");
    } else {
        cfg.command = implied.empty() ? Command::Scatter : implied.front();
    }

    if (root["profile"]) cfg.profile = parse_profile(root["profile"]);
    if (root["polarization"]) cfg.polarization = as_polarization(root["polarization"], "polarization");
    if (root["k"]) cfg.k = as_sweep(root["k"], "k");
    if (root["theta_deg"]) cfg.theta_deg = as_sweep(root["theta_deg"], "theta_deg");
    if (cfg.command == Command::XCheck) cfg.methods = xcheck::all_methods();
    if (root["methods"]) cfg.methods = as_methods(root["methods"], "methods");
    if (root["tolerance"]) {
        const auto& t = root["tolerance"];
        reject_unknown(t, "tolerance", {"rtol", "atol"});
        if (t["rtol"]) cfg.tol.rtol = as_double(t["rtol"], "tolerance.rtol");
        if (t["atol"]) cfg.tol.atol = as_double(t["atol"], "tolerance.atol");
    }
    if (root["design"]) cfg.design = parse_design(root["design"], "design");
    if (root["figure"]) {
        cfg.figure = parse_figure(root["figure"]);
    } else {
        cfg.figure = parse_figure(YAML::Node(YAML::NodeType::Map));
    }
    if (root["xcheck"]) {
        const auto& x = root["xcheck"];
        reject_unknown(x, "xcheck", {"suite", "count"});
        if (x["suite"]) {
            const auto& sn = x["suite"];
            if (sn.IsScalar() && (sn.Scalar() == "random" || sn.Scalar() == "none")) {
                cfg.xcheck.suite = sn.Scalar() == "random";
            } else {
                cfg.xcheck.suite = as_bool(sn, "xcheck.suite");
            }
        }
        if (x["count"]) {
            const long long c = as_int(x["count"], "xcheck.count");
            if (c < 1) invalid(line_of(x["count"]), "xcheck.count", "count must be positive");
            cfg.xcheck.count = static_cast<std::size_t>(c);
        }
    }
    if (root["output"]) {
        const auto& o = root["output"];
        reject_unknown(o, "output", {"path", "format"});
        if (o["path"]) cfg.out_path = as_string(o["path"], "output.path");
        if (o["format"]) cfg.format = as_string(o["format"], "output.format");
    }
    if (root["seed"]) cfg.seed = static_cast<std::uint64_t>(as_int(root["seed"], "seed"));
    if (root["threads"]) {
        const long long t = as_int(root["threads"], "threads");
        if (t < 1) invalid(line_of(root["threads"]), "threads", "threads must be positive");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (cfg.command == Command::Design && !root["design"]) {
        invalid(line_of(root), "design", "design mode needs a design block");
    }
    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (!(cfg.tol.rtol > 0.0) || !(cfg.tol.atol > 0.0)) invalid(0, "tolerance", "rtol and atol must be positive");
    if (cfg.methods.empty()) invalid(0, "methods", "at least one method is required");
    if (cfg.command == Command::XCheck && cfg.methods.size() < 2) {
        invalid(0, "methods", "xcheck needs at least two methods");
    }
    if (cfg.format != "csv" && cfg.format != "json") invalid(0, "output.format", "expected csv or json");
    if (cfg.k.empty() || cfg.theta_deg.empty()) invalid(0, "k", "sweeps need at least one point");
    for (double k : cfg.k) {
        if (!(k > 0.0) || !std::isfinite(k)) invalid(0, "k", "wavenumbers must be positive and finite");
    }
    for (double th : cfg.theta_deg) {
        if (!std::isfinite(th)) invalid(0, "theta_deg", "angles must be finite");
        try {
            (void)WaveContext(cfg.k.front(), deg_to_rad(th), cfg.polarization);
        } catch (const GrazingIncidence& e) {
            invalid(0, "theta_deg", std::string("GrazingIncidence: ") + e.what());
        }
    }
    if (cfg.threads < 1) invalid(0, "threads", "threads must be positive");
}

std::vector<std::vector<double>> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read sample table '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<double> row;
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError(path + ": line " + std::to_string(lineno) + ": not a number '" + tok + "'", lineno,
                                 path);
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return rows;
}

design::DesignSpec build_design(const DesignBlock& b) {
    design::DesignSpec spec;
    const double theta = deg_to_rad(b.theta_star_deg);
    const double c = std::abs(std::cos(theta));
    try {
        if (b.family == "parabolic") {
            spec.q = design::parabolic_q(b.kappa_ell / b.ell, b.ell, b.a);
            spec.k_star = b.k_star ? *b.k_star : 5.0 / (b.ell * c);
        } else if (b.family == "sinusoidal") {
            spec.q = design::sinusoidal_q(b.z, b.n, b.ell, b.a);
            spec.k_star = b.k_star ? *b.k_star : kPi * std::abs(b.n) / b.ell / (2.0 * c);
        } else {
            const auto rows = read_table(b.q_file);
            std::vector<double> xs;
            std::vector<Complex> qs;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].size() != 2 && rows[i].size() != 3) {
                    throw ParseError(b.q_file + ": row " + std::to_string(i + 1) + " needs 2 or 3 columns",
                                     static_cast<int>(i + 1), b.q_file);
                }
                xs.push_back(rows[i][0]);
                qs.emplace_back(rows[i][1], rows[i].size() == 3 ? rows[i][2] : 0.0);
            }
            spec.q = design::tabulated_q(std::move(xs), std::move(qs));
            spec.k_star = b.k_star ? *b.k_star : 5.0 / (spec.q.ell * c);
        }
    } catch (const InvalidArgument& e) {
        invalid(b.line, "design", e.what());
    }
    spec.theta_star = theta;
    spec.polarization = b.polarization;
    spec.mode = b.mode;
    return spec;
}

MediumProfile build_profile(const ProfileSpec& p) {
    try {
        if (p.type == "vacuum") return MediumProfile::vacuum(p.a, p.ell);
        if (p.type == "homogeneous") return MediumProfile::homogeneous(p.eps, p.mu, p.a, p.ell);
        if (p.type == "stack") return MediumProfile::stack(p.a, p.layers);
        if (p.type == "linear_ramp") return linear_ramp(p.a, p.ell, p.left, p.right);
        if (p.type == "design") return design::synthesize(build_design(*p.design));
        if (p.type == "random") {
            std::mt19937_64 rng(p.seed);
            return xcheck::random_smooth_profile(rng, p.a, p.ell, p.magnetic);
        }
        const auto rows = read_table(p.file);
        std::vector<double> xs;
        std::vector<Complex> eps, mu;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() != 3 && r.size() != 5) {
                throw ParseError(p.file + ": row " + std::to_string(i + 1) + " needs 3 or 5 columns",
                                 static_cast<int>(i + 1), p.file);
            }
            xs.push_back(r[0]);
            eps.emplace_back(r[1], r[2]);
            mu.emplace_back(r.size() == 5 ? Complex{r[3], r[4]} : Complex{1.0, 0.0});
        }
        return MediumProfile::tabulated(std::move(xs), std::move(eps), std::move(mu), p.edge_jump);
    } catch (const InvalidArgument& e) {
        invalid(p.line, "profile", e.what());
    }
}

}  // namespace strat::cli
