#include "qwdirac/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qwdirac/errors.hpp"
#include "qwdirac/trig.hpp"
#include "qwdirac/verify.hpp"

namespace qwd::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void emit(const Json& v, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    const std::string inner(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(key).dump() + ": ";
                emit(value, out, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return is_scalar(e); });
            out += flat ? "[" : "[\n";
            bool first = true;
            for (const Json& e : v) {
                if (!first) out += flat ? ", " : ",\n";
                first = false;
                if (!flat) out += inner;
                emit(e, out, depth + 1);
            }
            out += flat ? "]" : "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            out += std::isfinite(d) ? num(d) : "null";
            return;
        }
        default:
            out += v.dump();
    }
}

std::string render(const Json& v) {
    std::string out;
    emit(v, out, 0);
    out += '\n';
    return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string csv_cell(double v) { return std::isfinite(v) ? num(v) : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")); }

std::string csv_cell(const std::optional<double>& v) { return v ? csv_cell(*v) : ""; }

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    const auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out << ',';
            out << csv_quote(cells[i]);
        }
        out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double json_real(const Json& v, const std::string& what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_real(v.get<std::string>());
    throw InvalidParameter(what + " must be a number");
}

PotentialSpec json_potential(const Json& v, const std::string& what) {
    if (v.is_number()) return {{v.get<double>()}};
    if (!v.is_object() || v.size() != 1) {
        throw InvalidParameter(what + " must be {\"constant\": value} or {\"poly\": [coefficients]}");
    }
    if (v.contains("constant")) return {{json_real(v.at("constant"), what + ".constant")}};
    if (v.contains("poly") && v.at("poly").is_array() && !v.at("poly").empty()) {
        PotentialSpec spec;
        spec.coefficients.clear();
        for (const Json& c : v.at("poly")) spec.coefficients.push_back(json_real(c, what + ".poly"));
        return spec;
    }
    throw InvalidParameter(what + " must be {\"constant\": value} or {\"poly\": [coefficients]}");
}

// ---------------------------------------------------------------------------------------------

struct Globals {
    double q = 0.5;
    double omega = 0.5;
    double tol_series = 1e-12;
    double tol_picard = 1e-10;
    double tol_root = 1e-10;
    std::uint64_t seed = kDefaultSeed;
    std::string format;
    CLI::Option* q_opt = nullptr;
    CLI::Option* omega_opt = nullptr;
    CLI::Option* series_opt = nullptr;
    CLI::Option* picard_opt = nullptr;
    CLI::Option* root_opt = nullptr;

    [[nodiscard]] std::string format_or(const std::string& fallback) const {
        return format.empty() ? fallback : format;
    }

    void apply(ProblemConfig& c) const {
        if (q_opt->count() > 0) c.q = q;
        if (omega_opt->count() > 0) c.omega = omega;
        if (series_opt->count() > 0) c.tolerances.series = tol_series;
        if (picard_opt->count() > 0) c.tolerances.picard = tol_picard;
        if (root_opt->count() > 0) c.tolerances.root = tol_root;
    }
};

struct ProblemFlags {
    std::string config_path;
    std::string a;
    double k11 = 0.0;
    double k12 = 0.0;
    double k21 = 0.0;
    double k22 = 0.0;
    std::string p;
    std::string r;
    int n_max = 4;
    CLI::Option* a_opt = nullptr;
    CLI::Option* k_opts[4] = {};
    CLI::Option* p_opt = nullptr;
    CLI::Option* r_opt = nullptr;
    CLI::Option* n_opt = nullptr;
};

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem_config(buf.str());
}

ProblemConfig assemble(const Globals& g, const ProblemFlags& f) {
    ProblemConfig c = f.config_path.empty() ? ProblemConfig{} : load_config(f.config_path);
    g.apply(c);
    if (f.a_opt && f.a_opt->count() > 0) c.a = parse_real(f.a);
    const double* ks[4] = {&f.k11, &f.k12, &f.k21, &f.k22};
    double* targets[4] = {&c.k11, &c.k12, &c.k21, &c.k22};
    for (int i = 0; i < 4; ++i) {
        if (f.k_opts[i] && f.k_opts[i]->count() > 0) *targets[i] = *ks[i];
    }
    if (f.p_opt && f.p_opt->count() > 0) c.p = parse_potential(f.p);
    if (f.r_opt && f.r_opt->count() > 0) c.r = parse_potential(f.r);
    if (f.n_opt && f.n_opt->count() > 0) c.n_max = f.n_max;
    return c;
}

std::vector<double> parse_range(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.push_back(trim(text.substr(start, colon == std::string_view::npos ? colon : colon - start)));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) throw InvalidParameter("--t-range must be start:stop:step");
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const double step = parse_real(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) throw InvalidParameter("--t-range needs step > 0 and stop >= start");
    const double count = std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-9);
    if (count > 1e6) throw InvalidParameter("--t-range produces more than a million rows");
    std::vector<double> ts;
    for (int i = 0; i <= static_cast<int>(count); ++i) ts.push_back(lo + i * step);
    return ts;
}

TrigKind parse_kind(const std::string& kind) { return kind == "cos" ? TrigKind::cosine : TrigKind::sine; }

// ---------------------------------------------------------------------------------------------

int cmd_trig(const Globals& g, const std::string& kind_name, double mu, const std::string& t_single,
             const std::string& t_range, std::ostream& out) {
    ProblemConfig c;
    g.apply(c);
    const HahnParams params = c.params();
    const TrigKind kind = parse_kind(kind_name);
    if (!std::isfinite(mu)) throw InvalidParameter("--mu must be finite");
    if (t_single.empty() && t_range.empty()) throw InvalidParameter("trig needs --t or --t-range");
    const std::vector<double> ts = t_range.empty() ? std::vector<double>{parse_real(t_single)} : parse_range(t_range);

    bool lost = false;
    std::vector<std::vector<std::string>> rows;
    Json arr = Json::array();
    for (const double t : ts) {
        if (t < params.omega0() - params.fixed_point_tol()) {
            throw InvalidParameter("t must be >= omega0 = " + num(params.omega0()) + ", got " + num(t));
        }
        const TrigEval e = evaluate_trig_series(kind, combined_argument(t, mu, params), params.q(), c.tolerances.series);
        lost = lost || e.precision_lost;
        const std::string status = e.precision_lost ? "precision_lost" : "ok";
        rows.push_back({num(t), csv_cell(e.value), std::to_string(e.terms_used), csv_cell(e.cancellation),
                        csv_cell(e.est_abs_error), status});
        arr.push_back({{"t", t},
                       {"value", e.value},
                       {"terms_used", e.terms_used},
                       {"cancellation", e.cancellation},
                       {"est_abs_error", e.est_abs_error},
                       {"status", status}});
    }
    if (g.format_or("csv") == "json") {
        out << render(arr);
    } else {
        write_csv(out, {"t", "value", "terms_used", "cancellation", "est_abs_error", "status"}, rows);
    }
    return lost ? kPrecisionWarning : kOk;
}

int cmd_zeros(const Globals& g, const std::string& kind_name, int count, std::ostream& out) {
    ProblemConfig c;
    g.apply(c);
    const HahnParams params = c.params();
    if (count < 1) throw InvalidParameter("--n must be >= 1");
    const double tol = g.root_opt->count() > 0 ? g.tol_root : 1e-13;
    const TrigKind kind = parse_kind(kind_name);
    std::vector<std::vector<std::string>> rows;
    Json arr = Json::array();
    for (int n = 1; n <= count; ++n) {
        const ZeroReport z = trig_zero(n, kind, params, tol);
        const double offset = z.location - params.omega0();
        const std::string seed(to_string(z.matched_seed));
        rows.push_back({std::to_string(n), num(z.location), num(offset), num(z.argument), csv_cell(z.residual),
                        num(z.bracket_lo), num(z.bracket_hi), seed});
        arr.push_back({{"n", n},
                       {"location", z.location},
                       {"offset", offset},
                       {"argument", z.argument},
                       {"residual", z.residual},
                       {"bracket", {z.bracket_lo, z.bracket_hi}},
                       {"matched_seed", seed}});
    }
    if (g.format_or("csv") == "json") {
        out << render(arr);
    } else {
        write_csv(out, {"n", "location", "offset", "argument", "residual", "bracket_lo", "bracket_hi", "matched_seed"},
                  rows);
    }
    return kOk;
}

struct SolveFlags {
    double lambda = 0.0;
    double c1 = 1.0;
    double c2 = 0.0;
    int depth = 0;
    std::string form = "volterra";
    CLI::Option* depth_opt = nullptr;
};

int cmd_solve(const Globals& g, const ProblemFlags& f, const SolveFlags& s, std::ostream& out) {
    const ProblemConfig c = assemble(g, f);
    const HahnParams params = c.params();
    if (!(f.a_opt->count() > 0) && f.config_path.empty()) throw InvalidParameter("solve needs --a");
    PicardOptions opt;
    opt.tol = c.tolerances.picard;
    opt.form = s.form == "four-kernel" ? PicardForm::four_kernel : PicardForm::volterra;
    if (s.depth_opt->count() > 0) opt.depth = s.depth;
    const Potentials pot = c.potentials();
    const VectorSolution y = picard_solve(pot, s.c1, s.c2, s.lambda, c.a, params, opt);

    std::vector<std::vector<std::string>> rows;
    Json arr = Json::array();
    rows.push_back({"", num(params.omega0()), num(s.c1), num(s.c2), "", ""});
    arr.push_back({{"k", nullptr}, {"t", params.omega0()}, {"y1", s.c1}, {"y2", s.c2}, {"res1", nullptr},
                   {"res2", nullptr}});
    const int depth = y.grid().depth();
    for (int k = depth; k >= 0; --k) {
        std::optional<std::pair<double, double>> res;
        if (k >= 1 && k < depth) res = residual_at(y, pot, k);
        rows.push_back({std::to_string(k), num(y.grid()[k]), num(y.y1(k)), num(y.y2(k)),
                        res ? csv_cell(res->first) : "", res ? csv_cell(res->second) : ""});
        arr.push_back({{"k", k},
                       {"t", y.grid()[k]},
                       {"y1", y.y1(k)},
                       {"y2", y.y2(k)},
                       {"res1", res ? Json(res->first) : Json(nullptr)},
                       {"res2", res ? Json(res->second) : Json(nullptr)}});
    }
    if (g.format_or("csv") == "json") {
        out << render(arr);
    } else {
        write_csv(out, {"k", "t", "y1", "y2", "res1", "res2"}, rows);
    }
    return kOk;
}

struct SpectrumFlags {
    std::string example;
    bool scan_negative = false;
    bool no_diagnostics = false;
};

int cmd_spectrum(const Globals& g, const ProblemFlags& f, const SpectrumFlags& s, std::ostream& out) {
    ProblemConfig c;
    if (!s.example.empty()) {
        g.apply(c);
        if (f.n_opt->count() > 0) c.n_max = f.n_max;
        const BoundarySpec bc = example_boundary(
            s.example == "3.2" ? ExampleProblem::cosine_family : ExampleProblem::sine_family, std::numbers::pi);
        c.a = bc.a;
        c.k11 = bc.k11;
        c.k12 = bc.k12;
        c.k21 = bc.k21;
        c.k22 = bc.k22;
    } else {
        c = assemble(g, f);
        if (f.config_path.empty() && !(f.a_opt->count() > 0)) {
            throw InvalidParameter("spectrum needs --example, --config, or --a with boundary rows");
        }
    }
    c.validate();
    if (c.n_max < 1) throw InvalidParameter("--n-max must be >= 1");

    SpectrumOptions opt;
    opt.tol_root = c.tolerances.root;
    opt.picard.tol = c.tolerances.picard;
    opt.scan_negative = s.scan_negative;
    opt.diagnostics = !s.no_diagnostics;
    const SpectrumResult result = find_eigenvalues(c.n_max, c.boundary(), c.potentials(), c.params(), opt);

    if (g.format_or("json") == "json") {
        out << spectrum_json(c, result);
    } else {
        std::vector<std::vector<std::string>> rows;
        const auto add = [&rows](const EigenvalueReport& e) {
            rows.push_back({std::to_string(e.n), num(e.lambda), num(e.bracket_lo), num(e.bracket_hi),
                            csv_cell(e.delta_residual), csv_cell(e.delta_prime), e.simple ? "true" : "false",
                            csv_cell(e.asym_seed), csv_cell(e.rel_dev_from_asym), csv_cell(e.norm_identity_defect)});
        };
        for (const auto& e : result.eigenvalues) add(e);
        for (const auto& e : result.negative_eigenvalues) add(e);
        write_csv(out,
                  {"n", "lambda", "bracket_lo", "bracket_hi", "delta_residual", "delta_prime", "simple", "asym_seed",
                   "rel_dev_from_asym", "norm_identity_defect"},
                  rows);
        for (const auto& w : result.warnings) out << "# warning: " << w << '\n';
    }
    return result.missed_root_suspected ? kMissedRoot : kOk;
}

int cmd_verify(const Globals& g, const std::string& suite_name, std::ostream& out) {
    const auto suite = parse_suite(suite_name);
    if (!suite) throw InvalidParameter("unknown suite " + suite_name);
    const VerifyReport report = run_verify(*suite, g.seed);
    if (g.format_or("csv") == "json") {
        Json props = Json::array();
        for (const auto& p : report.properties) {
            props.push_back({{"suite", p.suite},
                             {"property", p.property},
                             {"passed", p.passed},
                             {"worst_defect", p.worst_defect},
                             {"threshold", p.threshold},
                             {"cases", p.cases},
                             {"note", p.note}});
        }
        out << render(Json{{"seed", report.seed}, {"passed", report.all_passed()}, {"properties", props}});
    } else {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : report.properties) {
            rows.push_back({p.suite, p.property, p.passed ? "pass" : "FAIL", csv_cell(p.worst_defect),
                            csv_cell(p.threshold), std::to_string(p.cases), p.note});
        }
        write_csv(out, {"suite", "property", "status", "worst_defect", "threshold", "cases", "note"}, rows);
    }
    return report.all_passed() ? kOk : kPropertyFailure;
}

void add_problem_flags(CLI::App* sub, ProblemFlags& f) {
    sub->add_option("--config", f.config_path, "ProblemConfig JSON file");
    f.a_opt = sub->add_option("--a", f.a, "right endpoint a > omega0 (accepts pi)");
    f.p_opt = sub->add_option("--p", f.p, "potential p: constant or ascending coefficients c0,c1,...");
    f.r_opt = sub->add_option("--r", f.r, "potential r: constant or ascending coefficients c0,c1,...");
}

void add_boundary_flags(CLI::App* sub, ProblemFlags& f) {
    f.k_opts[0] = sub->add_option("--k11", f.k11, "B1 coefficient of y1(omega0)");
    f.k_opts[1] = sub->add_option("--k12", f.k12, "B1 coefficient of y2(omega0)");
    f.k_opts[2] = sub->add_option("--k21", f.k21, "B2 coefficient of y1(a)");
    f.k_opts[3] = sub->add_option("--k22", f.k22, "B2 coefficient of y2(h^{-1}(a))");
    f.n_opt = sub->add_option("--n-max", f.n_max, "number of eigenvalues");
}

}  // namespace

// ---------------------------------------------------------------------------------------------

double parse_real(std::string_view text) {
    const std::string t = lower(trim(text));
    if (t == "pi" || t == "+pi") return std::numbers::pi;
    if (t == "-pi") return -std::numbers::pi;
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw InvalidParameter("not a finite real number: '" + std::string(text) + "'");
    }
    return v;
}

PotentialSpec parse_potential(std::string_view text) {
    PotentialSpec spec;
    spec.coefficients.clear();
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        spec.coefficients.push_back(
            parse_real(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return spec;
}

ProblemConfig parse_problem_config(std::string_view json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidParameter("config must be a JSON object");
    ProblemConfig c;
    for (const auto& [key, value] : doc.items()) {
        if (key == "q") {
            c.q = json_real(value, "q");
        } else if (key == "omega") {
            c.omega = json_real(value, "omega");
        } else if (key == "a") {
            c.a = json_real(value, "a");
        } else if (key == "bc") {
            if (value.is_array() && value.size() == 4) {
                c.k11 = json_real(value[0], "bc[0]");
                c.k12 = json_real(value[1], "bc[1]");
                c.k21 = json_real(value[2], "bc[2]");
                c.k22 = json_real(value[3], "bc[3]");
            } else if (value.is_object()) {
                c.k11 = json_real(value.value("k11", Json(0.0)), "bc.k11");
                c.k12 = json_real(value.value("k12", Json(0.0)), "bc.k12");
                c.k21 = json_real(value.value("k21", Json(0.0)), "bc.k21");
                c.k22 = json_real(value.value("k22", Json(0.0)), "bc.k22");
            } else {
                throw InvalidParameter("bc must be [k11, k12, k21, k22] or an object with those keys");
            }
        } else if (key == "potentials") {
            if (!value.is_object()) throw InvalidParameter("potentials must be an object");
            if (value.contains("p")) c.p = json_potential(value.at("p"), "potentials.p");
            if (value.contains("r")) c.r = json_potential(value.at("r"), "potentials.r");
        } else if (key == "tolerances") {
            if (!value.is_object()) throw InvalidParameter("tolerances must be an object");
            if (value.contains("series")) c.tolerances.series = json_real(value.at("series"), "tolerances.series");
            if (value.contains("picard")) c.tolerances.picard = json_real(value.at("picard"), "tolerances.picard");
            if (value.contains("root")) c.tolerances.root = json_real(value.at("root"), "tolerances.root");
        } else if (key == "n_max") {
            if (!value.is_number_integer()) throw InvalidParameter("n_max must be an integer");
            c.n_max = value.get<int>();
        } else {
            throw InvalidParameter("unknown config key '" + key + "'");
        }
    }
    return c;
}

void ProblemConfig::validate() const {
    const HahnParams hp = params();
    boundary().validate(hp);
    for (const double t : {tolerances.series, tolerances.picard, tolerances.root}) {
        if (!(t > 0.0) || !std::isfinite(t)) throw InvalidParameter("tolerances must be finite and > 0");
    }
}

HahnParams ProblemConfig::params() const { return HahnParams(q, omega); }

BoundarySpec ProblemConfig::boundary() const { return {k11, k12, k21, k22, a}; }

Potentials ProblemConfig::potentials() const {
    const HahnParams hp = params();
    return Potentials::polynomial(Polynomial(p.coefficients), Polynomial(r.coefficients), hp);
}

std::string spectrum_json(const ProblemConfig& config, const SpectrumResult& result) {
    const auto eigen = [](const EigenvalueReport& e) {
        return Json{{"n", e.n},
                    {"lambda", e.lambda},
                    {"bracket", {e.bracket_lo, e.bracket_hi}},
                    {"delta_residual", e.delta_residual},
                    {"delta_prime", e.delta_prime},
                    {"noise_floor", e.noise_floor},
                    {"derivative_noise", e.derivative_noise},
                    {"sign_change", e.sign_change},
                    {"simple", e.simple},
                    {"growth", e.growth},
                    {"asym_seed", optional_number(e.asym_seed)},
                    {"rel_dev_from_asym", optional_number(e.rel_dev_from_asym)},
                    {"norm_identity_defect", optional_number(e.norm_identity_defect)}};
    };
    Json eigenvalues = Json::array();
    for (const auto& e : result.eigenvalues) eigenvalues.push_back(eigen(e));
    Json negative = Json::array();
    for (const auto& e : result.negative_eigenvalues) negative.push_back(eigen(e));
    Json pairs = Json::array();
    for (const auto& p : result.pair_orthogonality) pairs.push_back({{"i", p.i}, {"j", p.j}, {"defect", p.defect}});

    const Json doc{
        {"params",
         {{"q", result.q},
          {"omega", result.omega},
          {"omega0", result.omega0},
          {"a", result.bc.a},
          {"bc", {{"k11", result.bc.k11}, {"k12", result.bc.k12}, {"k21", result.bc.k21}, {"k22", result.bc.k22}}},
          {"potentials", {{"p", config.p.coefficients}, {"r", config.r.coefficients}}},
          {"tolerances",
           {{"series", config.tolerances.series},
            {"picard", config.tolerances.picard},
            {"root", config.tolerances.root}}},
          {"n_max", result.n_max}}},
        {"eigenvalues", eigenvalues},
        {"negative_eigenvalues", negative},
        {"pair_orthogonality", pairs},
        {"flags",
         {{"trivial_root", result.trivial_root},
          {"symmetric", result.symmetric},
          {"missed_root_suspected", result.missed_root_suspected},
          {"duplicates_merged", result.duplicates_merged},
          {"escalated", result.escalated}}},
        {"scan_points", result.scan_points},
        {"warnings", result.warnings}};
    return render(doc);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerics for q,omega-Dirac systems built on the Hahn difference operator", "qwdirac"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    g.q_opt = app.add_option("--q", g.q, "Hahn parameter q in (0,1) (default 0.5)");
    g.omega_opt = app.add_option("--omega", g.omega, "Hahn parameter omega > 0 (default 0.5)");
    g.series_opt = app.add_option("--tol-series", g.tol_series, "series truncation tolerance (default 1e-12)");
    g.picard_opt = app.add_option("--tol-picard", g.tol_picard, "successive-approximation tolerance (default 1e-10)");
    g.root_opt = app.add_option("--tol-root", g.tol_root, "relative root refinement tolerance (default 1e-10)");
    app.add_option("--seed", g.seed, "seed for randomized property inputs");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));

    std::string kind;
    double mu = 1.0;
    std::string t_single;
    std::string t_range;
    CLI::App* trig = app.add_subcommand("trig", "evaluate C or S along t");
    trig->add_option("--kind", kind, "cos or sin")->required()->check(CLI::IsMember({"cos", "sin"}));
    trig->add_option("--mu", mu, "spectral parameter mu (default 1)");
    auto* t_opt = trig->add_option("--t", t_single, "single point t >= omega0");
    auto* range_opt = trig->add_option("--t-range", t_range, "start:stop:step");
    t_opt->excludes(range_opt);

    std::string zkind;
    int zcount = 6;
    CLI::App* zeros = app.add_subcommand("zeros", "positive zeros of C or S (mu = 1)");
    zeros->add_option("--kind", zkind, "cos or sin")->required()->check(CLI::IsMember({"cos", "sin"}));
    zeros->add_option("--n", zcount, "number of zeros (default 6)");

    ProblemFlags solve_flags;
    SolveFlags sf;
    CLI::App* solve = app.add_subcommand("solve", "solve the Dirac system by successive approximations");
    add_problem_flags(solve, solve_flags);
    solve->add_option("--lambda", sf.lambda, "spectral parameter")->required();
    solve->add_option("--c1", sf.c1, "y1(omega0) (default 1)");
    solve->add_option("--c2", sf.c2, "y2(omega0) (default 0)");
    sf.depth_opt = solve->add_option("--depth", sf.depth, "lattice depth");
    solve->add_option("--form", sf.form, "volterra or four-kernel")
        ->check(CLI::IsMember({"volterra", "four-kernel"}));

    ProblemFlags spec_flags;
    SpectrumFlags spf;
    CLI::App* spectrum = app.add_subcommand("spectrum", "locate eigenvalues of a boundary-value problem");
    auto* example_opt = spectrum->add_option("--example", spf.example, "built-in problem 3.2 or 3.3")
                            ->check(CLI::IsMember({"3.2", "3.3"}));
    add_problem_flags(spectrum, spec_flags);
    add_boundary_flags(spectrum, spec_flags);
    for (CLI::Option* o : {spec_flags.a_opt, spec_flags.p_opt, spec_flags.r_opt}) example_opt->excludes(o);
    for (CLI::Option* o : spec_flags.k_opts) example_opt->excludes(o);
    spectrum->add_flag("--scan-negative", spf.scan_negative, "also search lambda < 0");
    spectrum->add_flag("--no-diagnostics", spf.no_diagnostics, "skip orthogonality and norm-identity checks");

    std::string suite_name = "all";
    CLI::App* verify = app.add_subcommand("verify", "run randomized property suites");
    verify->add_option("suite", suite_name, "calculus, trig, solver, spectral or all (default all)")
        ->check(CLI::IsMember({"calculus", "trig", "solver", "spectral", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*trig) return cmd_trig(g, kind, mu, t_single, t_range, out);
        if (*zeros) return cmd_zeros(g, zkind, zcount, out);
        if (*solve) return cmd_solve(g, solve_flags, sf, out);
        if (*spectrum) return cmd_spectrum(g, spec_flags, spf, out);
        if (*verify) return cmd_verify(g, suite_name, out);
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const PrecisionBudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kPrecisionBudget;
    } catch (const MissedRootSuspected& e) {
        err << "error: " << e.what() << '\n';
        return kMissedRoot;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kPrecisionWarning;
    }
    return kBadInput;
}

}  // namespace qwd::cli
