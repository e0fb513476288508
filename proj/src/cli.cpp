#include "drs/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "drs/dispersive.hpp"
#include "drs/errors.hpp"
#include "drs/experiments.hpp"
#include "drs/fit.hpp"
#include "drs/oscillatory.hpp"
#include "drs/special.hpp"
#include "drs/spherical.hpp"
#include "drs/transform.hpp"

namespace drs::cli {

namespace {

using ojson = nlohmann::ordered_json;

const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d = {
        {"space.m_v", "2"},
        {"space.m_z", "1"},
        {"grids.s_max", "12"},
        {"grids.s_points", "4097"},
        {"grids.lambda_max", "24"},
        {"grids.lambda_points", "0"},
        {"grids.t_points", "0"},
        {"output_grid.s_max", "4"},
        {"output_grid.s_points", "81"},
        {"equation", "frac-shifted:2"},
        {"profile", "gauss"},
        {"cfun.lambda_min", "0.01"},
        {"cfun.lambda_max", "100"},
        {"cfun.points", "201"},
        {"phi.lambda", "2"},
        {"phi.s", "0.5"},
        {"phi.method", "auto"},
        {"propagate.t", "0.01"},
        {"maximal.refine", "true"},
        {"oscillatory.triples", "200"},
        {"oscillatory.K", "20"},
        {"oscillatory.seed", "1"},
        {"case1.a", "2"},
        {"case1.shifted", "false"},
        {"case1.betas", "0.1,0.25,0.4"},
        {"case1.Ns", "64,128,256,512,1024,2048,4096"},
        {"case1.epsilon", "0.05"},
        {"case1.s_points", "11"},
        {"case1.xi_panels", "32"},
        {"case2.beta", "0.5"},
        {"case2.Ns", "8,12,16,24,32,48,64"},
        {"case2.epsilon", "0.25"},
        {"case2.s_points", "17"},
        {"transference.phase1", "frac:1.5"},
        {"transference.phase2", "frac-shifted:1.5"},
        {"transference.Lambda", "1"},
        {"transference.lambda_max", "10000"},
        {"transference.points", "2001"},
        {"transference.expect", ""},
        {"output_dir", "runs"},
    };
    return d;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw ValidationError("config: " + key + " expects a number, got '" + text + "'");
    return v;
}

long parse_long(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw ValidationError("config: " + key + " expects an integer, got '" + text + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(trim(item));
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string brief(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- artifacts ----

struct Table {
    std::string file;
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

Table numeric_table(std::string file, std::vector<std::string> columns, const std::vector<std::vector<double>>& rows) {
    Table t;
    t.file = std::move(file);
    t.columns = std::move(columns);
    for (const auto& r : rows) {
        std::vector<std::string> cells;
        for (double v : r)
            cells.push_back(num(v));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::string grid_comment(const std::string& label, const UniformGrid& g) {
    return label + " grid: lo=" + num(g.lo) + " hi=" + num(g.hi) + " count=" + std::to_string(g.count);
}

struct RunContext {
    std::string command; // e.g. "experiment-case1"
    RunConfig config;
    std::string hash;
    std::filesystem::path dir;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_table(const RunContext& ctx, const Table& t) {
    std::string text = "# config_hash: " + ctx.hash + "\n";
    text += "# command: " + ctx.command + "\n";
    for (const auto& c : t.comments)
        text += "# " + c + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        text += (i ? "," : "") + t.columns[i];
    text += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            text += (i ? "," : "") + r[i];
        text += "\n";
    }
    write_text(ctx.dir / t.file, text);
}

ojson report_json(const RunContext& ctx, const ExperimentReport& rep) {
    ojson j;
    j["name"] = rep.name;
    j["command"] = ctx.command;
    j["config_hash"] = ctx.hash;
    j["timestamp"] = utc_timestamp();
    ojson slopes = ojson::array();
    for (const auto& s : rep.fitted_slopes)
        slopes.push_back({{"quantity", s.quantity},
                          {"slope", s.slope},
                          {"expected", s.expected},
                          {"tolerance", s.tolerance},
                          {"residual_rms", s.residual_rms},
                          {"points", s.points},
                          {"within", s.within}});
    j["fitted_slopes"] = slopes;
    ojson scalars = ojson::array();
    for (const auto& s : rep.scalars)
        scalars.push_back({{"quantity", s.quantity}, {"value", s.value}, {"holds", s.holds}, {"check", s.check}});
    j["scalars"] = scalars;
    j["verdict"] = to_string(rep.verdict);
    j["outcome"] = rep.outcome;
    j["notes"] = rep.notes;
    ojson prov = ojson::object();
    for (const auto& [k, v] : rep.provenance)
        prov[k] = v;
    j["provenance"] = prov;
    ojson cfg = ojson::object();
    for (const auto& [k, v] : ctx.config.values())
        cfg[k] = v;
    j["config"] = cfg;
    return j;
}

// Writes report.json and the given tables; prints the summary line.
int finish(const RunContext& ctx, const ExperimentReport& rep, const std::vector<Table>& tables) {
    std::filesystem::create_directories(ctx.dir);
    for (const auto& t : tables)
        write_table(ctx, t);
    write_text(ctx.dir / "report.json", report_json(ctx, rep).dump(2) + "\n");
    std::cout << ctx.command << ": " << to_string(rep.verdict);
    if (!rep.outcome.empty())
        std::cout << " (" << rep.outcome << ")";
    std::cout << " -> " << ctx.dir.string() << "\n";
    return rep.verdict == Verdict::Fail ? 1 : 0;
}

// ---- shared setup ----

SpaceParams space_of(const RunConfig& c) {
    return new_space(static_cast<int>(c.get_int("space.m_v")), static_cast<int>(c.get_int("space.m_z")));
}

std::size_t positive_count(const RunConfig& c, const std::string& key, long min) {
    const long v = c.get_int(key);
    if (v < min)
        throw ValidationError("config: " + key + " must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

UniformGrid source_grid(const RunConfig& c) {
    return make_grid(0.0, c.get_double("grids.s_max"), positive_count(c, "grids.s_points", 3));
}

UniformGrid output_grid(const RunConfig& c) {
    return make_grid(0.0, c.get_double("output_grid.s_max"), positive_count(c, "output_grid.s_points", 2));
}

// Spectral grid on [0, lambda_max]. With lambda_points = 0 the count keeps
// the phase increment per step below pi/8 for both the inversion radius
// and the given extra oscillation rate.
UniformGrid spectral_grid(const RunConfig& c, double s_max, double rate = 0.0) {
    const double lmax = c.get_double("grids.lambda_max");
    if (!(lmax > 0.0))
        throw ValidationError("config: grids.lambda_max must be positive");
    std::size_t count = static_cast<std::size_t>(c.get_int("grids.lambda_points"));
    if (count == 0) {
        const double per_step = std::numbers::pi / 8.0 / std::max({s_max, rate, 1e-300});
        count = static_cast<std::size_t>(std::ceil(lmax / per_step)) + 1;
        if (count % 2 == 0)
            ++count;
    }
    return make_grid(0.0, lmax, count);
}

std::vector<std::vector<double>> profile_rows(const RadialProfile& f) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < f.grid.count; ++i)
        rows.push_back({f.grid.at(i), f.values[i].real(), f.values[i].imag()});
    return rows;
}

std::vector<std::vector<double>> spectrum_rows(const SpectralProfile& f) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < f.grid.count; ++i)
        rows.push_back({f.grid.at(i), f.values[i].real(), f.values[i].imag()});
    return rows;
}

SpectralProfile profile_spectrum(const SpaceParams& p, const RunConfig& c, const UniformGrid& lg) {
    const RadialProfile f = sample_radial(named_profile(c.get("profile")), source_grid(c));
    return sft_forward(p, f, lg);
}

double max_rate(const SpaceParams& p, const PhaseKind& kind, const UniformGrid& lg) {
    double r = 0.0;
    for (std::size_t i = 1; i < lg.count; ++i)
        r = std::max(r, std::fabs(phase_derivs(kind, p, lg.at(i)).first));
    return r;
}

// ---- subcommands ----

int cmd_space(const RunContext& ctx) {
    const SpaceParams p = space_of(ctx.config);
    ExperimentReport rep;
    rep.name = "space";
    rep.provenance = {{"space", p.label()}};
    rep.scalars = {{"n", double(p.n()), true, ""},
                   {"Q", p.Q(), true, ""},
                   {"spectral_gap", p.spectral_gap(), true, ""}};
    rep.settle();
    rep.outcome = "n=" + std::to_string(p.n()) + " Q=" + num(p.Q());
    const UniformGrid g = output_grid(ctx.config);
    std::vector<std::vector<double>> rows;
    for (double s : g.points())
        rows.push_back({s, density(p, s)});
    Table t = numeric_table("density.csv", {"s", "density"}, rows);
    t.comments.push_back("space: " + p.label());
    return finish(ctx, rep, {t});
}

int cmd_cfun(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    const double lo = c.get_double("cfun.lambda_min");
    const double hi = c.get_double("cfun.lambda_max");
    if (!(lo > 0.0 && hi > lo))
        throw ValidationError("config: need 0 < cfun.lambda_min < cfun.lambda_max");
    std::vector<std::vector<double>> rows;
    for (double l : log_space(lo, hi, positive_count(c, "cfun.points", 2))) {
        const CValue cv = c_function(p, l);
        rows.push_back({l, cv.real(), cv.imag(), plancherel_density(p, l)});
    }
    ExperimentReport rep;
    rep.name = "cfun";
    rep.provenance = {{"space", p.label()}};
    rep.scalars = {{"plancherel_small_lambda_limit", plancherel_small_lambda_limit(p), true, ""}};
    rep.settle();
    Table t = numeric_table("cfun.csv", {"lambda", "re_c", "im_c", "plancherel_density"}, rows);
    t.comments.push_back("space: " + p.label());
    return finish(ctx, rep, {t});
}

int cmd_phi(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    const std::vector<double> lambdas = c.get_doubles("phi.lambda");
    const std::vector<double> ss = c.get_doubles("phi.s");
    const std::string method = c.get("phi.method");
    if (lambdas.empty() || ss.empty())
        throw ValidationError("config: phi.lambda and phi.s must be non-empty");
    for (double s : ss)
        if (s < 0.0)
            throw ValidationError("config: phi.s must be >= 0");

    Table t;
    t.file = "phi.csv";
    t.columns = {"lambda", "s", "value", "method"};
    t.comments.push_back("space: " + p.label());
    for (double l : lambdas) {
        std::vector<std::pair<double, std::string>> vals;
        if (method == "auto") {
            for (double s : ss) {
                const PhiResult r = phi(p, l, s);
                vals.emplace_back(r.value, to_string(r.method));
            }
        } else if (method == "bessel") {
            for (double s : ss)
                vals.emplace_back(phi_bessel_auto(p, l, s).value, "bessel");
        } else if (method == "hc") {
            for (double s : ss)
                vals.emplace_back(phi_hc_auto(p, l, s).value.real(), "hc");
        } else if (method == "ode") {
            std::vector<double> sorted(ss);
            std::sort(sorted.begin(), sorted.end());
            const std::vector<OdeSample> o = phi_ode_at(p, l, sorted);
            for (double s : ss) {
                const auto at = std::lower_bound(sorted.begin(), sorted.end(), s) - sorted.begin();
                vals.emplace_back(o[static_cast<std::size_t>(at)].value, "ode");
            }
        } else {
            throw ValidationError("config: phi.method must be auto, bessel, hc or ode");
        }
        for (std::size_t j = 0; j < ss.size(); ++j) {
            std::cout << "phi(lambda=" << brief(l) << ", s=" << brief(ss[j]) << ") = " << num(vals[j].first) << " ["
                      << vals[j].second << "]\n";
            t.rows.push_back({num(l), num(ss[j]), num(vals[j].first), vals[j].second});
        }
    }
    ExperimentReport rep;
    rep.name = "phi";
    rep.provenance = {{"space", p.label()}, {"method", method}};
    rep.settle();
    return finish(ctx, rep, {t});
}

int cmd_transform(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    const UniformGrid sg = source_grid(c);
    const UniformGrid lg = spectral_grid(c, sg.hi);
    const RadialProfile f = sample_radial(named_profile(c.get("profile")), sg);
    const SpectralProfile fh = sft_forward(p, f, lg);
    const CalibrationReport cal = calibration_report(p);
    const RadialProfile back = sft_inverse(p, fh, sg);

    RadialProfile diff = f;
    for (std::size_t i = 0; i < diff.values.size(); ++i)
        diff.values[i] = back.values[i] - f.values[i];
    const double norm = radial_l2_norm(p, f);
    const double err = radial_l2_norm(p, diff) / norm;
    const double spec = sobolev_norm(p, fh, 0.0);
    const double isometry = std::fabs(cal.constant * spec * spec / (norm * norm) - 1.0);

    ExperimentReport rep;
    rep.name = "transform";
    rep.provenance = {{"space", p.label()}, {"profile", c.get("profile")}};
    rep.scalars = {{"roundtrip_rel_l2_error", err, err < 1e-3, "< 1e-3"},
                   {"isometry_rel_defect", isometry, isometry < 1e-3, "< 1e-3"},
                   {"inversion_constant", cal.constant, true, ""},
                   {"calibration_spread", cal.spread, cal.spread < 1e-3, "< 1e-3"}};
    rep.settle();
    rep.outcome = "roundtrip error " + brief(err);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sg.count; ++i)
        rows.push_back({sg.at(i), f.values[i].real(), back.values[i].real(), back.values[i].imag()});
    Table rt = numeric_table("roundtrip.csv", {"s", "original", "re", "im"}, rows);
    rt.comments = {"space: " + p.label(), grid_comment("s", sg)};
    Table sp = numeric_table("spectrum.csv", {"lambda", "re", "im"}, spectrum_rows(fh));
    sp.comments = {"space: " + p.label(), grid_comment("lambda", lg)};
    return finish(ctx, rep, {sp, rt});
}

int cmd_propagate(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    const PhaseKind kind = parse_phase_kind(c.get("equation"));
    const double t = c.get_double("propagate.t");
    const UniformGrid og = output_grid(c);
    const UniformGrid coarse = spectral_grid(c, og.hi);
    const UniformGrid lg = spectral_grid(c, og.hi, std::fabs(t) * max_rate(p, kind, coarse));
    const SpectralProfile fh = profile_spectrum(p, c, lg);
    calibrate_inversion_constant(p);
    const RadialProfile u = propagate(p, fh, kind, t, og);

    double sup = 0.0;
    for (const auto& v : u.values)
        sup = std::max(sup, std::abs(v));
    ExperimentReport rep;
    rep.name = "propagate";
    rep.provenance = {{"space", p.label()}, {"phase", kind.name()}, {"profile", c.get("profile")}, {"t", num(t)}};
    rep.scalars = {{"sup_abs", sup, true, ""}};
    rep.settle();
    Table tb = numeric_table("propagate.csv", {"s", "re", "im"}, profile_rows(u));
    tb.comments = {"space: " + p.label() + " phase: " + kind.name() + " t=" + num(t), grid_comment("s", og)};
    return finish(ctx, rep, {tb});
}

int cmd_maximal(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    const PhaseKind kind = parse_phase_kind(c.get("equation"));
    const UniformGrid og = output_grid(c);
    const UniformGrid coarse = spectral_grid(c, og.hi);
    const UniformGrid lg = spectral_grid(c, og.hi, max_rate(p, kind, coarse));
    const long t_points = c.get_int("grids.t_points");
    const std::vector<double> ts = t_points > 0 ? log_space(1e-4, 1.0, static_cast<std::size_t>(t_points))
                                                : default_t_grid(p, kind, lg.hi);
    const SpectralProfile fh = profile_spectrum(p, c, lg);
    calibrate_inversion_constant(p);
    const MaximalResult m = maximal_function(p, fh, kind, ts, og, c.get_bool("maximal.refine"));

    double sup = 0.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < og.count; ++j) {
        sup = std::max(sup, m.sup.values[j].real());
        rows.push_back({og.at(j), m.sup.values[j].real(), m.argmax_t[j]});
    }
    ExperimentReport rep;
    rep.name = "maximal";
    rep.provenance = {{"space", p.label()},
                      {"phase", kind.name()},
                      {"profile", c.get("profile")},
                      {"t_samples", std::to_string(ts.size())}};
    rep.scalars = {{"max_sup", sup, true, ""}, {"refinement_increment", m.refinement_increment, true, ""}};
    rep.settle();
    Table tb = numeric_table("maximal.csv", {"s", "sup", "argmax_t"}, rows);
    tb.comments = {"space: " + p.label() + " phase: " + kind.name(), grid_comment("s", og)};
    return finish(ctx, rep, {tb});
}

int cmd_oscillatory(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    const PhaseKind kind = parse_phase_kind(c.get("equation"));
    const int K = static_cast<int>(positive_count(c, "oscillatory.K", 4));
    const auto triples = sample_triples(kind, p, positive_count(c, "oscillatory.triples", 1), K,
                                        static_cast<std::uint64_t>(c.get_int("oscillatory.seed")));
    const DyadicSumReport d = dyadic_sum_check(kind, p, triples, K);

    std::vector<std::vector<double>> rows;
    for (const auto& r : d.rows)
        rows.push_back({r.triple.s, r.triple.s_prime, r.triple.d, double(r.triple.regime), double(r.K),
                        r.normalized, r.normalized_double, r.rel_change, r.tail_bound});
    ExperimentReport rep;
    rep.name = "oscillatory-claim";
    rep.provenance = {{"space", p.label()}, {"phase", kind.name()}, {"K", std::to_string(K)}};
    rep.scalars = {{"max_normalized_sum", d.max_normalized, std::isfinite(d.max_normalized), "finite"},
                   {"max_rel_change_K_to_2K", d.max_rel_change, d.max_rel_change < 0.01, "< 0.01"},
                   {"regime1_max", d.regime_max[0], true, ""},
                   {"regime2_max", d.regime_max[1], true, ""},
                   {"regime3_max", d.regime_max[2], true, ""}};
    rep.settle();
    rep.outcome = "empirical constant " + brief(d.max_normalized);
    Table tb = numeric_table("triples.csv",
                             {"s", "s_prime", "d", "regime", "K", "normalized_sum", "normalized_sum_2K", "rel_change",
                              "tail_bound"},
                             rows);
    tb.comments = {"space: " + p.label() + " phase: " + kind.name()};
    std::cout << "verdict: " << (d.pass ? "pass" : "fail") << " max |s-s'|^(1/2) sum I_k = " << num(d.max_normalized)
              << " over " << d.rows.size() << " triples\n";
    return finish(ctx, rep, {tb});
}

int experiment_output(const RunContext& ctx, const ExperimentReport& rep) {
    Table tb = numeric_table(rep.name + ".csv", rep.table_columns, rep.table_rows);
    return finish(ctx, rep, {tb});
}

int cmd_case1(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    const double a = c.get_double("case1.a");
    const PhaseKind kind = c.get_bool("case1.shifted") ? PhaseKind::frac_shifted(a) : PhaseKind::frac(a);
    Case1Options opt;
    opt.betas = c.get_doubles("case1.betas");
    opt.Ns = c.get_ints("case1.Ns");
    opt.epsilon = c.get_double("case1.epsilon");
    opt.s_points = positive_count(c, "case1.s_points", 2);
    opt.xi_panels = static_cast<int>(positive_count(c, "case1.xi_panels", 1));
    calibrate_inversion_constant(p);
    return experiment_output(ctx, case1_run(p, kind, opt));
}

int cmd_case2(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    Case2Options opt;
    opt.beta = c.get_double("case2.beta");
    opt.Ns = c.get_ints("case2.Ns");
    opt.epsilon = c.get_double("case2.epsilon");
    opt.s_points = positive_count(c, "case2.s_points", 2);
    calibrate_inversion_constant(p);
    return experiment_output(ctx, case2_run(p, opt));
}

int cmd_transference(const RunContext& ctx) {
    const RunConfig& c = ctx.config;
    const SpaceParams p = space_of(c);
    TransferenceOptions opt;
    opt.Lambda = c.get_double("transference.Lambda");
    opt.lambda_max = c.get_double("transference.lambda_max");
    opt.points = positive_count(c, "transference.points", 16);
    return experiment_output(ctx, transference_check(p, parse_phase_kind(c.get("transference.phase1")),
                                                     parse_phase_kind(c.get("transference.phase2")), opt,
                                                     c.get("transference.expect")));
}

struct Command {
    std::string name;
    std::string help;
    int (*fn)(const RunContext&);
    std::vector<std::pair<std::string, std::string>> flags; // flag -> config key
    std::string toggle_flag = {}; // boolean flag, sets its key to true
    std::string toggle_key = {};
};

const std::vector<std::pair<std::string, std::string>> kGridFlags = {
    {"--s-max", "grids.s_max"},
    {"--s-points", "grids.s_points"},
    {"--lambda-max", "grids.lambda_max"},
    {"--lambda-points", "grids.lambda_points"},
    {"--out-s-max", "output_grid.s_max"},
    {"--out-s-points", "output_grid.s_points"},
};

std::vector<std::pair<std::string, std::string>> with_grids(std::vector<std::pair<std::string, std::string>> f) {
    f.insert(f.end(), kGridFlags.begin(), kGridFlags.end());
    return f;
}

} // namespace

// ---- RunConfig ----

RunConfig::RunConfig() : values_(defaults()) {}

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ValidationError("config: unknown key '" + key + "'");
    return it->second;
}

double RunConfig::get_double(const std::string& key) const { return parse_double(key, get(key)); }

long RunConfig::get_int(const std::string& key) const { return parse_long(key, get(key)); }

bool RunConfig::get_bool(const std::string& key) const {
    const std::string v = trim(get(key));
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ValidationError("config: " + key + " expects true or false, got '" + v + "'");
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(get(key)))
        out.push_back(parse_double(key, item));
    return out;
}

std::vector<int> RunConfig::get_ints(const std::string& key) const {
    std::vector<int> out;
    for (const auto& item : split_list(get(key)))
        out.push_back(static_cast<int>(parse_long(key, item)));
    return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ValidationError("config: unknown key '" + key + "'");
    it->second = trim(value);
}

void RunConfig::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ValidationError("config: expected key=value, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::load_text(const std::string& text) {
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ValidationError("config line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        set(section.empty() ? key : section + "." + key, line.substr(eq + 1));
    }
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("config: cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    load_text(buf.str());
}

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_)
        if (k != "output_dir")
            out += k + "=" + v + "\n";
    return out;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const std::string& command, const RunConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64("command=" + command + "\n" + cfg.canonical())));
    return buf;
}

std::function<double(double)> named_profile(const std::string& name) {
    if (name == "gauss")
        return [](double s) { return std::exp(-s * s); };
    if (name == "gauss-narrow")
        return [](double s) { return std::exp(-2.0 * s * s); };
    if (name == "gauss-s2")
        return [](double s) { return s * s * std::exp(-s * s); };
    if (name == "gauss-wide")
        return [](double s) { return std::exp(-0.5 * s * s); };
    if (name == "gauss-s4")
        return [](double s) { return s * s * s * s * std::exp(-s * s); };
    if (name == "gauss-mixed")
        return [](double s) { return (1.0 + s * s) * std::exp(-1.5 * s * s); };
    throw ValidationError("unknown profile '" + name + "'");
}

std::vector<std::string> profile_names() {
    return {"gauss", "gauss-narrow", "gauss-s2", "gauss-wide", "gauss-s4", "gauss-mixed"};
}

int run(int argc, char** argv) {
    const std::vector<Command> commands = {
        {"space", "Structure constants and volume density", cmd_space, {{"--out-s-max", "output_grid.s_max"},
                                                                          {"--out-s-points", "output_grid.s_points"}}},
        {"cfun", "Harish-Chandra c-function and Plancherel density", cmd_cfun,
         {{"--lambda-min", "cfun.lambda_min"}, {"--lambda-max", "cfun.lambda_max"}, {"--points", "cfun.points"}}},
        {"phi", "Spherical function values", cmd_phi,
         {{"--lambda", "phi.lambda"}, {"--s", "phi.s"}, {"--method", "phi.method"}}},
        {"transform", "Forward/inverse spherical transform roundtrip", cmd_transform, with_grids({{"--profile", "profile"}})},
        {"propagate", "Dispersive propagator at one time", cmd_propagate,
         with_grids({{"--profile", "profile"}, {"--equation", "equation"}, {"--t", "propagate.t"}})},
        {"maximal", "Maximal function over t in (0, 1]", cmd_maximal,
         with_grids({{"--profile", "profile"}, {"--equation", "equation"}, {"--t-points", "grids.t_points"},
                     {"--refine", "maximal.refine"}})},
        {"oscillatory-claim", "Dyadic oscillatory sum check", cmd_oscillatory,
         {{"--equation", "equation"}, {"--triples", "oscillatory.triples"}, {"--K", "oscillatory.K"},
          {"--seed", "oscillatory.seed"}}},
    };
    const std::vector<Command> experiments = {
        {"case1", "Concentrated spectra near N (beta < 1/4 counterexample)", cmd_case1,
         {{"--a", "case1.a"}, {"--beta", "case1.betas"}, {"--N", "case1.Ns"}, {"--epsilon", "case1.epsilon"},
          {"--s-points", "case1.s_points"}},
         "--shifted", "case1.shifted"},
        {"case2", "Dilated Euclidean bumps (necessary exponent)", cmd_case2,
         {{"--beta", "case2.beta"}, {"--N", "case2.Ns"}, {"--epsilon", "case2.epsilon"},
          {"--s-points", "case2.s_points"}}},
        {"transference", "Comparable-oscillation check for two phases", cmd_transference,
         {{"--phase1", "transference.phase1"}, {"--phase2", "transference.phase2"}, {"--Lambda", "transference.Lambda"},
          {"--lambda-max", "transference.lambda_max"}, {"--expect", "transference.expect"}}},
    };

    CLI::App app{"Dispersive equations on Damek-Ricci spaces: spherical analysis and scaling experiments", "drs"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> assignments;
    std::vector<std::pair<std::string, std::string>> pending;
    std::vector<std::pair<CLI::App*, const Command*>> leaves;

    auto add_leaf = [&](CLI::App* parent, const Command& cmd) {
        CLI::App* sub = parent->add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--set", assignments, "override a config key (key=value)");
        const std::vector<std::pair<std::string, std::string>> common = {
            {"--m-v", "space.m_v"}, {"--m-z", "space.m_z"}, {"--output-dir", "output_dir"}};
        for (const auto* list : {&common, &cmd.flags})
            for (const auto& [flag, key] : *list) {
                const std::string k = key;
                sub->add_option_function<std::string>(
                    flag, [&pending, k](const std::string& v) { pending.emplace_back(k, v); },
                    k + " (default: " + defaults().at(k) + ")");
            }
        if (!cmd.toggle_flag.empty()) {
            const std::string k = cmd.toggle_key;
            sub->add_flag_function(
                cmd.toggle_flag, [&pending, k](std::int64_t) { pending.emplace_back(k, "true"); }, k);
        }
        leaves.emplace_back(sub, &cmd);
    };
    for (const auto& cmd : commands)
        add_leaf(&app, cmd);
    CLI::App* exp = app.add_subcommand("experiment", "Scaling experiments");
    exp->require_subcommand(1);
    for (const auto& cmd : experiments)
        add_leaf(exp, cmd);

    if (argc < 2) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunContext ctx;
    const Command* chosen = nullptr;
    for (const auto& [sub, cmd] : leaves)
        if (sub->parsed()) {
            chosen = cmd;
            ctx.command = (sub->get_parent() == exp ? "experiment-" : "") + cmd->name;
        }
    if (chosen == nullptr) {
        std::cerr << app.help();
        return 2;
    }

    try {
        if (!config_path.empty())
            ctx.config.load_file(config_path);
        for (const auto& a : assignments)
            ctx.config.set_assignment(a);
        for (const auto& [k, v] : pending)
            ctx.config.set(k, v);
        space_of(ctx.config);
        ctx.hash = config_hash(ctx.command, ctx.config);
        const char* env_root = std::getenv("DRS_OUTPUT_ROOT");
        const std::string root = env_root && *env_root ? env_root : ctx.config.get("output_dir");
        ctx.dir = std::filesystem::path(root) / (ctx.command + "-" + ctx.hash);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        return chosen->fn(ctx);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace drs::cli
