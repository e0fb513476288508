#include "drs/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "drs/errors.hpp"
#include "drs/special.hpp"

namespace drs {

namespace {

std::mutex g_calib_mutex;
std::map<std::pair<int, int>, CalibrationReport> g_calib;

bool in_support(const SpectralProfile& fh, double lambda) {
    if (!fh.support_hint)
        return true;
    return lambda >= fh.support_hint->lo && lambda <= fh.support_hint->hi;
}

CalibrationReport run_calibration(const SpaceParams& p) {
    const UniformGrid sg = calibration_s_grid();
    const UniformGrid lg = calibration_lambda_grid();
    const std::function<double(double)> profiles[3] = {
        [](double s) { return std::exp(-s * s); },
        [](double s) { return std::exp(-2.0 * s * s); },
        [](double s) { return s * s * std::exp(-s * s); },
    };
    const std::vector<double> lw = simpson_weights(lg);
    std::vector<double> dens(lg.count);
    for (std::size_t i = 0; i < lg.count; ++i)
        dens[i] = plancherel_density(p, lg.at(i));

    // one table serves all three profiles
    const std::vector<double> s_pts = sg.points();
    const std::vector<double> table = phi_table(p, lg.points(), s_pts, PhiConfig{});
    const std::vector<double> sw = simpson_weights(sg);
    CalibrationReport rep;
    for (int k = 0; k < 3; ++k) {
        std::vector<double> fw(sg.count);
        double rad = 0.0;
        for (std::size_t j = 0; j < sg.count; ++j) {
            const double v = profiles[k](s_pts[j]);
            fw[j] = v * sw[j] * density(p, s_pts[j]);
            rad += v * fw[j];
        }
        double spec = 0.0;
        for (std::size_t i = 0; i < lg.count; ++i) {
            const double* row = table.data() + i * sg.count;
            double fh = 0.0;
            for (std::size_t j = 0; j < sg.count; ++j)
                fh += fw[j] * row[j];
            spec += lw[i] * fh * fh * dens[i];
        }
        rep.per_profile[k] = rad / spec;
    }
    const double lo = std::min({rep.per_profile[0], rep.per_profile[1], rep.per_profile[2]});
    const double hi = std::max({rep.per_profile[0], rep.per_profile[1], rep.per_profile[2]});
    rep.spread = hi / lo - 1.0;
    rep.constant = (rep.per_profile[0] + rep.per_profile[1] + rep.per_profile[2]) / 3.0;
    return rep;
}

} // namespace

RadialProfile sample_radial(const std::function<double(double)>& f, const UniformGrid& grid) {
    RadialProfile out;
    out.grid = grid;
    out.values.resize(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        out.values[i] = f(grid.at(i));
    return out;
}

double radial_l2_norm(const SpaceParams& p, const RadialProfile& f) {
    const std::vector<double> w = simpson_weights(f.grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.grid.count; ++i)
        acc += w[i] * std::norm(f.values[i]) * density(p, f.grid.at(i));
    return std::sqrt(acc);
}

SpectralProfile sft_forward(const SpaceParams& p, const RadialProfile& f, const UniformGrid& lambda_grid,
                            const PhiConfig& cfg) {
    const UniformGrid& sg = f.grid;
    if (sg.lo != 0.0)
        throw ValidationError("sft_forward: radial grid must start at s = 0");
    const double lmax = std::max(std::fabs(lambda_grid.lo), std::fabs(lambda_grid.hi));
    if (sg.step() * lmax > std::numbers::pi / 4.0)
        throw ResolutionError("sft_forward: s-step " + std::to_string(sg.step()) +
                              " does not resolve lambda_max " + std::to_string(lmax));
    const double norm = radial_l2_norm(p, f);
    const double edge = std::norm(f.values.back()) * density(p, sg.hi);
    if (norm > 0.0 && edge > 1e-10 * norm * norm)
        throw DomainError("sft_forward: tail-mass check failed; profile has not decayed by S_max");

    const std::vector<double> sw = simpson_weights(sg);
    const std::vector<double> s_pts = sg.points();
    std::vector<double> weight(sg.count);
    for (std::size_t j = 0; j < sg.count; ++j)
        weight[j] = sw[j] * density(p, s_pts[j]);
    const std::vector<double> lambdas = lambda_grid.points();
    const std::vector<double> table = phi_table(p, lambdas, s_pts, cfg);

    SpectralProfile out;
    out.grid = lambda_grid;
    out.values.assign(lambda_grid.count, 0.0);
    if (norm == 0.0)
        return out;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double* row = table.data() + i * sg.count;
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < sg.count; ++j)
            acc += f.values[j] * (weight[j] * row[j]);
        out.values[i] = acc;
    }
    return out;
}

RadialProfile sft_inverse_with_constant(const SpaceParams& p, const SpectralProfile& fh, const UniformGrid& s_grid,
                                        double constant, const PhiConfig& cfg) {
    const UniformGrid& lg = fh.grid;
    const double smax = std::max(std::fabs(s_grid.lo), std::fabs(s_grid.hi));
    if (lg.step() * smax > std::numbers::pi / 4.0)
        throw ResolutionError("sft_inverse: lambda-step " + std::to_string(lg.step()) +
                              " does not resolve s_max " + std::to_string(smax));
    const std::vector<double> lw = simpson_weights(lg);
    std::vector<double> lambdas;
    std::vector<std::complex<double>> coef;
    for (std::size_t i = 0; i < lg.count; ++i) {
        const double l = lg.at(i);
        if (fh.values[i] == 0.0 || !in_support(fh, l))
            continue;
        lambdas.push_back(l);
        coef.push_back(constant * lw[i] * plancherel_density(p, l) * fh.values[i]);
    }
    RadialProfile out;
    out.grid = s_grid;
    out.values.assign(s_grid.count, 0.0);
    if (lambdas.empty())
        return out;
    const std::vector<double> table = phi_table(p, lambdas, s_grid.points(), cfg);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double* row = table.data() + i * s_grid.count;
        for (std::size_t j = 0; j < s_grid.count; ++j)
            out.values[j] += coef[i] * row[j];
    }
    return out;
}

RadialProfile sft_inverse(const SpaceParams& p, const SpectralProfile& fh, const UniformGrid& s_grid,
                          const PhiConfig& cfg) {
    double constant = 0.0;
    {
        std::lock_guard<std::mutex> lock(g_calib_mutex);
        auto it = g_calib.find({p.m_v(), p.m_z()});
        if (it == g_calib.end())
            throw CalibrationError("sft_inverse: inversion constant not calibrated for " + p.label());
        constant = it->second.constant;
    }
    return sft_inverse_with_constant(p, fh, s_grid, constant, cfg);
}

UniformGrid calibration_s_grid() { return make_grid(0.0, 12.0, 4097); }
UniformGrid calibration_lambda_grid() { return make_grid(0.0, 20.0, 801); }

CalibrationReport calibration_report(const SpaceParams& p) {
    {
        std::lock_guard<std::mutex> lock(g_calib_mutex);
        auto it = g_calib.find({p.m_v(), p.m_z()});
        if (it != g_calib.end())
            return it->second;
    }
    const CalibrationReport rep = run_calibration(p);
    if (!(rep.spread <= 1e-3))
        throw CalibrationError("calibrate_inversion_constant: reference profiles disagree by " +
                               std::to_string(rep.spread));
    std::lock_guard<std::mutex> lock(g_calib_mutex);
    g_calib.emplace(std::make_pair(p.m_v(), p.m_z()), rep);
    return rep;
}

double calibrate_inversion_constant(const SpaceParams& p) { return calibration_report(p).constant; }

bool is_calibrated(const SpaceParams& p) {
    std::lock_guard<std::mutex> lock(g_calib_mutex);
    return g_calib.count({p.m_v(), p.m_z()}) > 0;
}

void reset_calibration_cache() {
    std::lock_guard<std::mutex> lock(g_calib_mutex);
    g_calib.clear();
}

double sobolev_norm(const SpaceParams& p, const SpectralProfile& fh, double beta) {
    if (beta < 0.0)
        throw ValidationError("sobolev_norm: beta must be non-negative");
    const std::vector<double> w = simpson_weights(fh.grid);
    const double gap = p.spectral_gap();
    double acc = 0.0;
    for (std::size_t i = 0; i < fh.grid.count; ++i) {
        const double l = fh.grid.at(i);
        if (fh.values[i] == 0.0 || !in_support(fh, l))
            continue;
        acc += w[i] * std::pow(l * l + gap, beta) * std::norm(fh.values[i]) * plancherel_density(p, l);
    }
    return std::sqrt(acc);
}

SpectralProfile euclidean_correspondence(const SpaceParams& p, const SpectralProfile& fh) {
    if (!fh.support_hint || !(fh.support_hint->lo > 0.0))
        throw DomainError("euclidean_correspondence: spectrum must be supported away from 0");
    SpectralProfile out = fh;
    for (std::size_t i = 0; i < fh.grid.count; ++i) {
        const double l = fh.grid.at(i);
        if (!in_support(fh, l)) {
            out.values[i] = 0.0;
            continue;
        }
        out.values[i] = fh.values[i] * (plancherel_density(p, l) / std::pow(l, p.n() - 1));
    }
    return out;
}

SpectralProfile euclidean_correspondence_inverse(const SpaceParams& p, const SpectralProfile& Fg) {
    if (!Fg.support_hint || !(Fg.support_hint->lo > 0.0))
        throw DomainError("euclidean_correspondence: spectrum must be supported away from 0");
    SpectralProfile out = Fg;
    for (std::size_t i = 0; i < Fg.grid.count; ++i) {
        const double l = Fg.grid.at(i);
        if (!in_support(Fg, l)) {
            out.values[i] = 0.0;
            continue;
        }
        out.values[i] = Fg.values[i] / (plancherel_density(p, l) / std::pow(l, p.n() - 1));
    }
    return out;
}

double euclidean_sobolev_norm(int n, const SpectralProfile& Fg, double beta) {
    const std::vector<double> w = simpson_weights(Fg.grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < Fg.grid.count; ++i) {
        const double l = Fg.grid.at(i);
        if (!in_support(Fg, l))
            continue;
        acc += w[i] * std::pow(1.0 + l * l, beta) * std::norm(Fg.values[i]) * std::pow(l, n - 1);
    }
    return std::sqrt(acc);
}

SobolevComparison sobolev_comparison_check(const SpaceParams& p, const SpectralProfile& fh, double c, double beta1,
                                           double beta2) {
    if (!(c > 0.0))
        throw ValidationError("sobolev_comparison_check: c must be positive");
    if (!(beta1 >= 0.0) || beta2 < beta1)
        throw ValidationError("sobolev_comparison_check: need 0 <= beta1 <= beta2");
    for (std::size_t i = 0; i < fh.grid.count; ++i) {
        if (fh.grid.at(i) <= c && fh.values[i] != 0.0 && in_support(fh, fh.grid.at(i)))
            throw DomainError("sobolev_comparison_check: spectrum not supported in (c, inf)");
    }
    SobolevComparison out;
    out.norm_low = sobolev_norm(p, fh, beta1);
    out.norm_high = sobolev_norm(p, fh, beta2);
    out.factor = std::pow(c, -(beta2 - beta1));
    out.ratio = out.norm_high > 0.0 ? out.norm_low / out.norm_high : 0.0;
    // equality is allowed up to rounding in the degenerate beta1 == beta2 case
    out.holds = out.norm_low <= out.factor * out.norm_high * (1.0 + 1e-12);
    return out;
}

} // namespace drs
