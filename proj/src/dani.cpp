#include "gridtargets/dani.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gridtargets {

namespace {

double interp_log_linear(const std::vector<std::pair<double, double>>& pts, double logT) {
    // pts hold (log T, log psi), sorted by log T.
    if (logT <= pts.front().first) return pts.front().second;
    if (logT >= pts.back().first) {
        if (pts.size() == 1) return pts.back().second;
        const auto& a = pts[pts.size() - 2];
        const auto& b = pts.back();
        const double slope = std::min(0.0, (b.second - a.second) / (b.first - a.first));
        return b.second + slope * (logT - b.first);
    }
    const auto it = std::upper_bound(pts.begin(), pts.end(), logT,
                                     [](double v, const auto& p) { return v < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (logT - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

}  // namespace

ApproxProfile ApproxProfile::power_log(double C, double a, double b, double T0) {
    if (!(C > 0.0)) throw std::invalid_argument("profile: C must be positive");
    if (!(T0 > 1.0)) throw std::invalid_argument("profile: T0 must exceed 1");
    if (a < 0.0)
        throw std::invalid_argument("profile: powerlog with a < 0 is increasing");
    if (a == 0.0 && b > 0.0)
        throw std::invalid_argument("profile: powerlog with a = 0 needs b <= 0");
    if (a > 0.0 && std::log(T0) < b / a)
        throw std::invalid_argument(
            "profile: powerlog is increasing near T0; raise T0 to at least e^(b/a)");
    return ApproxProfile(PowerLogForm{C, a, b}, T0);
}

ApproxProfile ApproxProfile::one_minus_power(double a, double tau, double T0) {
    if (!(a > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("profile: oneminus needs a > 0 and tau > 0");
    if (!(T0 > 1.0)) throw std::invalid_argument("profile: T0 must exceed 1");
    if (1.0 - a * std::pow(T0, -tau) <= 0.0)
        throw std::invalid_argument("profile: oneminus is nonpositive at T0");
    if (a * (1.0 + tau) * std::pow(T0, -tau) > 1.0)
        throw std::invalid_argument(
            "profile: oneminus is increasing near T0; raise T0 to at least (a(1+tau))^(1/tau)");
    return ApproxProfile(OneMinusPowerForm{a, tau}, T0);
}

ApproxProfile ApproxProfile::tabulated(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("profile: table needs at least one row");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].second > 0.0))
            throw std::invalid_argument("profile: table psi values must be positive");
        if (i > 0 && !(points[i].first > points[i - 1].first))
            throw std::invalid_argument("profile: table T values must be strictly increasing");
        if (i > 0 && points[i].second > points[i - 1].second)
            throw std::invalid_argument("profile: table psi values must be non-increasing");
    }
    if (!(points.front().first > 1.0))
        throw std::invalid_argument("profile: table must start at T0 > 1");
    const double T0 = points.front().first;
    TabulatedForm form;
    form.points.reserve(points.size());
    for (const auto& [T, psi] : points) form.points.emplace_back(std::log(T), std::log(psi));
    return ApproxProfile(std::move(form), T0);
}

double ApproxProfile::log_psi(double logT) const {
    const double l = std::max(logT, std::log(T0_));
    // Constant extension left of T0 keeps the solver's objective monotone while
    // probing below the domain start.
    if (const auto* p = std::get_if<PowerLogForm>(&form_))
        return std::log(p->C) + p->b * std::log(l) - p->a * l;
    if (const auto* p = std::get_if<OneMinusPowerForm>(&form_))
        return std::log1p(-p->a * std::exp(-p->tau * l)) - l;
    return interp_log_linear(std::get<TabulatedForm>(form_).points, l);
}

std::string ApproxProfile::describe() const {
    std::ostringstream out;
    if (const auto* p = std::get_if<PowerLogForm>(&form_))
        out << "powerlog:C=" << p->C << ",a=" << p->a << ",b=" << p->b << ",T0=" << T0_;
    else if (const auto* p = std::get_if<OneMinusPowerForm>(&form_))
        out << "oneminus:a=" << p->a << ",tau=" << p->tau << ",T0=" << T0_;
    else
        out << "table:" << std::get<TabulatedForm>(form_).points.size() << " rows,T0=" << T0_;
    return out.str();
}

ApproxProfile parse_profile(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("profile spec needs the form kind:args, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);

    if (kind == "table") {
        if (args.empty() || args[0] != '@')
            throw std::invalid_argument("table profile needs table:@path.csv");
        const std::string path = args.substr(1);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open profile table '" + path + "'");
        std::string line;
        if (!std::getline(in, line))
            throw std::invalid_argument("profile table '" + path + "' is empty");
        std::vector<std::pair<double, double>> points;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string t_str, psi_str;
            if (!std::getline(row, t_str, ',') || !std::getline(row, psi_str, ','))
                throw std::invalid_argument("profile table row '" + line + "' is not T,psi");
            points.emplace_back(std::stod(t_str), std::stod(psi_str));
        }
        return ApproxProfile::tabulated(std::move(points));
    }

    double C = 1.0, a = 1.0, b = 0.0, tau = 1.0, T0 = 2.0;
    std::istringstream in(args);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("profile argument '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("profile argument '" + item + "' has a bad number");
        }
        if (key == "C") C = value;
        else if (key == "a") a = value;
        else if (key == "b") b = value;
        else if (key == "tau") tau = value;
        else if (key == "T0") T0 = value;
        else throw std::invalid_argument("unknown profile key '" + key + "'");
    }
    if (kind == "powerlog") return ApproxProfile::power_log(C, a, b, T0);
    if (kind == "oneminus") return ApproxProfile::one_minus_power(a, tau, T0);
    throw std::invalid_argument("unknown profile kind '" + kind + "'");
}

DaniFunction::DaniFunction(ApproxProfile profile, Dimensions dims)
    : DaniFunction(std::move(profile), dims, Options{}) {}

DaniFunction::DaniFunction(ApproxProfile profile, Dimensions dims, Options options)
    : profile_(std::move(profile)), dims_(dims), options_(options) {
    dims_.validate();
    if (!(options_.bisection_tol > 0.0) || !(options_.initial_bracket_step > 0.0))
        throw std::invalid_argument("DaniFunction: tolerances must be positive");
    const double k = dims_.m + dims_.n;
    const double logT0 = std::log(profile_.T0());
    t0_ = dims_.m / k * logT0 - dims_.n / k * profile_.log_psi(logT0);
}

double DaniFunction::z(double t) const {
    if (t < t0_ - 1e-12)
        throw std::invalid_argument("DaniFunction::z: t below domain start t0");
    // g(z) = log psi(e^{t+nz}) + t - m z is strictly decreasing, so an
    // expanding bracket around 0 followed by bisection is unconditionally safe.
    const auto g = [&](double zv) {
        return profile_.log_psi(t + dims_.n * zv) + t - dims_.m * zv;
    };
    double lo = 0.0, hi = 0.0;
    double g0 = g(0.0);
    if (g0 == 0.0) return 0.0;
    double step = options_.initial_bracket_step;
    if (g0 > 0.0) {
        hi = step;
        int i = 0;
        while (g(hi) > 0.0) {
            lo = hi;
            step *= 2.0;
            hi += step;
            if (++i > 200)
                throw std::runtime_error("DaniFunction::z: no bracket after 200 doublings");
        }
    } else {
        lo = -step;
        int i = 0;
        while (g(lo) < 0.0) {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if (++i > 200)
                throw std::runtime_error("DaniFunction::z: no bracket after 200 doublings");
        }
    }
    int iters = 0;
    while (hi - lo > options_.bisection_tol && ++iters < 500) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double DaniFunction::t_of_T(double T) const {
    if (T < profile_.T0() - 1e-12)
        throw std::invalid_argument("DaniFunction::t_of_T: T below domain start T0");
    const double target = std::log(T);
    const auto lambda = [&](double t) { return t + dims_.n * z(t); };
    double lo = t0_, hi = t0_;
    double step = 1.0;
    int i = 0;
    while (lambda(hi) < target) {
        lo = hi;
        hi += step;
        step *= 2.0;
        if (++i > 200)
            throw std::runtime_error("DaniFunction::t_of_T: no bracket after 200 doublings");
    }
    int iters = 0;
    while (hi - lo > options_.bisection_tol && ++iters < 500) {
        const double mid = 0.5 * (lo + hi);
        if (lambda(mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

DaniPropertyReport verify_dani_properties(const DaniFunction& dani,
                                          const std::vector<double>& t_grid) {
    DaniPropertyReport report;
    const int m = dani.dims().m, n = dani.dims().n;
    std::vector<double> zs(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) zs[i] = dani.z(t_grid[i]);

    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double d_plus = (t_grid[i] + n * zs[i]) - (t_grid[i - 1] + n * zs[i - 1]);
        const double d_minus = (t_grid[i] - m * zs[i]) - (t_grid[i - 1] - m * zs[i - 1]);
        if (d_plus <= 0.0) {
            if (d_plus > -1e-12) {
                // Flat tabulated segments can degenerate strictness to weak
                // monotonicity at rounding scale; reported, not failed.
                std::ostringstream note;
                note << "t+nz weakly flat at t=" << t_grid[i] << " (increment " << d_plus << ")";
                report.notes.push_back(note.str());
            } else {
                report.t_plus_nz_strictly_increasing = false;
            }
        }
        if (d_minus < -1e-9) report.t_minus_mz_nondecreasing = false;
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        for (std::size_t j = i; j < t_grid.size() && t_grid[j] <= t_grid[i] + 1.0; ++j) {
            if (zs[j] < zs[i] - 1.0 / m - 1e-9 || zs[j] > zs[i] + 1.0 / n + 1e-9) {
                report.oscillation_bounds_hold = false;
                std::ostringstream note;
                note << "oscillation bound violated between t=" << t_grid[i]
                     << " and t=" << t_grid[j];
                report.notes.push_back(note.str());
            }
        }
    }
    return report;
}

}  // namespace gridtargets
