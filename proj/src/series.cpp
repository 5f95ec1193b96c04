#include "gridtargets/series.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gridtargets {

const char* to_string(SeriesTag tag) {
    switch (tag) {
        case SeriesTag::Convergent: return "Convergent";
        case SeriesTag::Divergent: return "Divergent";
        default: return "Unknown";
    }
}

SeriesTag classify_powerlog(double C, double a, double b) {
    (void)C;  // a positive constant factor cannot change convergence
    if (a < 1.0) return SeriesTag::Convergent;
    if (a == 1.0 && b > 1.0) return SeriesTag::Convergent;
    return SeriesTag::Divergent;
}

SeriesTag classify_profile(const ApproxProfile& profile) {
    if (const auto* p = std::get_if<PowerLogForm>(&profile.form()))
        return classify_powerlog(p->C, p->a, p->b);
    if (std::holds_alternative<OneMinusPowerForm>(profile.form()))
        return SeriesTag::Divergent;  // terms 1/(j (1 - a j^-tau)) dominate 1/j
    return SeriesTag::Unknown;
}

SeriesVerdict psisum_partial(const ApproxProfile& profile, long J) {
    const long j_lo = static_cast<long>(std::ceil(profile.T0()));
    SeriesVerdict verdict;
    verdict.tag = classify_profile(profile);
    if (J < j_lo) return verdict;
    verdict.partials.reserve(static_cast<std::size_t>(J - j_lo + 1));
    CompensatedSum acc;
    for (long j = j_lo; j <= J; ++j) {
        const double dj = static_cast<double>(j);
        const double term = std::exp(-profile.log_psi(std::log(dj))) / (dj * dj);
        acc.add(term);
        verdict.partials.push_back({j, term, acc.value()});
    }
    return verdict;
}

SeriesVerdict deltasum_partial(const DaniFunction& dani, long t_max) {
    const long t_lo = static_cast<long>(std::ceil(dani.t0()));
    SeriesVerdict verdict;
    verdict.tag = classify_profile(dani.profile());
    if (t_max < t_lo) return verdict;
    const double k = dani.dims().m + dani.dims().n;
    verdict.partials.reserve(static_cast<std::size_t>(t_max - t_lo + 1));
    CompensatedSum acc;
    for (long t = t_lo; t <= t_max; ++t) {
        const double term = std::exp(-k * dani.z(static_cast<double>(t)));
        acc.add(term);
        verdict.partials.push_back({t, term, acc.value()});
    }
    return verdict;
}

ComparisonReport compare_dani_sums(const ApproxProfile& profile, const Dimensions& dims, long J,
                                   long t_max) {
    dims.validate();
    const long j_lo = static_cast<long>(std::ceil(profile.T0()));
    if (J < 8 * std::max<long>(j_lo, 1))
        throw std::invalid_argument("compare_dani_sums: J too small for four doubling horizons");
    const DaniFunction dani(profile, dims);
    const double matched_top = dani.t_of_T(static_cast<double>(J));
    if (std::fabs(static_cast<double>(t_max) - matched_top) > std::max(2.0, 0.1 * matched_top))
        throw std::invalid_argument(
            "compare_dani_sums: t_max is not matched to J (want t_max + n z(t_max) ~ log J)");

    ComparisonReport report;
    for (long h = J / 8; h <= J; h *= 2) report.horizons.push_back(h);

    const SeriesVerdict psi_full = psisum_partial(profile, J);
    for (long h : report.horizons) {
        const double t_h = dani.t_of_T(static_cast<double>(h));
        report.matched_t.push_back(t_h);
        // partial at horizon h: last index <= h
        double value = 0.0;
        for (const auto& p : psi_full.partials) {
            if (p.index > h) break;
            value = p.partial;
        }
        report.psisum_values.push_back(value);
    }
    const SeriesVerdict delta_full =
        deltasum_partial(dani, static_cast<long>(std::floor(report.matched_t.back())));
    for (double t_h : report.matched_t) {
        double value = 0.0;
        for (const auto& p : delta_full.partials) {
            if (static_cast<double>(p.index) > t_h) break;
            value = p.partial;
        }
        report.deltasum_values.push_back(value);
    }
    for (std::size_t i = 0; i < report.horizons.size(); ++i)
        report.ratio.push_back(report.psisum_values[i] > 0.0
                                   ? report.deltasum_values[i] / report.psisum_values[i]
                                   : 0.0);

    const auto growth = [](const std::vector<double>& v) {
        const double prev = v[v.size() - 2], last = v.back();
        return prev > 0.0 ? (last - prev) / prev : 0.0;
    };
    const double psi_growth = growth(report.psisum_values);
    const double delta_growth = growth(report.deltasum_values);
    report.psisum_plateaued = psi_growth < 0.01;
    report.deltasum_plateaued = delta_growth < 0.01;
    report.psisum_grew = psi_growth > 0.5;
    report.deltasum_grew = delta_growth > 0.5;
    report.mismatch = (report.psisum_plateaued && report.deltasum_grew) ||
                      (report.deltasum_plateaued && report.psisum_grew);
    return report;
}

std::string series_csv(const SeriesVerdict& verdict) {
    std::ostringstream out;
    out << "index,term,partial_sum\n";
    char buf[128];
    for (const auto& p : verdict.partials) {
        std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g\n", p.index, p.term, p.partial);
        out << buf;
    }
    return out.str();
}

}  // namespace gridtargets
