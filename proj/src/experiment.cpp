#include "gridtargets/experiment.hpp"

#include "gridtargets/parallel.hpp"
#include "gridtargets/report_json.hpp"
#include "gridtargets/rng.hpp"

#include <cmath>
#include <sstream>

namespace gridtargets {

void ExperimentConfig::validate() const {
    dims.validate();
    if (ensemble < 1) throw std::invalid_argument("experiment: ensemble size must be >= 1");
    const ApproxProfile profile = parse_profile(profile_spec);
    if (T_hi < static_cast<long>(std::ceil(profile.T0())) + 1)
        throw std::invalid_argument("experiment: T_hi must be at least ceil(T0) + 1");
}

PairAB sample_pair(const Dimensions& dims, std::uint64_t seed, std::uint64_t pair_index) {
    CounterRng rng(seed, pair_index);
    PairAB pair;
    pair.A = Matrix(dims.m, dims.n);
    for (int i = 0; i < dims.m; ++i)
        for (int j = 0; j < dims.n; ++j) pair.A(i, j) = rng.next_double();
    pair.b = Vector(dims.m);
    for (int i = 0; i < dims.m; ++i) pair.b(i) = rng.next_double();
    return pair;
}

ExperimentReport run_zero_one(const ExperimentConfig& config) {
    config.validate();
    const ApproxProfile profile = parse_profile(config.profile_spec);

    ExperimentReport report;
    report.config = config;
    report.T_lo = static_cast<long>(std::ceil(profile.T0()));
    report.psisum_verdict = classify_profile(profile);

    std::vector<ScanResult> scans(static_cast<std::size_t>(config.ensemble));
    std::vector<char> enum_failed(static_cast<std::size_t>(config.ensemble), 0);
    parallel_for(config.ensemble, config.threads, [&](std::int64_t i) {
        const PairAB pair = sample_pair(config.dims, config.seed, static_cast<std::uint64_t>(i));
        try {
            scans[static_cast<std::size_t>(i)] =
                scan_membership(pair, profile, config.T_hi, config.dims, config.q_budget);
        } catch (const enum_budget_error&) {
            enum_failed[static_cast<std::size_t>(i)] = 1;
        }
    });

    const std::size_t bins = static_cast<std::size_t>(config.T_hi - report.T_lo + 1);
    report.failures_per_T.assign(bins, 0);
    report.attempts_per_T.assign(bins, 0);
    long usable = 0, members = 0;
    report.pairs.reserve(scans.size());
    for (std::size_t i = 0; i < scans.size(); ++i) {
        PairOutcome outcome;
        outcome.pair_index = static_cast<long>(i);
        outcome.enum_failed = enum_failed[i] != 0;
        if (outcome.enum_failed) {
            ++report.enum_failures;
        } else {
            const ScanResult& scan = scans[i];
            outcome.n_failures = static_cast<long>(scan.failures.size());
            outcome.recent_failures = scan.recent_failures();
            outcome.dirichlet_up_to = scan.dirichlet_up_to;
            if (!scan.failures.empty()) {
                outcome.first_failure = scan.failures.front();
                outcome.last_failure = scan.failures.back();
            }
            for (long T : scan.failures)
                ++report.failures_per_T[static_cast<std::size_t>(T - report.T_lo)];
            for (std::size_t b = 0; b < bins; ++b) ++report.attempts_per_T[b];
            ++usable;
            if (outcome.dirichlet_up_to) ++members;
        }
        report.pairs.push_back(outcome);
    }
    report.fraction_no_recent_failure =
        usable > 0 ? static_cast<double>(members) / static_cast<double>(usable) : 0.0;
    return report;
}

std::string experiment_report_json(const ExperimentReport& report) {
    JsonWriter w;
    w.begin_object();
    w.field("op", "experiment");
    w.key("config").begin_object();
    w.field("m", report.config.dims.m);
    w.field("n", report.config.dims.n);
    w.field("profile", report.config.profile_spec);
    w.field("ensemble", report.config.ensemble);
    w.field("T_hi", report.config.T_hi);
    w.field("seed", report.config.seed);
    w.end_object();
    w.field("T_lo", report.T_lo);
    w.field("fraction_no_recent_failure", report.fraction_no_recent_failure);
    w.field("psisum_verdict", to_string(report.psisum_verdict));
    w.field("enum_failures", report.enum_failures);
    w.begin_array("pairs");
    for (const PairOutcome& p : report.pairs) {
        w.begin_object();
        w.field("pair", p.pair_index);
        w.field("failures", p.n_failures);
        w.field("recent_failures", p.recent_failures);
        w.field("first_failure", p.first_failure);
        w.field("last_failure", p.last_failure);
        w.field("dirichlet_up_to", p.dirichlet_up_to);
        w.field("enum_failed", p.enum_failed);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string experiment_histogram_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "T,attempts,failures\n";
    for (std::size_t b = 0; b < report.failures_per_T.size(); ++b)
        out << (report.T_lo + static_cast<long>(b)) << ',' << report.attempts_per_T[b] << ','
            << report.failures_per_T[b] << '\n';
    return out.str();
}

}  // namespace gridtargets
