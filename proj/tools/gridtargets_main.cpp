// gridtargets: lattice-grid experiments on uniform approximation rates.
//
// Subcommands cover exact grid heights, flow trajectories, integer-T
// membership scans, ensemble experiments, measure estimation on the k = 2
// grid space, series diagnostics, and the eventually-always-hitting checks.
// Output is machine-readable (JSON or CSV); every sampled quantity is a pure
// function of (seed, index), so runs repeat byte-for-byte.

#include "CLI11.hpp"

#include "gridtargets/experiment.hpp"
#include "gridtargets/grid_core.hpp"
#include "gridtargets/measure.hpp"
#include "gridtargets/report_json.hpp"
#include "gridtargets/series.hpp"
#include "gridtargets/toml_lite.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace gridtargets;

std::vector<double> parse_csv_doubles(const std::string& flag, const std::string& raw) {
    std::vector<double> out;
    std::istringstream in(raw);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(flag + ": cannot parse number '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(flag + ": empty list");
    return out;
}

Matrix parse_matrix(const std::string& flag, const std::string& raw, int rows) {
    const std::vector<double> entries = parse_csv_doubles(flag, raw);
    if (entries.size() % static_cast<std::size_t>(rows) != 0)
        throw std::invalid_argument(flag + ": entry count not divisible by the row count");
    const int cols = static_cast<int>(entries.size()) / rows;
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
    return M;
}

Vector parse_vector(const std::string& flag, const std::string& raw) {
    const std::vector<double> entries = parse_csv_doubles(flag, raw);
    Vector v(static_cast<int>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<int>(i)) = entries[i];
    return v;
}

Matrix parse_square(const std::string& flag, const std::string& raw) {
    const std::vector<double> entries = parse_csv_doubles(flag, raw);
    const int k = static_cast<int>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (static_cast<std::size_t>(k) * static_cast<std::size_t>(k) != entries.size())
        throw std::invalid_argument(flag + ": need a square entry count (row-major)");
    return parse_matrix(flag, raw, k);
}

void write_output(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        if (body.empty() || body.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << body;
}

std::vector<double> radius_sequence_from_config(const TomlLite& toml, long N_max) {
    if (toml.has("eah", "r")) {
        const std::vector<double> r = toml.numbers("eah", "r");
        if (r.size() != static_cast<std::size_t>(N_max) + 1)
            throw std::invalid_argument("eah config: r must list N_max + 1 values");
        return r;
    }
    const double r0 = toml.number("eah", "r0");
    const double rho = toml.number_or("eah", "rho", 0.0);
    std::vector<double> r(static_cast<std::size_t>(N_max) + 1);
    for (long N = 0; N <= N_max; ++N)
        r[static_cast<std::size_t>(N)] = r0 * std::pow(static_cast<double>(N + 1), -rho);
    return r;
}

int run(int argc, char** argv) {
    CLI::App app{"shrinking-target experiments on the space of unimodular grids"};
    app.require_subcommand(1);

    // ---- delta ----------------------------------------------------------
    auto* cmd_delta = app.add_subcommand("delta", "exact grid height log min ||basis c + shift||");
    std::string delta_basis, delta_shift;
    std::int64_t delta_budget = EnumLimits{}.max_candidates;
    double delta_zero_tol = EnumLimits{}.zero_tolerance;
    cmd_delta->add_option("--basis", delta_basis, "row-major square matrix entries")->required();
    cmd_delta->add_option("--shift", delta_shift, "shift vector (default 0)");
    cmd_delta->add_option("--max-candidates", delta_budget, "enumeration budget");
    cmd_delta->add_option("--zero-tol", delta_zero_tol, "sup-norm treated as the zero vector");
    cmd_delta->callback([&] {
        Grid grid;
        grid.basis = parse_square("--basis", delta_basis);
        grid.shift = delta_shift.empty() ? Vector::Zero(grid.basis.rows())
                                         : parse_vector("--shift", delta_shift);
        const double d = delta(grid, EnumLimits{delta_budget, delta_zero_tol});
        if (std::isinf(d))
            std::cout << "-inf\n";
        else
            std::cout << format_double(d) << '\n';
    });

    // ---- trajectory ------------------------------------------------------
    auto* cmd_traj = app.add_subcommand("trajectory", "delta along the diagonal flow, CSV");
    std::string traj_A, traj_b, traj_psi;
    int traj_m = 1, traj_n = 1;
    double traj_t0 = 0.0, traj_t1 = 5.0, traj_step = 0.1;
    cmd_traj->add_option("--A", traj_A, "matrix entries, row-major")->required();
    cmd_traj->add_option("--b", traj_b, "shift vector")->required();
    cmd_traj->add_option("--m", traj_m, "rows of A");
    cmd_traj->add_option("--n", traj_n, "columns of A");
    cmd_traj->add_option("--psi", traj_psi, "profile spec; adds z and hit columns");
    cmd_traj->add_option("--t0", traj_t0, "first flow time")->required();
    cmd_traj->add_option("--t1", traj_t1, "last flow time")->required();
    cmd_traj->add_option("--step", traj_step, "flow time step")->required();
    cmd_traj->callback([&] {
        const Dimensions dims{traj_m, traj_n};
        const PairAB pair{parse_matrix("--A", traj_A, traj_m), parse_vector("--b", traj_b)};
        const Grid grid = make_grid(pair, dims);
        if (!(traj_step > 0.0)) throw std::invalid_argument("--step: must be positive");
        std::vector<double> ts;
        for (double t = traj_t0; t <= traj_t1 + 1e-12; t += traj_step) ts.push_back(t);
        std::function<double(double)> z;
        std::unique_ptr<DaniFunction> dani;
        if (!traj_psi.empty()) {
            dani = std::make_unique<DaniFunction>(parse_profile(traj_psi), dims);
            // the threshold exists only from t0 on; below it the column stays empty
            z = [&](double t) {
                return t >= dani->t0() - 1e-12 ? dani->z(t)
                                               : std::numeric_limits<double>::quiet_NaN();
            };
        }
        const auto records = trajectory(grid, ts, z, dims);
        std::cout << "t,delta,z,hit\n";
        for (const auto& rec : records) {
            std::cout << format_double(rec.t) << ','
                      << (std::isinf(rec.delta) ? "-inf" : format_double(rec.delta)) << ',';
            if (rec.z && !std::isnan(*rec.z))
                std::cout << format_double(*rec.z) << ',' << (*rec.hit ? 1 : 0);
            else
                std::cout << ',';
            std::cout << '\n';
        }
    });

    // ---- test ------------------------------------------------------------
    auto* cmd_test = app.add_subcommand("test", "integer-T membership scan, JSON");
    std::string test_A, test_b, test_psi = "powerlog:C=1,a=1,b=0,T0=2";
    int test_m = 1, test_n = 1;
    long test_Tmax = 100;
    std::int64_t test_budget = kDefaultQBudget;
    cmd_test->add_option("--A", test_A, "matrix entries, row-major")->required();
    cmd_test->add_option("--b", test_b, "shift vector")->required();
    cmd_test->add_option("--m", test_m, "rows of A");
    cmd_test->add_option("--n", test_n, "columns of A");
    cmd_test->add_option("--psi", test_psi, "profile spec");
    cmd_test->add_option("--Tmax", test_Tmax, "scan up to this integer T")->required();
    cmd_test->add_option("--q-budget", test_budget, "q enumeration cap");
    cmd_test->callback([&] {
        const Dimensions dims{test_m, test_n};
        const PairAB pair{parse_matrix("--A", test_A, test_m), parse_vector("--b", test_b)};
        const ScanResult scan =
            scan_membership(pair, parse_profile(test_psi), test_Tmax, dims, test_budget);
        std::cout << scan_result_json(scan, test_psi, test_m, test_n) << '\n';
    });

    // ---- experiment -------------------------------------------------------
    auto* cmd_exp = app.add_subcommand("experiment", "zero-one ensemble experiment");
    std::string exp_config, exp_psi, exp_out, exp_hist;
    long exp_N = -1, exp_Thi = -1;
    int exp_m = -1, exp_n = -1, exp_threads = -1;
    std::int64_t exp_seed = -1;
    cmd_exp->add_option("--config", exp_config, "TOML manifest ([profile]/[ensemble]/[output])");
    cmd_exp->add_option("--psi", exp_psi, "override profile spec");
    cmd_exp->add_option("--N", exp_N, "override ensemble size");
    cmd_exp->add_option("--T-hi", exp_Thi, "override scan horizon");
    cmd_exp->add_option("--m", exp_m, "override rows");
    cmd_exp->add_option("--n", exp_n, "override columns");
    cmd_exp->add_option("--seed", exp_seed, "override seed");
    cmd_exp->add_option("--threads", exp_threads, "override worker count");
    cmd_exp->add_option("--out", exp_out, "report path (default stdout)");
    cmd_exp->add_option("--hist", exp_hist, "histogram CSV path");
    cmd_exp->callback([&] {
        ExperimentConfig config;
        if (!exp_config.empty()) {
            const TomlLite toml = TomlLite::parse_file(exp_config);
            config.profile_spec = toml.text_or("profile", "spec", config.profile_spec);
            config.dims.m = static_cast<int>(toml.number_or("ensemble", "m", 1));
            config.dims.n = static_cast<int>(toml.number_or("ensemble", "n", 1));
            config.ensemble = static_cast<long>(toml.number_or("ensemble", "N", 1));
            config.T_hi = static_cast<long>(toml.number_or("ensemble", "T_hi", 100));
            config.seed = static_cast<std::uint64_t>(toml.number_or("ensemble", "seed", 1));
            config.threads = static_cast<int>(toml.number_or("ensemble", "threads", 0));
            if (exp_out.empty()) exp_out = toml.text_or("output", "report", "");
            if (exp_hist.empty()) exp_hist = toml.text_or("output", "histogram", "");
        }
        if (!exp_psi.empty()) config.profile_spec = exp_psi;
        if (exp_N >= 0) config.ensemble = exp_N;
        if (exp_Thi >= 0) config.T_hi = exp_Thi;
        if (exp_m >= 0) config.dims.m = exp_m;
        if (exp_n >= 0) config.dims.n = exp_n;
        if (exp_seed >= 0) config.seed = static_cast<std::uint64_t>(exp_seed);
        if (exp_threads >= 0) config.threads = exp_threads;

        const auto start = std::chrono::steady_clock::now();
        const ExperimentReport report = run_zero_one(config);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_output(exp_out, experiment_report_json(report) + "\n");
        if (!exp_hist.empty()) write_output(exp_hist, experiment_histogram_csv(report));
        std::cerr << "experiment: " << config.ensemble << " pairs, T_hi " << config.T_hi
                  << ", runtime " << elapsed << " s\n";
    });

    // ---- phi ---------------------------------------------------------------
    auto* cmd_phi = app.add_subcommand("phi", "super-level mass estimate on the k=2 grid space");
    double phi_r = 1.0;
    std::int64_t phi_samples = 100000;
    std::uint64_t phi_seed = 1;
    cmd_phi->add_option("--r", phi_r, "ball radius (z = log r)")->required();
    cmd_phi->add_option("--samples", phi_samples, "sample count")->required();
    cmd_phi->add_option("--seed", phi_seed, "RNG seed")->required();
    cmd_phi->callback([&] {
        std::cout << phi_report_json(phi_report(phi_r, phi_samples, phi_seed)) << '\n';
    });

    // ---- q / q-mc -----------------------------------------------------------
    auto* cmd_q = app.add_subcommand("q", "exact escape fraction for ordered diagonal lattices");
    std::string q_diag;
    double q_r = 1.0;
    cmd_q->add_option("--a-diag", q_diag, "diagonal entries, product 1")->required();
    cmd_q->add_option("--r", q_r, "ball radius")->required();
    cmd_q->callback([&] {
        std::cout << format_double(q_exact(parse_csv_doubles("--a-diag", q_diag), q_r)) << '\n';
    });

    auto* cmd_qmc = app.add_subcommand("q-mc", "Monte Carlo escape fraction for any lattice");
    std::string qmc_basis;
    double qmc_r = 1.0;
    std::int64_t qmc_samples = 100000;
    std::uint64_t qmc_seed = 1;
    cmd_qmc->add_option("--basis", qmc_basis, "row-major square matrix entries")->required();
    cmd_qmc->add_option("--r", qmc_r, "ball radius")->required();
    cmd_qmc->add_option("--samples", qmc_samples, "sample count");
    cmd_qmc->add_option("--seed", qmc_seed, "RNG seed");
    cmd_qmc->callback([&] {
        Grid lattice;
        lattice.basis = parse_square("--basis", qmc_basis);
        lattice.shift = Vector::Zero(lattice.basis.rows());
        const McEstimate est = q_monte_carlo(lattice, qmc_r, qmc_samples, qmc_seed);
        std::cout << mc_estimate_json("q-mc", est,
                                      {{"r", format_double(qmc_r)},
                                       {"basis", "\"" + json_escape(qmc_basis) + "\""}})
                  << '\n';
    });

    // ---- series / compare-sums ----------------------------------------------
    auto* cmd_series = app.add_subcommand("series", "partial sums of the zero-one criterion");
    std::string series_psi;
    long series_J = 1000;
    cmd_series->add_option("--psi", series_psi, "profile spec")->required();
    cmd_series->add_option("--J", series_J, "horizon")->required();
    cmd_series->callback([&] {
        const SeriesVerdict v = psisum_partial(parse_profile(series_psi), series_J);
        std::cout << series_csv(v);
        std::cerr << "verdict: " << to_string(v.tag) << '\n';
    });

    auto* cmd_cmp = app.add_subcommand("compare-sums", "rate-side vs flow-side partial sums");
    std::string cmp_psi;
    long cmp_J = 10000;
    int cmp_m = 1, cmp_n = 1;
    cmd_cmp->add_option("--psi", cmp_psi, "profile spec")->required();
    cmd_cmp->add_option("--J", cmp_J, "top horizon (halved three times)")->required();
    cmd_cmp->add_option("--m", cmp_m, "rows");
    cmd_cmp->add_option("--n", cmp_n, "columns");
    cmd_cmp->callback([&] {
        const ApproxProfile profile = parse_profile(cmp_psi);
        const Dimensions dims{cmp_m, cmp_n};
        const DaniFunction dani(profile, dims);
        const long t_max =
            static_cast<long>(std::llround(dani.t_of_T(static_cast<double>(cmp_J))));
        const ComparisonReport rep = compare_dani_sums(profile, dims, cmp_J, t_max);
        std::cout << "horizon_J,matched_t,psisum,deltasum,ratio\n";
        for (std::size_t i = 0; i < rep.horizons.size(); ++i)
            std::cout << rep.horizons[i] << ',' << format_double(rep.matched_t[i]) << ','
                      << format_double(rep.psisum_values[i]) << ','
                      << format_double(rep.deltasum_values[i]) << ','
                      << format_double(rep.ratio[i]) << '\n';
        std::cerr << "psisum_plateaued: " << (rep.psisum_plateaued ? "yes" : "no")
                  << ", deltasum_plateaued: " << (rep.deltasum_plateaued ? "yes" : "no")
                  << ", mismatch: " << (rep.mismatch ? "yes" : "no") << '\n';
    });

    // ---- siegel ----------------------------------------------------------------
    auto* cmd_siegel = app.add_subcommand("siegel", "exact lower-bound integral value");
    double siegel_r = 1.0;
    int siegel_k = 2;
    cmd_siegel->add_option("--k", siegel_k, "ambient dimension")->required();
    cmd_siegel->add_option("--r", siegel_r, "ball radius")->required();
    cmd_siegel->callback(
        [&] { std::cout << format_double(siegel_lower_bound(siegel_r, siegel_k)) << '\n'; });

    // ---- eah --------------------------------------------------------------------
    auto* cmd_eah = app.add_subcommand("eah", "eventually-always-hitting report");
    std::string eah_config;
    cmd_eah->add_option("--config", eah_config, "TOML manifest ([eah] section)")->required();
    cmd_eah->callback([&] {
        const TomlLite toml = TomlLite::parse_file(eah_config);
        const int m = static_cast<int>(toml.number_or("eah", "m", 1));
        const int n = static_cast<int>(toml.number_or("eah", "n", 1));
        const Dimensions dims{m, n};
        EahConfig cfg;
        const std::vector<double> a_entries = toml.numbers("eah", "A");
        if (a_entries.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n))
            throw std::invalid_argument("eah config: A must list m*n entries");
        cfg.A = Matrix(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                cfg.A(i, j) = a_entries[static_cast<std::size_t>(i * n + j)];
        const std::vector<double> xs = toml.numbers("eah", "x");
        const std::vector<double> ys = toml.numbers("eah", "y");
        if (xs.size() != static_cast<std::size_t>(m) || ys.size() != static_cast<std::size_t>(m))
            throw std::invalid_argument("eah config: x and y must list m entries");
        cfg.x = Vector(m);
        cfg.y = Vector(m);
        for (int i = 0; i < m; ++i) {
            cfg.x(i) = xs[static_cast<std::size_t>(i)];
            cfg.y(i) = ys[static_cast<std::size_t>(i)];
        }
        cfg.N_max = static_cast<long>(toml.number("eah", "N_max"));
        cfg.radius = radius_sequence_from_config(toml, cfg.N_max);
        const EahReport report = eah_check(cfg, dims);
        std::cout << eah_report_json(report, cfg, m, n) << '\n';
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const gridtargets::enum_budget_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
