#pragma once

#include "gridtargets/types.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gridtargets {

/// psi(T) = C * (log T)^b * T^{-a}
struct PowerLogForm {
    double C = 1.0;
    double a = 1.0;
    double b = 0.0;
};

/// psi(T) = (1 - a * T^{-tau}) / T
struct OneMinusPowerForm {
    double a = 1.0;
    double tau = 1.0;
};

/// Breakpoints (T, psi(T)) with log-linear interpolation; extended past the
/// last breakpoint by the final slope, clamped to non-increasing.
struct TabulatedForm {
    std::vector<std::pair<double, double>> points;
};

/// A positive non-increasing approximation rate on [T0, infinity).
/// Monotonicity and positivity are validated at construction.
class ApproxProfile {
  public:
    using Form = std::variant<PowerLogForm, OneMinusPowerForm, TabulatedForm>;

    static ApproxProfile power_log(double C, double a, double b, double T0);
    static ApproxProfile one_minus_power(double a, double tau, double T0);
    static ApproxProfile tabulated(std::vector<std::pair<double, double>> points);

    double T0() const { return T0_; }
    const Form& form() const { return form_; }

    /// psi(T). Arguments below T0 evaluate at T0 (constant left extension).
    double operator()(double T) const { return std::exp(log_psi(std::log(T))); }

    /// log psi(e^logT); safe for very large logT.
    double log_psi(double logT) const;

    /// Short human-readable description, e.g. "powerlog:C=1,a=1,b=0,T0=2".
    std::string describe() const;

  private:
    ApproxProfile(Form form, double T0) : form_(std::move(form)), T0_(T0) {}
    Form form_;
    double T0_ = 2.0;
};

/// Parse the CLI profile grammar:
///   powerlog:C=1,a=1,b=2,T0=2
///   oneminus:a=0.5,tau=1,T0=4
///   table:@path.csv           (two-column CSV, header "T,psi")
ApproxProfile parse_profile(const std::string& spec);

/// The change of variables z_psi solving psi(e^{t+n z}) = e^{-t+m z}.
/// Immutable after construction; evaluations are pure and thread-safe.
class DaniFunction {
  public:
    struct Options {
        double bisection_tol = 1e-12;
        double initial_bracket_step = 1.0;
    };

    DaniFunction(ApproxProfile profile, Dimensions dims);
    DaniFunction(ApproxProfile profile, Dimensions dims, Options options);

    double t0() const { return t0_; }
    const ApproxProfile& profile() const { return profile_; }
    const Dimensions& dims() const { return dims_; }

    /// The unique root z of psi(e^{t+n z}) - e^{-t+m z} for t >= t0.
    double z(double t) const;

    /// The unique t with t + n*z(t) = log T, for T >= T0.
    double t_of_T(double T) const;

  private:
    ApproxProfile profile_;
    Dimensions dims_;
    Options options_;
    double t0_ = 0.0;
};

inline DaniFunction dani_build(ApproxProfile profile, const Dimensions& dims) {
    return DaniFunction(std::move(profile), dims);
}

struct DaniPropertyReport {
    bool t_plus_nz_strictly_increasing = true;
    bool t_minus_mz_nondecreasing = true;
    bool oscillation_bounds_hold = true;
    std::vector<std::string> notes;

    bool all_ok() const {
        return t_plus_nz_strictly_increasing && t_minus_mz_nondecreasing &&
               oscillation_bounds_hold;
    }
};

/// Checks on a sorted grid: t + n z(t) strictly increasing, t - m z(t)
/// nondecreasing, and the oscillation bounds
/// z(s) - 1/m <= z(u) <= z(s) + 1/n for s <= u <= s+1.
DaniPropertyReport verify_dani_properties(const DaniFunction& dani,
                                          const std::vector<double>& t_grid);

}  // namespace gridtargets
