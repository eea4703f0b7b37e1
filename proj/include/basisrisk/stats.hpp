// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace basisrisk::stats {

/// Product-moment correlation. Throws std::invalid_argument for length
/// mismatch, fewer than 3 points or zero variance in either input.
double pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ssr = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. A constant x yields a
/// zero slope.
LinearFit ols(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 divisor); 0 for a single value.
double sample_stdev(std::span<const double> v);

// ---------------------------------------------------------------------------
// Inverse-proportional decay fits
// ---------------------------------------------------------------------------

/// Three-parameter decay curves.
///   shifted_inverse:  a / (x + b) + c   (default)
///   scaled_inverse:   a / (b * x) + c   (a and b enter only as a / b)
///   power:            a * x^(-b) + c
enum class DecayModel { shifted_inverse, scaled_inverse, power };

std::string_view to_string(DecayModel m);
std::optional<DecayModel> parse_decay_model(std::string_view name);

using Params = std::array<double, 3>;

double decay_value(DecayModel model, const Params& p, double x);

struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double r_squared = 0.0;
    double ssr = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    DecayModel model = DecayModel::shifted_inverse;

    Params params() const { return {a, b, c}; }
};

struct FitOptions {
    DecayModel model = DecayModel::shifted_inverse;
    std::size_t max_iterations = 500;
    double ssr_rel_tol = 1e-10;
    double grad_tol = 1e-10;
};

/// a = (max y - min y) * min(x + 1), b = 1, c = min y.
Params default_initial_guess(std::span<const double> x, std::span<const double> y);

double decay_ssr(DecayModel model, std::span<const double> x, std::span<const double> y,
                 const Params& p);
/// Analytic gradient of the sum of squared residuals.
Params decay_ssr_gradient(DecayModel model, std::span<const double> x,
                          std::span<const double> y, const Params& p);

/// Levenberg-Marquardt minimisation of sum (y - f(x))^2. Non-convergence
/// is reported through FitResult::converged. Throws std::invalid_argument
/// for fewer than 4 points, non-positive x, or an initial b that puts a
/// pole inside the data (shifted_inverse: b <= -min x).
FitResult fit_decay(std::span<const double> x, std::span<const double> y,
                    std::optional<Params> init = std::nullopt, const FitOptions& opts = {});

inline FitResult fit_inverse_proportional(std::span<const double> x, std::span<const double> y,
                                          std::optional<Params> init = std::nullopt) {
    return fit_decay(x, y, init, {});
}

// ---------------------------------------------------------------------------
// Two-regime threshold regression
// ---------------------------------------------------------------------------

struct ThresholdFit {
    double tau = 0.0;
    double low_slope = 0.0;
    double low_intercept = 0.0;
    double high_slope = 0.0;
    double high_intercept = 0.0;
    double r2_low = 0.0;
    double r2_high = 0.0;
    double p_value = 1.0;
    double sup_f = 0.0;
    double ssr_linear = 0.0;
    double ssr_split = 0.0;
    std::size_t n_low = 0;
    std::size_t n_high = 0;
    std::size_t candidates = 0;
};

struct ThresholdOptions {
    double trim = 0.1;
    std::size_t bootstrap_reps = 500;
    std::size_t min_regime = 5;
    std::uint64_t seed = 0;
    /// Per-call salt for the bootstrap substreams, so two regressions in
    /// one run do not share replicate draws.
    std::uint64_t stream_key = 0;
    unsigned threads = 1;
};

/// Grid search of the split x <= tau over distinct observed x inside the
/// [trim, 1 - trim] quantile range, minimising the pooled SSR of separate
/// OLS lines. The p-value is the fraction of residual-bootstrap replicates
/// under the single-line null whose sup-F statistic reaches the observed
/// one. Throws std::invalid_argument for fewer than 20 points, trim outside
/// (0, 0.25], all-equal x, or when no candidate leaves min_regime points on
/// both sides.
ThresholdFit threshold_regression(std::span<const double> x, std::span<const double> y,
                                  const ThresholdOptions& opts = {});

// ---------------------------------------------------------------------------
// Binned summaries
// ---------------------------------------------------------------------------

struct BinSummary {
    double bin_low = 0.0;
    double bin_high = 0.0;
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Bins [origin + k * width, origin + (k + 1) * width); only nonempty bins
/// are returned, ordered by bin_low.
std::vector<BinSummary> bin_summary(std::span<const double> x, std::span<const double> y,
                                    double width, double origin = 0.0);

}  // namespace basisrisk::stats
