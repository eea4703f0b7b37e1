// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "basisrisk/stats.hpp"

namespace basisrisk::stats {

std::string_view to_string(DecayModel m) {
    switch (m) {
        case DecayModel::shifted_inverse: return "shifted_inverse";
        case DecayModel::scaled_inverse: return "scaled_inverse";
        case DecayModel::power: return "power";
    }
    return "unknown";
}

std::optional<DecayModel> parse_decay_model(std::string_view name) {
    if (name == "shifted_inverse") return DecayModel::shifted_inverse;
    if (name == "scaled_inverse") return DecayModel::scaled_inverse;
    if (name == "power") return DecayModel::power;
    return std::nullopt;
}

double decay_value(DecayModel model, const Params& p, double x) {
    switch (model) {
        case DecayModel::shifted_inverse: return p[0] / (x + p[1]) + p[2];
        case DecayModel::scaled_inverse: return p[0] / (p[1] * x) + p[2];
        case DecayModel::power: return p[0] * std::pow(x, -p[1]) + p[2];
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

// df/dp at x.
Params decay_jacobian_row(DecayModel model, const Params& p, double x) {
    switch (model) {
        case DecayModel::shifted_inverse: {
            const double inv = 1.0 / (x + p[1]);
            return {inv, -p[0] * inv * inv, 1.0};
        }
        case DecayModel::scaled_inverse: {
            const double inv = 1.0 / (p[1] * x);
            return {inv, -p[0] * inv / p[1], 1.0};
        }
        case DecayModel::power: {
            const double xp = std::pow(x, -p[1]);
            return {xp, -p[0] * xp * std::log(x), 1.0};
        }
    }
    return {0.0, 0.0, 0.0};
}

bool in_domain(DecayModel model, const Params& p, double min_x) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) return false;
    switch (model) {
        case DecayModel::shifted_inverse: return min_x + p[1] > 0.0;
        case DecayModel::scaled_inverse: return p[1] != 0.0;
        case DecayModel::power: return true;
    }
    return false;
}

// Solves A d = g for symmetric positive definite 3x3 A. False if A is not
// numerically positive definite.
bool cholesky_solve3(std::array<std::array<double, 3>, 3> a, Params g, Params& d) {
    for (int j = 0; j < 3; ++j) {
        double s = a[j][j];
        for (int k = 0; k < j; ++k) s -= a[j][k] * a[j][k];
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        a[j][j] = std::sqrt(s);
        for (int i = j + 1; i < 3; ++i) {
            double t = a[i][j];
            for (int k = 0; k < j; ++k) t -= a[i][k] * a[j][k];
            a[i][j] = t / a[j][j];
        }
    }
    for (int i = 0; i < 3; ++i) {
        double t = g[i];
        for (int k = 0; k < i; ++k) t -= a[i][k] * g[k];
        g[i] = t / a[i][i];
    }
    for (int i = 2; i >= 0; --i) {
        double t = g[i];
        for (int k = i + 1; k < 3; ++k) t -= a[k][i] * g[k];
        g[i] = t / a[i][i];
    }
    d = g;
    return true;
}

double norm3(const Params& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

Params default_initial_guess(std::span<const double> x, std::span<const double> y) {
    const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
    const double xmin = *std::min_element(x.begin(), x.end());
    return {(*yhi - *ylo) * (xmin + 1.0), 1.0, *ylo};
}

double decay_ssr(DecayModel model, std::span<const double> x, std::span<const double> y,
                 const Params& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - decay_value(model, p, x[i]);
        s += r * r;
    }
    return s;
}

Params decay_ssr_gradient(DecayModel model, std::span<const double> x,
                          std::span<const double> y, const Params& p) {
    Params g{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - decay_value(model, p, x[i]);
        const Params j = decay_jacobian_row(model, p, x[i]);
        for (int k = 0; k < 3; ++k) g[k] -= 2.0 * r * j[k];
    }
    return g;
}

FitResult fit_decay(std::span<const double> x, std::span<const double> y,
                    std::optional<Params> init, const FitOptions& opts) {
    if (x.size() != y.size()) throw std::invalid_argument("fit: length mismatch");
    if (x.size() < 4) throw std::invalid_argument("fit: needs at least 4 points");
    const double min_x = *std::min_element(x.begin(), x.end());
    if (!(min_x > 0.0)) throw std::invalid_argument("fit: all x must be > 0");

    Params p = init.value_or(default_initial_guess(x, y));
    if (!in_domain(opts.model, p, min_x))
        throw std::invalid_argument("fit: initial guess outside the model domain "
                                    "(shifted_inverse needs b > -min(x))");

    const std::size_t n = x.size();
    FitResult out;
    out.model = opts.model;
    double ssr = decay_ssr(opts.model, x, y, p);
    double lambda = 1e-3;

    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        std::array<std::array<double, 3>, 3> jtj{};
        Params jtr{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const Params j = decay_jacobian_row(opts.model, p, x[i]);
            const double r = y[i] - decay_value(opts.model, p, x[i]);
            for (int a = 0; a < 3; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        if (2.0 * norm3(jtr) < opts.grad_tol) {
            out.converged = true;
            break;
        }
        const double dmax = std::max({jtj[0][0], jtj[1][1], jtj[2][2]});
        bool accepted = false;
        while (lambda < 1e16) {
            auto a = jtj;
            for (int k = 0; k < 3; ++k) a[k][k] += lambda * std::max(jtj[k][k], 1e-12 * dmax);
            Params step;
            if (cholesky_solve3(a, jtr, step)) {
                const Params trial{p[0] + step[0], p[1] + step[1], p[2] + step[2]};
                if (in_domain(opts.model, trial, min_x)) {
                    const double trial_ssr = decay_ssr(opts.model, x, y, trial);
                    if (std::isfinite(trial_ssr) && trial_ssr < ssr) {
                        const double rel = (ssr - trial_ssr) / std::max(ssr, 1e-300);
                        p = trial;
                        ssr = trial_ssr;
                        lambda = std::max(lambda * 0.1, 1e-12);
                        accepted = true;
                        if (rel < opts.ssr_rel_tol) out.converged = true;
                        break;
                    }
                }
            }
            lambda *= 10.0;
        }
        out.iterations = iter + 1;
        if (!accepted) {
            // No damped step lowers SSR: the change has hit zero.
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }

    out.a = p[0];
    out.b = p[1];
    out.c = p[2];
    out.ssr = ssr;
    const double my = mean(y);
    double sst = 0.0;
    for (double v : y) sst += (v - my) * (v - my);
    out.r_squared = sst > 0.0 ? 1.0 - ssr / sst : (ssr == 0.0 ? 1.0 : 0.0);
    return out;
}

}  // namespace basisrisk::stats
