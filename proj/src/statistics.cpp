#include "edvkit/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edvkit/error.hpp"
#include "edvkit/numeric.hpp"

namespace edvkit {

namespace {

constexpr double kAlpha = 0.05;

void check_vector(const std::vector<double>& v, std::size_t n, const char* what) {
    if (v.size() != n) throw NumericError(std::string(what) + ": length mismatch");
    double first = v.empty() ? 0.0 : v.front();
    bool constant = true;
    for (double x : v)
        if (x != first) {
            constant = false;
            break;
        }
    if (constant) throw NumericError(std::string(what) + ": constant vector");
}

// Two-sided exact permutation p-value for small n.
double spearman_exact_p(const std::vector<double>& rx, const std::vector<double>& ry,
                        double rho_obs) {
    std::vector<std::size_t> perm(ry.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> permuted(ry.size());
    std::size_t hits = 0, total = 0;
    const double threshold = std::abs(rho_obs) - 1e-12;
    do {
        for (std::size_t i = 0; i < perm.size(); ++i) permuted[i] = ry[perm[i]];
        if (std::abs(pearson(rx, permuted)) >= threshold) ++hits;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

CorrelationResult finish_correlation(double rho, std::size_t n, std::size_t k,
                                     std::vector<std::string> covariate_names,
                                     const std::vector<double>* rank_x = nullptr,
                                     const std::vector<double>* rank_y = nullptr) {
    CorrelationResult r;
    r.rho = rho;
    r.n = n;
    r.covariates = std::move(covariate_names);
    r.rho_squared = rho * rho;
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    r.adj_rho_squared = 1.0 - (1.0 - r.rho_squared) * (nd - 1.0) / (nd - kd - 2.0);

    const double dof = nd - 2.0 - kd;
    if (k == 0 && n < 10 && rank_x && rank_y) {
        r.p_value = spearman_exact_p(*rank_x, *rank_y, rho);
    } else if (std::abs(rho) >= 1.0 - 1e-15) {
        r.p_value = 0.0;
    } else {
        double t = rho * std::sqrt(dof / (1.0 - rho * rho));
        r.p_value = t_sf_two_sided(t, dof);
    }

    const double m = nd - kd;  // effective sample size for CI and power
    if (m > 3.0) {
        double z = std::atanh(std::clamp(rho, -1.0 + 1e-15, 1.0 - 1e-15));
        double half = norm_ppf(1.0 - kAlpha / 2.0) / std::sqrt(m - 3.0);
        r.ci95 = {std::tanh(z - half), std::tanh(z + half)};
        r.power = correlation_power(rho, static_cast<std::size_t>(m));
    } else {
        r.ci95 = {-1.0, 1.0};
        r.power = 0.0;
    }
    return r;
}

}  // namespace

double correlation_power(double rho, std::size_t n_eff) {
    if (n_eff <= 3) return 0.0;
    const double m = static_cast<double>(n_eff);
    double r = std::clamp(std::abs(rho), 0.0, 1.0 - 1e-15);
    double zr = std::atanh(r) + r / (2.0 * (m - 1.0));
    double za = norm_ppf(1.0 - kAlpha / 2.0);
    double s = std::sqrt(m - 3.0);
    return norm_cdf(zr * s - za) + norm_cdf(-zr * s - za);
}

CorrelationResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw NumericError("spearman: length mismatch");
    if (x.size() < 4) throw NumericError("spearman: need n >= 4");
    check_vector(x, x.size(), "spearman x");
    check_vector(y, y.size(), "spearman y");
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    double rho = pearson(rx, ry);
    return finish_correlation(rho, x.size(), 0, {}, &rx, &ry);
}

CorrelationResult partial_spearman(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::vector<std::vector<double>>& covariates,
                                   const std::vector<std::string>& covariate_names) {
    if (covariates.empty()) return spearman(x, y);
    const std::size_t n = x.size();
    const std::size_t k = covariates.size();
    if (n <= k + 3) throw NumericError("partial_spearman: need n > #covariates + 3");
    check_vector(x, n, "partial x");
    check_vector(y, n, "partial y");

    std::vector<std::vector<double>> ranked;
    ranked.push_back(average_ranks(x));
    ranked.push_back(average_ranks(y));
    for (std::size_t i = 0; i < k; ++i) {
        check_vector(covariates[i], n, "partial covariate");
        ranked.push_back(average_ranks(covariates[i]));
    }

    const std::size_t dim = ranked.size();
    std::vector<std::vector<double>> corr(dim, std::vector<double>(dim, 1.0));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            corr[i][j] = corr[j][i] = pearson(ranked[i], ranked[j]);

    std::vector<std::vector<double>> prec;
    try {
        prec = invert_matrix(corr);
    } catch (const NumericError&) {
        throw NumericError("partial_spearman: singular covariate correlation matrix");
    }
    double rho = -prec[0][1] / std::sqrt(prec[0][0] * prec[1][1]);
    rho = std::clamp(rho, -1.0, 1.0);

    std::vector<std::string> names = covariate_names;
    while (names.size() < k) names.push_back("cov" + std::to_string(names.size() + 1));
    return finish_correlation(rho, n, k, std::move(names));
}

NormalityResult shapiro_wilk(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 3 || n > 5000) throw NumericError("shapiro_wilk: n must be in [3, 5000]");
    check_vector(x, n, "shapiro_wilk");

    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());

    // AS R94 (Royston 1995) coefficients.
    const std::size_t n2 = n / 2;
    std::vector<double> a(n2);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        double an25 = static_cast<double>(n) + 0.25;
        double summ2 = 0.0;
        for (std::size_t i = 0; i < n2; ++i) {
            a[i] = norm_ppf((static_cast<double>(i + 1) - 0.375) / an25);
            summ2 += a[i] * a[i];
        }
        summ2 *= 2.0;
        double ssumm2 = std::sqrt(summ2);
        double rsn = 1.0 / std::sqrt(static_cast<double>(n));
        auto poly = [](const double* c, int order, double v) {
            double acc = 0.0;
            for (int i = order - 1; i >= 0; --i) acc = acc * v + c[i];
            return acc;
        };
        static const double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
        static const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
        double a1 = poly(c1, 6, rsn) - a[0] / ssumm2;
        std::size_t i1;
        double fac;
        if (n > 5) {
            i1 = 2;
            double a2 = -a[1] / ssumm2 + poly(c2, 6, rsn);
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        } else {
            i1 = 1;
            fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (std::size_t i = i1; i < n2; ++i) a[i] = -a[i] / fac;
    }

    double xbar = mean(sorted);
    double ssq = 0.0;
    for (double v : sorted) ssq += (v - xbar) * (v - xbar);
    double sax = 0.0;
    for (std::size_t i = 0; i < n2; ++i) sax += a[i] * (sorted[n - 1 - i] - sorted[i]);
    double w = sax * sax / ssq;
    w = std::min(w, 1.0);

    NormalityResult res;
    res.w = w;
    const double an = static_cast<double>(n);
    if (n == 3) {
        const double pi6 = 6.0 / M_PI;
        const double stqr = std::asin(std::sqrt(0.75));
        res.p_value = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
    } else {
        double y = std::log1p(-w);  // log(1 - W)
        double mu, sigma;
        if (n <= 11) {
            double gamma = -2.273 + 0.459 * an;
            y = -std::log(gamma - y);
            mu = 0.5440 - 0.39978 * an + 0.025054 * an * an - 0.0006714 * an * an * an;
            sigma = std::exp(1.3822 - 0.77857 * an + 0.062767 * an * an -
                             0.0020322 * an * an * an);
        } else {
            double ln = std::log(an);
            mu = -1.5861 - 0.31082 * ln - 0.083751 * ln * ln + 0.0038915 * ln * ln * ln;
            sigma = std::exp(-0.4803 - 0.082676 * ln + 0.0030302 * ln * ln);
        }
        res.p_value = 1.0 - norm_cdf((y - mu) / sigma);
    }
    res.normal_at_005 = res.p_value >= 0.05;
    return res;
}

namespace {

StageFit fit_stage(const std::vector<double>& target, const FitStage& stage) {
    const std::size_t n = target.size();
    if (stage.covariate.size() != n)
        throw NumericError("background_removal: covariate length mismatch");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = stage.covariate[i];
        if (stage.family == FitFamily::log_linear) {
            if (v <= 0.0)
                throw NumericError("background_removal: log stage '" + stage.covariate_name +
                                   "' needs positive covariate at sample " + std::to_string(i));
            v = std::log(v);
        }
        x[i] = v;
    }
    double mx = mean(x), mt = mean(target);
    double sxx = 0.0, sxt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxt += (x[i] - mx) * (target[i] - mt);
    }
    StageFit fit;
    fit.covariate_name = stage.covariate_name;
    fit.family = stage.family;
    fit.slope = sxx == 0.0 ? 0.0 : sxt / sxx;
    fit.intercept = mt - fit.slope * mx;
    return fit;
}

double stage_predict(const StageFit& fit, double covariate_value) {
    double v = fit.family == FitFamily::log_linear ? std::log(covariate_value)
                                                   : covariate_value;
    return fit.intercept + fit.slope * v;
}

}  // namespace

BackgroundRemovalResult background_removal(const std::vector<double>& target,
                                           const std::vector<FitStage>& stages) {
    BackgroundRemovalResult res;
    res.normalized_target = target;
    for (const FitStage& stage : stages) {
        StageFit fit = fit_stage(res.normalized_target, stage);
        for (std::size_t i = 0; i < res.normalized_target.size(); ++i) {
            double pred = stage_predict(fit, stage.covariate[i]);
            if (pred <= 0.0)
                throw NumericError("background_removal: stage '" + stage.covariate_name +
                                   "' predicts " + std::to_string(pred) + " at sample " +
                                   std::to_string(i));
            res.normalized_target[i] /= pred;
        }
        res.fits.push_back(fit);
    }
    return res;
}

namespace {

// R^2 of an OLS fit (with intercept) restricted to the predictor subset
// encoded by bitmask `subset`.
double subset_r2(const std::vector<double>& y,
                 const std::vector<std::vector<double>>& preds, unsigned subset) {
    const std::size_t n = y.size();
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < preds.size(); ++j)
        if (subset & (1u << j)) cols.push_back(j);
    const std::size_t p = cols.size();
    if (p == 0) return 0.0;

    // Normal equations on [1 | X_subset].
    const std::size_t d = p + 1;
    std::vector<std::vector<double>> xtx(d, std::vector<double>(d, 0.0));
    std::vector<double> xty(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(d);
        row[0] = 1.0;
        for (std::size_t j = 0; j < p; ++j) row[j + 1] = preds[cols[j]][i];
        for (std::size_t a = 0; a < d; ++a) {
            xty[a] += row[a] * y[i];
            for (std::size_t b = 0; b < d; ++b) xtx[a][b] += row[a] * row[b];
        }
    }
    std::vector<double> beta = solve_linear(xtx, xty);
    double my = mean(y), sst = 0.0, ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = beta[0];
        for (std::size_t j = 0; j < p; ++j) pred += beta[j + 1] * preds[cols[j]][i];
        ssr += (y[i] - pred) * (y[i] - pred);
        sst += (y[i] - my) * (y[i] - my);
    }
    if (sst == 0.0) throw NumericError("ols: constant response");
    return 1.0 - ssr / sst;
}

}  // namespace

RegressionResult ols_regression(
    const std::vector<double>& y,
    const std::vector<std::pair<std::string, std::vector<double>>>& predictors) {
    const std::size_t n = y.size();
    const std::size_t p = predictors.size();
    if (p == 0) throw NumericError("ols: no predictors");
    if (p > 6) throw NumericError("ols: at most 6 predictors supported");
    if (n <= p + 1) throw NumericError("ols: need n > p + 1");
    for (const auto& [name, v] : predictors)
        if (v.size() != n)
            throw NumericError("ols: predictor '" + name + "' length mismatch");

    // Full fit with coefficient covariance.
    const std::size_t d = p + 1;
    std::vector<std::vector<double>> xtx(d, std::vector<double>(d, 0.0));
    std::vector<double> xty(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(d);
        row[0] = 1.0;
        for (std::size_t j = 0; j < p; ++j) row[j + 1] = predictors[j].second[i];
        for (std::size_t a = 0; a < d; ++a) {
            xty[a] += row[a] * y[i];
            for (std::size_t b = 0; b < d; ++b) xtx[a][b] += row[a] * row[b];
        }
    }
    std::vector<std::vector<double>> xtx_inv;
    try {
        xtx_inv = invert_matrix(xtx);
    } catch (const NumericError&) {
        throw NumericError("ols: rank-deficient design matrix");
    }
    std::vector<double> beta(d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) beta[a] += xtx_inv[a][b] * xty[b];

    double my = mean(y), sst = 0.0, ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = beta[0];
        for (std::size_t j = 0; j < p; ++j) pred += beta[j + 1] * predictors[j].second[i];
        ssr += (y[i] - pred) * (y[i] - pred);
        sst += (y[i] - my) * (y[i] - my);
    }
    if (sst == 0.0) throw NumericError("ols: constant response");

    RegressionResult res;
    res.n = n;
    res.r_squared = 1.0 - ssr / sst;
    const double nd = static_cast<double>(n), pd = static_cast<double>(p);
    res.adj_r_squared = 1.0 - (1.0 - res.r_squared) * (nd - 1.0) / (nd - pd - 1.0);

    const double dof = nd - pd - 1.0;
    const double sigma2 = ssr / dof;
    auto coef = [&](std::size_t idx, const std::string& name) {
        RegressionResult::Coefficient c;
        c.name = name;
        c.estimate = beta[idx];
        double se = std::sqrt(sigma2 * xtx_inv[idx][idx]);
        c.p_value = se == 0.0 ? 0.0 : t_sf_two_sided(beta[idx] / se, dof);
        return c;
    };
    res.intercept = coef(0, "intercept");
    for (std::size_t j = 0; j < p; ++j)
        res.coefficients.push_back(coef(j + 1, predictors[j].first));

    // LMG: average sequential R^2 contribution over all p! orderings,
    // with R^2 cached per predictor subset.
    std::vector<std::vector<double>> cols;
    for (const auto& [name, v] : predictors) cols.push_back(v);
    std::vector<double> r2_cache(1u << p, -1.0);
    auto r2_of = [&](unsigned subset) {
        if (r2_cache[subset] < 0.0) r2_cache[subset] = subset_r2(y, cols, subset);
        return r2_cache[subset];
    };
    std::vector<double> share(p, 0.0);
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::size_t n_orders = 0;
    do {
        unsigned subset = 0;
        for (std::size_t j : order) {
            double before = r2_of(subset);
            subset |= 1u << j;
            share[j] += r2_of(subset) - before;
        }
        ++n_orders;
    } while (std::next_permutation(order.begin(), order.end()));
    for (std::size_t j = 0; j < p; ++j) {
        double pct = share[j] / static_cast<double>(n_orders) / res.r_squared * 100.0;
        res.relative_importance.emplace_back(predictors[j].first, pct);
    }
    return res;
}

double skew_normal_pdf(double x, double location, double scale, double shape) {
    double z = (x - location) / scale;
    double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    return 2.0 / scale * phi * norm_cdf(shape * z);
}

namespace {

struct SkewFitContext {
    const std::vector<double>* centers;
    const std::vector<double>* density;
};

double skew_fit_objective(const std::vector<double>& params, void* raw) {
    auto* ctx = static_cast<SkewFitContext*>(raw);
    double loc = params[0], log_scale = params[1], shape = params[2];
    double scale = std::exp(log_scale);
    double sse = 0.0;
    for (std::size_t i = 0; i < ctx->centers->size(); ++i) {
        double diff = skew_normal_pdf((*ctx->centers)[i], loc, scale, shape) -
                      (*ctx->density)[i];
        sse += diff * diff;
    }
    return sse;
}

}  // namespace

SkewNormalFit skew_normal_fit(const std::vector<double>& samples, int n_bins) {
    const std::size_t n = samples.size();
    if (n < 20) throw NumericError("skew_normal_fit: need n >= 20");
    if (n_bins < 4) throw NumericError("skew_normal_fit: need at least 4 bins");
    double sample_mean = mean(samples);
    double sample_sd = stdev(samples);
    if (sample_sd < 1e-12) throw NumericError("skew_normal_fit: degenerate sample");

    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it, hi = *hi_it;
    double width = (hi - lo) / n_bins;
    if (width <= 0.0) throw NumericError("skew_normal_fit: degenerate sample");

    std::vector<double> counts(n_bins, 0.0), centers(n_bins), density(n_bins);
    for (double v : samples) {
        int b = std::min(n_bins - 1, static_cast<int>((v - lo) / width));
        counts[b] += 1.0;
    }
    for (int b = 0; b < n_bins; ++b) {
        centers[b] = lo + (b + 0.5) * width;
        density[b] = counts[b] / (static_cast<double>(n) * width);
    }

    // Moment-based starting point.
    double skew = 0.0;
    for (double v : samples) skew += std::pow((v - sample_mean) / sample_sd, 3.0);
    skew /= static_cast<double>(n);
    double abs_skew = std::min(std::abs(skew), 0.99);
    double c = std::pow(abs_skew, 2.0 / 3.0);
    double delta2 = M_PI / 2.0 * c / (c + std::pow((4.0 - M_PI) / 2.0, 2.0 / 3.0));
    double delta = std::copysign(std::sqrt(std::min(delta2, 0.98)), skew);
    double alpha0 = delta / std::sqrt(1.0 - delta * delta);
    double omega0 = sample_sd / std::sqrt(1.0 - 2.0 * delta * delta / M_PI);
    double xi0 = sample_mean - omega0 * delta * std::sqrt(2.0 / M_PI);

    SkewFitContext ctx{&centers, &density};
    std::vector<double> best = nelder_mead({xi0, std::log(omega0), alpha0}, 0.2, 4000,
                                           1e-14, skew_fit_objective, &ctx);
    double loc = best[0], scale = std::exp(best[1]), shape = best[2];
    if (!std::isfinite(loc) || !std::isfinite(scale) || !std::isfinite(shape) ||
        scale <= 0.0)
        throw NumericError("skew_normal_fit: fit did not converge (non-finite parameters)");

    SkewNormalFit fit;
    fit.location = loc;
    fit.scale = scale;
    fit.shape = shape;
    double d = shape / std::sqrt(1.0 + shape * shape);
    fit.fitted_mean = loc + scale * d * std::sqrt(2.0 / M_PI);
    fit.fitted_sd = scale * std::sqrt(1.0 - 2.0 * d * d / M_PI);

    double chi2 = 0.0;
    int used = 0;
    for (int b = 0; b < n_bins; ++b) {
        double expected = skew_normal_pdf(centers[b], loc, scale, shape) * width *
                          static_cast<double>(n);
        if (expected < 1.0) continue;
        chi2 += (counts[b] - expected) * (counts[b] - expected) / expected;
        ++used;
    }
    if (used < 4)
        throw NumericError("skew_normal_fit: only " + std::to_string(used) +
                           " bins with expected count >= 1; need >= 4");
    fit.chi2 = chi2;
    fit.bins_used = used;
    fit.p_value = chi2_sf(chi2, static_cast<double>(used - 3));
    return fit;
}

}  // namespace edvkit
