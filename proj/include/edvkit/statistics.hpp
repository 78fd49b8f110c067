#pragma once

#include <string>
#include <utility>
#include <vector>

namespace edvkit {

struct CorrelationResult {
    double rho = 0.0;
    std::size_t n = 0;
    std::pair<double, double> ci95{0.0, 0.0};
    double rho_squared = 0.0;
    double adj_rho_squared = 0.0;
    double p_value = 1.0;
    double power = 0.0;
    std::vector<std::string> covariates;
};

struct RegressionResult {
    struct Coefficient {
        std::string name;
        double estimate = 0.0;
        double p_value = 1.0;
    };
    std::vector<Coefficient> coefficients;  // predictors, in input order
    Coefficient intercept;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    std::vector<std::pair<std::string, double>> relative_importance;  // percent of R^2
    std::size_t n = 0;
};

struct NormalityResult {
    double w = 0.0;
    double p_value = 0.0;
    bool normal_at_005 = false;
};

enum class FitFamily { linear, log_linear };

struct FitStage {
    std::string covariate_name;
    FitFamily family = FitFamily::linear;
    std::vector<double> covariate;
};

struct StageFit {
    std::string covariate_name;
    FitFamily family;
    double slope = 0.0;
    double intercept = 0.0;
};

struct BackgroundRemovalResult {
    std::vector<double> normalized_target;
    std::vector<StageFit> fits;
};

struct SkewNormalFit {
    double location = 0.0;
    double scale = 1.0;
    double shape = 0.0;
    double fitted_mean = 0.0;
    double fitted_sd = 0.0;
    double chi2 = 0.0;
    double p_value = 0.0;
    int bins_used = 0;
};

// Spearman's rho with t-based p-value (exact permutation enumeration below
// n = 10), Fisher-z CI95, post-hoc power at alpha = 0.05, and adjusted rho^2.
CorrelationResult spearman(const std::vector<double>& x, const std::vector<double>& y);

// Rank-transform everything, then partial Pearson via correlation-matrix
// inversion. Degrees of freedom shrink by the number of covariates.
CorrelationResult partial_spearman(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::vector<std::vector<double>>& covariates,
                                   const std::vector<std::string>& covariate_names = {});

// Royston's approximation of the Shapiro-Wilk W test, 3 <= n <= 5000.
NormalityResult shapiro_wilk(const std::vector<double>& x);

// Sequentially fits target against each stage covariate and divides by the
// predicted values. Throws NumericError when a fit predicts <= 0.
BackgroundRemovalResult background_removal(const std::vector<double>& target,
                                           const std::vector<FitStage>& stages);

// OLS with intercept, coefficient t-tests, and LMG relative importance
// (average sequential R^2 contribution over all predictor orderings).
RegressionResult ols_regression(const std::vector<double>& y,
                                const std::vector<std::pair<std::string, std::vector<double>>>& predictors);

// Least-squares fit of the skew-normal density to a normalized histogram of
// the samples, with a chi-squared goodness of fit (dof = bins_used - 3).
SkewNormalFit skew_normal_fit(const std::vector<double>& samples, int n_bins);

// Skew-normal density, exposed for tests and reporting.
double skew_normal_pdf(double x, double location, double scale, double shape);

// Post-hoc power of a correlation test at alpha = 0.05 (two-sided Fisher-z
// approximation with small-sample bias term); n_eff = n - #covariates.
double correlation_power(double rho, std::size_t n_eff);

}  // namespace edvkit
