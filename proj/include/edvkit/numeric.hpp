#pragma once

#include <cstddef>
#include <vector>

namespace edvkit {

double norm_cdf(double x);
double norm_ppf(double p);
// Two-sided p-value for a t statistic with df degrees of freedom.
double t_sf_two_sided(double t, double df);
// Upper tail of the chi-squared distribution.
double chi2_sf(double x, double df);

double mean(const std::vector<double>& x);
// ddof=1 sample standard deviation.
double stdev(const std::vector<double>& x);

// Average ranks (ties get the mean of the ranks they span), 1-based.
std::vector<double> average_ranks(const std::vector<double>& x);

// Pearson correlation; NumericError on constant input.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Solves A x = b in place for a small dense system (partial pivoting).
// NumericError if singular.
std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                 std::vector<double> b);

// Inverse of a small dense matrix; NumericError if singular.
std::vector<std::vector<double>> invert_matrix(std::vector<std::vector<double>> a);

// Nelder-Mead simplex minimization. Returns the best point found;
// NumericError if the objective is non-finite at the start.
std::vector<double> nelder_mead(const std::vector<double>& start,
                                double initial_step,
                                int max_iter,
                                double tol,
                                double (*objective)(const std::vector<double>&, void*),
                                void* ctx);

}  // namespace edvkit
