#pragma once
#include <functional>

namespace randcurve {

double normal_cdf(double x);
double normal_sf(double x);  // upper tail, cancellation-free for large x
double normal_pdf(double x);

// regularized lower incomplete gamma P(a, x)
double gamma_p(double a, double x);

// chi-squared CDF with k degrees of freedom; k = 0 is the point mass at 0
double chi2_cdf(std::size_t k, double x);

// adaptive Simpson quadrature with absolute/relative control
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol = 0.0, int max_depth = 48);

}  // namespace randcurve
