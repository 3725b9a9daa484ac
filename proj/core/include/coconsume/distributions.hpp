#pragma once

namespace coconsume::dist {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularizedBeta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x).
double regularizedGammaP(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without cancellation.
double regularizedGammaQ(double a, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double studentTTwoSided(double t, double df);

/// P(X >= x) for chi-squared with `df` degrees of freedom.
double chiSquaredUpper(double x, double df);

} // namespace coconsume::dist
