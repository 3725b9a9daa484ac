#include "coconsume/distributions.hpp"

#include "coconsume/error.hpp"

#include <cmath>
#include <limits>

namespace coconsume::dist {

namespace {

constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

/// Modified Lentz evaluation of the incomplete beta continued fraction.
double betaContinuedFraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon)
            return h;
    }
    throw AnalysisError("incomplete beta continued fraction did not converge");
}

double gammaSeries(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw AnalysisError("incomplete gamma series did not converge");
}

double gammaContinuedFraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw AnalysisError("incomplete gamma continued fraction did not converge");
}

} // namespace

double regularizedBeta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw AnalysisError("incomplete beta needs positive shape parameters");
    if (!(x >= 0.0 && x <= 1.0))
        throw AnalysisError("incomplete beta argument outside [0, 1]");
    if (x == 0.0 || x == 1.0)
        return x;
    const double logFront =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(logFront);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betaContinuedFraction(x, a, b) / a;
    return 1.0 - front * betaContinuedFraction(1.0 - x, b, a) / b;
}

double regularizedGammaP(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        throw AnalysisError("incomplete gamma needs a > 0 and x >= 0");
    if (x == 0.0)
        return 0.0;
    if (x < a + 1.0)
        return gammaSeries(a, x);
    return 1.0 - gammaContinuedFraction(a, x);
}

double regularizedGammaQ(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        throw AnalysisError("incomplete gamma needs a > 0 and x >= 0");
    if (x == 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    if (x < a + 1.0)
        return 1.0 - gammaSeries(a, x);
    return gammaContinuedFraction(a, x);
}

double studentTTwoSided(double t, double df) {
    if (!(df > 0.0))
        throw AnalysisError("t distribution needs positive degrees of freedom");
    if (std::isnan(t))
        return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t))
        return 0.0;
    const double x = df / (df + t * t);
    return regularizedBeta(x, 0.5 * df, 0.5);
}

double chiSquaredUpper(double x, double df) {
    if (!(df > 0.0))
        throw AnalysisError("chi-squared needs positive degrees of freedom");
    if (x <= 0.0)
        return 1.0;
    return regularizedGammaQ(0.5 * df, 0.5 * x);
}

} // namespace coconsume::dist
