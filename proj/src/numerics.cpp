#include "cvtomo/numerics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace cvtomo {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kLaguerreSeriesMax = 30;  // finite sum up to here, recurrence beyond
}  // namespace

double LogSigned::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

LogSigned LogSigned::zero() { return {kNegInf, 0}; }

LogSigned LogSigned::from(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

LogSigned operator*(const LogSigned& a, const LogSigned& b) {
    if (a.sign == 0 || b.sign == 0) return LogSigned::zero();
    return {a.log_abs + b.log_abs, a.sign * b.sign};
}

double log_factorial(long n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(1024);
        t[0] = 0.0;
        for (size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] + std::log(double(k));
        return t;
    }();
    if (n < 0) return kNegInf;
    if (n < long(table.size())) return table[size_t(n)];
    return std::lgamma(double(n) + 1.0);
}

namespace {

// ln|binom(a, j)| and sign for integer a (possibly negative), j >= 0,
// via the falling factorial a(a-1)...(a-j+1)/j!.
LogSigned log_binomial(long a, int j) {
    if (j < 0) return LogSigned::zero();
    if (j == 0) return LogSigned::from(1.0);
    if (a >= 0 && a < j) return LogSigned::zero();  // falling factorial hits 0
    if (a >= j) {
        return {log_factorial(a) - log_factorial(a - j) - log_factorial(j), 1};
    }
    // a < 0: all factors negative, |a - t| = |a| + t
    double la = 0.0;
    for (int t = 0; t < j; ++t) la += std::log(double(-a) + t);
    return {la - log_factorial(j), (j % 2 == 0) ? 1 : -1};
}

// Explicit finite sum L_m^k(x) = sum_{i=0}^{m} (-x)^i / i! * binom(m+k, m-i).
// Terms are chained by exact ratios and Kahan-accumulated in long double;
// the alternating signs cancel heavily inside the oscillatory region, and
// the extra mantissa bits keep the contracted 1e-10 relative accuracy.
LogSigned laguerre_sum_longdouble(int m, int k, double x) {
    long double term = 1.0L;  // binom(m+k, m), built as prod (k+j)/j
    for (int j = 1; j <= m; ++j) term *= (long double)(k + j) / (long double)j;
    long double acc = 0.0L, comp = 0.0L;
    auto add = [&](long double v) {
        const long double y = v - comp;
        const long double s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    };
    add(term);
    for (int i = 1; i <= m; ++i) {
        // t_i = t_{i-1} * (-x/i) * (m-i+1)/(k+i)
        if (k + i == 0) {
            // binomial support ends; restart the chain from the next exact term
            term = 0.0L;
            long double fresh = 1.0L;
            for (int j = 1; j <= m - i; ++j) fresh *= (long double)(k + i + j) / (long double)j;
            for (int j = 1; j <= i; ++j) fresh *= (long double)(-x) / (long double)j;
            add(fresh);
            term = fresh;
            continue;
        }
        term *= (long double)(-x) / (long double)i;
        term *= (long double)(m - i + 1) / (long double)(k + i);
        add(term);
    }
    if (acc == 0.0L) return LogSigned::zero();
    const long double mag = fabsl(acc);
    return {double(logl(mag)), acc > 0.0L ? 1 : -1};
}

// Log-domain fallback when the long double dynamic range could overflow.
LogSigned laguerre_sum_logdomain(int m, int k, double x) {
    const double lx = (x == 0.0) ? kNegInf : std::log(std::abs(x));
    const int xsign = (x > 0.0) ? 1 : (x < 0.0 ? -1 : 0);
    std::vector<LogSigned> terms;
    terms.reserve(size_t(m) + 1);
    double max_log = kNegInf;
    for (int i = 0; i <= m; ++i) {
        LogSigned b = log_binomial(long(m) + k, m - i);
        if (b.sign == 0) continue;
        LogSigned t;
        if (i == 0) {
            t = b;
        } else if (xsign == 0) {
            continue;  // x = 0 kills every i > 0 term
        } else {
            // (-x)^i carries sign (-1)^i sign(x)^i
            int px = (i % 2 != 0 && xsign < 0) ? -1 : 1;
            int s = b.sign * ((i % 2 == 0) ? 1 : -1) * px;
            t = {b.log_abs + i * lx - log_factorial(i), s};
        }
        if (t.sign != 0 && t.log_abs > max_log) max_log = t.log_abs;
        terms.push_back(t);
    }
    if (terms.empty() || max_log == kNegInf) return LogSigned::zero();
    double acc = 0.0, comp = 0.0;
    for (const auto& t : terms) {
        if (t.sign == 0) continue;
        double v = t.sign * std::exp(t.log_abs - max_log);
        double y = v - comp;
        double s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    if (acc == 0.0) return LogSigned::zero();
    return {max_log + std::log(std::abs(acc)), acc > 0 ? 1 : -1};
}

LogSigned laguerre_sum(int m, int k, double x) {
    // crude magnitude bound: |binom| <= (|k|+m)^m/m!, |x|^m
    const double bound = m * std::log(double(std::abs(k) + m + 2)) +
                         m * std::log(std::abs(x) + 2.0);
    if (bound < 4000.0) return laguerre_sum_longdouble(m, k, x);
    return laguerre_sum_logdomain(m, k, x);
}

// Upward recurrence in the degree with periodic rescaling:
// m L_m^k = (2m-1+k-x) L_{m-1}^k - (m-1+k) L_{m-2}^k.
LogSigned laguerre_recurrence(int m, int k, double x) {
    double prev = 1.0;               // L_0
    double cur = 1.0 + k - x;        // L_1
    double log_scale = 0.0;
    for (int j = 2; j <= m; ++j) {
        double next = ((2.0 * j - 1.0 + k - x) * cur - (j - 1.0 + k) * prev) / j;
        prev = cur;
        cur = next;
        double mag = std::max(std::abs(prev), std::abs(cur));
        if (mag > 1e280 || (mag > 0.0 && mag < 1e-280)) {
            double f = std::log(mag);
            log_scale += f;
            double inv = std::exp(-f);
            prev *= inv;
            cur *= inv;
        }
    }
    if (m == 0) return LogSigned::from(1.0);
    if (cur == 0.0) return LogSigned::zero();
    return {log_scale + std::log(std::abs(cur)), cur > 0 ? 1 : -1};
}

}  // namespace

LogSigned assoc_laguerre_scaled(int m, int k, double x) {
    if (m == 0) return LogSigned::from(1.0);
    if (m <= kLaguerreSeriesMax) return laguerre_sum(m, k, x);
    return laguerre_recurrence(m, k, x);
}

double assoc_laguerre(int m, int k, double x) {
    LogSigned v = assoc_laguerre_scaled(m, k, x);
    return v.value();
}

cplx displaced_fock_overlap(int n, int m, cplx gamma) {
    if (n < 0 || m < 0) return 0.0;
    const double x = std::abs(gamma);
    if (x < 1e-300) return (n == m) ? 1.0 : 0.0;
    const int s = std::min(n, m);
    const int d = std::abs(n - m);
    const double x2 = x * x;
    LogSigned lag = assoc_laguerre_scaled(s, d, x2);
    if (lag.sign == 0) return 0.0;
    double logmag = -0.5 * x2 + d * std::log(x) +
                    0.5 * (log_factorial(s) - log_factorial(s + d)) + lag.log_abs;
    // phase: gamma^{n-m} for n >= m, (-conj(gamma))^{m-n} otherwise
    double angle = (n >= m) ? d * std::arg(gamma) : d * std::arg(-std::conj(gamma));
    double mag = lag.sign * std::exp(logmag);
    return std::polar(mag, angle);
}

cplx qn_fock_element(int n, cplx beta, int m1, int m2) {
    if (std::abs(beta) < 1e-12) {
        return (n == m1 && n == m2) ? 1.0 : 0.0;  // removable singularity of the
                                                  // closed-form expression
    }
    cplx f1 = displaced_fock_overlap(n, m1, -beta);
    cplx f2 = displaced_fock_overlap(n, m2, -beta);
    return f1 * std::conj(f2);
}

cplx qn_coherent_element(int n, cplx beta, cplx alpha_i, cplx alpha_j) {
    const cplx gi = alpha_i - beta;
    const cplx gj = alpha_j - beta;
    const double di = std::abs(gi);
    const double dj = std::abs(gj);
    // theta = Im(beta* alpha_i) - Im(beta* alpha_j)
    const double theta = std::imag(std::conj(beta) * alpha_i) - std::imag(std::conj(beta) * alpha_j);
    double logmag = -0.5 * (di * di + dj * dj) - log_factorial(n);
    double angle = theta;
    if (n > 0) {
        if (di == 0.0 || dj == 0.0) return 0.0;
        logmag += n * (std::log(di) + std::log(dj));
        angle += n * (std::arg(gi) - std::arg(gj));
    }
    return std::polar(std::exp(logmag), angle);
}

cplx qn_displaced_fock_element(int n, cplx beta, cplx alpha_i, int m1,
                               cplx alpha_j, int m2) {
    const double theta = std::imag(std::conj(beta) * alpha_i) - std::imag(std::conj(beta) * alpha_j);
    cplx f1 = displaced_fock_overlap(n, m1, alpha_i - beta);
    cplx f2 = displaced_fock_overlap(n, m2, alpha_j - beta);
    return std::polar(1.0, theta) * f1 * std::conj(f2);
}

double hermite_phys(int m, double x) {
    if (m == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * x;
    for (int j = 2; j <= m; ++j) {
        double next = 2.0 * x * cur - 2.0 * (j - 1) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double oscillator_eigenfunction(int m, double x) {
    const double pi_quarter = 0.7511255444649425;  // pi^{-1/4}
    double prev = 0.0;
    double cur = pi_quarter * std::exp(-0.5 * x * x);
    for (int j = 1; j <= m; ++j) {
        double next = x * std::sqrt(2.0 / j) * cur - std::sqrt((j - 1.0) / j) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace cvtomo
