#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace backcom::numerics {

struct QuadratureSpec
{
    double rel_tol = 1e-6;
    double abs_tol = 1e-14;
    /// Maximum number of bisections of any initial interval.
    int max_depth = 40;
};

struct QuadratureResult
{
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr double gk15_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
    double lo;
    double hi;
    double value;
    double error;
    int depth;
};

template <class F>
Segment gk15(F& f, double lo, double hi, int depth)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * gk15_wk[7];
    double gauss = fc * gk15_wg[3];
    double fv1[7];
    double fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk15_x[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double sum = fv1[j] + fv2[j];
        kronrod += gk15_wk[j] * sum;
        if (j % 2 == 1) {
            gauss += gk15_wg[j / 2] * sum;
        }
    }
    const double mean = 0.5 * kronrod;
    double asc = gk15_wk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        asc += gk15_wk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
    }
    asc *= std::fabs(half);
    double err = std::fabs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) {
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    }
    return {lo, hi, kronrod * half, err, depth};
}

template <class F>
QuadratureResult adaptive(F& f, std::span<const double> breaks, const QuadratureSpec& spec)
{
    constexpr std::size_t max_segments = 8192;
    std::vector<Segment> heap;
    heap.reserve(64);
    auto by_error = [](const Segment& a, const Segment& b) { return a.error < b.error; };
    QuadratureResult out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] > breaks[i]) {
            heap.push_back(gk15(f, breaks[i], breaks[i + 1], 0));
            out.evaluations += 15;
        }
    }
    std::make_heap(heap.begin(), heap.end(), by_error);
    auto totals = [&] {
        double v = 0.0;
        double e = 0.0;
        for (const auto& s : heap) {
            v += s.value;
            e += s.error;
        }
        return std::pair{v, e};
    };
    auto [value, error] = totals();
    std::size_t since_resum = 0;
    while (!heap.empty() && error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(value))) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Segment worst = heap.back();
        if (worst.depth >= spec.max_depth || heap.size() >= max_segments) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), by_error);
            out.converged = false;
            break;
        }
        heap.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Segment left = gk15(f, worst.lo, mid, worst.depth + 1);
        const Segment right = gk15(f, mid, worst.hi, worst.depth + 1);
        out.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        // Periodic exact re-summation bounds floating-point drift.
        if (++since_resum == 64) {
            std::tie(value, error) = totals();
            since_resum = 0;
        }
    }
    std::tie(out.value, out.abs_error) = totals();
    return out;
}

}  // namespace detail

/*!
 * Globally adaptive Gauss-Kronrod (7/15) quadrature over [lo, hi].
 *
 * hi may be +infinity; the tail is mapped to a finite interval with
 * x = lo + t / (1 - t). Interior break points (e.g. integrand peaks) may be
 * passed through integrate_1d_breaks.
 */
template <class F>
QuadratureResult integrate_1d_detailed(F&& f, double lo, double hi,
                                       const QuadratureSpec& spec = {})
{
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
        throw std::invalid_argument("QuadratureSpec tolerances must be positive");
    }
    if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo)) {
        throw std::invalid_argument("integrate_1d: invalid limits");
    }
    if (hi == lo) {
        return {};
    }
    if (hi < lo) {
        auto r = integrate_1d_detailed(f, hi, lo, spec);
        r.value = -r.value;
        return r;
    }
    if (std::isinf(hi)) {
        auto mapped = [&](double t) {
            const double one_minus = 1.0 - t;
            const double x = lo + t / one_minus;
            const double v = f(x);
            return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
        };
        const double breaks[] = {0.0, 0.5, 1.0};
        return detail::adaptive(mapped, breaks, spec);
    }
    const double breaks[] = {lo, hi};
    return detail::adaptive(f, breaks, spec);
}

template <class F>
double integrate_1d(F&& f, double lo, double hi, const QuadratureSpec& spec = {})
{
    return integrate_1d_detailed(f, lo, hi, spec).value;
}

/// Finite-interval quadrature with interior break points; points outside
/// (lo, hi) are ignored.
template <class F>
double integrate_1d_breaks(F&& f, double lo, double hi, std::initializer_list<double> interior,
                           const QuadratureSpec& spec = {})
{
    if (!(hi > lo) || !std::isfinite(hi)) {
        return integrate_1d(f, lo, hi, spec);
    }
    std::vector<double> breaks{lo};
    for (double p : interior) {
        if (p > lo && p < hi) {
            breaks.push_back(p);
        }
    }
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    return detail::adaptive(f, breaks, spec).value;
}

/// Integral of f(r, phi) r over the disk of radius r_max centred at the origin.
template <class F>
double integrate_polar(F&& f, double r_max, const QuadratureSpec& spec = {})
{
    if (!(r_max >= 0.0)) {
        throw std::invalid_argument("integrate_polar: negative radius");
    }
    auto ring = [&](double r) {
        auto along = [&](double phi) { return f(r, phi); };
        return r * integrate_1d(along, 0.0, 2.0 * std::numbers::pi, spec);
    };
    return integrate_1d(ring, 0.0, r_max, spec);
}

/// Bracket on the positive reals with geometric expansion.
struct Bracket
{
    double lo = 1e-12;
    double hi = 1e12;
    double factor = 10.0;
    int max_expansions = 12;
};

struct RootOptions
{
    /// Relative width of the final bracket.
    double rel_tol = 1e-10;
    int max_iterations = 300;
};

/*!
 * Root of a monotone function on the positive reals.
 *
 * The bracket is widened geometrically until g changes sign, then Brent's
 * method runs on log(x). Returns nullopt when no sign change is found.
 */
template <class G>
std::optional<double> find_root(G&& g, Bracket bracket = {}, RootOptions opts = {})
{
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo)) {
        throw std::invalid_argument("find_root: bracket must satisfy 0 < lo < hi");
    }
    double a = std::log(bracket.lo);
    double b = std::log(bracket.hi);
    double fa = g(bracket.lo);
    double fb = g(bracket.hi);
    const double step = std::log(bracket.factor);
    for (int i = 0; i < bracket.max_expansions && fa * fb > 0.0; ++i) {
        a -= step;
        b += step;
        fa = g(std::exp(a));
        fb = g(std::exp(b));
    }
    if (fa == 0.0) {
        return std::exp(a);
    }
    if (fb == 0.0) {
        return std::exp(b);
    }
    if (fa * fb > 0.0 || std::isnan(fa) || std::isnan(fb)) {
        return std::nullopt;
    }

    // Brent's method (zeroin) on u = log x.
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (fb * fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 0.5 * opts.rel_tol;
        const double m = 0.5 * (c - b);
        if (std::fabs(m) <= tol || fb == 0.0) {
            return std::exp(b);
        }
        if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = g(std::exp(b));
    }
    return std::exp(b);
}

/// Euler beta function B(x, y) for x, y > 0. Uses the reflection formula
/// pi / sin(pi x) when x + y = 1.
double beta_fn(double x, double y);

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^-t dt for any real
/// a and x > 0 (x = 0 is accepted for a > 0), evaluated by quadrature.
double upper_incomplete_gamma(double a, double x, const QuadratureSpec& spec = {1e-12, 1e-300, 50});

/*!
 * Shape-preserving (PCHIP) interpolant of log y against log x.
 *
 * Built from strictly increasing positive abscissae and positive values.
 * Outside the sampled range the value is clamped on the left and continued
 * with the last log-log slope on the right.
 */
class LogLogInterpolant
{
  public:
    LogLogInterpolant() = default;
    LogLogInterpolant(std::span<const double> x, std::span<const double> y);

    double operator()(double x) const;
    double x_min() const { return std::exp(lx_.front()); }
    double x_max() const { return std::exp(lx_.back()); }
    /// d log y / d log x over the last interval.
    double tail_slope() const;
    bool empty() const { return lx_.empty(); }

  private:
    std::vector<double> lx_;
    std::vector<double> ly_;
    std::vector<double> slope_;
};

}  // namespace backcom::numerics
