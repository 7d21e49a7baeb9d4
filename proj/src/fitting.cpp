#include "ilv/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ilv/kernels.hpp"

namespace ilv {

namespace {

// Continued fraction for the incomplete beta function, modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 400;
    constexpr double eps = 3e-15;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) {
        d = fpmin;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) {
            d = fpmin;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) {
            c = fpmin;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) {
            d = fpmin;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) {
            c = fpmin;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) {
            break;
        }
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("shape parameters must be positive");
    }
    if (!(x >= 0.0) || !(x <= 1.0)) {
        throw std::invalid_argument("x must lie in [0, 1]");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x == 1.0) {
        return 1.0;
    }
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - bt * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double BetaCdfFit::evaluate(double p) const {
    double x = (p - p_lo) / w;
    x = std::clamp(x, 0.0, 1.0);
    return p_max * regularized_incomplete_beta(x, a, b);
}

namespace {

struct Objective {
    const std::vector<RatePoint>* points;
    double span;
    mutable uint64_t evaluations = 0;

    double operator()(const std::array<double, 5>& theta) const {
        ++evaluations;
        const auto [p_max, p_lo, w, a, b] = theta;
        // Penalty wall keeps the simplex inside the valid parameter domain.
        double penalty = 0.0;
        if (p_max <= 0.0) penalty += 1.0 - p_max;
        if (p_max > 1.0) penalty += p_max - 1.0;
        if (w <= 1e-6 * span) penalty += 1.0 + (1e-6 * span - w) / span;
        if (a <= 0.0) penalty += 1.0 - a;
        if (b <= 0.0) penalty += 1.0 - b;
        if (a > 1e3) penalty += a - 1e3;
        if (b > 1e3) penalty += b - 1e3;
        if (penalty > 0.0) {
            return 1e30 * (1.0 + penalty);
        }
        BetaCdfFit fit{p_max, p_lo, w, a, b, 0.0, 0};
        double sse = 0.0;
        for (const RatePoint& pt : *points) {
            const double r = fit.evaluate(pt.p) - pt.rate();
            sse += r * r;
        }
        return sse;
    }
};

// Nelder-Mead simplex descent; deterministic and derivative-free.
struct SimplexResult {
    std::array<double, 5> best;
    double value;
    bool converged;
};

SimplexResult nelder_mead(const Objective& f, std::array<double, 5> x0,
                          std::array<double, 5> steps, uint64_t max_evals) {
    constexpr size_t n = 5;
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::array<std::array<double, 5>, n + 1> xs;
    std::array<double, n + 1> fs;
    xs[0] = x0;
    fs[0] = f(x0);
    for (size_t i = 0; i < n; ++i) {
        xs[i + 1] = x0;
        xs[i + 1][i] += steps[i];
        fs[i + 1] = f(xs[i + 1]);
    }

    bool converged = false;
    while (f.evaluations < max_evals) {
        std::array<size_t, n + 1> order;
        for (size_t i = 0; i <= n; ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](size_t a_, size_t b_) {
            return fs[a_] < fs[b_] || (fs[a_] == fs[b_] && a_ < b_);
        });
        std::array<std::array<double, 5>, n + 1> xs2;
        std::array<double, n + 1> fs2;
        for (size_t i = 0; i <= n; ++i) {
            xs2[i] = xs[order[i]];
            fs2[i] = fs[order[i]];
        }
        xs = xs2;
        fs = fs2;

        const double spread = std::fabs(fs[n] - fs[0]);
        if (spread <= 1e-14 * (1.0 + std::fabs(fs[0]))) {
            converged = true;
            break;
        }

        std::array<double, 5> centroid{};
        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < 5; ++k) {
                centroid[k] += xs[i][k] / double(n);
            }
        }
        auto blend = [&](double t, const std::array<double, 5>& far) {
            std::array<double, 5> out;
            for (size_t k = 0; k < 5; ++k) {
                out[k] = centroid[k] + t * (centroid[k] - far[k]);
            }
            return out;
        };

        const auto reflected = blend(alpha, xs[n]);
        const double fr = f(reflected);
        if (fr < fs[0]) {
            const auto expanded = blend(gamma, xs[n]);
            const double fe = f(expanded);
            if (fe < fr) {
                xs[n] = expanded;
                fs[n] = fe;
            } else {
                xs[n] = reflected;
                fs[n] = fr;
            }
            continue;
        }
        if (fr < fs[n - 1]) {
            xs[n] = reflected;
            fs[n] = fr;
            continue;
        }
        const auto contracted = blend(-rho, xs[n]);
        const double fc = f(contracted);
        if (fc < fs[n]) {
            xs[n] = contracted;
            fs[n] = fc;
            continue;
        }
        for (size_t i = 1; i <= n; ++i) {  // shrink toward the best vertex
            for (size_t k = 0; k < 5; ++k) {
                xs[i][k] = xs[0][k] + sigma * (xs[i][k] - xs[0][k]);
            }
            fs[i] = f(xs[i]);
        }
    }

    size_t best = 0;
    for (size_t i = 1; i <= n; ++i) {
        if (fs[i] < fs[best]) {
            best = i;
        }
    }
    return {xs[best], fs[best], converged};
}

}  // namespace

BetaCdfFit fit_curve(const std::vector<RatePoint>& points) {
    if (points.size() < 5) {
        throw FitError("need at least 5 grid points spanning the transition");
    }
    for (size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].p > points[i - 1].p)) {
            throw FitError("grid must be strictly increasing");
        }
    }
    double max_rate = 0.0;
    for (const RatePoint& pt : points) {
        max_rate = std::max(max_rate, pt.rate());
    }
    if (max_rate <= 0.0) {
        throw FitError("degenerate fit: no transition in window (all rates zero)");
    }

    const double span = points.back().p - points.front().p;
    Objective objective{&points, span, 0};
    const std::array<double, 5> x0{std::min(max_rate, 1.0), points.front().p, span, 2.0, 2.0};
    std::array<double, 5> steps{-0.1 * x0[0], 0.1 * span, 0.3 * span, 0.5, 0.5};

    SimplexResult result = nelder_mead(objective, x0, steps, 40000);
    // One polish pass from the found optimum with a tighter simplex.
    for (size_t k = 0; k < 5; ++k) {
        steps[k] *= 0.02;
    }
    const SimplexResult polished = nelder_mead(objective, result.best, steps, 80000);
    if (polished.value <= result.value) {
        result = polished;
    }
    if (!result.converged) {
        throw FitError("simplex descent did not converge after " +
                       std::to_string(objective.evaluations) + " evaluations (residual " +
                       std::to_string(std::sqrt(result.value)) + ")");
    }
    return {result.best[0], result.best[1], result.best[2], result.best[3],
            result.best[4], std::sqrt(result.value), objective.evaluations};
}

namespace {

// First sign change of fitA - fitB inside [lo, hi], bisected to ~1e-12.
// Curves that coincide within noise produce no crossing.
std::pair<bool, double> locate_crossing(const BetaCdfFit& fit_a, const BetaCdfFit& fit_b,
                                        double lo, double hi) {
    constexpr int scan_steps = 512;
    constexpr double tiny = 1e-12;
    const auto diff = [&](double p) { return fit_a.evaluate(p) - fit_b.evaluate(p); };

    double prev_p = lo;
    double prev_f = diff(lo);
    for (int s = 1; s <= scan_steps; ++s) {
        const double p = lo + (hi - lo) * double(s) / scan_steps;
        const double fp = diff(p);
        if (std::fabs(prev_f) > tiny && std::fabs(fp) > tiny &&
            std::signbit(prev_f) != std::signbit(fp)) {
            double a = prev_p;
            double b = p;
            double fa = prev_f;
            for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = diff(mid);
                if (fm == 0.0) {
                    return {true, mid};
                }
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return {true, 0.5 * (a + b)};
        }
        prev_p = p;
        prev_f = fp;
    }
    return {false, 0.0};
}

}  // namespace

ThresholdEstimate find_threshold(const std::vector<BetaCdfFit>& fits, double hull_lo,
                                 double hull_hi) {
    if (fits.size() < 2) {
        throw ThresholdError("need at least two fitted curves");
    }
    ThresholdEstimate estimate;
    estimate.fits = fits;
    double sum = 0.0;
    for (uint32_t i = 0; i < fits.size(); ++i) {
        for (uint32_t j = i + 1; j < fits.size(); ++j) {
            const auto [found, p] = locate_crossing(fits[i], fits[j], hull_lo, hull_hi);
            if (found) {
                estimate.crossings.push_back({i, j, p});
                sum += p;
            } else {
                estimate.missing_pairs.emplace_back(i, j);
            }
        }
    }
    if (estimate.crossings.empty()) {
        throw ThresholdError("no pair of curves crosses inside the swept grid");
    }
    estimate.threshold = sum / double(estimate.crossings.size());
    return estimate;
}

namespace {

constexpr uint32_t bootstrap_purpose = 0xB007;

uint64_t binomial_draw(uint64_t n, double p, Philox4x32::Key key, StreamCtx ctx) {
    const uint64_t threshold = kernels::probability_threshold(p);
    uint64_t count = 0;
    uint32_t index = 0;
    for (uint64_t i = 0; i < n; i += 4) {
        const auto r = stream_block(key, ctx, index++);
        const uint64_t lanes = std::min<uint64_t>(4, n - i);
        for (uint64_t lane = 0; lane < lanes; ++lane) {
            count += uint64_t(r[lane]) < threshold ? 1 : 0;
        }
    }
    return count;
}

std::pair<double, double> common_hull(const std::vector<std::vector<RatePoint>>& curves) {
    double lo = curves[0].front().p;
    double hi = curves[0].back().p;
    for (const auto& c : curves) {
        lo = std::max(lo, c.front().p);
        hi = std::min(hi, c.back().p);
    }
    if (!(hi > lo)) {
        throw ThresholdError("swept grids do not overlap");
    }
    return {lo, hi};
}

}  // namespace

ThresholdEstimate bootstrap_threshold(const std::vector<std::vector<RatePoint>>& curves,
                                      uint32_t resamples, uint64_t seed) {
    if (curves.size() < 2) {
        throw ThresholdError("need at least two curves");
    }
    const auto [hull_lo, hull_hi] = common_hull(curves);

    std::vector<BetaCdfFit> fits;
    fits.reserve(curves.size());
    for (const auto& c : curves) {
        fits.push_back(fit_curve(c));
    }
    ThresholdEstimate estimate = find_threshold(fits, hull_lo, hull_hi);

    const Philox4x32::Key key = key_from_seed(seed);
    std::vector<double> resampled;
    resampled.reserve(resamples);
    std::vector<std::vector<RatePoint>> scratch = curves;
    for (uint32_t r = 0; r < resamples; ++r) {
        for (uint32_t c = 0; c < curves.size(); ++c) {
            for (uint32_t j = 0; j < curves[c].size(); ++j) {
                const RatePoint& pt = curves[c][j];
                scratch[c][j].failures = binomial_draw(
                    pt.trials, pt.rate(), key, {r, c * 4096 + j, bootstrap_purpose});
            }
        }
        try {
            std::vector<BetaCdfFit> refits;
            refits.reserve(scratch.size());
            for (const auto& c : scratch) {
                refits.push_back(fit_curve(c));
            }
            resampled.push_back(find_threshold(refits, hull_lo, hull_hi).threshold);
        } catch (const FitError&) {
        } catch (const ThresholdError&) {
        }
    }
    estimate.bootstrap_resamples = uint32_t(resampled.size());
    if (resampled.size() >= 2) {
        double mean = 0.0;
        for (const double t : resampled) {
            mean += t;
        }
        mean /= double(resampled.size());
        double var = 0.0;
        for (const double t : resampled) {
            var += (t - mean) * (t - mean);
        }
        estimate.bootstrap_se = std::sqrt(var / double(resampled.size() - 1));
    }
    return estimate;
}

double interpolated_threshold(const std::vector<std::vector<RatePoint>>& curves) {
    if (curves.size() < 2) {
        throw ThresholdError("need at least two curves");
    }
    const auto [hull_lo, hull_hi] = common_hull(curves);
    const auto rate_at = [](const std::vector<RatePoint>& c, double p) {
        for (size_t i = 1; i < c.size(); ++i) {
            if (p <= c[i].p) {
                const double t = (p - c[i - 1].p) / (c[i].p - c[i - 1].p);
                return c[i - 1].rate() + t * (c[i].rate() - c[i - 1].rate());
            }
        }
        return c.back().rate();
    };

    double sum = 0.0;
    uint32_t found = 0;
    for (size_t i = 0; i < curves.size(); ++i) {
        for (size_t j = i + 1; j < curves.size(); ++j) {
            constexpr int scan_steps = 512;
            double prev_p = hull_lo;
            double prev_f = rate_at(curves[i], hull_lo) - rate_at(curves[j], hull_lo);
            for (int s = 1; s <= scan_steps; ++s) {
                const double p = hull_lo + (hull_hi - hull_lo) * double(s) / scan_steps;
                const double fp = rate_at(curves[i], p) - rate_at(curves[j], p);
                if (std::fabs(prev_f) > 1e-12 && std::fabs(fp) > 1e-12 &&
                    std::signbit(prev_f) != std::signbit(fp)) {
                    sum += prev_p + (p - prev_p) * prev_f / (prev_f - fp);
                    ++found;
                    break;
                }
                prev_p = p;
                prev_f = fp;
            }
        }
    }
    if (found == 0) {
        throw ThresholdError("no interpolated crossing inside the swept grid");
    }
    return sum / double(found);
}

}  // namespace ilv
