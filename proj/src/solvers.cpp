#include "geotomo/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "geotomo/geometry.hpp"

namespace geotomo {

std::vector<double> anneal_minimize(const Objective& objective, std::vector<double> x0,
                                    const AnnealConfig& cfg) {
    const size_t n = x0.size();
    if (n == 0) return x0;

    double f0 = objective(x0);
    if (!std::isfinite(f0)) throw std::invalid_argument("objective not finite at x0");
    double t0 = cfg.initial_temperature > 0.0 ? cfg.initial_temperature
                                              : std::max(std::abs(f0), 1e-12);
    const double t_floor = t0 * cfg.min_temperature_fraction;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<size_t> pick(0, n - 1);

    std::vector<double> cur = x0, best = x0;
    double fcur = f0, fbest = f0;

    for (double t = t0; t > t_floor; t *= cfg.cooling_factor) {
        double stddev = cfg.step_scale * (t / t0);
        for (int s = 0; s < cfg.steps_per_temperature; ++s) {
            size_t i = pick(rng);
            double old = cur[i];
            cur[i] = old + stddev * gauss(rng);
            double f = objective(cur);
            bool accept = f <= fcur || unif(rng) < std::exp(-(f - fcur) / t);
            if (accept) {
                fcur = f;
                if (f < fbest) {
                    fbest = f;
                    best = cur;
                }
            } else {
                cur[i] = old;
            }
        }
    }

    // Coordinate descent polish from the best annealed point. A step that
    // improves keeps walking in its direction, so long travels cost few
    // sweeps; the step halves whenever a full sweep stalls.
    cur = best;
    fcur = fbest;
    double h = cfg.step_scale;
    const double h_min = cfg.step_scale * 1e-3;
    const long max_sweeps = std::clamp<long>(300000 / static_cast<long>(n), 500, 50000);
    for (long sweep = 0; sweep < max_sweeps && h >= h_min; ++sweep) {
        double f_before = fcur;
        for (size_t i = 0; i < n; ++i) {
            for (double dir : {1.0, -1.0}) {
                double old = cur[i];
                cur[i] = old + dir * h;
                double f = objective(cur);
                if (f >= fcur) {
                    cur[i] = old;
                    continue;
                }
                fcur = f;
                for (int walk = 0; walk < 64; ++walk) {
                    old = cur[i];
                    cur[i] = old + dir * h;
                    f = objective(cur);
                    if (f >= fcur) {
                        cur[i] = old;
                        break;
                    }
                    fcur = f;
                }
                break;
            }
        }
        double rel = (f_before - fcur) / std::max(std::abs(f_before), 1e-30);
        if (rel < 1e-6) h *= 0.5;
    }
    if (fcur < fbest) {
        fbest = fcur;
        best = cur;
    }
    return best;
}

namespace {

// Dense Cholesky solve of (M + tiny ridge) x = b; returns false when M is
// numerically rank deficient.
bool cholesky_solve(std::vector<double> m, std::vector<double> b, int n,
                    std::vector<double>& x) {
    for (int j = 0; j < n; ++j) {
        double d = m[static_cast<size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            double l = m[static_cast<size_t>(j) * n + k];
            d -= l * l;
        }
        if (d <= 1e-14) return false;
        double diag = std::sqrt(d);
        m[static_cast<size_t>(j) * n + j] = diag;
        for (int i = j + 1; i < n; ++i) {
            double s = m[static_cast<size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= m[static_cast<size_t>(i) * n + k] * m[static_cast<size_t>(j) * n + k];
            m[static_cast<size_t>(i) * n + j] = s / diag;
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= m[static_cast<size_t>(i) * n + k] * b[k];
        b[i] = s / m[static_cast<size_t>(i) * n + i];
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= m[static_cast<size_t>(k) * n + i] * x[k];
        x[i] = s / m[static_cast<size_t>(i) * n + i];
    }
    return true;
}

struct ConstraintRow {
    int ia, ib, ic;
    double ca, cb, cc;  // cb*y_b - ca*y_a - cc*y_c <= 0 stored as g.y <= 0

    double dot(const std::vector<double>& y) const {
        return cb * y[ib] - ca * y[ia] - cc * y[ic];
    }
};

std::vector<ConstraintRow> support_constraints(const std::vector<double>& angles_deg) {
    const int n = static_cast<int>(angles_deg.size());
    std::vector<ConstraintRow> rows;
    rows.reserve(n);
    for (int b = 0; b < n; ++b) {
        int a = (b + n - 1) % n;
        int c = (b + 1) % n;
        double ta = angles_deg[a];
        double tb = angles_deg[b];
        double tc = angles_deg[c];
        if (tb < ta) tb += 360.0;
        if (tc < tb) tc += 360.0;
        // a triple spanning exactly 180 degrees is fine (its middle
        // coefficient vanishes); beyond that the cone flips and the
        // direction set cannot cover more than a halfplane
        if (tc - ta > 180.0 + 1e-9)
            throw std::invalid_argument(
                "constrained_lsq: directions span at most a halfplane (gap > 180 deg)");
        ConstraintRow r;
        r.ia = a;
        r.ib = b;
        r.ic = c;
        r.ca = std::sin(deg2rad(tc - tb));
        r.cb = std::sin(deg2rad(tc - ta));
        r.cc = std::sin(deg2rad(tb - ta));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

std::vector<double> constrained_lsq(const ConstrainedLsqProblem& p) {
    const int n = static_cast<int>(p.targets.size());
    if (n != static_cast<int>(p.angles_deg.size()))
        throw std::invalid_argument("constrained_lsq: targets/angles size mismatch");
    if (n < 3) throw std::invalid_argument("constrained_lsq: need at least 3 directions");
    for (int i = 1; i < n; ++i)
        if (p.angles_deg[i] <= p.angles_deg[i - 1])
            throw std::invalid_argument("constrained_lsq: angles must be strictly sorted");

    const std::vector<ConstraintRow> rows = support_constraints(p.angles_deg);
    const int m = static_cast<int>(rows.size());
    const double feas_tol = 1e-11;

    auto row_dot_row = [&](const ConstraintRow& r, const ConstraintRow& s) {
        double acc = 0.0;
        const std::array<std::pair<int, double>, 3> re{{{r.ia, -r.ca}, {r.ib, r.cb}, {r.ic, -r.cc}}};
        const std::array<std::pair<int, double>, 3> se{{{s.ia, -s.ca}, {s.ib, s.cb}, {s.ic, -s.cc}}};
        for (auto [i, v] : re)
            for (auto [j, w] : se)
                if (i == j) acc += v * w;
        return acc;
    };
    auto row_dot_vec = [&](const ConstraintRow& r, const std::vector<double>& v) {
        return r.dot(v);
    };

    // Primal active-set method for min ||y - h||^2 s.t. G y <= 0, starting
    // from the always-feasible y = 0.
    std::vector<double> y(n, 0.0);
    std::vector<int> active;
    std::vector<double> lambda;

    auto solve_subproblem = [&](std::vector<double>& y_eq, std::vector<double>& lam) -> bool {
        const int k = static_cast<int>(active.size());
        y_eq = p.targets;
        lam.clear();
        if (k == 0) return true;
        std::vector<double> gram(static_cast<size_t>(k) * k);
        std::vector<double> rhs(k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j <= i; ++j) {
                double v = row_dot_row(rows[active[i]], rows[active[j]]);
                gram[static_cast<size_t>(i) * k + j] = v;
                gram[static_cast<size_t>(j) * k + i] = v;
            }
            rhs[i] = row_dot_vec(rows[active[i]], p.targets);
        }
        if (!cholesky_solve(gram, rhs, k, lam)) return false;
        for (int i = 0; i < k; ++i) {
            const ConstraintRow& r = rows[active[i]];
            y_eq[r.ia] -= lam[i] * (-r.ca);
            y_eq[r.ib] -= lam[i] * r.cb;
            y_eq[r.ic] -= lam[i] * (-r.cc);
        }
        return true;
    };

    const int max_iter = 40 * (m + 1);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<double> y_eq, lam;
        if (!solve_subproblem(y_eq, lam)) {
            // Dependent active set; drop the most recent constraint.
            active.pop_back();
            continue;
        }

        // Blocking constraint on the way from y to y_eq?
        double alpha = 1.0;
        int blocker = -1;
        for (int i = 0; i < m; ++i) {
            if (std::find(active.begin(), active.end(), i) != active.end()) continue;
            double gy = rows[i].dot(y);
            double gstep = rows[i].dot(y_eq) - gy;
            if (gstep > feas_tol) {
                double a = std::max(0.0, -gy / gstep);
                if (a < alpha - 1e-15) {
                    alpha = a;
                    blocker = i;
                }
            }
        }
        if (blocker >= 0) {
            for (int i = 0; i < n; ++i) y[i] += alpha * (y_eq[i] - y[i]);
            active.push_back(blocker);
            continue;
        }

        // Full step is feasible: check the multiplier signs.
        y = y_eq;
        int worst = -1;
        double worst_lam = -1e-12;
        for (size_t i = 0; i < lam.size(); ++i)
            if (lam[i] < worst_lam) {
                worst_lam = lam[i];
                worst = static_cast<int>(i);
            }
        if (worst < 0) return y;  // KKT satisfied
        active.erase(active.begin() + worst);
    }
    throw std::runtime_error("constrained_lsq: active-set iteration limit exceeded");
}

double Polynomial::eval(double x) const {
    double u = (2.0 * x - (x_lo + x_hi)) / (x_hi - x_lo);
    double acc = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * u + coeffs[i];
    return acc;
}

Polynomial polyfit_ls(const std::vector<std::array<double, 2>>& samples, int degree) {
    const int m = static_cast<int>(samples.size());
    const int k = degree + 1;
    if (m < k) throw std::invalid_argument("polyfit_ls: need more samples than the degree");

    Polynomial poly;
    poly.x_lo = samples[0][0];
    poly.x_hi = samples[0][0];
    for (const auto& s : samples) {
        poly.x_lo = std::min(poly.x_lo, s[0]);
        poly.x_hi = std::max(poly.x_hi, s[0]);
    }
    if (poly.x_hi - poly.x_lo < 1e-12)
        throw std::invalid_argument("polyfit_ls: degenerate abscissa range");

    // Householder QR on the Vandermonde matrix in the rescaled variable.
    std::vector<double> a(static_cast<size_t>(m) * k);
    std::vector<double> b(m);
    for (int i = 0; i < m; ++i) {
        double u = (2.0 * samples[i][0] - (poly.x_lo + poly.x_hi)) / (poly.x_hi - poly.x_lo);
        double pw = 1.0;
        for (int j = 0; j < k; ++j) {
            a[static_cast<size_t>(i) * k + j] = pw;
            pw *= u;
        }
        b[i] = samples[i][1];
    }
    for (int j = 0; j < k; ++j) {
        double norm = 0.0;
        for (int i = j; i < m; ++i) norm += a[static_cast<size_t>(i) * k + j] * a[static_cast<size_t>(i) * k + j];
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw std::runtime_error("polyfit_ls: rank deficient system");
        double ajj = a[static_cast<size_t>(j) * k + j];
        double alpha = ajj > 0 ? -norm : norm;
        std::vector<double> v(m - j, 0.0);
        v[0] = ajj - alpha;
        for (int i = j + 1; i < m; ++i) v[i - j] = a[static_cast<size_t>(i) * k + j];
        double vnorm2 = 0.0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 > 1e-300) {
            for (int c = j; c < k; ++c) {
                double dot = 0.0;
                for (int i = j; i < m; ++i) dot += v[i - j] * a[static_cast<size_t>(i) * k + c];
                double f = 2.0 * dot / vnorm2;
                for (int i = j; i < m; ++i) a[static_cast<size_t>(i) * k + c] -= f * v[i - j];
            }
            double dot = 0.0;
            for (int i = j; i < m; ++i) dot += v[i - j] * b[i];
            double f = 2.0 * dot / vnorm2;
            for (int i = j; i < m; ++i) b[i] -= f * v[i - j];
        }
    }
    poly.coeffs.assign(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < k; ++j) s -= a[static_cast<size_t>(i) * k + j] * poly.coeffs[j];
        double d = a[static_cast<size_t>(i) * k + i];
        if (std::abs(d) < 1e-12) throw std::runtime_error("polyfit_ls: rank deficient system");
        poly.coeffs[i] = s / d;
    }
    return poly;
}

std::vector<double> poly_local_minima(const Polynomial& poly, double lo, double hi) {
    std::vector<double> minima;
    if (hi <= lo) return minima;
    const double coarse = 0.1;
    const int steps = static_cast<int>(std::floor((hi - lo) / coarse));
    if (steps < 2) return minima;

    std::vector<double> val(steps + 1);
    for (int i = 0; i <= steps; ++i) val[i] = poly.eval(lo + i * coarse);

    for (int i = 1; i < steps; ++i) {
        if (!(val[i] < val[i - 1] && val[i] < val[i + 1])) continue;
        double a = lo + (i - 1) * coarse;
        double b = lo + (i + 1) * coarse;
        while (b - a > 0.01) {
            double m1 = a + (b - a) / 3.0;
            double m2 = b - (b - a) / 3.0;
            if (poly.eval(m1) < poly.eval(m2))
                b = m2;
            else
                a = m1;
        }
        minima.push_back(0.5 * (a + b));
    }
    return minima;
}

}  // namespace geotomo
