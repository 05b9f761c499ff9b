#ifndef FTC_RECURRENCE_HPP
#define FTC_RECURRENCE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ftc/errors.hpp"
#include "ftc/rational.hpp"

namespace ftc {

/// Level recurrence for the randomized construction.
///
/// With S(i) = 1 - 1/k - (1/k) * sum_{j<i} qt(j), each level i satisfies
///
///   2 p(i) + q(i) = 1,
///   q(i)  = xi * p(i) * S(i)^(delta-2),
///   qt(i) = xi * p(i) * S(i)^(delta-3),
///
/// so p(i) = 1 / (2 + xi * S(i)^(delta-2)). Here q(i) is the probability that a
/// vertex of level i enters the phase-one set, p(i) the same for a factor edge,
/// and qt(i) the probability for a vertex given that one fixed mate sits on a
/// higher level. For delta = 3 and xi = 1 this is the classical pair
/// p(i) = k / (3k - 1 - sum_{j<i} p(j)).
struct RecurrenceTable {
  int k = 0;
  int delta = 3;
  Rational xi = 1;
  /// Exact rational entries are present. Otherwise the doubles below come from
  /// 50-digit binary floating point and are accurate to double precision.
  bool exact = false;

  std::vector<double> p, q, qt;  // index 0 is level 1
  double p_star = 0;
  double q_star = 0;

  std::vector<Rational> p_exact, q_exact, qt_exact;
  Rational p_star_exact, q_star_exact;

  double p_at(int level) const { return p[level - 1]; }
  double q_at(int level) const { return q[level - 1]; }
  double qt_at(int level) const { return qt[level - 1]; }
};

/// Bit budget for exact evaluation; the size of the entries roughly multiplies
/// by 2*delta-4 per level, so exact tables are only feasible for small k.
inline constexpr long kDefaultExactBitBudget = 1L << 17;

namespace detail {

inline long rational_bits(const Rational& r) {
  return static_cast<long>(boost::multiprecision::msb(
             boost::multiprecision::abs(boost::multiprecision::numerator(r)) + 1)) +
         static_cast<long>(
             boost::multiprecision::msb(boost::multiprecision::denominator(r)));
}

inline std::optional<RecurrenceTable> pq_exact(int k, const Rational& xi, int delta,
                                                long bit_budget) {
  RecurrenceTable t;
  t.k = k;
  t.delta = delta;
  t.xi = xi;
  t.exact = true;
  Rational qt_sum = 0, p_sum = 0, q_sum = 0;
  const Rational base = Rational(k - 1) / k;
  for (int i = 1; i <= k; ++i) {
    Rational s = base - qt_sum / k;
    Rational s_pow_lo = 1;  // S^(delta-3)
    for (int e = 0; e < delta - 3; ++e) s_pow_lo *= s;
    Rational s_pow = s_pow_lo * s;  // S^(delta-2)
    Rational p = 1 / (2 + xi * s_pow);
    Rational q = xi * p * s_pow;
    Rational qt = xi * p * s_pow_lo;
    qt_sum += qt;
    p_sum += p;
    q_sum += q;
    if (rational_bits(qt_sum) > bit_budget) return std::nullopt;
    t.p_exact.push_back(p);
    t.q_exact.push_back(q);
    t.qt_exact.push_back(qt);
  }
  t.p_star_exact = p_sum / k;
  t.q_star_exact = q_sum / k;
  for (int i = 0; i < k; ++i) {
    t.p.push_back(to_double(t.p_exact[i]));
    t.q.push_back(to_double(t.q_exact[i]));
    t.qt.push_back(to_double(t.qt_exact[i]));
  }
  t.p_star = to_double(t.p_star_exact);
  t.q_star = to_double(t.q_star_exact);
  return t;
}

inline RecurrenceTable pq_float(int k, const Rational& xi_r, int delta) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  RecurrenceTable t;
  t.k = k;
  t.delta = delta;
  t.xi = xi_r;
  t.exact = false;
  const Real xi = Real(boost::multiprecision::numerator(xi_r).str()) /
                  Real(boost::multiprecision::denominator(xi_r).str());
  const Real kk = k;
  const Real base = (kk - 1) / kk;
  Real qt_sum = 0, p_sum = 0, q_sum = 0;
  t.p.reserve(k);
  t.q.reserve(k);
  t.qt.reserve(k);
  for (int i = 1; i <= k; ++i) {
    Real s = base - qt_sum / kk;
    Real s_pow_lo = 1;
    for (int e = 0; e < delta - 3; ++e) s_pow_lo *= s;
    Real s_pow = s_pow_lo * s;
    Real p = 1 / (2 + xi * s_pow);
    Real q = xi * p * s_pow;
    Real qt = xi * p * s_pow_lo;
    qt_sum += qt;
    p_sum += p;
    q_sum += q;
    t.p.push_back(p.convert_to<double>());
    t.q.push_back(q.convert_to<double>());
    t.qt.push_back(qt.convert_to<double>());
  }
  t.p_star = Real(p_sum / kk).convert_to<double>();
  t.q_star = Real(q_sum / kk).convert_to<double>();
  return t;
}

}  // namespace detail

enum class ExactMode { automatic, always, never };

/// Computes the table for k levels. In automatic mode the exact rational route
/// is attempted first and abandoned once the entries outgrow the bit budget.
inline RecurrenceTable pq_table(int k, const Rational& xi, int delta,
                                ExactMode mode = ExactMode::automatic,
                                long bit_budget = kDefaultExactBitBudget) {
  detail::require(k >= 1, "k must be at least 1");
  detail::require(xi >= 0 && xi <= 1, "xi must lie in [0, 1]");
  detail::require(delta >= 3, "delta must be at least 3");
  if (mode == ExactMode::never) return detail::pq_float(k, xi, delta);
  const long budget = mode == ExactMode::always ? std::numeric_limits<long>::max() : bit_budget;
  if (auto t = detail::pq_exact(k, xi, delta, budget)) return std::move(*t);
  return detail::pq_float(k, xi, delta);
}

/// Limit shape of p_k(i) at x = (i-1)/(k-1) for delta = 3: f(x) = (9 - 2x)^(-1/2).
inline double limit_profile(double x) {
  detail::require(x >= 0.0 && x <= 1.0, "limit_profile is defined on [0, 1]");
  return 1.0 / std::sqrt(9.0 - 2.0 * x);
}

/// The limit of p*_k: the integral of the limit profile over [0, 1].
inline double limit_p_star() { return 3.0 - std::sqrt(7.0); }

// ---------------------------------------------------------------------------
// Even-degree ODE

struct OdeSolution {
  int delta = 4;
  double h = 1e-3;
  std::vector<double> x, f, q_tilde, q;  // q integrated independently of f
  double f1 = 0;
  double q1 = 0;
  double f1_bound = 0;  ///< closed-form upper bound on F(1)
  double q1_target = 0; ///< 1 / (delta + 1)

  double q1_margin() const { return q1 - q1_target; }
};

/// Closed-form bound 1 + 3/(delta-2) * log(((2/3)^(delta-2) + 2) / 3).
inline double ode_f1_bound(int delta) {
  const double r = std::pow(2.0 / 3.0, delta - 2);
  return 1.0 + 3.0 / (delta - 2) * std::log((r + 2.0) / 3.0);
}

inline double ode_rhs(int delta, double f) {
  return -std::pow(f, delta - 3) / (std::pow(f, delta - 2) + 2.0);
}

/// Integrates F' = -F^(delta-3) / (F^(delta-2) + 2), F(0) = 1, together with
/// Q' = -F F', Q(0) = 0, by the classical fourth-order Runge-Kutta method on a
/// fixed grid over [0, 1].
inline OdeSolution integrate_even_ode(int delta, double h) {
  detail::require(delta >= 4 && delta % 2 == 0, "ode needs an even delta >= 4");
  detail::require(h > 0 && h <= 1e-3, "step must lie in (0, 1e-3]");
  const double steps_real = 1.0 / h;
  const long steps = std::lround(steps_real);
  detail::require(std::abs(steps_real - static_cast<double>(steps)) < 1e-6,
                  "step must divide [0, 1] evenly");
  OdeSolution s;
  s.delta = delta;
  s.h = h;
  s.q1_target = 1.0 / (delta + 1);
  s.f1_bound = ode_f1_bound(delta);
  auto deriv = [delta](double f) {
    const double fp = ode_rhs(delta, f);
    return std::pair{fp, -f * fp};
  };
  double f = 1.0, q = 0.0;
  const double step = 1.0 / static_cast<double>(steps);
  s.x.reserve(steps + 1);
  for (long i = 0; i <= steps; ++i) {
    s.x.push_back(static_cast<double>(i) * step);
    s.f.push_back(f);
    s.q_tilde.push_back(1.0 - f);
    s.q.push_back(q);
    if (i == steps) break;
    auto [k1f, k1q] = deriv(f);
    auto [k2f, k2q] = deriv(f + 0.5 * step * k1f);
    auto [k3f, k3q] = deriv(f + 0.5 * step * k2f);
    auto [k4f, k4q] = deriv(f + step * k3f);
    f += step / 6.0 * (k1f + 2 * k2f + 2 * k3f + k4f);
    q += step / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
  }
  s.f1 = f;
  s.q1 = q;
  return s;
}

struct OdeVerdict {
  OdeSolution coarse, fine;
  double richardson_f1 = 0;  ///< |F1(h) - F1(h/2)|
  double richardson_q1 = 0;
  double identity_residual = 0;  ///< max |Q - (1 - F^2)/2| on the coarse grid
  bool f_decreasing = false;
  bool f_convex = false;
  bool q_increasing = false;

  bool q1_exceeds_target() const { return coarse.q1 > coarse.q1_target; }
  bool f1_below_bound() const { return coarse.f1 < coarse.f1_bound; }
};

/// Runs the integration at h and h/2 and checks the shape properties on the grid.
inline OdeVerdict verify_even_ode(int delta, double h) {
  OdeVerdict v;
  v.coarse = integrate_even_ode(delta, h);
  v.fine = integrate_even_ode(delta, h / 2);
  v.richardson_f1 = std::abs(v.coarse.f1 - v.fine.f1);
  v.richardson_q1 = std::abs(v.coarse.q1 - v.fine.q1);
  const auto& s = v.coarse;
  v.f_decreasing = v.q_increasing = v.f_convex = true;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    v.identity_residual =
        std::max(v.identity_residual, std::abs(s.q[i] - (1 - s.f[i] * s.f[i]) / 2));
    if (i > 0) {
      v.f_decreasing = v.f_decreasing && s.f[i] < s.f[i - 1];
      v.q_increasing = v.q_increasing && s.q[i] > s.q[i - 1];
    }
    if (i > 0 && i + 1 < s.x.size())
      v.f_convex = v.f_convex && (s.f[i + 1] - 2 * s.f[i] + s.f[i - 1]) > 0;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Convergence of p*_k

struct ConvergenceRow {
  int k = 0;
  double p_star = 0;
  double gap = 0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool monotone = false;
  double tolerance = 1e-3;
  bool final_within_tolerance = false;
};

inline ConvergenceReport verify_limit_convergence(const std::vector<int>& k_list,
                                                  double tolerance = 1e-3) {
  ConvergenceReport r;
  r.tolerance = tolerance;
  r.monotone = true;
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    detail::require(i == 0 || k_list[i] > k_list[i - 1], "k_list must be increasing");
    auto t = pq_table(k_list[i], Rational(1), 3);
    ConvergenceRow row{k_list[i], t.p_star, std::abs(t.p_star - limit_p_star())};
    if (!r.rows.empty() && !(row.gap < r.rows.back().gap)) r.monotone = false;
    r.rows.push_back(row);
  }
  r.final_within_tolerance = !r.rows.empty() && r.rows.back().gap < tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Calibration of xi

struct Estimate {
  double value = 0;
  double half_width = 0;  ///< confidence half-width; 0 for exact estimators
};

/// Returns an estimate of the calibrated quantity at xi using `samples` draws.
using XiEstimator = std::function<Estimate(double xi, long samples)>;

struct CalibrationOptions {
  long initial_samples = 1000;
  long max_samples = 1L << 22;
  int max_evaluations = 200;
  double xi_resolution = 1e-13;
};

struct CalibrationResult {
  double xi = 0;
  Estimate estimate;
  int evaluations = 0;
  long final_samples = 0;
};

/// Bisection for estimate(xi) = target. An interval that straddles the target
/// without resolving it doubles the sample size instead of moving. If the ends
/// of [0, 1] do not bracket the target, a grid scan looks for a bracket first.
inline CalibrationResult calibrate_xi(const XiEstimator& estimator, double target, double tol,
                                      const CalibrationOptions& opt = {}) {
  detail::require(tol > 0, "tolerance must be positive");
  CalibrationResult res;
  long samples = opt.initial_samples;
  auto eval = [&](double xi) {
    ++res.evaluations;
    if (res.evaluations > opt.max_evaluations)
      throw BudgetExhausted("calibrate_xi: evaluation budget exhausted");
    return estimator(xi, samples);
  };
  auto below = [&](const Estimate& e) { return e.value + e.half_width < target; };
  auto above = [&](const Estimate& e) { return e.value - e.half_width > target; };
  auto hit = [&](const Estimate& e) { return std::abs(e.value - target) + e.half_width < tol; };

  double lo = 0, hi = 1;
  Estimate elo = eval(lo), ehi = eval(hi);
  if (hit(elo) && hit(ehi)) {
    res.xi = 0.5;
    res.estimate = eval(0.5);
    res.final_samples = samples;
    return res;
  }
  if (!(below(elo) && above(ehi))) {
    bool found = false;
    const int grid = 16;
    Estimate prev = elo;
    for (int i = 1; i <= grid && !found; ++i) {
      const double x = static_cast<double>(i) / grid;
      Estimate cur = i == grid ? ehi : eval(x);
      if (below(prev) && above(cur)) {
        lo = static_cast<double>(i - 1) / grid;
        hi = x;
        found = true;
      }
      prev = cur;
    }
    if (!found) throw PreconditionError("calibrate_xi: target is not bracketed on [0, 1]");
  }
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    Estimate e = eval(mid);
    if (hit(e) || hi - lo < opt.xi_resolution) {
      res.xi = mid;
      res.estimate = e;
      res.final_samples = samples;
      return res;
    }
    if (above(e)) {
      hi = mid;
    } else if (below(e)) {
      lo = mid;
    } else {
      samples *= 2;
      if (samples > opt.max_samples)
        throw BudgetExhausted("calibrate_xi: sample budget exhausted");
    }
  }
}

}  // namespace ftc

#endif  // FTC_RECURRENCE_HPP
