/* Copyright 2026 The scaleinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "scaleinv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "scaleinv/error.hpp"

namespace scaleinv {

double FitResult::at(const std::string& name) const {
  const auto it = params.find(name);
  if (it == params.end()) detail::throw_invalid("fit result has no parameter '" + name + "'");
  return it->second;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "fit_line: length mismatch");
  detail::require(x.size() >= 2, "fit_line: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
    f.max_abs_residual = std::max(f.max_abs_residual, std::abs(r));
  }
  f.rms = std::sqrt(ssr / n);
  if (x.size() > 2) {
    const double sigma2 = ssr / (n - 2.0);
    const double var_slope = sigma2 / sxx;
    f.cov[3] = var_slope;
    f.cov[0] = sigma2 / n + mx * mx * var_slope;
    f.cov[1] = f.cov[2] = -mx * var_slope;
  }
  return f;
}

namespace {

bool inside(double v, FitWindow w) {
  const double slack = 1e-12;
  return v >= w.lo * (1.0 - slack) && v <= w.hi * (1.0 + slack);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

FitResult fit_power_law(std::span<const double> tau, std::span<const double> p, FitWindow window) {
  detail::require(tau.size() == p.size(), "fit_power_law: length mismatch");
  detail::require(window.lo > 0.0 && window.lo < window.hi,
                  "fit_power_law: window needs 0 < lo < hi");
  std::vector<double> x, y;
  double first = 0.0, last = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!(tau[i] > 0.0) || !inside(tau[i], window)) continue;
    if (!(p[i] > 0.0)) {
      throw NumericalError("fit_power_law: non-positive p = " + format_double(p[i]) +
                           " at tau = " + format_double(tau[i]) + " (index " +
                           std::to_string(i) + ")");
    }
    if (x.empty()) first = tau[i];
    last = tau[i];
    x.push_back(std::log(tau[i]));
    y.push_back(std::log(p[i]));
  }
  if (x.size() < 5) {
    throw InvalidArgument("fit_power_law: window [" + format_double(window.lo) + ", " +
                          format_double(window.hi) + "] holds " + std::to_string(x.size()) +
                          " grid points, need at least 5");
  }
  const LineFit f = fit_line(x, y);
  FitResult r;
  r.params["a"] = std::exp(f.intercept);
  r.params["beta"] = -f.slope;
  // (ln a, beta)
  r.covariance = {f.cov[0], -f.cov[1], -f.cov[2], f.cov[3]};
  r.residual = f.rms;
  r.window = {first, last};
  r.n_points = x.size();
  return r;
}

FitResult fit_power_law(const CurveEnsemble& curve, FitWindow window) {
  return fit_power_law(curve.grid.values, curve.mean, window);
}

namespace {

void check_sizes(std::span<const double> dims, std::span<const double> values, std::size_t min,
                 const char* what) {
  detail::require(dims.size() == values.size(), std::string(what) + ": length mismatch");
  detail::require(dims.size() >= min, std::string(what) + ": need at least " +
                                          std::to_string(min) + " sizes");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    detail::require(dims[i] > 0.0 && std::isfinite(dims[i]),
                    std::string(what) + ": dimensions must be positive");
    detail::require(std::isfinite(values[i]), std::string(what) + ": non-finite value");
  }
}

LineFit fractal_inner(std::span<const double> dims, std::span<const double> p_bar, double p_inf) {
  std::vector<double> x(dims.size()), y(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    x[i] = std::log(dims[i]);
    y[i] = std::log(p_bar[i] - p_inf);
  }
  return fit_line(x, y);
}

FitResult fractal_result(const LineFit& f, double p_inf, std::span<const double> dims) {
  FitResult r;
  r.params["P_inf"] = p_inf;
  r.params["c"] = std::exp(f.intercept);
  r.params["gamma"] = -f.slope;
  r.covariance = {f.cov[0], -f.cov[1], -f.cov[2], f.cov[3]};  // (ln c, gamma)
  r.residual = f.rms;
  const auto [lo, hi] = std::minmax_element(dims.begin(), dims.end());
  r.window = {*lo, *hi};
  r.n_points = dims.size();
  return r;
}

}  // namespace

FitResult fit_fractal_dimension(std::span<const double> dims, std::span<const double> p_bar,
                                FractalMode mode) {
  check_sizes(dims, p_bar, 3, "fit_fractal_dimension");
  double p_min = std::numeric_limits<double>::infinity();
  for (double v : p_bar) p_min = std::min(p_min, v);

  if (mode.kind == FractalMode::Kind::FixedPinf) {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (!(p_bar[i] > mode.p_inf)) {
        throw NumericalError("fit_fractal_dimension: P_bar = " + format_double(p_bar[i]) +
                             " <= P_inf = " + format_double(mode.p_inf) +
                             " at D = " + format_double(dims[i]));
      }
    }
    return fractal_result(fractal_inner(dims, p_bar, mode.p_inf), mode.p_inf, dims);
  }

  if (!(p_min > 0.0)) throw NumericalError("fit_fractal_dimension: P_bar must be positive");
  std::vector<std::size_t> order(dims.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return dims[a] < dims[b]; });
  bool monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!(p_bar[order[i]] < p_bar[order[i - 1]])) monotone = false;
  }

  auto objective = [&](double q) { return fractal_inner(dims, p_bar, q).rms; };

  // Coarse scan over [0, p_min), then golden section around the best cell.
  constexpr int kScan = 400;
  const double top = p_min * (1.0 - 1e-9);
  const double step = top / kScan;
  int best_i = 0;
  double best_f = objective(0.0);
  for (int i = 1; i < kScan; ++i) {
    const double f = objective(step * i);
    if (f < best_f) {
      best_f = f;
      best_i = i;
    }
  }
  double lo = step * std::max(best_i - 1, 0);
  double hi = std::min(step * (best_i + 1), top);
  const double tol = 1e-8 * p_min;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = objective(x2);
    }
  }
  double q = 0.5 * (lo + hi);
  double fq = objective(q);
  for (double cand : {x1, x2, step * best_i, 0.0}) {
    const double fc = objective(cand);
    if (fc < fq) {
      fq = fc;
      q = cand;
    }
  }
  FitResult r = fractal_result(fractal_inner(dims, p_bar, q), q, dims);
  if (!monotone) r.warnings.push_back("P_bar is not monotonically decreasing in D");
  return r;
}

FitResult fit_heisenberg_exponent(std::span<const double> dims, std::span<const double> t_H) {
  check_sizes(dims, t_H, 2, "fit_heisenberg_exponent");
  std::vector<double> x(dims.size()), y(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    detail::require(t_H[i] > 0.0, "fit_heisenberg_exponent: t_H must be positive");
    x[i] = std::log(dims[i]);
    y[i] = std::log(t_H[i]);
  }
  const LineFit f = fit_line(x, y);
  FitResult r;
  r.params["n"] = f.slope;
  r.params["A"] = std::exp(f.intercept);
  r.covariance = {f.cov[0], f.cov[1], f.cov[2], f.cov[3]};  // (ln A, n)
  r.residual = f.rms;
  const auto [lo, hi] = std::minmax_element(dims.begin(), dims.end());
  r.window = {*lo, *hi};
  r.n_points = dims.size();
  return r;
}

double beta_prediction(double gamma, double n) {
  detail::require(n > 0.0 && std::isfinite(n), "beta_prediction: n must be positive");
  return gamma / n;
}

double collapse_variable(double alpha, int L, double alpha_c, double mu) {
  const double l = std::log(alpha / alpha_c);
  const double x = std::pow(static_cast<double>(L), 1.0 / mu) * l * l;
  return alpha < alpha_c ? -x : x;
}

double collapse_cost(std::span<const CollapsePoint> points, double alpha_c, double mu,
                     std::size_t* n_excluded) {
  detail::require(alpha_c > 0.0 && mu > 0.0, "collapse_cost: alpha_c and mu must be positive");
  std::vector<std::pair<double, double>> xr;
  xr.reserve(points.size());
  std::size_t excluded = 0;
  for (const auto& pt : points) {
    detail::require(pt.alpha > 0.0 && pt.L > 0 && std::isfinite(pt.r),
                    "collapse_cost: invalid data point");
    if (pt.alpha == alpha_c) {
      ++excluded;
      continue;
    }
    xr.emplace_back(collapse_variable(pt.alpha, pt.L, alpha_c, mu), pt.r);
  }
  if (n_excluded != nullptr) *n_excluded = excluded;
  detail::require(xr.size() >= 2, "collapse_cost: need at least 2 usable points");
  std::sort(xr.begin(), xr.end());
  double r_min = xr.front().second, r_max = xr.front().second, tv = 0.0;
  for (std::size_t j = 1; j < xr.size(); ++j) {
    tv += std::abs(xr[j].second - xr[j - 1].second);
    r_min = std::min(r_min, xr[j].second);
    r_max = std::max(r_max, xr[j].second);
  }
  if (r_max == r_min) return 0.0;
  return tv / (r_max - r_min) - 1.0;
}

namespace {

std::vector<double> linspace(FitWindow w, std::size_t n) {
  if (w.lo == w.hi || n < 2) return {w.lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = w.lo + (w.hi - w.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = w.hi;
  return v;
}

template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, int iterations) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

bool on_boundary(double v, FitWindow w) {
  if (w.lo == w.hi) return false;
  const double eps = 1e-9 * (w.hi - w.lo);
  return v <= w.lo + eps || v >= w.hi - eps;
}

}  // namespace

CollapseResult minimize_collapse(std::span<const CollapsePoint> points, FitWindow alpha_range,
                                 FitWindow mu_range, CollapseOptions options) {
  detail::require(alpha_range.lo > 0.0 && alpha_range.lo <= alpha_range.hi,
                  "minimize_collapse: invalid alpha_c range");
  detail::require(mu_range.lo > 0.0 && mu_range.lo <= mu_range.hi,
                  "minimize_collapse: invalid mu range");
  detail::require(points.size() >= 2, "minimize_collapse: need at least 2 points");
  for (const auto& pt : points) {
    detail::require(std::isfinite(pt.alpha) && std::isfinite(pt.r),
                    "minimize_collapse: non-finite data");
  }

  auto cost = [&](double a, double m) { return collapse_cost(points, a, m); };

  const auto alphas = linspace(alpha_range, options.grid_alpha);
  const auto mus = linspace(mu_range, options.grid_mu);
  CollapseResult res;
  res.alpha_range = alpha_range;
  res.mu_range = mu_range;
  res.cost = std::numeric_limits<double>::infinity();
  for (double a : alphas) {
    for (double m : mus) {
      const double c = cost(a, m);
      if (c < res.cost) {
        res.cost = c;
        res.alpha_c = a;
        res.mu = m;
      }
    }
  }

  const double da = alphas.size() > 1 ? alphas[1] - alphas[0] : 0.0;
  const double dm = mus.size() > 1 ? mus[1] - mus[0] : 0.0;
  for (int round = 0; round < options.refine_rounds; ++round) {
    if (da > 0.0) {
      const double lo = std::max(alpha_range.lo, res.alpha_c - da);
      const double hi = std::min(alpha_range.hi, res.alpha_c + da);
      const double m = res.mu;
      const auto [a, c] = golden_min([&](double x) { return cost(x, m); }, lo, hi, 40);
      if (c < res.cost) {
        res.cost = c;
        res.alpha_c = a;
      }
    }
    if (dm > 0.0) {
      const double lo = std::max(mu_range.lo, res.mu - dm);
      const double hi = std::min(mu_range.hi, res.mu + dm);
      const double a = res.alpha_c;
      const auto [m, c] = golden_min([&](double x) { return cost(a, x); }, lo, hi, 40);
      if (c < res.cost) {
        res.cost = c;
        res.mu = m;
      }
    }
  }

  std::set<int> sizes;
  for (const auto& pt : points) sizes.insert(pt.L);
  if (sizes.size() < 2) {
    res.converged = false;
    res.note = "fewer than two system sizes; mu is undetermined";
  } else if (on_boundary(res.alpha_c, alpha_range)) {
    res.converged = false;
    res.note = "alpha_c minimizer on the search-range boundary";
  } else if (on_boundary(res.mu, mu_range)) {
    res.converged = false;
    res.note = "mu minimizer on the search-range boundary";
  }
  return res;
}

std::optional<FitWindow> propose_power_window(std::span<const double> tau,
                                              std::span<const double> p, FitWindow bounds,
                                              std::size_t min_points, double max_residual) {
  detail::require(tau.size() == p.size(), "propose_power_window: length mismatch");
  detail::require(min_points >= 2, "propose_power_window: min_points must be at least 2");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] > 0.0 && inside(tau[i], bounds) && p[i] > 0.0) {
      x.push_back(std::log(tau[i]));
      y.push_back(std::log(p[i]));
    } else if (!x.empty() && inside(tau[i], bounds)) {
      break;  // a window cannot span a non-positive point
    }
  }
  const std::size_t n = x.size();
  struct Candidate {
    std::size_t i, j;
    double span;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + min_points - 1; j < n; ++j) candidates.push_back({i, j, x[j] - x[i]});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.span > b.span; });
  for (const auto& c : candidates) {
    const std::span<const double> xs(x.data() + c.i, c.j - c.i + 1);
    const std::span<const double> ys(y.data() + c.i, c.j - c.i + 1);
    if (fit_line(xs, ys).max_abs_residual < max_residual) {
      return FitWindow{std::exp(x[c.i]), std::exp(x[c.j])};
    }
  }
  return std::nullopt;
}

CoincidenceWindow coincidence_window(const CurveEnsemble& a, const CurveEnsemble& b,
                                     double n_sigma, FitWindow bounds) {
  detail::require(a.grid.values.size() == b.grid.values.size() &&
                      a.mean.size() == a.grid.values.size() &&
                      b.mean.size() == b.grid.values.size(),
                  "coincidence_window: curves must share a grid");
  CoincidenceWindow best;
  std::size_t run_start = 0, run_len = 0;
  auto close_run = [&](std::size_t end_exclusive) {
    if (run_len == 0) return;
    const double lo = a.grid.values[run_start];
    const double hi = a.grid.values[end_exclusive - 1];
    const double decades = std::log10(hi / lo);
    if (decades > best.decades || best.n_points == 0) {
      best.window = {lo, hi};
      best.n_points = run_len;
      best.decades = decades;
    }
  };
  for (std::size_t i = 0; i < a.grid.values.size(); ++i) {
    const double t = a.grid.values[i];
    bool ok = false;
    if (inside(t, bounds)) {
      const double sa = a.std_err.empty() ? 0.0 : a.std_err[i];
      const double sb = b.std_err.empty() ? 0.0 : b.std_err[i];
      const double diff = std::abs(a.mean[i] - b.mean[i]);
      ok = std::isfinite(diff) && diff <= n_sigma * std::sqrt(sa * sa + sb * sb);
    }
    if (ok) {
      if (run_len == 0) run_start = i;
      ++run_len;
    } else {
      close_run(i);
      run_len = 0;
    }
  }
  close_run(a.grid.values.size());
  return best;
}

}  // namespace scaleinv
