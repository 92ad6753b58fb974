#include "turnsig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace turnsig::stats {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Modified Lentz evaluation of the textbook continued fraction for the
// incomplete beta function.
double beta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double result = d;
  for (int m = 1; m <= 200000; ++m) {
    double dm = static_cast<double>(m);
    // even-step coefficient
    double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    result *= d * c;
    // odd-step coefficient
    num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double mult = d * c;
    result *= mult;
    if (std::fabs(mult - 1.0) < eps) break;
  }
  return result;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0) || !(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("regularized_incomplete_beta: bad arguments");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                   beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_two_sided_p: df must be positive");
  if (!std::isfinite(t)) return 0.0;
  double x = df / (df + t * t);
  return regularized_incomplete_beta(x, df / 2.0, 0.5);
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("pearson: need at least 3 samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return {0.0, 1.0};  // constant input, by convention
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);
  double df = static_cast<double>(n - 2);
  if (1.0 - r * r <= 0.0) return {r, 0.0};
  double t = r * std::sqrt(df / (1.0 - r * r));
  return {r, student_t_two_sided_p(t, df)};
}

double pearson_r_cutoff(double p_threshold, std::size_t n) {
  if (n < 3) throw std::invalid_argument("pearson_r_cutoff: need n >= 3");
  if (p_threshold >= 1.0) return 0.0;
  if (p_threshold <= 0.0) return 1.0;
  double df = static_cast<double>(n - 2);
  auto p_of_r = [df](double r) {
    if (r >= 1.0) return 0.0;
    double t = r * std::sqrt(df / (1.0 - r * r));
    return student_t_two_sided_p(t, df);
  };
  double lo = 0.0, hi = 1.0;  // p_of_r is strictly decreasing on [0,1]
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (p_of_r(mid) < p_threshold)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

SelectionResult select_features(const Matrix& x, std::span<const double> target,
                                double p_threshold) {
  if (x.rows != target.size()) throw std::invalid_argument("select_features: shape mismatch");
  SelectionResult out;
  out.r.resize(x.cols);
  out.p.resize(x.cols);
  std::vector<double> column(x.rows);
  for (std::size_t c = 0; c < x.cols; ++c) {
    for (std::size_t rI = 0; rI < x.rows; ++rI) column[rI] = x.at(rI, c);
    auto pr = pearson(column, target);
    out.r[c] = pr.r;
    out.p[c] = pr.p;
    if (pr.p < p_threshold) out.selected.push_back(c);
  }
  return out;
}

namespace {

// Cholesky solve of the (d+1)x(d+1) SPD Newton system, in place.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (sum <= 0.0) return false;
        a[i * n + i] = std::sqrt(sum);
      } else {
        a[i * n + j] = sum / a[j * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= a[i * n + k] * b[k];
    b[i] = sum / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < n; ++k) sum -= a[k * n + i] * b[k];
    b[i] = sum / a[i * n + i];
  }
  return true;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double logistic_objective(const Matrix& x, std::span<const int> y, double l2,
                          std::span<const double> weights) {
  const std::size_t n = x.rows, d = x.cols;
  if (weights.size() != d + 1) throw std::invalid_argument("logistic_objective: bad weight size");
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = weights[d];
    auto row = x.row(i);
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * row[j];
    loss += softplus(z) - static_cast<double>(y[i]) * z;
  }
  loss /= static_cast<double>(n);
  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) reg += weights[j] * weights[j];
  return loss + 0.5 * l2 * reg;
}

FitResult fit_logistic(const Matrix& x, std::span<const int> y, double l2, int max_iter,
                       double tol) {
  const std::size_t n = x.rows, d = x.cols;
  if (y.size() != n) throw std::invalid_argument("fit_logistic: label count mismatch");
  if (!(l2 > 0.0)) throw std::invalid_argument("fit_logistic: l2 must be positive");
  for (double v : x.data)
    if (!std::isfinite(v)) throw std::invalid_argument("fit_logistic: non-finite input");
  for (int v : y)
    if (v != 0 && v != 1) throw std::invalid_argument("fit_logistic: labels must be 0/1");

  const std::size_t m = d + 1;  // weights plus intercept
  FitResult fit;
  fit.weights.assign(m, 0.0);

  std::vector<double> grad(m), prob(n), hess(m * m), step(m), trial(m);
  double loss = logistic_objective(x, y, l2, fit.weights);

  for (int iter = 0; iter < max_iter; ++iter) {
    // gradient and per-sample sigmoid weights
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double z = fit.weights[d];
      auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) z += fit.weights[j] * row[j];
      prob[i] = sigmoid(z);
      double resid = (prob[i] - static_cast<double>(y[i])) / static_cast<double>(n);
      for (std::size_t j = 0; j < d; ++j) grad[j] += resid * row[j];
      grad[d] += resid;
    }
    for (std::size_t j = 0; j < d; ++j) grad[j] += l2 * fit.weights[j];

    double gnorm = 0.0;
    for (double g : grad) gnorm += g * g;
    gnorm = std::sqrt(gnorm);
    fit.gradient_norm = gnorm;
    fit.iterations = iter;
    if (gnorm <= tol) {
      fit.converged = true;
      return fit;
    }

    // Hessian: X^T S X / n with the l2 ridge on the weight block
    std::fill(hess.begin(), hess.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = std::max(prob[i] * (1.0 - prob[i]), 1e-12) / static_cast<double>(n);
      auto row = x.row(i);
      for (std::size_t a = 0; a < d; ++a) {
        double sa = s * row[a];
        for (std::size_t b = 0; b <= a; ++b) hess[a * m + b] += sa * row[b];
        hess[d * m + a] += sa;
      }
      hess[d * m + d] += s;
    }
    for (std::size_t j = 0; j < d; ++j) hess[j * m + j] += l2;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) hess[a * m + b] = hess[b * m + a];

    step = grad;
    std::vector<double> chol = hess;
    if (!cholesky_solve(chol, step, m)) {
      for (std::size_t j = 0; j < m; ++j) hess[j * m + j] += 1e-8;
      chol = hess;
      step = grad;
      if (!cholesky_solve(chol, step, m)) break;
    }

    // Damped step: halve until the objective decreases.
    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < m; ++j) trial[j] = fit.weights[j] - t * step[j];
      double trial_loss = logistic_objective(x, y, l2, trial);
      if (trial_loss < loss) {
        fit.weights = trial;
        loss = trial_loss;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;  // stalled; gradient norm reported as-is
  }
  // final gradient norm
  fit.converged = false;
  {
    std::vector<double> g(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double z = fit.weights[d];
      auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) z += fit.weights[j] * row[j];
      double resid = (sigmoid(z) - static_cast<double>(y[i])) / static_cast<double>(n);
      for (std::size_t j = 0; j < d; ++j) g[j] += resid * row[j];
      g[d] += resid;
    }
    for (std::size_t j = 0; j < d; ++j) g[j] += l2 * fit.weights[j];
    double gnorm = 0.0;
    for (double v : g) gnorm += v * v;
    fit.gradient_norm = std::sqrt(gnorm);
    fit.converged = fit.gradient_norm <= tol;
  }
  return fit;
}

double predict_proba(const FitResult& fit, std::span<const double> x) {
  if (x.size() + 1 != fit.weights.size())
    throw std::invalid_argument("predict_proba: dimension mismatch");
  double z = fit.weights.back();
  for (std::size_t j = 0; j < x.size(); ++j) z += fit.weights[j] * x[j];
  double p = sigmoid(z);
  return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auroc: length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int l : labels) n_pos += static_cast<std::size_t>(l != 0);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("auroc: both classes must be present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] != 0) rank_sum_pos += midrank;
    i = j;
  }
  double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace turnsig::stats
