#pragma once
// Statistical primitives used by the experiment pipeline: Pearson
// correlation with two-sided p-values, correlation-based column selection,
// L2-regularized logistic regression fit by damped Newton steps, and
// rank-based AUROC. Everything is a pure, deterministic function of its
// inputs.

#include <cstddef>
#include <span>
#include <vector>

namespace turnsig::stats {

/// Dense row-major matrix, the minimum we need for design matrices.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// Continued-fraction regularized incomplete beta I_x(a, b), the tail
/// workhorse behind the t-distribution p-values. Relative accuracy ~1e-14.
double regularized_incomplete_beta(double x, double a, double b);

/// Two-sided tail probability P(|T| > t) for Student-t with df degrees
/// of freedom, via I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

struct PearsonResult {
  double r;
  double p;
};

/// Sample Pearson correlation with a two-sided p-value from the exact
/// t distribution on n-2 degrees of freedom. Constant input yields
/// (r=0, p=1) by convention. Requires n >= 3 and equal lengths.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

/// The |r| cutoff equivalent to a two-sided p-value threshold at sample
/// size n: p(r, n) < p_threshold  iff  |r| > the returned value.
double pearson_r_cutoff(double p_threshold, std::size_t n);

struct SelectionResult {
  std::vector<std::size_t> selected;  // sorted ascending, all with p < threshold
  std::vector<double> r;              // one per column
  std::vector<double> p;              // one per column
};

/// Per-column Pearson correlation against `target`; keeps columns whose
/// p-value is strictly below p_threshold.
SelectionResult select_features(const Matrix& x, std::span<const double> target,
                                double p_threshold);

struct FitResult {
  std::vector<double> weights;  // d feature weights followed by the intercept
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// Minimizes mean log-loss + (l2/2)*||w||^2 (intercept unpenalized) by
/// damped Newton iterations from zero weights, stopping when the gradient
/// norm drops to tol. Expects column-standardized X and y in {0,1}.
FitResult fit_logistic(const Matrix& x, std::span<const int> y, double l2,
                       int max_iter = 100, double tol = 1e-10);

/// sigmoid(w.x + b), clamped into (0, 1).
double predict_proba(const FitResult& fit, std::span<const double> x);

/// P(score+ > score-) + 0.5 P(tie) via the rank statistic; exactly equals
/// pairwise counting. Throws if only one class is present.
double auroc(std::span<const double> scores, std::span<const int> labels);

/// Mean log-loss + (l2/2)*||w||^2 of a weight vector; exposed for the
/// optimality checks in the test suites.
double logistic_objective(const Matrix& x, std::span<const int> y, double l2,
                          std::span<const double> weights);

}  // namespace turnsig::stats
