#include "turnsig/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "turnsig/errors.hpp"
#include "turnsig/rng.hpp"

namespace turnsig::pipe {

namespace {

constexpr int kFitMaxIter = 200;
constexpr double kFitTol = 1e-8;
constexpr double kMinStd = 1e-12;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

}  // namespace

std::string_view to_string(Task t) {
  switch (t) {
    case Task::HvsBD: return "h-vs-bd";
    case Task::HvsBPD: return "h-vs-bpd";
    default: return "bd-vs-bpd";
  }
}

Task task_from_string(std::string_view s) {
  if (s == "h-vs-bd" || s == "H_vs_BD") return Task::HvsBD;
  if (s == "h-vs-bpd" || s == "H_vs_BPD") return Task::HvsBPD;
  if (s == "bd-vs-bpd" || s == "BD_vs_BPD") return Task::BDvsBPD;
  throw std::invalid_argument("unknown task '" + std::string(s) + "'");
}

double ExperimentConfig::resolved_threshold() const {
  if (p_threshold) return *p_threshold;
  return subject == Subject::Participant ? 0.001 : 0.002;
}

void ExperimentConfig::validate() const {
  if (sig_level < 1 || sig_level > 5)
    throw std::invalid_argument("config: sig_level must be in 1..5");
  double thr = resolved_threshold();
  if (!(thr > 0.0 && thr < 1.0) || !(fallback_threshold > 0.0 && fallback_threshold < 1.0))
    throw std::invalid_argument("config: thresholds must lie in (0,1)");
  if (groups.empty()) throw std::invalid_argument("config: at least one feature group is required");
  if (!(l2 > 0.0)) throw std::invalid_argument("config: l2 must be positive");
  if (mattr_window < 1) throw std::invalid_argument("config: mattr_window must be >= 1");
  if (top_k < 0) throw std::invalid_argument("config: top_k must be >= 0");
}

feat::FeatureConfig ExperimentConfig::feature_config() const {
  feat::FeatureConfig fc;
  fc.mattr_window = mattr_window;
  return fc;
}

namespace {

// config.groups in canonical column order, deduplicated
std::vector<feat::FeatureGroup> normalized_groups(const ExperimentConfig& config) {
  std::vector<feat::FeatureGroup> out;
  for (auto g : feat::all_groups())
    if (std::find(config.groups.begin(), config.groups.end(), g) != config.groups.end())
      out.push_back(g);
  return out;
}

std::size_t summary_length(const ExperimentConfig& config) {
  std::size_t total = 0;
  for (auto g : normalized_groups(config))
    total += sig::sig_length(feat::group_dim(g), static_cast<std::size_t>(config.sig_level));
  return total;
}

}  // namespace

std::string display(const ColumnLabel& label) {
  const auto& names = feat::feature_labels(label.group);
  std::string out = "(";
  for (std::size_t i = 0; i < label.word.size(); ++i) {
    if (i) out += ", ";
    out += names[label.word[i]];
  }
  out += ')';
  return out;
}

std::vector<ColumnLabel> column_labels(const ExperimentConfig& config) {
  std::vector<ColumnLabel> out;
  out.reserve(summary_length(config));
  for (auto g : normalized_groups(config)) {
    const std::size_t d = feat::group_dim(g);
    for (int level = 1; level <= config.sig_level; ++level) {
      const std::size_t len = sig::level_length(d, static_cast<std::size_t>(level));
      for (std::size_t idx = 0; idx < len; ++idx)
        out.push_back({g, sig::word_of_index(static_cast<std::size_t>(level), idx, d)});
    }
  }
  return out;
}

ExtractedInterview extract_interview(const Interview& interview, const ExperimentConfig& config,
                                     const lex::LexiconSet& lexicons) {
  return {interview.id, interview.group, interview.ipde_score,
          feat::turn_features(interview, config.subject, lexicons, config.feature_config())};
}

TrainingStats training_stats(const std::vector<ExtractedInterview>& set,
                             const ExperimentConfig& config, std::optional<std::size_t> exclude) {
  TrainingStats out;
  for (auto g : normalized_groups(config)) {
    const std::size_t d = feat::group_dim(g);
    GroupStats gs;
    gs.median.assign(d, 0.0);
    gs.mean.assign(d, 0.0);
    gs.stddev.assign(d, 0.0);

    std::vector<std::vector<double>> observed(d);
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (exclude && i == *exclude) continue;
      for (const auto& tf : set[i].series.at(g))
        for (std::size_t j = 0; j < d; ++j)
          if (!tf.missing[j]) observed[j].push_back(tf.values[j]);
    }
    for (std::size_t j = 0; j < d; ++j) {
      auto& xs = observed[j];
      if (xs.empty()) continue;
      std::sort(xs.begin(), xs.end());
      gs.median[j] = xs.size() % 2 ? xs[xs.size() / 2]
                                   : 0.5 * (xs[xs.size() / 2 - 1] + xs[xs.size() / 2]);
    }

    std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
    std::size_t points = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (exclude && i == *exclude) continue;
      sig::Path p = feat::impute_path(set[i].series.at(g), g, &gs.median);
      for (std::size_t k = 0; k < p.size(); ++k) {
        for (std::size_t j = 0; j < d; ++j) {
          sum[j] += p[k][j];
          sumsq[j] += p[k][j] * p[k][j];
        }
        ++points;
      }
    }
    if (points > 0) {
      for (std::size_t j = 0; j < d; ++j) {
        gs.mean[j] = sum[j] / static_cast<double>(points);
        double var = sumsq[j] / static_cast<double>(points) - gs.mean[j] * gs.mean[j];
        gs.stddev[j] = var > 0.0 ? std::sqrt(var) : 0.0;
      }
    }
    out.emplace(g, std::move(gs));
  }
  return out;
}

std::vector<double> summarize_interview(const ExtractedInterview& extracted,
                                        const ExperimentConfig& config,
                                        const TrainingStats& stats) {
  std::vector<double> out;
  out.reserve(summary_length(config));
  for (auto g : normalized_groups(config)) {
    const auto& gs = stats.at(g);
    const std::size_t d = feat::group_dim(g);
    sig::Path raw = feat::impute_path(extracted.series.at(g), g, &gs.median);
    sig::Path path(d);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      std::vector<double> pt(d);
      for (std::size_t j = 0; j < d; ++j) {
        double v = raw[k][j];
        if (config.znorm) v = (v - gs.mean[j]) / (gs.stddev[j] > kMinStd ? gs.stddev[j] : 1.0);
        pt[j] = v;
      }
      path.push_back(std::move(pt));
    }
    if (config.basepoint) path = sig::augment_basepoint(path);
    sig::Signature s = sig::path_signature(path, static_cast<std::size_t>(config.sig_level));
    auto flat = s.flatten();
    out.insert(out.end(), flat.begin(), flat.end());
  }
  return out;
}

std::vector<double> summarize_interview(const Interview& interview, const ExperimentConfig& config,
                                        const lex::LexiconSet& lexicons,
                                        const TrainingStats& stats) {
  return summarize_interview(extract_interview(interview, config, lexicons), config, stats);
}

int label_of(Group group, Task task) {
  switch (task) {
    case Task::HvsBD:
      if (group == Group::HC) return 0;
      if (group == Group::BD) return 1;
      break;
    case Task::HvsBPD:
      if (group == Group::HC) return 0;
      if (group == Group::BPD) return 1;
      break;
    case Task::BDvsBPD:
      if (group == Group::BD) return 0;
      if (group == Group::BPD) return 1;
      break;
  }
  throw std::invalid_argument("group is not part of this task");
}

std::vector<Interview> filter_task(const std::vector<Interview>& dataset, Task task) {
  std::vector<Interview> out;
  for (const auto& iv : dataset) {
    switch (task) {
      case Task::HvsBD:
        if (iv.group == Group::HC || iv.group == Group::BD) out.push_back(iv);
        break;
      case Task::HvsBPD:
        if (iv.group == Group::HC || iv.group == Group::BPD) out.push_back(iv);
        break;
      case Task::BDvsBPD:
        if (iv.group == Group::BD || iv.group == Group::BPD) out.push_back(iv);
        break;
    }
  }
  std::sort(out.begin(), out.end(), [](const Interview& a, const Interview& b) { return a.id < b.id; });
  int pos = 0;
  for (const auto& iv : out) pos += label_of(iv.group, task);
  if (out.size() < 4 || pos == 0 || pos == static_cast<int>(out.size()))
    throw DataError("task needs both classes and at least 4 interviews");
  return out;
}

namespace {

// Sample r of one column against the target over the training rows,
// identical in formula (and clamping) to stats::pearson.
double train_r(const stats::Matrix& x, std::size_t col, std::span<const double> target,
               std::size_t held_out) {
  const std::size_t n = x.rows;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == held_out) continue;
    mx += x.at(i, col);
    my += target[i];
  }
  const double m = static_cast<double>(n - 1);
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == held_out) continue;
    double dx = x.at(i, col) - mx, dy = target[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// One fold against explicit labels/targets (so permutation runs can reuse
// the fold's summary matrix). `columns` restricts the candidate set.
FoldResult evaluate_fold(const stats::Matrix& x, std::size_t held_out, std::span<const int> y,
                         std::span<const double> target, const ExperimentConfig& config,
                         const std::vector<std::size_t>* columns) {
  const std::size_t n = x.rows;
  const std::size_t n_train = n - 1;
  FoldResult fold;
  fold.label = y[held_out];

  std::vector<std::size_t> all;
  if (!columns) {
    all.resize(x.cols);
    std::iota(all.begin(), all.end(), 0);
    columns = &all;
  }

  std::vector<double> r(columns->size());
  for (std::size_t k = 0; k < columns->size(); ++k)
    r[k] = train_r(x, (*columns)[k], target, held_out);

  auto select_at = [&](double threshold) {
    double cutoff = stats::pearson_r_cutoff(threshold, n_train);
    std::vector<std::size_t> picked;  // indices into `columns`
    for (std::size_t k = 0; k < columns->size(); ++k)
      if (std::fabs(r[k]) > cutoff) picked.push_back(k);
    return picked;
  };

  fold.threshold_used = config.resolved_threshold();
  std::vector<std::size_t> picked = select_at(fold.threshold_used);
  if (picked.empty() && config.fallback_threshold > fold.threshold_used) {
    fold.escalated = true;
    fold.threshold_used = config.fallback_threshold;
    picked = select_at(fold.threshold_used);
  }

  for (std::size_t k : picked) {
    fold.selected.push_back((*columns)[k]);
    fold.selected_r.push_back(r[k]);
  }

  if (picked.empty()) {
    fold.base_rate_fallback = true;
    double base = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != held_out) base += y[i];
    fold.probability = std::clamp(base / static_cast<double>(n_train), 1e-12, 1.0 - 1e-12);
    return fold;
  }

  // column standardization on the training split; zero-spread columns drop
  std::vector<std::size_t> used;
  std::vector<double> mean, inv_std, rr;
  for (std::size_t k = 0; k < fold.selected.size(); ++k) {
    std::size_t c = fold.selected[k];
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != held_out) mu += x.at(i, c);
    mu /= static_cast<double>(n_train);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != held_out) var += (x.at(i, c) - mu) * (x.at(i, c) - mu);
    double sd = std::sqrt(var / static_cast<double>(n_train));
    if (sd <= kMinStd) continue;
    used.push_back(c);
    mean.push_back(mu);
    inv_std.push_back(1.0 / sd);
    rr.push_back(fold.selected_r[k]);
  }
  fold.selected = used;
  fold.selected_r = rr;
  if (used.empty()) {
    fold.base_rate_fallback = true;
    double base = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != held_out) base += y[i];
    fold.probability = std::clamp(base / static_cast<double>(n_train), 1e-12, 1.0 - 1e-12);
    return fold;
  }

  stats::Matrix design(n_train, used.size());
  std::vector<int> y_train(n_train);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == held_out) continue;
    for (std::size_t k = 0; k < used.size(); ++k)
      design.at(row, k) = (x.at(i, used[k]) - mean[k]) * inv_std[k];
    y_train[row] = y[i];
    ++row;
  }
  auto fit = stats::fit_logistic(design, y_train, config.l2, kFitMaxIter, kFitTol);
  fold.weights = fit.weights;

  std::vector<double> held(used.size());
  for (std::size_t k = 0; k < used.size(); ++k)
    held[k] = (x.at(held_out, used[k]) - mean[k]) * inv_std[k];
  fold.probability = stats::predict_proba(fit, held);
  return fold;
}

stats::Matrix fold_matrix(const std::vector<ExtractedInterview>& extracted,
                          const ExperimentConfig& config, std::size_t held_out) {
  TrainingStats st = training_stats(extracted, config, held_out);
  stats::Matrix x(extracted.size(), summary_length(config));
  for (std::size_t j = 0; j < extracted.size(); ++j) {
    auto v = summarize_interview(extracted[j], config, st);
    std::copy(v.begin(), v.end(), x.data.begin() + static_cast<std::ptrdiff_t>(j * x.cols));
  }
  return x;
}

std::vector<int> labels_for(const std::vector<ExtractedInterview>& extracted, Task task) {
  std::vector<int> y(extracted.size());
  for (std::size_t i = 0; i < extracted.size(); ++i) y[i] = label_of(extracted[i].group, task);
  return y;
}

std::vector<double> targets_for(const std::vector<ExtractedInterview>& extracted,
                                const ExperimentConfig& config, std::span<const int> y) {
  std::vector<double> t(extracted.size());
  for (std::size_t i = 0; i < extracted.size(); ++i)
    t[i] = config.selection_target == SelectionTarget::Ipde ? extracted[i].ipde
                                                            : static_cast<double>(y[i]);
  return t;
}

FeatureReport build_report(const ExperimentConfig& config, const std::vector<FoldResult>& folds) {
  FeatureReport report;
  report.labels = column_labels(config);
  report.fold_count = folds.size();
  std::map<std::size_t, std::pair<int, double>> agg;  // column -> (count, sum |r|)
  for (const auto& f : folds)
    for (std::size_t k = 0; k < f.selected.size(); ++k) {
      auto& a = agg[f.selected[k]];
      a.first += 1;
      a.second += std::fabs(f.selected_r[k]);
    }
  for (const auto& [col, a] : agg)
    report.rows.push_back({col, a.first, a.second / a.first});
  std::sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.mean_abs_r != b.mean_abs_r) return a.mean_abs_r > b.mean_abs_r;
    return a.column < b.column;
  });
  return report;
}

}  // namespace

FoldResult run_fold(const std::vector<ExtractedInterview>& extracted, std::size_t held_out,
                    const ExperimentConfig& config) {
  stats::Matrix x = fold_matrix(extracted, config, held_out);
  auto y = labels_for(extracted, config.task);
  auto target = targets_for(extracted, config, y);
  FoldResult fold = evaluate_fold(x, held_out, y, target, config, nullptr);
  fold.held_out_id = extracted[held_out].id;
  return fold;
}

LoocvResult run_loocv(const std::vector<Interview>& dataset, const ExperimentConfig& config,
                      const lex::LexiconSet& lexicons) {
  config.validate();
  auto task_set = filter_task(dataset, config.task);
  std::vector<ExtractedInterview> extracted;
  extracted.reserve(task_set.size());
  for (const auto& iv : task_set) extracted.push_back(extract_interview(iv, config, lexicons));

  LoocvResult result;
  std::vector<double> probs;
  std::vector<int> labels;
  for (std::size_t i = 0; i < extracted.size(); ++i) {
    result.folds.push_back(run_fold(extracted, i, config));
    probs.push_back(result.folds.back().probability);
    labels.push_back(result.folds.back().label);
  }
  result.auroc = stats::auroc(probs, labels);
  result.report = build_report(config, result.folds);
  return result;
}

std::vector<AblationRow> run_ablation(const std::vector<Interview>& dataset,
                                      const ExperimentConfig& config,
                                      const lex::LexiconSet& lexicons) {
  config.validate();
  if (normalized_groups(config).size() != 3)
    throw std::invalid_argument("run_ablation: the base config must include LING, CNT and DIAL");

  using feat::FeatureGroup;
  const std::vector<std::pair<std::string, std::vector<FeatureGroup>>> rows_spec = {
      {"All", {}},
      {"All-CNT", {FeatureGroup::CNT}},
      {"All-DIAL", {FeatureGroup::DIAL}},
      {"All-LING", {FeatureGroup::LING}},
      {"All-LING-CNT", {FeatureGroup::LING, FeatureGroup::CNT}},
      {"All-LING-DIAL", {FeatureGroup::LING, FeatureGroup::DIAL}},
      {"All-CNT-DIAL", {FeatureGroup::CNT, FeatureGroup::DIAL}}};

  // column ranges per group under the full config
  std::map<FeatureGroup, std::pair<std::size_t, std::size_t>> span_of;
  std::size_t off = 0;
  for (auto g : normalized_groups(config)) {
    std::size_t len = sig::sig_length(feat::group_dim(g), static_cast<std::size_t>(config.sig_level));
    span_of[g] = {off, off + len};
    off += len;
  }
  std::vector<std::vector<std::size_t>> row_columns;
  for (const auto& [label, removed] : rows_spec) {
    std::vector<std::size_t> cols;
    for (auto g : normalized_groups(config)) {
      if (std::find(removed.begin(), removed.end(), g) != removed.end()) continue;
      for (std::size_t c = span_of[g].first; c < span_of[g].second; ++c) cols.push_back(c);
    }
    row_columns.push_back(std::move(cols));
  }

  auto task_set = filter_task(dataset, config.task);
  std::vector<ExtractedInterview> extracted;
  for (const auto& iv : task_set) extracted.push_back(extract_interview(iv, config, lexicons));
  auto y = labels_for(extracted, config.task);
  auto target = targets_for(extracted, config, y);

  const std::size_t n = extracted.size();
  std::vector<std::vector<double>> probs(rows_spec.size(), std::vector<double>(n));
  std::vector<double> thresholds(rows_spec.size(), config.resolved_threshold());
  std::vector<int> escalations(rows_spec.size(), 0);

  for (std::size_t i = 0; i < n; ++i) {
    stats::Matrix x = fold_matrix(extracted, config, i);  // all groups; rows slice it
    for (std::size_t rI = 0; rI < rows_spec.size(); ++rI) {
      FoldResult fold = evaluate_fold(x, i, y, target, config, &row_columns[rI]);
      probs[rI][i] = fold.probability;
      if (fold.escalated) {
        escalations[rI] += 1;
        thresholds[rI] = std::max(thresholds[rI], fold.threshold_used);
      }
    }
  }

  std::vector<AblationRow> rows;
  for (std::size_t rI = 0; rI < rows_spec.size(); ++rI)
    rows.push_back({rows_spec[rI].first, stats::auroc(probs[rI], y), thresholds[rI], escalations[rI]});
  return rows;
}

std::vector<double> permutation_null(const std::vector<Interview>& dataset,
                                     const ExperimentConfig& config,
                                     const lex::LexiconSet& lexicons, int n_perms) {
  config.validate();
  if (n_perms < 1) throw std::invalid_argument("permutation_null: n_perms must be >= 1");
  auto task_set = filter_task(dataset, config.task);
  std::vector<ExtractedInterview> extracted;
  for (const auto& iv : task_set) extracted.push_back(extract_interview(iv, config, lexicons));
  auto y = labels_for(extracted, config.task);
  auto target = targets_for(extracted, config, y);

  const std::size_t n = extracted.size();
  // label and target shuffled together, once per permutation
  std::vector<std::vector<int>> perm_y(static_cast<std::size_t>(n_perms));
  std::vector<std::vector<double>> perm_t(static_cast<std::size_t>(n_perms));
  for (int p = 0; p < n_perms; ++p) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(config.seed, 0x7065726dULL + static_cast<std::uint64_t>(p));
    rng.shuffle(order);
    auto& py = perm_y[static_cast<std::size_t>(p)];
    auto& pt = perm_t[static_cast<std::size_t>(p)];
    py.resize(n);
    pt.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      py[i] = y[order[i]];
      pt[i] = target[order[i]];
    }
  }

  std::vector<std::vector<double>> probs(static_cast<std::size_t>(n_perms), std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    stats::Matrix x = fold_matrix(extracted, config, i);  // shared across permutations
    for (int p = 0; p < n_perms; ++p) {
      auto fold = evaluate_fold(x, i, perm_y[static_cast<std::size_t>(p)],
                                perm_t[static_cast<std::size_t>(p)], config, nullptr);
      probs[static_cast<std::size_t>(p)][i] = fold.probability;
    }
  }

  std::vector<double> aurocs;
  for (int p = 0; p < n_perms; ++p)
    aurocs.push_back(stats::auroc(probs[static_cast<std::size_t>(p)], perm_y[static_cast<std::size_t>(p)]));
  return aurocs;
}

std::string render_report(const FeatureReport& report, int top_k) {
  std::string out = "rank\tgroup\tfeature\tfolds\tmean_abs_r\n";
  int rank = 0;
  for (const auto& row : report.rows) {
    if (rank >= top_k) break;
    ++rank;
    const auto& label = report.labels[row.column];
    out += std::to_string(rank);
    out += '\t';
    out += feat::to_string(label.group);
    out += '\t';
    out += display(label);
    out += '\t';
    out += std::to_string(row.count);
    out += '\t';
    out += fmt("%.4f", row.mean_abs_r);
    out += '\n';
  }
  return out;
}

std::string results_tsv(const LoocvResult& result) {
  std::string out = "interview_id\tlabel\tprobability\tn_selected\tthreshold\tescalated\tbase_rate\n";
  for (const auto& f : result.folds) {
    out += f.held_out_id;
    out += '\t';
    out += std::to_string(f.label);
    out += '\t';
    out += fmt("%.6f", f.probability);
    out += '\t';
    out += std::to_string(f.selected.size());
    out += '\t';
    out += fmt("%g", f.threshold_used);
    out += '\t';
    out += f.escalated ? "1" : "0";
    out += '\t';
    out += f.base_rate_fallback ? "1" : "0";
    out += '\n';
  }
  return out;
}

std::string ablation_tsv(const std::vector<AblationRow>& rows) {
  std::string out = "features\tauroc\tthreshold\tescalated_folds\n";
  for (const auto& r : rows) {
    out += r.label;
    out += '\t';
    out += fmt("%.6f", r.auroc);
    out += '\t';
    out += fmt("%g", r.threshold_used);
    out += '\t';
    out += std::to_string(r.escalated_folds);
    out += '\n';
  }
  return out;
}

}  // namespace turnsig::pipe
