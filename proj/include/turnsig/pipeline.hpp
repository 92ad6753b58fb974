#pragma once
// End-to-end experiment runner: turn-level feature paths -> truncated
// signatures -> correlation-based selection -> leave-one-interview-out
// logistic regression -> AUROC, with ablation sweeps and ranked feature
// reports. Every fold recomputes imputation medians, normalization
// statistics, selection and the fit from its training split only.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "turnsig/features.hpp"
#include "turnsig/lexicon.hpp"
#include "turnsig/sigcore.hpp"
#include "turnsig/stats.hpp"
#include "turnsig/transcript.hpp"

namespace turnsig::pipe {

enum class Task { HvsBD, HvsBPD, BDvsBPD };
enum class SelectionTarget { Ipde, Label };

std::string_view to_string(Task t);
Task task_from_string(std::string_view s);

struct ExperimentConfig {
  Task task = Task::BDvsBPD;
  Subject subject = Subject::Participant;
  int sig_level = 3;                    // truncation order, 1..5
  std::optional<double> p_threshold;    // unset: 0.001, or 0.002 off-participant
  double fallback_threshold = 0.005;    // escalation when nothing selects
  std::vector<feat::FeatureGroup> groups{feat::FeatureGroup::LING, feat::FeatureGroup::CNT,
                                         feat::FeatureGroup::DIAL};
  double l2 = 1.0;
  bool basepoint = true;
  bool znorm = true;
  std::size_t mattr_window = 10;
  std::uint64_t seed = 0;
  SelectionTarget selection_target = SelectionTarget::Ipde;
  int top_k = 5;

  double resolved_threshold() const;
  void validate() const;  // throws std::invalid_argument
  feat::FeatureConfig feature_config() const;
};

/// Identifies one signature coefficient column: the feature group and the
/// word of turn-level feature indices.
struct ColumnLabel {
  feat::FeatureGroup group;
  sig::Word word;

  bool operator==(const ColumnLabel&) const = default;
};

/// "(Nonflu., CONJ)" — the word rendered with the group's feature labels.
std::string display(const ColumnLabel& label);

/// Labels for every column summarize_interview emits under this config,
/// in column order.
std::vector<ColumnLabel> column_labels(const ExperimentConfig& config);

/// Per-dimension imputation medians and normalization moments, computed
/// from a training split.
struct GroupStats {
  std::vector<double> median;
  std::vector<double> mean;
  std::vector<double> stddev;  // population SD over path points
};
using TrainingStats = std::map<feat::FeatureGroup, GroupStats>;

/// Turn-level series of one interview, cached so folds only redo the
/// fold-dependent work (imputation, normalization, signatures).
struct ExtractedInterview {
  std::string id;
  Group group = Group::HC;
  double ipde = 0.0;
  std::map<feat::FeatureGroup, std::vector<feat::TurnFeatures>> series;
};

ExtractedInterview extract_interview(const Interview& interview, const ExperimentConfig& config,
                                     const lex::LexiconSet& lexicons);

/// Stats over a set of extracted interviews (optionally excluding one, for
/// a fold's training split).
TrainingStats training_stats(const std::vector<ExtractedInterview>& set,
                             const ExperimentConfig& config,
                             std::optional<std::size_t> exclude = std::nullopt);

/// Impute -> z-normalize -> basepoint -> signature -> flatten, concatenated
/// over config.groups. Length = sum over groups of d + d^2 + ... + d^L.
std::vector<double> summarize_interview(const ExtractedInterview& extracted,
                                        const ExperimentConfig& config,
                                        const TrainingStats& stats);
std::vector<double> summarize_interview(const Interview& interview,
                                        const ExperimentConfig& config,
                                        const lex::LexiconSet& lexicons,
                                        const TrainingStats& stats);

/// The task's interviews in id order; throws DataError unless both classes
/// are present and the set is large enough to cross-validate.
std::vector<Interview> filter_task(const std::vector<Interview>& dataset, Task task);

/// 1 for the disorder class of the task (BD, BPD, BPD respectively).
int label_of(Group group, Task task);

struct FoldResult {
  std::string held_out_id;
  int label = 0;
  double probability = 0.5;
  double threshold_used = 0.0;
  bool escalated = false;
  bool base_rate_fallback = false;         // nothing selected even at fallback
  std::vector<std::size_t> selected;       // into column_labels(config)
  std::vector<double> selected_r;          // training-split r per selected column
  std::vector<double> weights;             // fit weights + intercept; empty on fallback
};

struct ReportRow {
  std::size_t column = 0;
  int count = 0;          // folds that selected this column
  double mean_abs_r = 0;  // over those folds
};

struct FeatureReport {
  std::vector<ColumnLabel> labels;  // all columns, index-aligned with rows' `column`
  std::vector<ReportRow> rows;      // ranked: count desc, mean |r| desc
  std::size_t fold_count = 0;
};

struct LoocvResult {
  double auroc = 0.0;
  std::vector<FoldResult> folds;
  FeatureReport report;
};

LoocvResult run_loocv(const std::vector<Interview>& dataset, const ExperimentConfig& config,
                      const lex::LexiconSet& lexicons);

/// One fold of the task set (already filter_task'ed), exposed for the
/// leakage checks.
FoldResult run_fold(const std::vector<ExtractedInterview>& extracted, std::size_t held_out,
                    const ExperimentConfig& config);

struct AblationRow {
  std::string label;          // "All", "All-CNT", ...
  double auroc = 0.0;
  double threshold_used = 0;  // max over folds (fallback if any fold escalated)
  int escalated_folds = 0;
};

/// The seven-row ablation table: All, then each single group removed, then
/// each pair removed. Requires the base config to carry all three groups.
std::vector<AblationRow> run_ablation(const std::vector<Interview>& dataset,
                                      const ExperimentConfig& config,
                                      const lex::LexiconSet& lexicons);

/// AUROCs of `n_perms` label permutations (seeded from config.seed), with
/// fold summaries computed once and reused across permutations.
std::vector<double> permutation_null(const std::vector<Interview>& dataset,
                                     const ExperimentConfig& config,
                                     const lex::LexiconSet& lexicons, int n_perms);

std::string render_report(const FeatureReport& report, int top_k);
std::string results_tsv(const LoocvResult& result);
std::string ablation_tsv(const std::vector<AblationRow>& rows);

}  // namespace turnsig::pipe
