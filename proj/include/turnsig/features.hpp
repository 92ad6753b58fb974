#pragma once
// Per-turn feature extraction: 28 linguistic-complexity features (LING),
// 19 semantic-content features (CNT) and 11 dialogue/turn-taking features
// (DIAL), plus the assembly of per-group feature paths over an interview's
// turn sequence with missing-value imputation.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "turnsig/lexicon.hpp"
#include "turnsig/sigcore.hpp"
#include "turnsig/transcript.hpp"

namespace turnsig::feat {

enum class FeatureGroup { LING, CNT, DIAL };

std::string_view to_string(FeatureGroup g);
/// LING, CNT, DIAL in the canonical column order.
const std::vector<FeatureGroup>& all_groups();

/// Feature identifiers per group (column names in the extract CSV).
const std::vector<std::string>& feature_names(FeatureGroup group);
/// Short report labels per group, matched index-wise to feature_names.
const std::vector<std::string>& feature_labels(FeatureGroup group);
std::size_t group_dim(FeatureGroup group);

struct TurnFeatures {
  FeatureGroup group;
  std::vector<double> values;       // aligned with feature_names(group)
  std::vector<bool> missing;        // true where the value is undefined
};

struct FeatureConfig {
  std::size_t mattr_window = 10;
  std::vector<std::string> depid_labels;  // empty selects the built-in default

  const std::vector<std::string>& proposition_labels() const;
};

/// Dependency relations counted as propositions by default: verbal,
/// adjectival, adverbial, prepositional and conjunction relations.
const std::vector<std::string>& default_depid_labels();

// -- lexical diversity / density primitives -------------------------------

/// Moving-average type-to-token ratio: mean TTR over all sliding windows;
/// whole-sequence TTR when there are fewer tokens than the window.
std::optional<double> mattr(const std::vector<std::string>& tokens, std::size_t window);

/// N^(V^-0.165) with N tokens and V types.
std::optional<double> brunet_index(const std::vector<std::string>& tokens);

/// 100 ln N / (1 - V1/V); undefined when every type is a hapax.
std::optional<double> honore_statistic(const std::vector<std::string>& tokens);

/// Proposition-bearing dependency labels per word.
std::optional<double> depid(const std::vector<Token>& tokens,
                            const std::vector<std::string>& proposition_labels);

/// Mean tokens per completed sentence, using is_sentence_final boundaries.
std::optional<double> mean_sentence_length(const std::vector<Token>& tokens);

// -- per-turn vectors ------------------------------------------------------

TurnFeatures ling_vector(const SpeakerTurn& turn, const lex::LexiconSet& lexicons,
                         const FeatureConfig& config);
TurnFeatures cnt_vector(const SpeakerTurn& turn, const lex::LexiconSet& lexicons);

/// Running state over a dialogue, reflecting every turn strictly before
/// the one being featurized (both speakers).
struct DialogueContext {
  double speaking_time[2] = {0, 0};  // indexed by Speaker
  long word_count[2] = {0, 0};
  long turn_count[2] = {0, 0};
  double duration_sum[2] = {0, 0};
  long token_sum[2] = {0, 0};
  std::optional<double> prev_end;
  std::optional<Speaker> prev_speaker;

  void observe(const SpeakerTurn& turn);
};

TurnFeatures dial_vector(const SpeakerTurn& turn, const DialogueContext& context);

// -- paths over the turn sequence -------------------------------------------

/// Raw (pre-imputation) per-turn vectors for the subject's turns, with the
/// dialogue context threaded over every turn of the interview.
std::map<FeatureGroup, std::vector<TurnFeatures>> turn_features(const Interview& interview,
                                                                Subject subject,
                                                                const lex::LexiconSet& lexicons,
                                                                const FeatureConfig& config);

/// Turns a per-turn series into a complete path: missing entries take the
/// previous turn's value, or the per-dimension fallback (for example a
/// training-population median) when nothing precedes; 0 if no fallback.
sig::Path impute_path(const std::vector<TurnFeatures>& series, FeatureGroup group,
                      const std::vector<double>* fallback = nullptr);

/// One d-dimensional path per feature group, points in turn order.
std::map<FeatureGroup, sig::Path> feature_paths(
    const Interview& interview, Subject subject, const lex::LexiconSet& lexicons,
    const FeatureConfig& config,
    const std::map<FeatureGroup, std::vector<double>>* fallbacks = nullptr);

}  // namespace turnsig::feat
