#include "turnsig/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace turnsig::feat {

std::string_view to_string(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::LING: return "LING";
    case FeatureGroup::CNT: return "CNT";
    default: return "DIAL";
  }
}

const std::vector<FeatureGroup>& all_groups() {
  static const std::vector<FeatureGroup> groups{FeatureGroup::LING, FeatureGroup::CNT,
                                               FeatureGroup::DIAL};
  return groups;
}

namespace {

// LING layout: diversity/density statistics, then lexicon category rates,
// then POS-tag rates. 28 features total.
const std::vector<std::string> kLingNames{
    "mattr", "bi",     "hs",     "mls",    "depid",  "func",  "ppron", "i",      "we",   "you",
    "shehe", "they",   "ipron",  "article", "prep",  "auxverb", "adverb", "conj", "negate",
    "quant", "swear",  "nonflu", "filler", "abs",    "verb",  "noun",  "adj",    "intj"};
const std::vector<std::string> kLingLabels{
    "MATTR", "BI",    "HS",      "MLS",      "DEPID", "FUNC",  "PPRO",  "I",    "We",   "You",
    "SheHe", "They",  "IPRO",    "Articles", "PREP",  "AUXV",  "ADV",   "CONJ", "NEG",
    "Quant", "Swear", "Nonflu.", "Filler",   "ABS",   "Verbs", "Nouns", "ADJ",  "UH"};
// (lexicon name, LING slot) for the category-rate block
const std::pair<const char*, std::size_t> kLingLexicons[] = {
    {"function_words", 5}, {"ppron", 6},   {"i", 7},         {"we", 8},
    {"you", 9},            {"shehe", 10},  {"they", 11},     {"ipron", 12},
    {"articles", 13},      {"prepositions", 14}, {"auxiliary_verbs", 15}, {"adverbs", 16},
    {"conjunctions", 17},  {"negations", 18}, {"quantifiers", 19}, {"swear", 20},
    {"nonfluencies", 21},  {"fillers", 22}, {"absolutist", 23}};
const std::pair<const char*, std::size_t> kPosRates[] = {
    {"VERB", 24}, {"NOUN", 25}, {"ADJ", 26}, {"INTJ", 27}};

const std::vector<std::string> kCntNames{
    "affect", "posemo", "negemo", "anx",     "anger", "sad",     "social",  "family",
    "friend", "insight", "cause", "cogproc", "drives", "reward", "risk",    "health",
    "empathy", "distress", "optimism"};
const std::vector<std::string> kCntLabels{
    "Affect", "PosEmo", "NegEmo", "Anx",     "Anger", "Sad",     "SOC",     "Family",
    "Friend", "Insight", "Cause", "CogProc", "DRI",   "Reward",  "Risk",    "Health",
    "Empathy", "Distress", "Optimism"};
const char* kCntCategoryLexicons[] = {"affect", "posemo", "negemo",  "anxiety", "anger",  "sadness",
                                      "social", "family", "friend",  "insight", "cause", "cogproc",
                                      "drives", "reward", "risk",    "health"};
const char* kCntWeightedLexicons[] = {"empathy", "distress", "optimism"};

const std::vector<std::string> kDialNames{"sp_avg", "consec", "rfc_t", "rfc_w", "rtl_t", "rtl_w",
                                          "tso",    "tlen",   "ovl_n", "ovl_avg", "wps"};
const std::vector<std::string> kDialLabels{"SP_avg", "NConsec", "RFC_t", "RFC_w", "RTL_t",
                                           "RTL_w",  "TSO",     "TLen",  "OVL_n", "OVL_avg",
                                           "WPS"};

std::vector<std::string> token_texts(const SpeakerTurn& turn) {
  std::vector<std::string> out;
  out.reserve(turn.tokens.size());
  for (const auto& t : turn.tokens) out.push_back(t.text);
  return out;
}

constexpr double kShortPause = 0.5;  // seconds; strictly-below is a hold, strictly-above a break

}  // namespace

const std::vector<std::string>& feature_names(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::LING: return kLingNames;
    case FeatureGroup::CNT: return kCntNames;
    default: return kDialNames;
  }
}

const std::vector<std::string>& feature_labels(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::LING: return kLingLabels;
    case FeatureGroup::CNT: return kCntLabels;
    default: return kDialLabels;
  }
}

std::size_t group_dim(FeatureGroup group) { return feature_names(group).size(); }

const std::vector<std::string>& default_depid_labels() {
  static const std::vector<std::string> labels{
      "root", "acl",  "advcl", "advmod", "amod", "appos", "case",      "cc",
      "ccomp", "conj", "cop",   "csubj",  "mark", "obl",   "parataxis", "xcomp"};
  return labels;
}

const std::vector<std::string>& FeatureConfig::proposition_labels() const {
  return depid_labels.empty() ? default_depid_labels() : depid_labels;
}

std::optional<double> mattr(const std::vector<std::string>& tokens, std::size_t window) {
  if (window < 1) throw std::invalid_argument("mattr: window must be >= 1");
  const std::size_t n = tokens.size();
  if (n == 0) return std::nullopt;
  std::unordered_map<std::string, int> counts;
  if (n < window) {
    for (const auto& t : tokens) ++counts[t];
    return static_cast<double>(counts.size()) / static_cast<double>(n);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ++counts[tokens[i]];
    if (i + 1 >= window) {
      sum += static_cast<double>(counts.size()) / static_cast<double>(window);
      auto it = counts.find(tokens[i + 1 - window]);
      if (--it->second == 0) counts.erase(it);
    }
  }
  return sum / static_cast<double>(n - window + 1);
}

std::optional<double> brunet_index(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return std::nullopt;
  std::unordered_set<std::string> types(tokens.begin(), tokens.end());
  double n = static_cast<double>(tokens.size());
  double v = static_cast<double>(types.size());
  return std::pow(n, std::pow(v, -0.165));
}

std::optional<double> honore_statistic(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return std::nullopt;
  std::unordered_map<std::string, int> counts;
  for (const auto& t : tokens) ++counts[t];
  double v = static_cast<double>(counts.size());
  double v1 = 0;
  for (const auto& [_, c] : counts) v1 += c == 1;
  if (v1 == v) return std::nullopt;  // singular
  double n = static_cast<double>(tokens.size());
  return 100.0 * std::log(n) / (1.0 - v1 / v);
}

std::optional<double> depid(const std::vector<Token>& tokens,
                            const std::vector<std::string>& proposition_labels) {
  if (tokens.empty()) return 0.0;  // rate convention for empty turns
  int propositions = 0;
  for (const auto& t : tokens) {
    if (!t.dep) return std::nullopt;
    propositions += std::find(proposition_labels.begin(), proposition_labels.end(), *t.dep) !=
                    proposition_labels.end();
  }
  return static_cast<double>(propositions) / static_cast<double>(tokens.size());
}

std::optional<double> mean_sentence_length(const std::vector<Token>& tokens) {
  std::size_t sentences = 0, covered = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].sentence_final) {
      ++sentences;
      covered = i + 1;
    }
  }
  if (sentences == 0) return std::nullopt;
  return static_cast<double>(covered) / static_cast<double>(sentences);
}

TurnFeatures ling_vector(const SpeakerTurn& turn, const lex::LexiconSet& lexicons,
                         const FeatureConfig& config) {
  TurnFeatures out{FeatureGroup::LING, std::vector<double>(kLingNames.size(), 0.0),
                   std::vector<bool>(kLingNames.size(), false)};
  auto set = [&](std::size_t slot, std::optional<double> v) {
    if (v)
      out.values[slot] = *v;
    else
      out.missing[slot] = true;
  };
  const auto texts = token_texts(turn);
  const double n = static_cast<double>(texts.size());

  set(0, mattr(texts, config.mattr_window));
  set(1, brunet_index(texts));
  set(2, honore_statistic(texts));
  set(3, mean_sentence_length(turn.tokens));
  set(4, depid(turn.tokens, config.proposition_labels()));

  for (const auto& [lexicon, slot] : kLingLexicons)
    out.values[slot] =
        n == 0 ? 0.0 : static_cast<double>(match_count(lexicons.require(lexicon), texts)) / n;

  bool pos_complete = true;
  for (const auto& t : turn.tokens) pos_complete = pos_complete && t.pos.has_value();
  for (const auto& [tag, slot] : kPosRates) {
    if (!pos_complete) {
      out.missing[slot] = true;
      continue;
    }
    if (n == 0) continue;  // rates on empty turns are 0
    int count = 0;
    for (const auto& t : turn.tokens) count += *t.pos == tag;
    out.values[slot] = static_cast<double>(count) / n;
  }
  return out;
}

TurnFeatures cnt_vector(const SpeakerTurn& turn, const lex::LexiconSet& lexicons) {
  TurnFeatures out{FeatureGroup::CNT, std::vector<double>(kCntNames.size(), 0.0),
                   std::vector<bool>(kCntNames.size(), false)};
  const auto texts = token_texts(turn);
  const double n = static_cast<double>(texts.size());
  std::size_t slot = 0;
  for (const char* name : kCntCategoryLexicons) {
    out.values[slot++] =
        n == 0 ? 0.0 : static_cast<double>(match_count(lexicons.require(name), texts)) / n;
  }
  for (const char* name : kCntWeightedLexicons)
    out.values[slot++] = weighted_score(lexicons.require(name), texts);
  return out;
}

void DialogueContext::observe(const SpeakerTurn& turn) {
  const int s = static_cast<int>(turn.speaker);
  speaking_time[s] += turn.duration();
  word_count[s] += static_cast<long>(turn.tokens.size());
  turn_count[s] += 1;
  duration_sum[s] += turn.duration();
  token_sum[s] += static_cast<long>(turn.tokens.size());
  prev_end = turn.end_s;
  prev_speaker = turn.speaker;
}

TurnFeatures dial_vector(const SpeakerTurn& turn, const DialogueContext& ctx) {
  TurnFeatures out{FeatureGroup::DIAL, std::vector<double>(kDialNames.size(), 0.0),
                   std::vector<bool>(kDialNames.size(), false)};
  auto set = [&](std::size_t slot, std::optional<double> v) {
    if (v)
      out.values[slot] = *v;
    else
      out.missing[slot] = true;
  };
  const int s = static_cast<int>(turn.speaker);

  double hold_sum = 0.0, pause_sum = 0.0;
  int holds = 0, breaks = 0;
  for (const auto& p : turn.intra_turn_pauses) {
    double d = p.duration();
    pause_sum += d;
    if (d < kShortPause) {
      hold_sum += d;
      ++holds;
    } else if (d > kShortPause) {
      ++breaks;
    }
  }
  set(0, holds > 0 ? std::optional<double>(hold_sum / holds) : std::nullopt);
  out.values[1] = 1.0 + breaks;

  double total_time = ctx.speaking_time[0] + ctx.speaking_time[1];
  out.values[2] = total_time > 0.0 ? ctx.speaking_time[s] / total_time : 0.5;
  double total_words = static_cast<double>(ctx.word_count[0] + ctx.word_count[1]);
  out.values[3] = total_words > 0.0 ? static_cast<double>(ctx.word_count[s]) / total_words : 0.5;

  if (ctx.turn_count[s] == 0) {
    out.values[4] = 1.0;
    out.values[5] = 1.0;
  } else {
    double mean_dur = ctx.duration_sum[s] / static_cast<double>(ctx.turn_count[s]);
    out.values[4] = turn.duration() / mean_dur;
    double mean_tok = static_cast<double>(ctx.token_sum[s]) / static_cast<double>(ctx.turn_count[s]);
    set(5, mean_tok > 0.0
               ? std::optional<double>(static_cast<double>(turn.tokens.size()) / mean_tok)
               : std::nullopt);
  }

  bool switched = ctx.prev_speaker && *ctx.prev_speaker != turn.speaker;
  set(6, switched ? std::optional<double>(turn.start_s - *ctx.prev_end) : std::nullopt);
  out.values[7] = turn.duration();
  out.values[8] = static_cast<double>(turn.overlaps.size());
  double overlap_sum = 0.0;
  for (const auto& o : turn.overlaps) overlap_sum += o.duration();
  out.values[9] = turn.overlaps.empty() ? 0.0 : overlap_sum / static_cast<double>(turn.overlaps.size());

  double net = turn.duration() - pause_sum;
  set(10, net > 0.0 ? std::optional<double>(static_cast<double>(turn.tokens.size()) / net)
                    : std::nullopt);
  return out;
}

std::map<FeatureGroup, std::vector<TurnFeatures>> turn_features(const Interview& interview,
                                                                Subject subject,
                                                                const lex::LexiconSet& lexicons,
                                                                const FeatureConfig& config) {
  std::map<FeatureGroup, std::vector<TurnFeatures>> out;
  out[FeatureGroup::LING];
  out[FeatureGroup::CNT];
  out[FeatureGroup::DIAL];
  DialogueContext ctx;
  for (const auto& turn : interview.turns) {
    if (subject_matches(turn.speaker, subject)) {
      out[FeatureGroup::LING].push_back(ling_vector(turn, lexicons, config));
      out[FeatureGroup::CNT].push_back(cnt_vector(turn, lexicons));
      out[FeatureGroup::DIAL].push_back(dial_vector(turn, ctx));
    }
    ctx.observe(turn);  // the context covers all turns, both speakers
  }
  return out;
}

sig::Path impute_path(const std::vector<TurnFeatures>& series, FeatureGroup group,
                      const std::vector<double>* fallback) {
  const std::size_t d = group_dim(group);
  if (fallback && fallback->size() != d)
    throw std::invalid_argument("impute_path: fallback dimension mismatch");
  sig::Path path(d);
  std::vector<double> last(d);
  std::vector<bool> seen(d, false);
  for (const auto& tf : series) {
    if (tf.values.size() != d) throw std::invalid_argument("impute_path: feature dimension mismatch");
    std::vector<double> point(d);
    for (std::size_t j = 0; j < d; ++j) {
      if (!tf.missing[j])
        point[j] = tf.values[j];
      else if (seen[j])
        point[j] = last[j];
      else
        point[j] = fallback ? (*fallback)[j] : 0.0;
      last[j] = point[j];
      seen[j] = true;
    }
    path.push_back(std::move(point));
  }
  return path;
}

std::map<FeatureGroup, sig::Path> feature_paths(
    const Interview& interview, Subject subject, const lex::LexiconSet& lexicons,
    const FeatureConfig& config, const std::map<FeatureGroup, std::vector<double>>* fallbacks) {
  auto series = turn_features(interview, subject, lexicons, config);
  std::map<FeatureGroup, sig::Path> out;
  for (const auto& [group, tf] : series) {
    const std::vector<double>* fb = nullptr;
    if (fallbacks) {
      auto it = fallbacks->find(group);
      if (it != fallbacks->end()) fb = &it->second;
    }
    out.emplace(group, impute_path(tf, group, fb));
  }
  return out;
}

}  // namespace turnsig::feat
