#include "turnsig/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "turnsig/errors.hpp"
#include "turnsig/rng.hpp"

namespace turnsig::synth {

namespace {

// ---------------------------------------------------------------------------
// vocabulary; every list intersects the shipped lexicons

struct WordEntry {
  const char* text;
  const char* pos;
  const char* dep;
};

const WordEntry kNonfluencies[] = {{"um", "INTJ", "discourse"},
                                   {"uh", "INTJ", "discourse"},
                                   {"er", "INTJ", "discourse"},
                                   {"hmm", "INTJ", "discourse"},
                                   {"erm", "INTJ", "discourse"}};

const WordEntry kAbsolutist[] = {
    {"absolutely", "ADV", "advmod"}, {"all", "DET", "det"},        {"always", "ADV", "advmod"},
    {"completely", "ADV", "advmod"}, {"constantly", "ADV", "advmod"}, {"definitely", "ADV", "advmod"},
    {"every", "DET", "det"},         {"everyone", "PRON", "nsubj"}, {"everything", "PRON", "obj"},
    {"must", "AUX", "aux"},          {"never", "ADV", "advmod"},   {"nothing", "PRON", "obj"},
    {"totally", "ADV", "advmod"},    {"whole", "ADJ", "amod"}};

const WordEntry kFillers[] = {{"like", "INTJ", "discourse"},
                              {"okay", "INTJ", "discourse"},
                              {"well", "INTJ", "discourse"},
                              {"right", "INTJ", "discourse"},
                              {"actually", "ADV", "advmod"},
                              {"basically", "ADV", "advmod"}};

const WordEntry kSwear[] = {{"damn", "INTJ", "discourse"}, {"hell", "NOUN", "obj"},
                            {"crap", "NOUN", "obj"}};

const WordEntry kFunction[] = {
    {"i", "PRON", "nsubj"},      {"we", "PRON", "nsubj"},    {"you", "PRON", "nsubj"},
    {"it", "PRON", "nsubj"},     {"they", "PRON", "nsubj"},  {"she", "PRON", "nsubj"},
    {"he", "PRON", "nsubj"},     {"my", "PRON", "nmod"},     {"the", "DET", "det"},
    {"a", "DET", "det"},         {"an", "DET", "det"},       {"this", "PRON", "obj"},
    {"that", "PRON", "obj"},     {"and", "CCONJ", "cc"},     {"but", "CCONJ", "cc"},
    {"or", "CCONJ", "cc"},       {"because", "SCONJ", "mark"}, {"so", "SCONJ", "mark"},
    {"if", "SCONJ", "mark"},     {"when", "SCONJ", "mark"},  {"in", "ADP", "case"},
    {"on", "ADP", "case"},       {"at", "ADP", "case"},      {"with", "ADP", "case"},
    {"from", "ADP", "case"},     {"to", "ADP", "case"},      {"of", "ADP", "case"},
    {"about", "ADP", "case"},    {"for", "ADP", "case"},     {"am", "AUX", "aux"},
    {"is", "AUX", "aux"},        {"was", "AUX", "aux"},      {"have", "AUX", "aux"},
    {"had", "AUX", "aux"},       {"would", "AUX", "aux"},    {"could", "AUX", "aux"},
    {"not", "PART", "advmod"},   {"no", "DET", "det"},       {"really", "ADV", "advmod"},
    {"very", "ADV", "advmod"},   {"just", "ADV", "advmod"},  {"still", "ADV", "advmod"},
    {"often", "ADV", "advmod"},  {"sometimes", "ADV", "advmod"}, {"some", "DET", "det"},
    {"many", "DET", "det"},      {"more", "ADV", "advmod"},  {"most", "ADV", "advmod"}};

// content words carrying the CNT categories, emitted at group-independent
// rates so the content features hold no class signal by default
const WordEntry kContentCategory[] = {
    {"worried", "ADJ", "amod"},    {"anxious", "ADJ", "amod"},   {"stressed", "ADJ", "amod"},
    {"afraid", "ADJ", "amod"},     {"angry", "ADJ", "amod"},     {"sad", "ADJ", "amod"},
    {"unhappy", "ADJ", "amod"},    {"happy", "ADJ", "amod"},     {"good", "ADJ", "amod"},
    {"great", "ADJ", "amod"},      {"nice", "ADJ", "amod"},      {"calm", "ADJ", "amod"},
    {"fine", "ADJ", "amod"},       {"family", "NOUN", "obj"},    {"mother", "NOUN", "nsubj"},
    {"father", "NOUN", "nsubj"},   {"friend", "NOUN", "obj"},    {"friends", "NOUN", "obj"},
    {"people", "NOUN", "nsubj"},   {"doctor", "NOUN", "nsubj"},  {"sleep", "NOUN", "obj"},
    {"tired", "ADJ", "amod"},      {"health", "NOUN", "obj"},    {"therapy", "NOUN", "obj"},
    {"think", "VERB", "root"},     {"know", "VERB", "root"},     {"feel", "VERB", "root"},
    {"understand", "VERB", "root"}, {"wonder", "VERB", "root"},  {"want", "VERB", "root"},
    {"need", "VERB", "root"},      {"control", "NOUN", "obj"},   {"reward", "NOUN", "obj"},
    {"risk", "NOUN", "obj"},       {"goal", "NOUN", "obj"},      {"hope", "VERB", "root"},
    {"hopeful", "ADJ", "amod"},    {"better", "ADJ", "amod"},    {"improve", "VERB", "root"},
    {"future", "NOUN", "obj"},     {"plan", "NOUN", "obj"},      {"positive", "ADJ", "amod"},
    {"care", "VERB", "root"},      {"support", "NOUN", "obj"},   {"help", "VERB", "root"},
    {"kind", "ADJ", "amod"},       {"overwhelmed", "ADJ", "amod"}, {"panic", "NOUN", "obj"},
    {"struggling", "VERB", "root"}, {"crisis", "NOUN", "obj"}};

// neutral topic vocabulary, sampled zipf-style; the slice width carries the
// lexical-diversity signal
const WordEntry kContent[] = {
    {"phone", "NOUN", "obj"},     {"app", "NOUN", "obj"},       {"watch", "NOUN", "obj"},
    {"study", "NOUN", "obj"},     {"question", "NOUN", "obj"},  {"mood", "NOUN", "obj"},
    {"day", "NOUN", "obl"},       {"week", "NOUN", "obl"},      {"month", "NOUN", "obl"},
    {"time", "NOUN", "obl"},      {"morning", "NOUN", "obl"},   {"evening", "NOUN", "obl"},
    {"report", "NOUN", "obj"},    {"score", "NOUN", "obj"},     {"button", "NOUN", "obj"},
    {"screen", "NOUN", "obj"},    {"device", "NOUN", "obj"},    {"battery", "NOUN", "obj"},
    {"charge", "VERB", "root"},   {"wear", "VERB", "root"},     {"press", "VERB", "root"},
    {"open", "VERB", "root"},     {"check", "VERB", "root"},    {"forget", "VERB", "root"},
    {"remember", "VERB", "root"}, {"answer", "VERB", "root"},   {"ask", "VERB", "root"},
    {"send", "VERB", "root"},     {"read", "VERB", "root"},     {"write", "VERB", "root"},
    {"walk", "VERB", "root"},     {"work", "VERB", "root"},     {"use", "VERB", "root"},
    {"try", "VERB", "root"},      {"start", "VERB", "root"},    {"stop", "VERB", "root"},
    {"find", "VERB", "root"},     {"keep", "VERB", "root"},     {"easy", "ADJ", "amod"},
    {"hard", "ADJ", "amod"},      {"simple", "ADJ", "amod"},    {"quick", "ADJ", "amod"},
    {"slow", "ADJ", "amod"},      {"useful", "ADJ", "amod"},    {"annoying", "ADJ", "amod"},
    {"helpful", "ADJ", "amod"},   {"small", "ADJ", "amod"},     {"big", "ADJ", "amod"},
    {"new", "ADJ", "amod"},       {"old", "ADJ", "amod"},       {"daily", "ADJ", "amod"},
    {"weekly", "ADJ", "amod"},    {"home", "NOUN", "obl"},      {"house", "NOUN", "obl"},
    {"garden", "NOUN", "obl"},    {"kitchen", "NOUN", "obl"},   {"office", "NOUN", "obl"},
    {"town", "NOUN", "obl"},      {"shop", "NOUN", "obl"},      {"bus", "NOUN", "obl"},
    {"train", "NOUN", "obl"},     {"car", "NOUN", "obl"},       {"bed", "NOUN", "obl"},
    {"night", "NOUN", "obl"},     {"weekend", "NOUN", "obl"},   {"holiday", "NOUN", "obl"},
    {"music", "NOUN", "obj"},     {"book", "NOUN", "obj"},      {"film", "NOUN", "obj"},
    {"news", "NOUN", "obj"},      {"weather", "NOUN", "obj"},   {"coffee", "NOUN", "obj"},
    {"tea", "NOUN", "obj"},       {"lunch", "NOUN", "obj"},     {"dinner", "NOUN", "obj"},
    {"walk", "NOUN", "obj"},      {"run", "NOUN", "obj"},       {"game", "NOUN", "obj"},
    {"puzzle", "NOUN", "obj"},    {"picture", "NOUN", "obj"},   {"message", "NOUN", "obj"},
    {"email", "NOUN", "obj"},     {"call", "NOUN", "obj"},      {"alarm", "NOUN", "obj"},
    {"clock", "NOUN", "obj"},     {"diary", "NOUN", "obj"},     {"note", "NOUN", "obj"},
    {"list", "NOUN", "obj"},      {"step", "NOUN", "obj"},      {"minute", "NOUN", "obl"},
    {"hour", "NOUN", "obl"},      {"moment", "NOUN", "obl"},    {"thing", "NOUN", "obj"},
    {"stuff", "NOUN", "obj"},     {"part", "NOUN", "obj"},      {"bit", "NOUN", "obj"},
    {"lot", "NOUN", "obj"},       {"way", "NOUN", "obj"},       {"reason", "NOUN", "obj"},
    {"idea", "NOUN", "obj"},      {"example", "NOUN", "obj"},   {"problem", "NOUN", "obj"},
    {"change", "NOUN", "obj"},    {"routine", "NOUN", "obj"},   {"habit", "NOUN", "obj"},
    {"setting", "NOUN", "obj"},   {"update", "NOUN", "obj"},    {"version", "NOUN", "obj"},
    {"feature", "NOUN", "obj"},   {"signal", "NOUN", "obj"},    {"light", "NOUN", "obj"},
    {"sound", "NOUN", "obj"},     {"colour", "NOUN", "obj"},    {"strap", "NOUN", "obj"},
    {"pocket", "NOUN", "obl"},    {"bag", "NOUN", "obl"},       {"table", "NOUN", "obl"},
    {"chair", "NOUN", "obl"},     {"window", "NOUN", "obl"},    {"door", "NOUN", "obl"}};

const WordEntry kQuestion[] = {
    {"how", "ADV", "advmod"},   {"what", "PRON", "obj"},   {"did", "AUX", "aux"},
    {"you", "PRON", "nsubj"},   {"find", "VERB", "root"},  {"the", "DET", "det"},
    {"app", "NOUN", "obj"},     {"watch", "NOUN", "obj"},  {"study", "NOUN", "obj"},
    {"tell", "VERB", "root"},   {"me", "PRON", "obj"},     {"about", "ADP", "case"},
    {"anything", "PRON", "obj"}, {"else", "ADV", "advmod"}, {"thank", "VERB", "root"},
    {"and", "CCONJ", "cc"},     {"was", "AUX", "aux"},     {"it", "PRON", "nsubj"},
    {"easy", "ADJ", "amod"},    {"okay", "INTJ", "discourse"}};

template <std::size_t N>
const WordEntry& pick(const WordEntry (&table)[N], Rng& rng) {
  return table[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(N) - 1))];
}

// zipf-ish draw from the first `slice` entries of kContent
const WordEntry& pick_content(Rng& rng, std::size_t slice) {
  const std::size_t n = std::min(slice, std::size(kContent));
  // weight ~ 1/(rank+1)^0.9 via inverse-cdf on a premultiplied harmonic sum
  double u = rng.uniform();
  double total = 0.0;
  static std::vector<double> cum = [] {
    std::vector<double> c(std::size(kContent));
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      acc += 1.0 / std::pow(static_cast<double>(i + 1), 0.9);
      c[i] = acc;
    }
    return c;
  }();
  total = cum[n - 1];
  double x = u * total;
  std::size_t lo = 0, hi = n - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cum[mid] < x)
      lo = mid + 1;
    else
      hi = mid;
  }
  return kContent[lo];
}

// ---------------------------------------------------------------------------

struct GroupParams {
  double nonfluency;     // token emission probability
  double absolutist;
  double interruption;   // probability of starting a turn inside the other's
  double wps;            // words per second of fluent speech
  double long_pauses;    // poisson mean per turn
  double verbosity;      // multiplier on participant turn length in words
  double vocab_slice0;   // starting content-vocabulary fraction
  double vocab_drift;    // additional narrowing across the interview
};

GroupParams params_for(Group g, const PlantedEffects& e) {
  GroupParams p{0.02, 0.012, 0.05, 2.0, 0.35, 1.0, 1.0, 0.0};
  switch (g) {
    case Group::BPD:
      p.nonfluency *= 1.0 + 9.0 * e.bpd_nonfluency;
      p.absolutist *= 1.0 + 9.0 * e.bpd_absolutist;
      p.interruption = std::min(0.05 * (1.0 + 7.0 * e.bpd_interruption), 0.6);
      p.wps *= 1.0 - 0.2 * e.bpd_speech_rate;
      break;
    case Group::BD:
      p.wps *= 1.0 + 0.35 * e.bd_speech_rate;
      p.long_pauses *= 1.0 + 2.2 * e.bd_long_pauses;
      p.verbosity *= 1.0 + 0.35 * e.bd_verbosity;
      p.vocab_slice0 = 1.0 - 0.30 * e.bd_vocab_narrowing;
      p.vocab_drift = 0.40 * e.bd_vocab_drift;
      break;
    case Group::HC:
      break;
  }
  return p;
}

constexpr std::int64_t kMs = 1000;

double seconds(std::int64_t ms) { return static_cast<double>(ms) / kMs; }
std::int64_t millis(double s) { return std::llround(s * kMs); }

Token make_token(const WordEntry& w) { return Token{w.text, std::string(w.pos), std::string(w.dep), false}; }

std::vector<Token> participant_tokens(Rng& rng, const GroupParams& p, int turn_index,
                                      int turn_total, int n_tokens) {
  double progress = turn_total > 1 ? static_cast<double>(turn_index) / (turn_total - 1) : 0.0;
  double frac = std::clamp(p.vocab_slice0 - p.vocab_drift * progress, 0.1, 1.0);
  auto slice = static_cast<std::size_t>(std::max(12.0, frac * static_cast<double>(std::size(kContent))));

  std::vector<Token> toks;
  toks.reserve(static_cast<std::size_t>(n_tokens));
  int until_boundary = std::max(4, static_cast<int>(std::lround(rng.normal(10, 3))));
  bool any_final = false;
  for (int i = 0; i < n_tokens; ++i) {
    double u = rng.uniform();
    const WordEntry* w;
    if (u < p.nonfluency)
      w = &pick(kNonfluencies, rng);
    else if (u < p.nonfluency + p.absolutist)
      w = &pick(kAbsolutist, rng);
    else if (u < p.nonfluency + p.absolutist + 0.05)
      w = &pick(kFillers, rng);
    else if (u < p.nonfluency + p.absolutist + 0.05 + 0.008)
      w = &pick(kSwear, rng);
    else if (u < p.nonfluency + p.absolutist + 0.05 + 0.008 + 0.06)
      w = &pick(kContentCategory, rng);
    else if (u < p.nonfluency + p.absolutist + 0.05 + 0.008 + 0.06 + 0.34)
      w = &pick(kFunction, rng);
    else
      w = &pick_content(rng, slice);
    toks.push_back(make_token(*w));
    if (--until_boundary == 0) {
      toks.back().sentence_final = true;
      any_final = true;
      until_boundary = std::max(4, static_cast<int>(std::lround(rng.normal(10, 3))));
    }
  }
  if (!any_final && !toks.empty()) toks.back().sentence_final = true;
  return toks;
}

std::vector<Token> interviewer_tokens(Rng& rng) {
  int n = rng.uniform_int(3, 9);
  std::vector<Token> toks;
  for (int i = 0; i < n; ++i) toks.push_back(make_token(pick(kQuestion, rng)));
  toks.back().sentence_final = true;
  return toks;
}

// lays out pauses inside the turn: speech in equal chunks between them
std::vector<Interval> layout_pauses(std::int64_t start_ms, std::int64_t net_speech_ms,
                                    const std::vector<std::int64_t>& pause_ms) {
  std::vector<Interval> out;
  if (pause_ms.empty()) return out;
  std::int64_t chunk = net_speech_ms / static_cast<std::int64_t>(pause_ms.size() + 1);
  std::int64_t cursor = start_ms;
  for (std::int64_t p : pause_ms) {
    cursor += chunk;
    out.push_back({seconds(cursor), seconds(cursor + p)});
    cursor += p;
  }
  return out;
}

Interview make_interview(const SynthSpec& spec, Group group, int index) {
  Rng rng(spec.seed, static_cast<std::uint64_t>(group) * 100000ULL + static_cast<std::uint64_t>(index));
  const GroupParams params = params_for(group, spec.effects);

  Interview iv;
  char idbuf[64];
  std::snprintf(idbuf, sizeof(idbuf), "synth-%s-%03d", std::string(to_string(group)).c_str(), index);
  iv.id = idbuf;
  iv.group = group;
  switch (group) {
    case Group::HC: iv.ipde_score = std::round(std::fabs(rng.normal(0.0, 0.4)) * 10) / 10; break;
    case Group::BD: iv.ipde_score = std::round(std::max(0.0, rng.normal(2.0, 1.0)) * 10) / 10; break;
    case Group::BPD: iv.ipde_score = std::round(std::max(0.0, rng.normal(16.0, 2.0)) * 10) / 10; break;
  }
  double bis_mean = group == Group::HC ? 48.5 : group == Group::BD ? 67.0 : 76.0;
  iv.bis11_score = std::clamp(std::round(rng.normal(bis_mean, 7.0) * 10) / 10, 20.0, 120.0);
  iv.mode = rng.bernoulli(0.7) ? Mode::Room : Mode::Phone;
  iv.tagset.name = "ud-basic";
  iv.tagset.pos = {"ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ",
                   "NOUN", "PART", "PRON", "SCONJ", "VERB"};
  iv.tagset.dep = {"advmod", "amod", "aux", "case", "cc", "det", "discourse",
                   "mark", "nmod", "nsubj", "obj", "obl", "root"};

  const int participant_turns = rng.uniform_int(spec.min_participant_turns, spec.max_participant_turns);
  std::optional<Speaker> prev_speaker;
  std::int64_t prev_end_ms = 0;

  int emitted_participant = 0;
  while (emitted_participant < participant_turns) {
    // interviewer asks, except when the participant strings turns together
    bool participant_continues = prev_speaker == Speaker::Participant && rng.bernoulli(0.15);
    Speaker speaker = participant_continues || (prev_speaker && *prev_speaker == Speaker::Interviewer)
                          ? Speaker::Participant
                          : Speaker::Interviewer;
    if (!prev_speaker) speaker = Speaker::Interviewer;

    SpeakerTurn turn;
    turn.speaker = speaker;

    std::vector<std::int64_t> pauses_ms;
    double wps;
    if (speaker == Speaker::Participant) {
      int words = static_cast<int>(std::clamp(
          std::lround(rng.lognormal(std::log(26.0), 0.35) * params.verbosity), 6L, 90L));
      turn.tokens = participant_tokens(rng, params, emitted_participant, participant_turns, words);
      wps = params.wps * rng.lognormal(0.0, 0.06);
      int n_short = std::min(rng.poisson(1.0), 5);
      int n_long = std::min(rng.poisson(params.long_pauses), 4);
      for (int i = 0; i < n_short; ++i) pauses_ms.push_back(millis(rng.uniform(0.08, 0.45)));
      for (int i = 0; i < n_long; ++i) pauses_ms.push_back(millis(rng.uniform(0.60, 1.50)));
      ++emitted_participant;
    } else {
      turn.tokens = interviewer_tokens(rng);
      wps = 2.2 * rng.lognormal(0.0, 0.05);
    }

    std::int64_t net_ms =
        std::max<std::int64_t>(400, millis(static_cast<double>(turn.tokens.size()) / wps));
    std::int64_t pause_total = 0;
    for (auto p : pauses_ms) pause_total += p;

    // start: normally a gap after the previous turn; BPD sometimes cuts in
    std::int64_t start_ms;
    bool interrupt = prev_speaker && *prev_speaker != speaker &&
                     speaker == Speaker::Participant && rng.bernoulli(params.interruption);
    if (!prev_speaker) {
      start_ms = 0;
    } else if (interrupt) {
      // cutting in: the new turn starts inside the previous one; the cut is
      // capped at half the new turn so the overlap stays inside it
      std::int64_t cut = millis(rng.uniform(0.2, 0.8));
      start_ms = std::max<std::int64_t>(prev_end_ms - cut, prev_end_ms - net_ms / 2);
      if (start_ms < prev_end_ms) turn.overlaps.push_back({seconds(start_ms), seconds(prev_end_ms)});
    } else {
      start_ms = prev_end_ms + millis(rng.uniform(0.25, 1.10));
    }

    std::int64_t end_ms = start_ms + net_ms + pause_total;
    turn.start_s = seconds(start_ms);
    turn.end_s = seconds(end_ms);
    std::sort(pauses_ms.begin(), pauses_ms.end());
    turn.intra_turn_pauses = layout_pauses(start_ms, net_ms, pauses_ms);

    prev_speaker = speaker;
    prev_end_ms = end_ms;
    iv.turns.push_back(std::move(turn));
  }
  return iv;
}

}  // namespace

PlantedEffects PlantedEffects::none() {
  PlantedEffects e;
  e.bpd_nonfluency = e.bpd_absolutist = e.bpd_interruption = e.bpd_speech_rate = 0.0;
  e.bd_vocab_narrowing = e.bd_vocab_drift = e.bd_speech_rate = e.bd_long_pauses = e.bd_verbosity = 0.0;
  return e;
}

void SynthSpec::validate() const {
  if (n_per_group < 2) throw std::invalid_argument("SynthSpec: n_per_group must be >= 2");
  if (min_participant_turns < 1 || max_participant_turns < min_participant_turns)
    throw std::invalid_argument("SynthSpec: bad participant turn range");
  for (double v : {effects.bpd_nonfluency, effects.bpd_absolutist, effects.bpd_interruption,
                   effects.bpd_speech_rate, effects.bd_vocab_narrowing, effects.bd_vocab_drift,
                   effects.bd_speech_rate, effects.bd_long_pauses, effects.bd_verbosity})
    if (!std::isfinite(v)) throw std::invalid_argument("SynthSpec: non-finite effect");
}

std::vector<Interview> generate_dataset(const SynthSpec& spec) {
  spec.validate();
  std::vector<Interview> out;
  for (Group g : {Group::BD, Group::BPD, Group::HC})
    for (int i = 0; i < spec.n_per_group; ++i) out.push_back(make_interview(spec, g, i));
  std::sort(out.begin(), out.end(),
            [](const Interview& a, const Interview& b) { return a.id < b.id; });
  return out;
}

void write_dataset(const std::vector<Interview>& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string manifest = "id\tgroup\tipde\tbis11\tmode\n";
  for (const auto& iv : dataset) {
    std::ofstream out(dir / (iv.id + ".interview.json"), std::ios::binary);
    if (!out) throw DataError("cannot write to " + (dir / iv.id).string());
    out << save_interview(iv);
    manifest += iv.id;
    manifest += '\t';
    manifest += to_string(iv.group);
    manifest += '\t';
    manifest += nlohmann::json(iv.ipde_score).dump();
    manifest += '\t';
    if (iv.bis11_score) manifest += nlohmann::json(*iv.bis11_score).dump();
    manifest += '\t';
    manifest += to_string(iv.mode);
    manifest += '\n';
  }
  std::ofstream mf(dir / "manifest.tsv", std::ios::binary);
  if (!mf) throw DataError("cannot write manifest in " + dir.string());
  mf << manifest;
}

}  // namespace turnsig::synth
