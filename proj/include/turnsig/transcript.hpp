#pragma once
// Data model and file ingestion for annotated, time-aligned interviews.
// One interview per UTF-8 JSON document (extension .interview.json); a
// dataset is a directory of such files with an optional manifest.tsv
// cross-checking the per-file metadata.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace turnsig {

enum class Speaker { Participant, Interviewer };
enum class Group { BD, BPD, HC };
enum class Mode { Room, Phone };
enum class Subject { Participant, Interviewer, Both };

std::string_view to_string(Speaker s);
std::string_view to_string(Group g);
std::string_view to_string(Mode m);
std::string_view to_string(Subject s);
Subject subject_from_string(std::string_view s);

struct Token {
  std::string text;  // lowercased surface form
  std::optional<std::string> pos;
  std::optional<std::string> dep;
  bool sentence_final = false;

  bool operator==(const Token&) const = default;
};

struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const { return end_s - start_s; }
  bool operator==(const Interval&) const = default;
};

struct SpeakerTurn {
  Speaker speaker = Speaker::Participant;
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<Token> tokens;
  std::vector<Interval> intra_turn_pauses;  // within [start_s,end_s], disjoint, sorted
  std::vector<Interval> overlaps;           // same constraints

  double duration() const { return end_s - start_s; }
  bool operator==(const SpeakerTurn&) const = default;
};

/// Names the POS/dependency scheme and, when the inventories are given,
/// pins the values tokens may carry.
struct Tagset {
  std::string name;
  std::vector<std::string> pos;  // empty means unconstrained
  std::vector<std::string> dep;

  bool operator==(const Tagset&) const = default;
};

struct Interview {
  std::string id;
  Group group = Group::HC;
  double ipde_score = 0.0;
  std::optional<double> bis11_score;
  Mode mode = Mode::Room;
  Tagset tagset;
  std::vector<SpeakerTurn> turns;  // sorted by start_s, >=1 participant turn

  bool operator==(const Interview&) const = default;
};

/// Parses and fully validates one interview document. Violations raise
/// ParseError naming the path to the offending field. Completeness
/// warnings (tokens without pos/dep annotations) go to the sink if given.
Interview load_interview(std::string_view json_text, std::vector<std::string>* warnings = nullptr,
                         std::string_view origin = "<string>");

/// Canonical serialization: fixed key order, times with at least three
/// fractional digits. load_interview(save_interview(x)) == x for any
/// interview whose times carry millisecond precision.
std::string save_interview(const Interview& interview);

/// Loads every *.interview.json in the directory, checks the optional
/// manifest.tsv against per-file metadata, rejects duplicate ids, and
/// returns the interviews ordered by id.
std::vector<Interview> load_dataset(const std::filesystem::path& dir,
                                    std::vector<std::string>* warnings = nullptr);

bool subject_matches(Speaker speaker, Subject subject);

/// The turns a subject mode exposes, in interview order.
std::vector<std::reference_wrapper<const SpeakerTurn>> filter_turns(const Interview& interview,
                                                                    Subject subject);

}  // namespace turnsig
