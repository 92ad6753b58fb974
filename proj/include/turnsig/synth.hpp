#pragma once
// Deterministic synthetic-interview generator. Interviews are built from a
// small closed vocabulary that intersects every shipped lexicon, with
// group-level differences injected at the generative-rate level so the
// whole extraction pipeline is exercised. The same spec always produces
// byte-identical datasets, and each interview draws from its own seeded
// stream, so growing n_per_group never perturbs earlier interviews.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "turnsig/transcript.hpp"

namespace turnsig::synth {

/// Multipliers on the group-specific generator deltas. 1 gives the designed
/// separation, 0 removes a group difference entirely.
struct PlantedEffects {
  double bpd_nonfluency = 1.0;   // nonfluency token rate in BPD turns
  double bpd_absolutist = 1.0;   // absolutist token rate in BPD turns
  double bpd_interruption = 1.0; // probability BPD starts a turn by interrupting
  double bpd_speech_rate = 1.0;  // slows BPD speech
  double bd_vocab_narrowing = 1.0;  // shrinks the BD content vocabulary
  double bd_vocab_drift = 1.0;      // narrows it further turn over turn
  double bd_speech_rate = 1.0;      // speeds BD speech
  double bd_long_pauses = 1.0;      // long intra-turn pauses in BD turns
  double bd_verbosity = 1.0;        // lengthens BD turns in words

  static PlantedEffects none();  // every multiplier zero
};

struct SynthSpec {
  int n_per_group = 15;
  std::uint64_t seed = 0;
  int min_participant_turns = 8;
  int max_participant_turns = 16;
  PlantedEffects effects;

  void validate() const;  // throws std::invalid_argument
};

/// All 3*n_per_group interviews, ordered by id.
std::vector<Interview> generate_dataset(const SynthSpec& spec);

/// Writes one `<id>.interview.json` per interview plus `manifest.tsv`.
void write_dataset(const std::vector<Interview>& dataset, const std::filesystem::path& dir);

}  // namespace turnsig::synth
