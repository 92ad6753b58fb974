#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "turnsig/errors.hpp"
#include "turnsig/synth.hpp"
#include "turnsig/transcript.hpp"

using namespace turnsig;
using namespace turnsig::synth;
namespace fs = std::filesystem;

namespace {

double median_ipde(const std::vector<Interview>& set, Group g) {
  std::vector<double> xs;
  for (const auto& iv : set)
    if (iv.group == g) xs.push_back(iv.ipde_score);
  std::sort(xs.begin(), xs.end());
  return xs[xs.size() / 2];
}

}  // namespace

TEST_CASE("generation is deterministic and splittable") {
  SynthSpec spec;
  spec.n_per_group = 4;
  spec.seed = 7;
  auto a = generate_dataset(spec);
  auto b = generate_dataset(spec);
  REQUIRE(a.size() == 12);
  CHECK(a == b);

  SUBCASE("byte-identical files") {
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(save_interview(a[i]) == save_interview(b[i]));
  }
  SUBCASE("growing the dataset keeps earlier interviews intact") {
    SynthSpec bigger = spec;
    bigger.n_per_group = 6;
    auto c = generate_dataset(bigger);
    for (const auto& iv : a) {
      auto it = std::find_if(c.begin(), c.end(), [&](const Interview& x) { return x.id == iv.id; });
      REQUIRE(it != c.end());
      CHECK(*it == iv);
    }
  }
  SUBCASE("different seeds differ") {
    SynthSpec other = spec;
    other.seed = 8;
    CHECK(generate_dataset(other) != a);
  }
}

TEST_CASE("counts and invariants") {
  SynthSpec spec;
  spec.n_per_group = 5;
  spec.seed = 3;
  auto set = generate_dataset(spec);
  CHECK(set.size() == 15);
  for (Group g : {Group::BD, Group::BPD, Group::HC}) {
    int n = 0;
    for (const auto& iv : set) n += iv.group == g;
    CHECK(n == 5);
  }

  SUBCASE("files reload without warnings and compare equal") {
    for (const auto& iv : set) {
      std::vector<std::string> warnings;
      Interview again = load_interview(save_interview(iv), &warnings);
      CHECK(again == iv);
      CHECK(warnings.empty());
    }
  }
  SUBCASE("median IPDE ordering across groups") {
    CHECK(median_ipde(set, Group::BPD) > median_ipde(set, Group::BD));
    CHECK(median_ipde(set, Group::BD) > median_ipde(set, Group::HC));
  }
  SUBCASE("turn-count range is honored for participant turns") {
    for (const auto& iv : set) {
      int p = 0;
      for (const auto& t : iv.turns) p += t.speaker == Speaker::Participant;
      CHECK(p >= spec.min_participant_turns);
      CHECK(p <= spec.max_participant_turns);
    }
  }
}

TEST_CASE("write_dataset round-trips through load_dataset") {
  SynthSpec spec;
  spec.n_per_group = 3;
  spec.seed = 11;
  auto set = generate_dataset(spec);

  fs::path dir = fs::temp_directory_path() / "turnsig-synth-test";
  fs::remove_all(dir);
  write_dataset(set, dir);

  std::vector<std::string> warnings;
  auto loaded = load_dataset(dir, &warnings);  // also cross-checks the manifest
  CHECK(warnings.empty());
  REQUIRE(loaded.size() == set.size());
  CHECK(loaded == set);
  fs::remove_all(dir);
}

TEST_CASE("zeroed effects remove the group-level generator deltas") {
  SynthSpec spec;
  spec.n_per_group = 3;
  spec.seed = 5;
  spec.effects = PlantedEffects::none();
  auto set = generate_dataset(spec);
  CHECK(set.size() == 9);
  // IPDE separation stays (it is metadata), token streams lose their skew:
  // compare nonfluency rates between BPD and HC pooled over the dataset
  auto nonflu_rate = [&](Group g) {
    long nonflu = 0, total = 0;
    for (const auto& iv : set) {
      if (iv.group != g) continue;
      for (const auto& t : iv.turns) {
        if (t.speaker != Speaker::Participant) continue;
        for (const auto& tok : t.tokens) {
          total += 1;
          nonflu += tok.text == "um" || tok.text == "uh" || tok.text == "er" ||
                    tok.text == "hmm" || tok.text == "erm";
        }
      }
    }
    return static_cast<double>(nonflu) / static_cast<double>(total);
  };
  CHECK(std::fabs(nonflu_rate(Group::BPD) - nonflu_rate(Group::HC)) < 0.03);

  SUBCASE("planted effects do skew the stream") {
    SynthSpec planted = spec;
    planted.effects = PlantedEffects{};
    auto loud = generate_dataset(planted);
    auto rate = [&](Group g) {
      long nonflu = 0, total = 0;
      for (const auto& iv : loud)
        if (iv.group == g)
          for (const auto& t : iv.turns)
            if (t.speaker == Speaker::Participant)
              for (const auto& tok : t.tokens) {
                total += 1;
                nonflu += tok.text == "um" || tok.text == "uh" || tok.text == "er" ||
                          tok.text == "hmm" || tok.text == "erm";
              }
      return static_cast<double>(nonflu) / static_cast<double>(total);
    };
    CHECK(rate(Group::BPD) > rate(Group::HC) + 0.08);
  }
}

TEST_CASE("invalid specs are rejected") {
  SynthSpec spec;
  spec.n_per_group = 1;
  CHECK_THROWS_AS(generate_dataset(spec), std::invalid_argument);
  spec.n_per_group = 3;
  spec.min_participant_turns = 5;
  spec.max_participant_turns = 4;
  CHECK_THROWS_AS(generate_dataset(spec), std::invalid_argument);
}
