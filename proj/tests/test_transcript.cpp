#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "turnsig/errors.hpp"
#include "turnsig/transcript.hpp"

using namespace turnsig;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "id": "a01", "group": "BD", "ipde_score": 2.0, "mode": "Room",
  "tagset": {"name": "ud", "pos": ["VERB", "INTJ"], "dep": ["root", "discourse"]},
  "turns": [
    {"speaker": "Participant", "start_s": 0.0, "end_s": 2.5,
     "tokens": [{"text": "hello", "pos": "INTJ", "dep": "discourse", "is_sentence_final": true}],
     "intra_turn_pauses": [], "overlaps": []}
  ]
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("turnsig-test-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& content) const {
    std::ofstream(path / name) << content;
  }
};

}  // namespace

TEST_CASE("minimal interview loads") {
  auto iv = load_interview(kMinimal);
  CHECK(iv.id == "a01");
  CHECK(iv.group == Group::BD);
  CHECK(iv.ipde_score == 2.0);
  CHECK(!iv.bis11_score.has_value());
  REQUIRE(iv.turns.size() == 1);
  CHECK(iv.turns[0].tokens[0].text == "hello");
  CHECK(iv.turns[0].tokens[0].pos == "INTJ");
  CHECK(iv.turns[0].tokens[0].sentence_final);
}

TEST_CASE("validation failures name the offending field") {
  auto check_fail = [](const std::string& doc, const char* needle) {
    try {
      load_interview(doc);
      FAIL_CHECK("expected ParseError containing '" << needle << "'");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  check_fail(with("\"end_s\": 2.5", "\"end_s\": 0.0"), "turns[0]");
  check_fail(with("\"group\": \"BD\"", "\"group\": \"XX\""), "group");
  check_fail(with("\"ipde_score\": 2.0", "\"ipde_score\": -1"), "ipde_score");
  check_fail(with("\"text\": \"hello\"", "\"text\": \"\""), "tokens[0].text");
  check_fail(with("\"pos\": \"INTJ\"", "\"pos\": \"NOPE\""), "tokens[0].pos");
  check_fail(with("\"speaker\": \"Participant\"", "\"speaker\": \"Interviewer\""), "Participant turn");
  check_fail(with("\"intra_turn_pauses\": []", "\"intra_turn_pauses\": [[0.5, 3.0]]"), "within the turn");
  check_fail(with("\"intra_turn_pauses\": []", "\"intra_turn_pauses\": [[1.0, 1.5], [1.2, 1.8]]"),
             "non-overlapping");
  check_fail("{not json", "invalid JSON");
  // pos without dep
  check_fail(with("\"pos\": \"INTJ\", \"dep\": \"discourse\", ", "\"pos\": \"INTJ\", "),
             "both present or both absent");
}

TEST_CASE("pos/dep may be absent together, with a warning") {
  std::vector<std::string> warnings;
  auto iv = load_interview(with("\"pos\": \"INTJ\", \"dep\": \"discourse\", ", ""), &warnings);
  CHECK(!iv.turns[0].tokens[0].pos.has_value());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("lack pos/dep") != std::string::npos);
}

TEST_CASE("save/load round trip") {
  Interview iv = load_interview(kMinimal);
  iv.bis11_score = 61.5;
  iv.turns[0].intra_turn_pauses = {{1.0, 1.25}};
  iv.turns[0].overlaps = {{0.25, 0.5}, {2.0, 2.25}};
  std::string text = save_interview(iv);
  Interview again = load_interview(text);
  CHECK(again == iv);
  CHECK(save_interview(again) == text);

  SUBCASE("times carry at least three fractional digits") {
    CHECK(text.find("\"start_s\": 0.000") != std::string::npos);
    CHECK(text.find("1.250") != std::string::npos);
  }
}

TEST_CASE("load_dataset orders by id and validates") {
  TempDir dir;
  dir.write("b.interview.json", with("\"id\": \"a01\"", "\"id\": \"b01\""));
  dir.write("a.interview.json", kMinimal);

  auto set = load_dataset(dir.path);
  REQUIRE(set.size() == 2);
  CHECK(set[0].id == "a01");
  CHECK(set[1].id == "b01");

  SUBCASE("duplicate ids rejected") {
    dir.write("c.interview.json", kMinimal);
    CHECK_THROWS_AS(load_dataset(dir.path), DataError);
  }
  SUBCASE("empty directory rejected") {
    TempDir empty;
    CHECK_THROWS_AS(load_dataset(empty.path), DataError);
  }
  SUBCASE("manifest cross-check") {
    dir.write("manifest.tsv", "id\tgroup\tipde\tbis11\tmode\na01\tBD\t2.0\t\tRoom\nb01\tBD\t2.0\t\tRoom\n");
    CHECK(load_dataset(dir.path).size() == 2);

    dir.write("manifest.tsv", "id\tgroup\tipde\tbis11\tmode\na01\tHC\t2.0\t\tRoom\nb01\tBD\t2.0\t\tRoom\n");
    CHECK_THROWS_AS(load_dataset(dir.path), DataError);

    dir.write("manifest.tsv", "id\tgroup\tipde\tbis11\tmode\na01\tBD\t2.0\t\tRoom\n");
    CHECK_THROWS_AS(load_dataset(dir.path), DataError);  // missing b01

    dir.write("manifest.tsv",
              "id\tgroup\tipde\tbis11\tmode\na01\tBD\t2.0\t\tRoom\nb01\tBD\t2.0\t\tRoom\nzz\tHC\t0\t\tRoom\n");
    CHECK_THROWS_AS(load_dataset(dir.path), DataError);  // unknown id zz
  }
}

TEST_CASE("filter_turns") {
  std::string doc = with(
      "{\"speaker\": \"Participant\", \"start_s\": 0.0, \"end_s\": 2.5,\n"
      "     \"tokens\": [{\"text\": \"hello\", \"pos\": \"INTJ\", \"dep\": \"discourse\", \"is_sentence_final\": true}],\n"
      "     \"intra_turn_pauses\": [], \"overlaps\": []}",
      "{\"speaker\": \"Participant\", \"start_s\": 0.0, \"end_s\": 2.5, \"tokens\": [],"
      " \"intra_turn_pauses\": [], \"overlaps\": []},"
      "{\"speaker\": \"Interviewer\", \"start_s\": 3.0, \"end_s\": 4.0, \"tokens\": [],"
      " \"intra_turn_pauses\": [], \"overlaps\": []},"
      "{\"speaker\": \"Participant\", \"start_s\": 5.0, \"end_s\": 6.0, \"tokens\": [],"
      " \"intra_turn_pauses\": [], \"overlaps\": []}");
  auto iv = load_interview(doc);
  REQUIRE(iv.turns.size() == 3);
  CHECK(filter_turns(iv, Subject::Participant).size() == 2);
  CHECK(filter_turns(iv, Subject::Both).size() == 3);
  auto inter = filter_turns(iv, Subject::Interviewer);
  REQUIRE(inter.size() == 1);
  CHECK(inter[0].get().speaker == Speaker::Interviewer);
}

TEST_CASE("turns must be sorted by start time") {
  std::string doc = with("\"turns\": [", R"("turns": [
    {"speaker": "Participant", "start_s": 5.0, "end_s": 6.0, "tokens": [],
     "intra_turn_pauses": [], "overlaps": []},)");
  CHECK_THROWS_AS(load_interview(doc), ParseError);
}
