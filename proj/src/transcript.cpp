#include "turnsig/transcript.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "turnsig/errors.hpp"

namespace turnsig {

using nlohmann::json;

std::string_view to_string(Speaker s) {
  return s == Speaker::Participant ? "Participant" : "Interviewer";
}
std::string_view to_string(Group g) {
  switch (g) {
    case Group::BD: return "BD";
    case Group::BPD: return "BPD";
    default: return "HC";
  }
}
std::string_view to_string(Mode m) { return m == Mode::Room ? "Room" : "Phone"; }
std::string_view to_string(Subject s) {
  switch (s) {
    case Subject::Participant: return "Participant";
    case Subject::Interviewer: return "Interviewer";
    default: return "Both";
  }
}

Subject subject_from_string(std::string_view s) {
  if (s == "Participant" || s == "participant") return Subject::Participant;
  if (s == "Interviewer" || s == "interviewer") return Subject::Interviewer;
  if (s == "Both" || s == "both") return Subject::Both;
  throw ParseError("unknown subject '" + std::string(s) + "'");
}

namespace {

[[noreturn]] void fail(std::string_view origin, const std::string& path, const std::string& what) {
  throw ParseError(std::string(origin) + ": " + path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path,
                  std::string_view origin) {
  if (!obj.is_object()) fail(origin, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, path + "." + key, "missing required field");
  return *it;
}

std::string get_string(const json& j, const std::string& path, std::string_view origin) {
  if (!j.is_string()) fail(origin, path, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path, std::string_view origin) {
  if (!j.is_number()) fail(origin, path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(origin, path, "non-finite number");
  return v;
}

bool get_bool(const json& j, const std::string& path, std::string_view origin) {
  if (!j.is_boolean()) fail(origin, path, "expected a boolean");
  return j.get<bool>();
}

Speaker parse_speaker(const std::string& s, const std::string& path, std::string_view origin) {
  if (s == "Participant") return Speaker::Participant;
  if (s == "Interviewer") return Speaker::Interviewer;
  fail(origin, path, "unknown speaker '" + s + "'");
}

Group parse_group(const std::string& s, const std::string& path, std::string_view origin) {
  if (s == "BD") return Group::BD;
  if (s == "BPD") return Group::BPD;
  if (s == "HC") return Group::HC;
  fail(origin, path, "unknown group '" + s + "'");
}

Mode parse_mode(const std::string& s, const std::string& path, std::string_view origin) {
  if (s == "Room") return Mode::Room;
  if (s == "Phone") return Mode::Phone;
  fail(origin, path, "unknown mode '" + s + "'");
}

std::vector<Interval> parse_intervals(const json& j, const SpeakerTurn& turn,
                                      const std::string& path, std::string_view origin) {
  if (!j.is_array()) fail(origin, path, "expected an array of [start_s, end_s] pairs");
  std::vector<Interval> out;
  double prev_end = -1.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& pair = j[i];
    std::string p = path + "[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2) fail(origin, p, "expected a [start_s, end_s] pair");
    Interval iv{get_number(pair[0], p + "[0]", origin), get_number(pair[1], p + "[1]", origin)};
    if (!(iv.start_s < iv.end_s)) fail(origin, p, "interval start must precede its end");
    if (iv.start_s < turn.start_s || iv.end_s > turn.end_s)
      fail(origin, p, "interval must lie within the turn");
    if (iv.start_s < prev_end) fail(origin, p, "intervals must be sorted and non-overlapping");
    prev_end = iv.end_s;
    out.push_back(iv);
  }
  return out;
}

}  // namespace

Interview load_interview(std::string_view json_text, std::vector<std::string>* warnings,
                         std::string_view origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(origin) + ": invalid JSON: " + e.what());
  }
  const std::string root = "$";
  Interview iv;
  iv.id = get_string(field(doc, "id", root, origin), "$.id", origin);
  if (iv.id.empty()) fail(origin, "$.id", "id must be non-empty");
  iv.group = parse_group(get_string(field(doc, "group", root, origin), "$.group", origin),
                         "$.group", origin);
  iv.ipde_score = get_number(field(doc, "ipde_score", root, origin), "$.ipde_score", origin);
  if (iv.ipde_score < 0) fail(origin, "$.ipde_score", "must be >= 0");
  if (doc.contains("bis11_score") && !doc["bis11_score"].is_null())
    iv.bis11_score = get_number(doc["bis11_score"], "$.bis11_score", origin);
  iv.mode = parse_mode(get_string(field(doc, "mode", root, origin), "$.mode", origin), "$.mode",
                       origin);

  const json& ts = field(doc, "tagset", root, origin);
  iv.tagset.name = get_string(field(ts, "name", "$.tagset", origin), "$.tagset.name", origin);
  for (const char* key : {"pos", "dep"}) {
    if (!ts.contains(key)) continue;
    const auto& arr = ts[key];
    std::string p = std::string("$.tagset.") + key;
    if (!arr.is_array()) fail(origin, p, "expected an array of tag strings");
    auto& dest = std::string_view(key) == "pos" ? iv.tagset.pos : iv.tagset.dep;
    for (std::size_t i = 0; i < arr.size(); ++i)
      dest.push_back(get_string(arr[i], p + "[" + std::to_string(i) + "]", origin));
  }

  const json& turns = field(doc, "turns", root, origin);
  if (!turns.is_array()) fail(origin, "$.turns", "expected an array");
  double prev_start = -std::numeric_limits<double>::infinity();
  std::size_t unannotated = 0;
  bool has_participant = false;
  for (std::size_t t = 0; t < turns.size(); ++t) {
    std::string tp = "$.turns[" + std::to_string(t) + "]";
    const auto& jt = turns[t];
    SpeakerTurn turn;
    turn.speaker = parse_speaker(get_string(field(jt, "speaker", tp, origin), tp + ".speaker", origin),
                                 tp + ".speaker", origin);
    turn.start_s = get_number(field(jt, "start_s", tp, origin), tp + ".start_s", origin);
    turn.end_s = get_number(field(jt, "end_s", tp, origin), tp + ".end_s", origin);
    if (!(turn.start_s < turn.end_s)) fail(origin, tp, "end_s must be greater than start_s");
    if (turn.start_s < prev_start) fail(origin, tp + ".start_s", "turns must be sorted by start_s");
    prev_start = turn.start_s;

    const json& toks = field(jt, "tokens", tp, origin);
    if (!toks.is_array()) fail(origin, tp + ".tokens", "expected an array");
    for (std::size_t k = 0; k < toks.size(); ++k) {
      std::string kp = tp + ".tokens[" + std::to_string(k) + "]";
      const auto& jk = toks[k];
      Token tok;
      tok.text = get_string(field(jk, "text", kp, origin), kp + ".text", origin);
      if (tok.text.empty()) fail(origin, kp + ".text", "token text must be non-empty");
      bool has_pos = jk.contains("pos") && !jk["pos"].is_null();
      bool has_dep = jk.contains("dep") && !jk["dep"].is_null();
      if (has_pos != has_dep)
        fail(origin, kp, "pos and dep must be both present or both absent");
      if (has_pos) {
        tok.pos = get_string(jk["pos"], kp + ".pos", origin);
        tok.dep = get_string(jk["dep"], kp + ".dep", origin);
        if (!iv.tagset.pos.empty() &&
            std::find(iv.tagset.pos.begin(), iv.tagset.pos.end(), *tok.pos) == iv.tagset.pos.end())
          fail(origin, kp + ".pos", "tag '" + *tok.pos + "' is not in the declared tagset");
        if (!iv.tagset.dep.empty() &&
            std::find(iv.tagset.dep.begin(), iv.tagset.dep.end(), *tok.dep) == iv.tagset.dep.end())
          fail(origin, kp + ".dep", "label '" + *tok.dep + "' is not in the declared tagset");
      } else {
        ++unannotated;
      }
      tok.sentence_final = get_bool(field(jk, "is_sentence_final", kp, origin),
                                    kp + ".is_sentence_final", origin);
      turn.tokens.push_back(std::move(tok));
    }

    turn.intra_turn_pauses =
        parse_intervals(field(jt, "intra_turn_pauses", tp, origin), turn, tp + ".intra_turn_pauses", origin);
    turn.overlaps = parse_intervals(field(jt, "overlaps", tp, origin), turn, tp + ".overlaps", origin);
    has_participant = has_participant || turn.speaker == Speaker::Participant;
    iv.turns.push_back(std::move(turn));
  }
  if (!has_participant) fail(origin, "$.turns", "interview needs at least one Participant turn");
  if (unannotated > 0 && warnings)
    warnings->push_back(std::string(origin) + ": interview '" + iv.id + "': " +
                        std::to_string(unannotated) +
                        " token(s) lack pos/dep annotations; dependent features will be missing");
  return iv;
}

namespace {

// Seconds with >= 3 fractional digits, longer only when needed.
std::string format_time(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  std::string s(buf);
  auto dot = s.find('.');
  std::size_t last = s.size();
  while (last > dot + 4 && s[last - 1] == '0') --last;
  return s.substr(0, last);
}

std::string format_score(double v) { return json(v).dump(); }

void append_escaped(std::string& out, const std::string& s) { out += json(s).dump(); }

void append_intervals(std::string& out, const std::vector<Interval>& ivs) {
  out += '[';
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    if (i) out += ", ";
    out += '[';
    out += format_time(ivs[i].start_s);
    out += ", ";
    out += format_time(ivs[i].end_s);
    out += ']';
  }
  out += ']';
}

void append_string_array(std::string& out, const std::vector<std::string>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    append_escaped(out, xs[i]);
  }
  out += ']';
}

}  // namespace

std::string save_interview(const Interview& iv) {
  std::string out;
  out += "{\n";
  out += "  \"id\": ";
  append_escaped(out, iv.id);
  out += ",\n  \"group\": \"";
  out += to_string(iv.group);
  out += "\",\n  \"ipde_score\": ";
  out += format_score(iv.ipde_score);
  if (iv.bis11_score) {
    out += ",\n  \"bis11_score\": ";
    out += format_score(*iv.bis11_score);
  }
  out += ",\n  \"mode\": \"";
  out += to_string(iv.mode);
  out += "\",\n  \"tagset\": {\"name\": ";
  append_escaped(out, iv.tagset.name);
  out += ", \"pos\": ";
  append_string_array(out, iv.tagset.pos);
  out += ", \"dep\": ";
  append_string_array(out, iv.tagset.dep);
  out += "},\n  \"turns\": [";
  for (std::size_t t = 0; t < iv.turns.size(); ++t) {
    const auto& turn = iv.turns[t];
    out += t ? ",\n    {" : "\n    {";
    out += "\"speaker\": \"";
    out += to_string(turn.speaker);
    out += "\", \"start_s\": ";
    out += format_time(turn.start_s);
    out += ", \"end_s\": ";
    out += format_time(turn.end_s);
    out += ",\n     \"tokens\": [";
    for (std::size_t k = 0; k < turn.tokens.size(); ++k) {
      const auto& tok = turn.tokens[k];
      out += k ? ",\n       {" : "\n       {";
      out += "\"text\": ";
      append_escaped(out, tok.text);
      if (tok.pos) {
        out += ", \"pos\": ";
        append_escaped(out, *tok.pos);
        out += ", \"dep\": ";
        append_escaped(out, *tok.dep);
      }
      out += ", \"is_sentence_final\": ";
      out += tok.sentence_final ? "true" : "false";
      out += '}';
    }
    out += turn.tokens.empty() ? "]" : "\n     ]";
    out += ",\n     \"intra_turn_pauses\": ";
    append_intervals(out, turn.intra_turn_pauses);
    out += ", \"overlaps\": ";
    append_intervals(out, turn.overlaps);
    out += '}';
  }
  out += iv.turns.empty() ? "]" : "\n  ]";
  out += "\n}\n";
  return out;
}

namespace {

struct ManifestRow {
  Group group;
  double ipde;
  std::optional<double> bis11;
  Mode mode;
};

std::map<std::string, ManifestRow> load_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open manifest " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(file.string() + ": empty manifest");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != "id\tgroup\tipde\tbis11\tmode")
    throw DataError(file.string() + ": manifest header must be id\\tgroup\\tipde\\tbis11\\tmode");
  std::map<std::string, ManifestRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    while (true) {
      auto tab = line.find('\t', pos);
      cols.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    std::string where = file.string() + ":" + std::to_string(line_no);
    if (cols.size() != 5) throw DataError(where + ": expected 5 tab-separated columns");
    ManifestRow row{parse_group(cols[1], "group", where), 0.0, std::nullopt,
                    parse_mode(cols[4], "mode", where)};
    try {
      row.ipde = std::stod(cols[2]);
      if (!cols[3].empty()) row.bis11 = std::stod(cols[3]);
    } catch (const std::exception&) {
      throw DataError(where + ": bad numeric column");
    }
    if (!rows.emplace(cols[0], row).second) throw DataError(where + ": duplicate id " + cols[0]);
  }
  return rows;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-9; }

}  // namespace

std::vector<Interview> load_dataset(const std::filesystem::path& dir,
                                    std::vector<std::string>* warnings) {
  if (!std::filesystem::is_directory(dir)) throw DataError("dataset directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.size() > 15 && name.ends_with(".interview.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .interview.json files in " + dir.string());

  std::vector<Interview> out;
  std::set<std::string> ids;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::ostringstream buf;
    buf << in.rdbuf();
    Interview iv = load_interview(buf.str(), warnings, f.string());
    if (!ids.insert(iv.id).second) throw DataError("duplicate interview id '" + iv.id + "' in " + f.string());
    out.push_back(std::move(iv));
  }
  std::sort(out.begin(), out.end(), [](const Interview& a, const Interview& b) { return a.id < b.id; });

  auto manifest_path = dir / "manifest.tsv";
  if (std::filesystem::exists(manifest_path)) {
    auto rows = load_manifest(manifest_path);
    for (const auto& iv : out) {
      auto it = rows.find(iv.id);
      if (it == rows.end()) throw DataError("manifest is missing id '" + iv.id + "'");
      const auto& row = it->second;
      if (row.group != iv.group || row.mode != iv.mode || !close(row.ipde, iv.ipde_score) ||
          row.bis11.has_value() != iv.bis11_score.has_value() ||
          (row.bis11 && !close(*row.bis11, *iv.bis11_score)))
        throw DataError("manifest row for '" + iv.id + "' disagrees with the interview file");
      rows.erase(it);
    }
    if (!rows.empty())
      throw DataError("manifest lists unknown id '" + rows.begin()->first + "'");
  }
  return out;
}

bool subject_matches(Speaker speaker, Subject subject) {
  switch (subject) {
    case Subject::Participant: return speaker == Speaker::Participant;
    case Subject::Interviewer: return speaker == Speaker::Interviewer;
    default: return true;
  }
}

std::vector<std::reference_wrapper<const SpeakerTurn>> filter_turns(const Interview& interview,
                                                                    Subject subject) {
  std::vector<std::reference_wrapper<const SpeakerTurn>> out;
  for (const auto& turn : interview.turns)
    if (subject_matches(turn.speaker, subject)) out.emplace_back(turn);
  return out;
}

}  // namespace turnsig
