#include "turnsig/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "turnsig/errors.hpp"

namespace turnsig::lex {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool is_lowercase_pattern(std::string_view p) {
  for (char c : p)
    if (std::isupper(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Lexicon Lexicon::parse(std::string_view text, std::string_view origin) {
  Lexicon out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::string> seen_patterns;

  auto fail = [&](const std::string& what) {
    throw ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = trim(sv.substr(0, hash));
    if (sv.empty()) continue;

    auto tab = sv.find('\t');
    std::string_view first = tab == std::string_view::npos ? sv : trim(sv.substr(0, tab));
    std::string_view second = tab == std::string_view::npos ? std::string_view{} : trim(sv.substr(tab + 1));

    if (!header_seen) {
      if (second.empty()) fail("expected header `name<TAB>kind`");
      if (second == "category")
        out.kind_ = LexiconKind::Category;
      else if (second == "weighted")
        out.kind_ = LexiconKind::Weighted;
      else
        fail("unknown lexicon kind '" + std::string(second) + "'");
      out.name_ = std::string(first);
      header_seen = true;
      continue;
    }

    Entry e;
    if (first.empty()) fail("empty pattern");
    if (!is_lowercase_pattern(first)) fail("pattern must be lowercase: '" + std::string(first) + "'");
    if (first.find('*') != std::string_view::npos) {
      if (first.back() != '*' || first.size() < 2 || first.find('*') != first.size() - 1)
        fail("'*' is only allowed as a trailing wildcard: '" + std::string(first) + "'");
      e.prefix = true;
      first.remove_suffix(1);
    }
    e.pattern = std::string(first);
    if (!seen_patterns.insert(e.pattern + (e.prefix ? "*" : "")).second)
      fail("duplicate pattern '" + e.pattern + (e.prefix ? "*" : "") + "'");

    if (out.kind_ == LexiconKind::Weighted) {
      if (second.empty()) fail("weighted entry '" + e.pattern + "' is missing its weight");
      try {
        std::size_t used = 0;
        e.weight = std::stod(std::string(second), &used);
        if (used != second.size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        fail("bad weight '" + std::string(second) + "'");
      }
      if (!std::isfinite(e.weight)) fail("non-finite weight");
    } else if (!second.empty()) {
      fail("category entries take no weight column");
    }
    out.entries_.push_back(std::move(e));
  }

  if (!header_seen) throw ParseError(std::string(origin) + ": empty lexicon file");
  if (out.entries_.empty()) throw ParseError(std::string(origin) + ": lexicon has no entries");

  // Longest pattern first; a literal outranks a prefix of the same length.
  std::sort(out.entries_.begin(), out.entries_.end(), [](const Entry& a, const Entry& b) {
    if (a.pattern.size() != b.pattern.size()) return a.pattern.size() > b.pattern.size();
    if (a.prefix != b.prefix) return !a.prefix;
    return a.pattern < b.pattern;
  });
  return out;
}

Lexicon Lexicon::load_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open lexicon file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), file.string());
}

const Lexicon::Entry* Lexicon::match(std::string_view token) const {
  for (const Entry& e : entries_) {
    if (e.prefix) {
      if (token.size() >= e.pattern.size() && token.compare(0, e.pattern.size(), e.pattern) == 0)
        return &e;
    } else if (token == e.pattern) {
      return &e;
    }
  }
  return nullptr;
}

int match_count(const Lexicon& lexicon, const std::vector<std::string>& tokens) {
  if (lexicon.kind() != LexiconKind::Category)
    throw std::invalid_argument("match_count: lexicon '" + lexicon.name() + "' is not a category lexicon");
  int count = 0;
  for (const auto& t : tokens) count += lexicon.match(t) != nullptr;
  return count;
}

double weighted_score(const Lexicon& lexicon, const std::vector<std::string>& tokens) {
  if (lexicon.kind() != LexiconKind::Weighted)
    throw std::invalid_argument("weighted_score: lexicon '" + lexicon.name() + "' is not weighted");
  if (tokens.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : tokens)
    if (const auto* e = lexicon.match(t)) sum += e->weight;
  return sum / static_cast<double>(tokens.size());
}

LexiconSet LexiconSet::load_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw DataError("lexicon directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".lex") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .lex files in " + dir.string());
  LexiconSet set;
  for (const auto& f : files) set.add(Lexicon::load_file(f));
  return set;
}

void LexiconSet::add(Lexicon lexicon) {
  auto name = lexicon.name();
  if (!by_name_.emplace(name, std::move(lexicon)).second)
    throw DataError("duplicate lexicon name '" + name + "'");
}

const Lexicon& LexiconSet::require(std::string_view name) const {
  if (const auto* l = find(name)) return *l;
  throw DataError("required lexicon '" + std::string(name) + "' is not loaded");
}

const Lexicon* LexiconSet::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &it->second;
}

std::vector<std::string> LexiconSet::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : by_name_) out.push_back(k);
  return out;
}

}  // namespace turnsig::lex
