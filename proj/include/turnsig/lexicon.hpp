#pragma once
// Dictionary engine for category counting and weighted-lexicon scoring.
// Patterns are literal lowercase words or prefixes ending in '*'. When a
// token matches several patterns the longest one wins (a literal beats a
// prefix of equal length), so each token resolves to at most one entry.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace turnsig::lex {

enum class LexiconKind { Category, Weighted };

class Lexicon {
public:
  struct Entry {
    std::string pattern;  // without the trailing '*' for prefixes
    bool prefix = false;
    double weight = 1.0;
  };

  /// Parses the file format: a `name<TAB>kind` header, then one
  /// `pattern[<TAB>weight]` entry per line; '#' starts a comment.
  static Lexicon parse(std::string_view text, std::string_view origin = "<string>");
  static Lexicon load_file(const std::filesystem::path& file);

  const std::string& name() const { return name_; }
  LexiconKind kind() const { return kind_; }
  std::size_t size() const { return entries_.size(); }

  /// The longest-match entry for a token, or nullptr.
  const Entry* match(std::string_view token) const;

private:
  std::string name_;
  LexiconKind kind_ = LexiconKind::Category;
  std::vector<Entry> entries_;  // sorted longest-first, literals before prefixes
};

/// Number of tokens with a match; each token counts at most once.
/// Requires a Category lexicon.
int match_count(const Lexicon& lexicon, const std::vector<std::string>& tokens);

/// Sum over matched tokens of weight / N with N the token count; an empty
/// token list scores 0. Requires a Weighted lexicon.
double weighted_score(const Lexicon& lexicon, const std::vector<std::string>& tokens);

/// All lexicons of a directory (one `.lex` file per category), keyed by
/// their declared names.
class LexiconSet {
public:
  static LexiconSet load_dir(const std::filesystem::path& dir);

  void add(Lexicon lexicon);
  const Lexicon& require(std::string_view name) const;
  const Lexicon* find(std::string_view name) const;
  std::vector<std::string> names() const;

private:
  std::map<std::string, Lexicon, std::less<>> by_name_;
};

}  // namespace turnsig::lex
