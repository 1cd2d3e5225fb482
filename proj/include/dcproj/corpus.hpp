#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dcproj {

struct Token {
  std::string surface;
  std::string lower;
  std::size_t char_start = 0;  // code-point offset into the source line, inclusive
  std::size_t char_end = 0;    // exclusive
  bool is_punct = false;

  friend bool operator==(const Token&, const Token&) = default;
};

/// One line of a parallel corpus. Side C carries the candidate connectives
/// that receive projected labels; side A carries the source annotations.
struct SentencePair {
  std::string pair_id;
  std::vector<Token> c_tokens;
  std::vector<Token> a_tokens;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

/// Half-open token range [start, end).
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend auto operator<=>(const TokenSpan&, const TokenSpan&) = default;
};

enum class TokenizerProfile { generic, french };

TokenizerProfile parse_profile(std::string_view name);
std::string_view to_string(TokenizerProfile profile);

/// Set of code points treated as punctuation, both by the tokenizer and by
/// the projection rule that rejects punctuation-only translations.
///
/// The standard set is `. , ; : ! ? ( ) " ' « » — – -` plus every code point
/// in a Unicode punctuation category. A punctuation file replaces the
/// explicit set: every non-whitespace code point on a line is a member,
/// `#` starts a comment line, and the directive `@unicode-categories off`
/// drops the category rule.
class PunctuationSet {
 public:
  PunctuationSet();

  static const PunctuationSet& standard();
  static PunctuationSet parse(std::string_view contents);
  static PunctuationSet load(const std::filesystem::path& path);

  bool contains(char32_t cp) const;
  /// True iff `utf8` is non-empty and every code point is punctuation.
  bool all_punct(std::string_view utf8) const;

 private:
  std::set<char32_t> explicit_;
  bool unicode_categories_ = true;
};

std::vector<Token> tokenize(std::string_view text, TokenizerProfile profile,
                            const PunctuationSet& punct = PunctuationSet::standard());

/// Eight-digit zero-padded decimal line number, e.g. 7 -> "00000007".
std::string make_pair_id(std::size_t line_number);

struct LoadOptions {
  TokenizerProfile c_profile = TokenizerProfile::french;
  TokenizerProfile a_profile = TokenizerProfile::generic;
  const PunctuationSet* punct = nullptr;  // null means PunctuationSet::standard()
  unsigned jobs = 1;
  std::function<void(const std::string&)> warn;  // null means standard error
};

/// Reads a sentence-aligned corpus (one UTF-8 sentence per line in each
/// file). pair_id is the 1-based line number. Lines empty on both sides are
/// skipped with a warning; a line empty on exactly one side is an error.
std::vector<SentencePair> load_parallel(const std::filesystem::path& c_path,
                                        const std::filesystem::path& a_path,
                                        const LoadOptions& options = {});

/// Same as load_parallel over in-memory lines. `c_name`/`a_name` label errors.
std::vector<SentencePair> parse_parallel(const std::vector<std::string>& c_lines,
                                         const std::vector<std::string>& a_lines,
                                         const LoadOptions& options = {},
                                         std::string_view c_name = "C",
                                         std::string_view a_name = "A");

/// Reads a text file into lines. Strips one trailing '\r' per line; a final
/// newline does not start an extra line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Token surfaces joined by single spaces.
std::string join_surfaces(const std::vector<Token>& tokens);

}  // namespace dcproj
