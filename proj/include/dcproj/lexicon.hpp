#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcproj/corpus.hpp"

namespace dcproj {

struct ConnectiveEntry {
  std::string canonical;
  std::vector<std::vector<std::string>> forms;  // case-folded token sequences
  std::optional<std::string> default_relation;

  friend bool operator==(const ConnectiveEntry&, const ConnectiveEntry&) = default;
};

using Lexicon = std::vector<ConnectiveEntry>;

/// A lexicon match on side C: tokens [start, end) of the pair's c_tokens.
struct CandidateDC {
  std::string pair_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t entry = 0;  // index into the lexicon the candidate was matched with
  std::string canonical;

  friend bool operator==(const CandidateDC&, const CandidateDC&) = default;
};

/// Parses the lexicon TSV: `canonical <TAB> form|form|... [<TAB> relation]`.
/// Blank lines and lines starting with '#' are ignored. Forms are tokenized
/// with the french profile and case-folded.
Lexicon parse_lexicon(std::string_view contents, const PunctuationSet& punct = PunctuationSet::standard());
Lexicon load_lexicon(const std::filesystem::path& path, const PunctuationSet& punct = PunctuationSet::standard());

void write_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);

struct Match {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t entry = 0;
};

/// Token trie over every form of a lexicon. Scans left to right; at each
/// position the longest matching form wins and its tokens are consumed.
class ConnectiveMatcher {
 public:
  explicit ConnectiveMatcher(const Lexicon& lexicon);

  std::vector<Match> match(const std::vector<Token>& tokens) const;

 private:
  struct Node {
    std::map<std::string, std::size_t, std::less<>> next;
    std::optional<std::size_t> entry;
  };
  std::vector<Node> nodes_;
};

std::vector<CandidateDC> match_candidates(const SentencePair& pair, const Lexicon& lexicon);
std::vector<CandidateDC> match_candidates(const SentencePair& pair, const Lexicon& lexicon,
                                          const ConnectiveMatcher& matcher);

/// True iff the candidate's tokens re-match one form of its entry.
bool candidate_matches_entry(const CandidateDC& candidate, const SentencePair& pair, const Lexicon& lexicon);

}  // namespace dcproj
