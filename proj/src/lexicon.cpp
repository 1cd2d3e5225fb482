#include "dcproj/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "dcproj/errors.hpp"

namespace dcproj {
namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> fold_form(std::string_view text, const PunctuationSet& punct) {
  std::vector<std::string> form;
  for (auto& tok : tokenize(text, TokenizerProfile::french, punct)) form.push_back(std::move(tok.lower));
  return form;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

Lexicon parse_lexicon(std::string_view contents, const PunctuationSet& punct) {
  Lexicon lexicon;
  std::map<std::vector<std::string>, std::size_t> owner;  // form -> entry index
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const std::string where = "lexicon line " + std::to_string(line_no) + ": ";

    auto cols = split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3) {
      throw FormatError(where + "expected 2 or 3 tab-separated columns, found " + std::to_string(cols.size()));
    }
    ConnectiveEntry entry;
    entry.canonical = trim(cols[0]);
    if (entry.canonical.empty()) throw FormatError(where + "empty canonical form");
    if (cols.size() == 3 && !trim(cols[2]).empty()) entry.default_relation = trim(cols[2]);

    for (const auto& variant : split(cols[1], '|')) {
      auto form = fold_form(variant, punct);
      if (form.empty()) throw FormatError(where + "empty form in entry '" + entry.canonical + "'");
      for (const auto& tok : form) {
        if (punct.all_punct(tok)) {
          throw FormatError(where + "form '" + trim(variant) + "' contains punctuation-only token '" + tok + "'");
        }
      }
      entry.forms.push_back(std::move(form));
    }
    if (fold_form(entry.canonical, punct) != entry.forms.front()) {
      throw FormatError(where + "canonical '" + entry.canonical + "' does not match its first form '" +
                        join(entry.forms.front()) + "'");
    }
    const std::size_t index = lexicon.size();
    for (const auto& form : entry.forms) {
      auto [it, inserted] = owner.emplace(form, index);
      if (!inserted && it->second != index) {
        throw FormatError(where + "duplicate form '" + join(form) + "' (already declared by '" +
                          lexicon[it->second].canonical + "')");
      }
    }
    lexicon.push_back(std::move(entry));
  }
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path, const PunctuationSet& punct) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str(), punct);
}

void write_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write lexicon " + path.string());
  for (const auto& entry : lexicon) {
    out << entry.canonical << '\t';
    for (std::size_t i = 0; i < entry.forms.size(); ++i) out << (i ? "|" : "") << join(entry.forms[i]);
    out << '\t' << entry.default_relation.value_or("") << '\n';
  }
  if (!out) throw IoError("error writing " + path.string());
}

ConnectiveMatcher::ConnectiveMatcher(const Lexicon& lexicon) : nodes_(1) {
  for (std::size_t e = 0; e < lexicon.size(); ++e) {
    for (const auto& form : lexicon[e].forms) {
      std::size_t node = 0;
      for (const auto& word : form) {
        auto it = nodes_[node].next.find(word);
        if (it == nodes_[node].next.end()) {
          nodes_.emplace_back();
          it = nodes_[node].next.emplace(word, nodes_.size() - 1).first;
        }
        node = it->second;
      }
      if (!nodes_[node].entry) nodes_[node].entry = e;
    }
  }
}

std::vector<Match> ConnectiveMatcher::match(const std::vector<Token>& tokens) const {
  std::vector<Match> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t node = 0;
    std::optional<Match> best;
    for (std::size_t j = i; j < tokens.size(); ++j) {
      auto it = nodes_[node].next.find(tokens[j].lower);
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      if (nodes_[node].entry) best = Match{i, j + 1, *nodes_[node].entry};
    }
    if (best) {
      out.push_back(*best);
      i = best->end;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<CandidateDC> match_candidates(const SentencePair& pair, const Lexicon& lexicon,
                                          const ConnectiveMatcher& matcher) {
  std::vector<CandidateDC> out;
  for (const auto& m : matcher.match(pair.c_tokens)) {
    out.push_back(CandidateDC{pair.pair_id, m.start, m.end, m.entry, lexicon[m.entry].canonical});
  }
  return out;
}

std::vector<CandidateDC> match_candidates(const SentencePair& pair, const Lexicon& lexicon) {
  return match_candidates(pair, lexicon, ConnectiveMatcher(lexicon));
}

bool candidate_matches_entry(const CandidateDC& candidate, const SentencePair& pair, const Lexicon& lexicon) {
  if (candidate.entry >= lexicon.size() || candidate.start >= candidate.end ||
      candidate.end > pair.c_tokens.size())
    return false;
  for (const auto& form : lexicon[candidate.entry].forms) {
    if (form.size() != candidate.end - candidate.start) continue;
    bool same = true;
    for (std::size_t k = 0; k < form.size() && same; ++k) same = pair.c_tokens[candidate.start + k].lower == form[k];
    if (same) return true;
  }
  return false;
}

}  // namespace dcproj
