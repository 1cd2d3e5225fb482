#include "dcproj/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dcproj/errors.hpp"
#include "dcproj/parallel.hpp"
#include "dcproj/unicode.hpp"

namespace dcproj {
namespace {

constexpr std::u32string_view kDefaultPunctuation = U".,;:!?()\"'«»—–-";

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

}  // namespace

TokenizerProfile parse_profile(std::string_view name) {
  if (name == "generic") return TokenizerProfile::generic;
  if (name == "french") return TokenizerProfile::french;
  throw FormatError("unknown tokenizer profile '" + std::string(name) + "' (expected generic or french)");
}

std::string_view to_string(TokenizerProfile profile) {
  return profile == TokenizerProfile::french ? "french" : "generic";
}

PunctuationSet::PunctuationSet() : explicit_(kDefaultPunctuation.begin(), kDefaultPunctuation.end()) {}

const PunctuationSet& PunctuationSet::standard() {
  static const PunctuationSet instance;
  return instance;
}

PunctuationSet PunctuationSet::parse(std::string_view contents) {
  PunctuationSet set;
  set.explicit_.clear();
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("@unicode-categories", 0) == 0) {
      auto value = line.substr(std::string_view("@unicode-categories").size());
      value.erase(0, value.find_first_not_of(" \t"));
      if (value == "on") {
        set.unicode_categories_ = true;
      } else if (value == "off") {
        set.unicode_categories_ = false;
      } else {
        throw FormatError("punctuation file line " + std::to_string(line_no) +
                          ": expected '@unicode-categories on|off'");
      }
      continue;
    }
    if (!line.empty() && line[0] == '#') continue;
    auto cps = unicode::decode(line);
    if (!cps) throw FormatError("punctuation file line " + std::to_string(line_no) + ": invalid UTF-8");
    for (char32_t cp : *cps)
      if (!unicode::is_space(cp)) set.explicit_.insert(cp);
  }
  return set;
}

PunctuationSet PunctuationSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open punctuation file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool PunctuationSet::contains(char32_t cp) const {
  return explicit_.count(cp) > 0 || (unicode_categories_ && unicode::is_unicode_punctuation(cp));
}

bool PunctuationSet::all_punct(std::string_view utf8) const {
  auto cps = unicode::decode(utf8);
  if (!cps || cps->empty()) return false;
  for (char32_t cp : *cps)
    if (!contains(cp)) return false;
  return true;
}

std::vector<Token> tokenize(std::string_view text, TokenizerProfile profile, const PunctuationSet& punct) {
  auto decoded = unicode::decode(text);
  if (!decoded) throw FormatError("tokenize: input is not valid UTF-8");
  const std::u32string& cps = *decoded;
  const bool french = profile == TokenizerProfile::french;

  std::vector<Token> tokens;
  auto emit = [&](std::size_t start, std::size_t end) {
    Token tok;
    std::u32string_view piece(cps.data() + start, end - start);
    tok.surface = unicode::encode(piece);
    tok.lower = unicode::lowercase(tok.surface);
    tok.char_start = start;
    tok.char_end = end;
    tok.is_punct = true;
    for (char32_t cp : piece) tok.is_punct = tok.is_punct && punct.contains(cp);
    tokens.push_back(std::move(tok));
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t cp = cps[i];
    if (unicode::is_space(cp)) {
      ++i;
    } else if (punct.contains(cp)) {
      emit(i, i + 1);
      ++i;
    } else {
      const std::size_t start = i;
      while (i < cps.size() && !unicode::is_space(cps[i]) && !punct.contains(cps[i]) &&
             !(french && is_apostrophe(cps[i])))
        ++i;
      // French elision: the apostrophe closes the word it follows ("d'" in "d'autre").
      if (french && i < cps.size() && is_apostrophe(cps[i])) ++i;
      emit(start, i);
    }
  }
  return tokens;
}

std::string make_pair_id(std::size_t line_number) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08zu", line_number);
  return buf;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("error reading " + path.string());
  return lines;
}

std::vector<SentencePair> parse_parallel(const std::vector<std::string>& c_lines,
                                         const std::vector<std::string>& a_lines, const LoadOptions& options,
                                         std::string_view c_name, std::string_view a_name) {
  if (c_lines.size() != a_lines.size()) {
    throw FormatError("line count mismatch: " + std::string(c_name) + " has " + std::to_string(c_lines.size()) +
                      " lines, " + std::string(a_name) + " has " + std::to_string(a_lines.size()));
  }
  auto check_utf8 = [](const std::vector<std::string>& lines, std::string_view name) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (auto bad = unicode::first_invalid_byte(lines[i])) {
        throw FormatError(std::string(name) + ":" + std::to_string(i + 1) + ": undecodable byte at offset " +
                          std::to_string(*bad));
      }
    }
  };
  check_utf8(c_lines, c_name);
  check_utf8(a_lines, a_name);

  const PunctuationSet& punct = options.punct ? *options.punct : PunctuationSet::standard();
  const std::size_t n = c_lines.size();
  std::vector<SentencePair> all(n);
  parallel_for(n, options.jobs, [&](std::size_t i) {
    all[i].pair_id = make_pair_id(i + 1);
    all[i].c_tokens = tokenize(c_lines[i], options.c_profile, punct);
    all[i].a_tokens = tokenize(a_lines[i], options.a_profile, punct);
  });

  std::vector<SentencePair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool c_empty = all[i].c_tokens.empty();
    const bool a_empty = all[i].a_tokens.empty();
    if (c_empty && a_empty) {
      const std::string msg = "line " + std::to_string(i + 1) + ": empty on both sides, skipped";
      if (options.warn) {
        options.warn(msg);
      } else {
        std::cerr << "warning: " << msg << '\n';
      }
      continue;
    }
    if (c_empty || a_empty) {
      throw FormatError("line " + std::to_string(i + 1) + ": empty on the " +
                        std::string(c_empty ? c_name : a_name) + " side only");
    }
    pairs.push_back(std::move(all[i]));
  }
  return pairs;
}

std::vector<SentencePair> load_parallel(const std::filesystem::path& c_path, const std::filesystem::path& a_path,
                                        const LoadOptions& options) {
  return parse_parallel(read_lines(c_path), read_lines(a_path), options, c_path.string(), a_path.string());
}

std::string join_surfaces(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.surface;
  }
  return out;
}

}  // namespace dcproj
