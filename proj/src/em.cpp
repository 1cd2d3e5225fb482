#include "dcproj/em.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

#include "dcproj/errors.hpp"
#include "dcproj/parallel.hpp"

namespace dcproj {
namespace {

const std::vector<Token>& cond_side(const SentencePair& pair, Direction d) {
  return d == Direction::c_given_a ? pair.a_tokens : pair.c_tokens;
}

const std::vector<Token>& out_side(const SentencePair& pair, Direction d) {
  return d == Direction::c_given_a ? pair.c_tokens : pair.a_tokens;
}

// Word ids follow byte order of the words, so sorted parameter ids give
// sorted (cond, out) entries. The NULL word is cond id 0.
struct Vocabulary {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::uint32_t> ids;

  void build(std::vector<std::string> all) {
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    words = std::move(all);
    for (std::uint32_t i = 0; i < words.size(); ++i) ids.emplace(words[i], i);
  }
};

struct Sentence {
  std::size_t cond_len = 0;  // without NULL
  std::size_t out_len = 0;
  // params[j * (cond_len + 1) + i]: parameter index of (cond position i, out position j); i = 0 is NULL.
  std::vector<std::uint32_t> params;
};

}  // namespace

std::string_view to_string(Direction direction) {
  return direction == Direction::c_given_a ? "c_given_a" : "a_given_c";
}

Direction parse_direction(std::string_view name) {
  if (name == "c_given_a") return Direction::c_given_a;
  if (name == "a_given_c") return Direction::a_given_c;
  throw FormatError("unknown direction '" + std::string(name) + "' (expected c_given_a or a_given_c)");
}

AlignerKind viterbi_kind(Direction direction) {
  return direction == Direction::a_given_c ? AlignerKind::direct : AlignerKind::inverse;
}

TranslationModel::TranslationModel(Direction direction, std::vector<Entry> entries)
    : direction_(direction), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& x, const Entry& y) { return std::tie(x.cond, x.out) < std::tie(y.cond, y.out); });
  for (const auto& e : entries_) {
    if (!(e.prob >= 0.0 && e.prob <= 1.0)) {
      throw FormatError("probability out of range for (" + e.cond + ", " + e.out + ")");
    }
    if (!table_[e.cond].emplace(e.out, e.prob).second) {
      throw FormatError("duplicate model entry (" + e.cond + ", " + e.out + ")");
    }
  }
}

double TranslationModel::prob(std::string_view cond, std::string_view out) const {
  auto row = table_.find(std::string(cond));
  if (row == table_.end()) return 0.0;
  auto cell = row->second.find(std::string(out));
  return cell == row->second.end() ? 0.0 : cell->second;
}

double TranslationModel::max_normalization_error() const {
  double worst = 0.0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    double sum = 0.0;
    auto end = it;
    for (; end != entries_.end() && end->cond == it->cond; ++end) sum += end->prob;
    worst = std::max(worst, std::abs(sum - 1.0));
    it = end;
  }
  return worst;
}

EmResult train_em(const std::vector<SentencePair>& pairs, Direction direction, int iterations, unsigned jobs) {
  if (pairs.empty()) throw FormatError("train_em: empty corpus");
  if (iterations < 1) throw FormatError("train_em: iterations must be >= 1");

  Vocabulary cond_vocab;
  Vocabulary out_vocab;
  {
    std::vector<std::string> cw{std::string(TranslationModel::kNullWord)};
    std::vector<std::string> ow;
    for (const auto& p : pairs) {
      for (const auto& t : cond_side(p, direction)) cw.push_back(t.lower);
      for (const auto& t : out_side(p, direction)) ow.push_back(t.lower);
    }
    cond_vocab.build(std::move(cw));
    out_vocab.build(std::move(ow));
  }
  const std::uint32_t null_id = cond_vocab.ids.at(std::string(TranslationModel::kNullWord));
  const std::uint64_t n_out = out_vocab.words.size();
  auto key = [n_out](std::uint64_t cond, std::uint64_t out) { return cond * n_out + out; };

  // Co-occurring (cond, out) pairs become the parameters, in sorted key order.
  std::vector<std::uint64_t> keys;
  for (const auto& p : pairs) {
    const auto& cs = cond_side(p, direction);
    const auto& os = out_side(p, direction);
    for (const auto& o : os) {
      const auto oid = out_vocab.ids.at(o.lower);
      keys.push_back(key(null_id, oid));
      for (const auto& c : cs) keys.push_back(key(cond_vocab.ids.at(c.lower), oid));
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto param_of = [&keys](std::uint64_t k) {
    return static_cast<std::uint32_t>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
  };

  std::vector<Sentence> sentences(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t s) {
    const auto& cs = cond_side(pairs[s], direction);
    const auto& os = out_side(pairs[s], direction);
    Sentence& sent = sentences[s];
    sent.cond_len = cs.size();
    sent.out_len = os.size();
    sent.params.resize((cs.size() + 1) * os.size());
    for (std::size_t j = 0; j < os.size(); ++j) {
      const auto oid = out_vocab.ids.at(os[j].lower);
      sent.params[j * (cs.size() + 1)] = param_of(key(null_id, oid));
      for (std::size_t i = 0; i < cs.size(); ++i)
        sent.params[j * (cs.size() + 1) + i + 1] = param_of(key(cond_vocab.ids.at(cs[i].lower), oid));
    }
  });

  std::vector<std::uint32_t> param_cond(keys.size());
  for (std::size_t p = 0; p < keys.size(); ++p) param_cond[p] = static_cast<std::uint32_t>(keys[p] / n_out);

  // Uniform over co-occurring outputs.
  std::vector<double> t(keys.size());
  {
    std::vector<std::size_t> fanout(cond_vocab.words.size(), 0);
    for (auto c : param_cond) ++fanout[c];
    for (std::size_t p = 0; p < keys.size(); ++p) t[p] = 1.0 / static_cast<double>(fanout[param_cond[p]]);
  }

  std::vector<std::vector<double>> posterior(sentences.size());
  std::vector<double> sentence_ll(sentences.size());
  auto e_step = [&] {
    parallel_for(sentences.size(), jobs, [&](std::size_t s) {
      const Sentence& sent = sentences[s];
      const std::size_t width = sent.cond_len + 1;
      auto& post = posterior[s];
      post.resize(sent.params.size());
      double ll = 0.0;
      for (std::size_t j = 0; j < sent.out_len; ++j) {
        double denom = 0.0;
        for (std::size_t i = 0; i < width; ++i) denom += t[sent.params[j * width + i]];
        for (std::size_t i = 0; i < width; ++i) post[j * width + i] = t[sent.params[j * width + i]] / denom;
        ll += std::log(denom / static_cast<double>(width));
      }
      sentence_ll[s] = ll;
    });
    return std::accumulate(sentence_ll.begin(), sentence_ll.end(), 0.0);
  };

  EmResult result;
  std::vector<double> counts(keys.size());
  std::vector<double> totals(cond_vocab.words.size());
  for (int it = 0; it < iterations; ++it) {
    result.log_likelihood.push_back(e_step());

    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      const auto& params = sentences[s].params;
      for (std::size_t k = 0; k < params.size(); ++k) counts[params[k]] += posterior[s][k];
    }
    std::fill(totals.begin(), totals.end(), 0.0);
    for (std::size_t p = 0; p < keys.size(); ++p) totals[param_cond[p]] += counts[p];
    for (std::size_t p = 0; p < keys.size(); ++p) t[p] = counts[p] / totals[param_cond[p]];

    double worst = 0.0;
    std::fill(totals.begin(), totals.end(), 0.0);
    for (std::size_t p = 0; p < keys.size(); ++p) totals[param_cond[p]] += t[p];
    for (double sum : totals) worst = std::max(worst, std::abs(sum - 1.0));
    result.normalization_error.push_back(worst);
  }
  result.log_likelihood.push_back(e_step());

  std::vector<TranslationModel::Entry> entries;
  entries.reserve(keys.size());
  for (std::size_t p = 0; p < keys.size(); ++p) {
    entries.push_back({cond_vocab.words[param_cond[p]], out_vocab.words[keys[p] % n_out], t[p]});
  }
  result.model = TranslationModel(direction, std::move(entries));
  return result;
}

std::vector<std::vector<double>> link_posteriors(const TranslationModel& model, const SentencePair& pair) {
  const auto& cs = cond_side(pair, model.direction());
  const auto& os = out_side(pair, model.direction());
  std::vector<std::vector<double>> out(os.size(), std::vector<double>(cs.size() + 1, 0.0));
  for (std::size_t j = 0; j < os.size(); ++j) {
    out[j][0] = model.prob(TranslationModel::kNullWord, os[j].lower);
    for (std::size_t i = 0; i < cs.size(); ++i) out[j][i + 1] = model.prob(cs[i].lower, os[j].lower);
    const double denom = std::accumulate(out[j].begin(), out[j].end(), 0.0);
    if (denom > 0.0)
      for (double& v : out[j]) v /= denom;
  }
  return out;
}

AlignmentSet viterbi_align(const TranslationModel& model, const SentencePair& pair) {
  const Direction d = model.direction();
  const auto& cs = cond_side(pair, d);
  const auto& os = out_side(pair, d);
  AlignmentSet out{pair.pair_id, {}, viterbi_kind(d)};
  for (std::size_t j = 0; j < os.size(); ++j) {
    double best = model.prob(TranslationModel::kNullWord, os[j].lower);
    std::optional<std::size_t> best_i;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const double p = model.prob(cs[i].lower, os[j].lower);
      if (p > best) {
        best = p;
        best_i = i;
      }
    }
    if (!best_i) continue;
    if (d == Direction::a_given_c) {
      out.links.insert({*best_i, j});
    } else {
      out.links.insert({j, *best_i});
    }
  }
  return out;
}

std::vector<AlignmentSet> align_corpus(const TranslationModel& model, const std::vector<SentencePair>& pairs,
                                       unsigned jobs) {
  std::vector<AlignmentSet> out(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) { out[i] = viterbi_align(model, pairs[i]); });
  return out;
}

void write_model(const TranslationModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model " + path.string());
  out << "direction\t" << to_string(model.direction()) << '\n';
  char buf[64];
  for (const auto& e : model.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.prob);
    out << e.cond << '\t' << e.out << '\t' << buf << '\n';
  }
  if (!out) throw IoError("error writing " + path.string());
}

TranslationModel read_model(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0].rfind("direction\t", 0) != 0) {
    throw FormatError(path.string() + ": missing 'direction' header line");
  }
  const Direction direction = parse_direction(std::string_view(lines[0]).substr(10));
  std::vector<TranslationModel::Entry> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tab1 = lines[i].find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : lines[i].find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(i + 1) + ": expected 3 tab-separated columns");
    }
    const std::string prob_text = lines[i].substr(tab2 + 1);
    char* end = nullptr;
    const double prob = std::strtod(prob_text.c_str(), &end);
    if (prob_text.empty() || *end != '\0') {
      throw FormatError(path.string() + ":" + std::to_string(i + 1) + ": bad probability '" + prob_text + "'");
    }
    entries.push_back({lines[i].substr(0, tab1), lines[i].substr(tab1 + 1, tab2 - tab1 - 1), prob});
  }
  return TranslationModel(direction, std::move(entries));
}

}  // namespace dcproj
