#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dcproj/alignment.hpp"
#include "dcproj/annotations.hpp"
#include "dcproj/classifier.hpp"
#include "dcproj/corpus.hpp"
#include "dcproj/em.hpp"
#include "dcproj/errors.hpp"
#include "dcproj/evaluation.hpp"
#include "dcproj/lexicon.hpp"
#include "dcproj/pipeline.hpp"
#include "dcproj/projection.hpp"
#include "dcproj/synthetic.hpp"

namespace py = pybind11;
using namespace dcproj;

namespace {

using LinkList = std::vector<std::pair<std::size_t, std::size_t>>;

AlignmentSet to_set(const std::string& pair_id, const LinkList& links, AlignerKind kind = AlignerKind::external) {
  AlignmentSet s{pair_id, {}, kind};
  for (auto [c, a] : links) s.links.insert({c, a});
  return s;
}

LinkList to_list(const AlignmentSet& s) {
  LinkList out;
  for (auto l : s.links) out.emplace_back(l.c_index, l.a_index);
  return out;
}

}  // namespace

PYBIND11_MODULE(_dcproj, m) {
  m.doc() = "Discourse-connective annotation projection";

  auto format_error = py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  (void)format_error;

  py::enum_<TokenizerProfile>(m, "TokenizerProfile")
      .value("generic", TokenizerProfile::generic)
      .value("french", TokenizerProfile::french);
  py::enum_<AlignerKind>(m, "AlignerKind")
      .value("direct", AlignerKind::direct)
      .value("inverse", AlignerKind::inverse)
      .value("intersection", AlignerKind::intersection)
      .value("union", AlignerKind::union_)
      .value("grow_diag", AlignerKind::grow_diag)
      .value("external", AlignerKind::external);
  py::enum_<Direction>(m, "Direction")
      .value("c_given_a", Direction::c_given_a)
      .value("a_given_c", Direction::a_given_c);
  py::enum_<ProjectionStatus>(m, "ProjectionStatus")
      .value("DU", ProjectionStatus::DU)
      .value("NDU", ProjectionStatus::NDU)
      .value("UNSUPPORTED", ProjectionStatus::UNSUPPORTED);
  py::enum_<GoldStatus>(m, "GoldStatus")
      .value("DU", GoldStatus::DU)
      .value("NDU", GoldStatus::NDU)
      .value("DROPPED", GoldStatus::DROPPED);

  py::class_<Token>(m, "Token")
      .def_readonly("surface", &Token::surface)
      .def_readonly("lower", &Token::lower)
      .def_readonly("char_start", &Token::char_start)
      .def_readonly("char_end", &Token::char_end)
      .def_readonly("is_punct", &Token::is_punct)
      .def("__repr__", [](const Token& t) { return "Token(" + t.surface + ")"; });

  py::class_<SentencePair>(m, "SentencePair")
      .def_readonly("pair_id", &SentencePair::pair_id)
      .def_readonly("c_tokens", &SentencePair::c_tokens)
      .def_readonly("a_tokens", &SentencePair::a_tokens);

  m.def(
      "tokenize", [](const std::string& text, TokenizerProfile profile) { return tokenize(text, profile); },
      py::arg("text"), py::arg("profile") = TokenizerProfile::generic);
  m.def(
      "make_pair",
      [](const std::string& pair_id, const std::string& c, const std::string& a) {
        return SentencePair{pair_id, tokenize(c, TokenizerProfile::french), tokenize(a, TokenizerProfile::generic)};
      },
      py::arg("pair_id"), py::arg("c_text"), py::arg("a_text"));
  m.def(
      "load_parallel",
      [](const std::filesystem::path& c, const std::filesystem::path& a, unsigned jobs) {
        LoadOptions opts;
        opts.jobs = jobs;
        return load_parallel(c, a, opts);
      },
      py::arg("c_path"), py::arg("a_path"), py::arg("jobs") = 1);

  py::class_<ConnectiveEntry>(m, "ConnectiveEntry")
      .def_readonly("canonical", &ConnectiveEntry::canonical)
      .def_readonly("forms", &ConnectiveEntry::forms)
      .def_readonly("default_relation", &ConnectiveEntry::default_relation);
  py::class_<CandidateDC>(m, "CandidateDC")
      .def_readonly("pair_id", &CandidateDC::pair_id)
      .def_readonly("start", &CandidateDC::start)
      .def_readonly("end", &CandidateDC::end)
      .def_readonly("canonical", &CandidateDC::canonical);
  m.def(
      "parse_lexicon", [](const std::string& text) { return parse_lexicon(text); }, py::arg("text"));
  m.def(
      "load_lexicon", [](const std::filesystem::path& p) { return load_lexicon(p); }, py::arg("path"));
  m.def(
      "match_candidates", [](const SentencePair& p, const Lexicon& lex) { return match_candidates(p, lex); },
      py::arg("pair"), py::arg("lexicon"));

  m.def(
      "intersect",
      [](const LinkList& d, const LinkList& i) { return to_list(intersect(to_set("", d), to_set("", i))); },
      py::arg("direct"), py::arg("inverse"));
  m.def(
      "union_align",
      [](const LinkList& d, const LinkList& i) { return to_list(union_align(to_set("", d), to_set("", i))); },
      py::arg("direct"), py::arg("inverse"));
  m.def(
      "grow_diag",
      [](const LinkList& d, const LinkList& i) { return to_list(grow_diag(to_set("", d), to_set("", i))); },
      py::arg("direct"), py::arg("inverse"));
  m.def(
      "parse_pharaoh_line", [](const std::string& line) { return to_list(parse_pharaoh_line(line, "")); },
      py::arg("line"));

  py::class_<TranslationModel>(m, "TranslationModel")
      .def_property_readonly("direction", &TranslationModel::direction)
      .def("prob", &TranslationModel::prob, py::arg("cond"), py::arg("out"))
      .def("max_normalization_error", &TranslationModel::max_normalization_error)
      .def("viterbi", [](const TranslationModel& model, const SentencePair& p) { return to_list(viterbi_align(model, p)); })
      .def("save", [](const TranslationModel& model, const std::filesystem::path& p) { write_model(model, p); });
  m.def(
      "train_em",
      [](const std::vector<SentencePair>& pairs, Direction d, int iterations, unsigned jobs) {
        auto r = train_em(pairs, d, iterations, jobs);
        return py::make_tuple(r.model, r.log_likelihood);
      },
      py::arg("pairs"), py::arg("direction"), py::arg("iterations") = 10, py::arg("jobs") = 1,
      "Returns (model, log_likelihood_trace).");

  py::class_<ProjectedAnnotation>(m, "ProjectedAnnotation")
      .def_readonly("pair_id", &ProjectedAnnotation::pair_id)
      .def_property_readonly("span", [](const ProjectedAnnotation& r) { return py::make_tuple(r.span.start, r.span.end); })
      .def_readonly("form", &ProjectedAnnotation::form)
      .def_readonly("status", &ProjectedAnnotation::status)
      .def_readonly("relation", &ProjectedAnnotation::relation)
      .def_readonly("translation", &ProjectedAnnotation::translation)
      .def_readonly("aligner", &ProjectedAnnotation::aligner)
      .def("to_json", [](const ProjectedAnnotation& r) { return to_json_line(r); });

  m.def(
      "project",
      [](const std::vector<SentencePair>& pairs, const std::map<std::string, LinkList>& alignments,
         const std::map<std::string, std::vector<std::tuple<std::vector<std::pair<std::size_t, std::size_t>>,
                                                            std::string>>>& annotations,
         const Lexicon& lexicon, bool filter_unsupported) {
        std::vector<AlignmentSet> sets;
        for (const auto& [id, links] : alignments) sets.push_back(to_set(id, links));
        AnnotationIndex index;
        for (const auto& [id, anns] : annotations) {
          for (const auto& [spans, relation] : anns) {
            SourceAnnotation a{id, {}, relation};
            for (auto [s, e] : spans) a.spans.push_back({s, e});
            validate_annotation(a);
            index[id].push_back(a);
          }
        }
        return project_corpus(pairs, sets, index, lexicon, filter_unsupported).records;
      },
      py::arg("pairs"), py::arg("alignments"), py::arg("annotations"), py::arg("lexicon"),
      py::arg("filter_unsupported") = true,
      "alignments: {pair_id: [(c, a), ...]}; annotations: {pair_id: [([(start, end), ...], relation), ...]}.");
  m.def(
      "corpus_stats",
      [](const std::vector<ProjectedAnnotation>& records) {
        auto s = corpus_stats(records);
        py::dict d;
        d["DU"] = s.n_du;
        d["NDU"] = s.n_ndu;
        d["UNSUPPORTED"] = s.n_unsupported;
        return d;
      },
      py::arg("records"));

  py::class_<GoldRecord>(m, "GoldRecord")
      .def_readonly("pair_id", &GoldRecord::pair_id)
      .def_property_readonly("span", [](const GoldRecord& g) { return py::make_tuple(g.span.start, g.span.end); })
      .def_readonly("gold_status", &GoldRecord::gold_status)
      .def_readonly("gold_relation", &GoldRecord::gold_relation);
  m.def(
      "intrinsic_eval",
      [](const std::vector<ProjectedAnnotation>& projected, const std::vector<GoldRecord>& gold) {
        auto r = intrinsic_eval(projected, gold);
        py::dict d;
        d["du_precision"] = r.du.precision;
        d["du_recall"] = r.du.recall;
        d["du_f1"] = r.du.f1;
        d["ndu_precision"] = r.ndu.precision;
        d["ndu_recall"] = r.ndu.recall;
        d["ndu_f1"] = r.ndu.f1;
        d["overall_precision"] = r.overall_precision;
        d["overall_recall"] = r.overall_recall;
        d["counts"] = r.counts;
        return d;
      },
      py::arg("projected"), py::arg("gold"));
  m.def(
      "dropped_eval",
      [](const std::vector<ProjectedAnnotation>& projected, const std::vector<GoldRecord>& gold) {
        auto r = dropped_eval(projected, gold);
        return py::make_tuple(r.identified_fraction, r.misl_du_fraction, r.misl_ndu_fraction);
      },
      py::arg("projected"), py::arg("gold"), "Returns (identified, mislabeled DU, mislabeled NDU) fractions.");
  m.def(
      "krippendorff_alpha",
      [](const std::vector<std::tuple<std::string, std::string, std::string>>& rows) {
        ReliabilityData data;
        for (const auto& [item, annotator, label] : rows) data.add(annotator, item, label);
        validate(data);
        return krippendorff_alpha(data);
      },
      py::arg("rows"), "rows: (item, annotator, label) triples. Returns None when undefined.");

  py::class_<SyntheticCorpus>(m, "SyntheticCorpus")
      .def_readonly("c_lines", &SyntheticCorpus::c_lines)
      .def_readonly("a_lines", &SyntheticCorpus::a_lines)
      .def_readonly("pairs", &SyntheticCorpus::pairs)
      .def_readonly("gold", &SyntheticCorpus::gold)
      .def_readonly("c_lexicon", &SyntheticCorpus::c_lexicon)
      .def_property_readonly("oracle_alignments",
                             [](const SyntheticCorpus& s) {
                               std::map<std::string, LinkList> out;
                               for (const auto& a : s.oracle_alignments) out[a.pair_id] = to_list(a);
                               return out;
                             })
      .def_property_readonly("annotations", [](const SyntheticCorpus& s) {
        std::map<std::string, std::vector<std::tuple<LinkList, std::string>>> out;
        for (const auto& [id, anns] : s.annotations) {
          for (const auto& a : anns) {
            LinkList spans;
            for (const auto& sp : a.spans) spans.emplace_back(sp.start, sp.end);
            out[id].emplace_back(spans, a.relation);
          }
        }
        return out;
      })
      .def("write", [](const SyntheticCorpus& s, const std::filesystem::path& dir) { write_synthetic(s, dir); });
  m.def(
      "gen_synthetic",
      [](std::size_t n_pairs, double drop_rate, double ndu_rate, std::uint64_t seed, unsigned jobs) {
        SynthConfig cfg;
        cfg.n_pairs = n_pairs;
        cfg.drop_rate = drop_rate;
        cfg.ndu_rate = ndu_rate;
        return gen_synthetic(cfg, seed, jobs);
      },
      py::arg("n_pairs") = 1000, py::arg("drop_rate") = 0.15, py::arg("ndu_rate") = 0.54, py::arg("seed") = 42,
      py::arg("jobs") = 1);

  py::class_<ClassifierModel>(m, "ClassifierModel")
      .def_readonly("weights", &ClassifierModel::weights)
      .def_readonly("bias", &ClassifierModel::bias)
      .def(
          "predict",
          [](const ClassifierModel& model, const std::map<std::string, double>& features) {
            auto p = predict(model, features);
            return py::make_tuple(p.label, p.score);
          },
          py::arg("features"));
  m.def(
      "extract_features",
      [](const SentencePair& pair, std::size_t start, std::size_t end) {
        return extract_features(TokenSpan{start, end}, pair);
      },
      py::arg("pair"), py::arg("start"), py::arg("end"));
  m.def(
      "train_classifier",
      [](const std::vector<std::pair<FeatureVector, ProjectionStatus>>& examples, int epochs, double learning_rate,
         std::uint64_t seed, bool averaging) {
        std::vector<LabeledExample> ex;
        for (const auto& [f, l] : examples) ex.push_back({f, l});
        return train(ex, TrainConfig{epochs, learning_rate, seed, averaging});
      },
      py::arg("examples"), py::arg("epochs") = 10, py::arg("learning_rate") = 1.0, py::arg("seed") = 42,
      py::arg("averaging") = true);

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config_path, const std::map<std::string, std::string>& overrides) {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (const auto& [k, v] : overrides) apply_setting(config, k, v);
        auto r = run_pipeline(config, [](const std::string&) {});
        py::dict d;
        d["pairs"] = r.pairs;
        d["candidates"] = r.candidates;
        d["DU"] = r.stats.n_du;
        d["NDU"] = r.stats.n_ndu;
        d["UNSUPPORTED"] = r.stats.n_unsupported;
        d["outputs"] = r.outputs;
        return d;
      },
      py::arg("config") = std::filesystem::path(), py::arg("overrides") = std::map<std::string, std::string>{},
      "Runs the full pipeline from a config file; overrides use config-file keys.");
}
