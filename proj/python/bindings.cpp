#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "advqa/attacks.hpp"
#include "advqa/corpus.hpp"
#include "advqa/entity.hpp"
#include "advqa/error.hpp"
#include "advqa/losskit.hpp"
#include "advqa/metrics.hpp"
#include "advqa/mixer.hpp"
#include "advqa/report.hpp"
#include "advqa/taxonomy.hpp"
#include "advqa/toy.hpp"

namespace py = pybind11;
using namespace advqa;

namespace {

std::pair<Dataset, std::vector<std::string>> unpack(ParseResult r) {
  return {std::move(r.dataset), std::move(r.warnings)};
}

attacks::AttackConfig preset(const std::string& name) {
  if (name == "suite") return attacks::AttackConfig::suite();
  if (name == "negation-pairs") return attacks::AttackConfig::negation_pairs();
  if (name == "entity-substitution") return attacks::AttackConfig::entity_substitution();
  throw Error(ErrorCode::InvalidConfig, "unknown preset '" + name + "'");
}

py::tuple loss_tuple(const losskit::ExampleLoss& l) { return py::make_tuple(l.value, l.grad.d_start, l.grad.d_end); }

losskit::SpanExample span_example(std::vector<double> start, std::vector<double> end, std::pair<std::size_t, std::size_t> gold,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& negatives, double weight) {
  losskit::SpanExample ex{std::move(start), std::move(end), {gold.first, gold.second}, weight, {}};
  for (auto [s, e] : negatives) ex.negatives.push_back({s, e});
  ex.validate();
  return ex;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adversarial QA toolkit core";

  py::register_exception<Error>(m, "AdvqaError", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def("__len__", &Dataset::size)
      .def("ids",
           [](const Dataset& d) {
             std::vector<std::string> ids;
             for (const auto& ex : d.examples) ids.push_back(ex.id);
             return ids;
           })
      .def("to_jsonl", [](const Dataset& d) { return write_augmented(d); })
      .def("to_squad", [](const Dataset& d) { return serialize_squad(d); })
      .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

  m.def("parse_squad", [](const std::string& s, bool strict) { return unpack(parse_squad(s, {strict})); },
        py::arg("text"), py::arg("strict") = false);
  m.def("read_jsonl", [](const std::string& s, bool strict) { return unpack(read_augmented(s, {strict})); },
        py::arg("text"), py::arg("strict") = true);
  m.def("load_dataset", [](const std::string& path, bool strict) { return unpack(load_dataset(path, {strict})); },
        py::arg("path"), py::arg("strict") = false);
  m.def("parse_predictions", [](const std::string& s) { return parse_predictions(s).predictions; });

  m.def("normalize_answer", &metrics::normalize_answer);
  m.def("exact_match", &metrics::exact_match, py::arg("prediction"), py::arg("gold_answers"));
  m.def("f1_score", &metrics::f1_score, py::arg("prediction"), py::arg("gold_answers"));
  m.def("evaluate",
        [](const Dataset& d, const PredictionSet& preds) {
          auto r = metrics::evaluate(d, preds);
          py::dict out;
          out["em"] = r.em;
          out["f1"] = r.f1;
          out["n_examples"] = r.n_examples;
          out["n_missing"] = r.n_missing;
          out["warnings"] = r.warnings;
          return out;
        },
        py::arg("dataset"), py::arg("predictions"));
  m.def("adversarial_gap",
        [](double clean, double adv, std::optional<double> baseline) {
          auto g = metrics::adversarial_gap(clean, adv, baseline);
          return py::make_tuple(g.gap, g.closure_pct);
        },
        py::arg("clean_em"), py::arg("adversarial_em"), py::arg("baseline_gap") = py::none());
  m.def("gap_closure", &metrics::gap_closure, py::arg("baseline_gap"), py::arg("new_gap"));
  m.def("format_pct", &metrics::format_pct, py::arg("value"), py::arg("decimals") = 2);

  m.def("augment",
        [](const Dataset& d, const std::string& preset_name, std::uint64_t seed, std::optional<double> rate,
           std::optional<std::vector<std::string>> names, unsigned threads) {
          auto cfg = preset(preset_name);
          cfg.seed = seed;
          cfg.threads = threads;
          if (rate) cfg.rate = *rate;
          if (names) {
            cfg.attacks.clear();
            for (const auto& n : *names) cfg.attacks.push_back(parse_attack_type(n));
          }
          cfg.validate();
          py::gil_scoped_release release;
          auto out = attacks::run_augmentation(d, cfg);
          return std::make_pair(std::move(out.dataset), attacks::report_json(out.report));
        },
        py::arg("dataset"), py::arg("preset") = "suite", py::arg("seed") = 0, py::arg("rate") = py::none(),
        py::arg("attacks") = py::none(), py::arg("threads") = 1);

  m.def("mine_negatives",
        [](Dataset d) {
          auto res = entity::mine_corpus(d);
          std::vector<std::pair<std::string, std::vector<std::string>>> sets;
          for (const auto& s : res.sets) {
            std::vector<std::string> surf;
            for (const auto& n : s.negatives) surf.push_back(n.surface);
            sets.emplace_back(s.example_id, surf);
          }
          return py::make_tuple(std::move(d), sets);
        },
        py::arg("dataset"));
  m.def("entity_type_of", [](const std::string& s) -> std::optional<std::string> {
    auto t = entity::entity_type_of(s);
    if (!t) return std::nullopt;
    return std::string(entity::to_string(*t));
  });

  m.def("mix",
        [](const Dataset& clean, const Dataset& adv, const std::string& ratio, std::optional<std::size_t> total,
           std::uint64_t seed, bool with_replacement) {
          mixer::MixConfig cfg{mixer::parse_ratio(ratio), total, seed,
                               with_replacement ? mixer::Sampling::WithReplacementIfShort
                                                : mixer::Sampling::WithoutReplacement};
          auto r = mixer::mix(clean, adv, cfg);
          return std::make_pair(std::move(r.dataset), mixer::stats_json(r.stats));
        },
        py::arg("clean"), py::arg("adversarial"), py::arg("ratio") = "80-20", py::arg("total") = py::none(),
        py::arg("seed") = 0, py::arg("with_replacement") = false);

  m.def("qa_ce_loss",
        [](const std::vector<double>& s, const std::vector<double>& e, std::pair<std::size_t, std::size_t> gold) {
          return loss_tuple(losskit::qa_ce_loss(s, e, {gold.first, gold.second}));
        },
        py::arg("start_logits"), py::arg("end_logits"), py::arg("gold"));
  m.def("contrastive_loss",
        [](std::vector<double> s, std::vector<double> e, std::pair<std::size_t, std::size_t> gold,
           const std::vector<std::pair<std::size_t, std::size_t>>& negatives) {
          return loss_tuple(losskit::contrastive_loss(span_example(std::move(s), std::move(e), gold, negatives, 1.0)));
        },
        py::arg("start_logits"), py::arg("end_logits"), py::arg("gold"), py::arg("negatives"));
  m.def("loss_self_checks",
        [](std::uint64_t seed, std::size_t instances) {
          std::vector<std::tuple<std::string, bool, std::string>> out;
          for (const auto& c : losskit::run_self_checks(seed, instances)) out.emplace_back(c.name, c.pass, c.detail);
          return out;
        },
        py::arg("seed") = 0, py::arg("instances") = 100);

  m.def("toy_train",
        [](double alpha, std::uint64_t seed, std::size_t epochs, std::size_t n_train, std::size_t n_eval) {
          losskit::LossConfig cfg;
          cfg.alpha = alpha;
          cfg.validate();
          toy::Hyper h;
          h.seed = seed;
          h.epochs = epochs;
          py::gil_scoped_release release;
          auto split = toy::synthetic_split(n_train, n_eval, seed);
          return toy::report_json(toy::toy_train(split.train, split.eval, cfg, h));
        },
        py::arg("alpha") = 0.5, py::arg("seed") = 0, py::arg("epochs") = 20, py::arg("n_train") = 600,
        py::arg("n_eval") = 300);

  m.def("classify_question", [](const std::string& q) {
    py::dict d;
    d["question_type"] = std::string(taxonomy::to_string(taxonomy::classify_question_type(q)));
    d["complexity"] = std::string(taxonomy::to_string(taxonomy::classify_complexity(q)));
    return d;
  });
  m.def("analyze_errors",
        [](const Dataset& d, const PredictionSet& preds, unsigned threads) {
          return report::analysis_json(taxonomy::analyze(d, preds, threads));
        },
        py::arg("dataset"), py::arg("predictions"), py::arg("threads") = 1);
  m.def("render_report",
        [](const std::string& analysis, const std::string& format) {
          return report::emit_report(report::parse_analysis(analysis), report::parse_format(format));
        },
        py::arg("analysis_json"), py::arg("format") = "markdown");
}
