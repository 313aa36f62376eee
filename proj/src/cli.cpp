#include "advqa/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

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

namespace advqa::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Bad flag values found after CLI11 parsing; reported like parse errors.
struct UsageError {
  std::string message;
};

std::uint64_t parse_seed(const std::string& s, const std::string& source) {
  try {
    std::size_t used = 0;
    if (!s.empty() && s[0] != '-') {
      auto v = std::stoull(s, &used, 10);
      if (used == s.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw UsageError{source + " must be a non-negative integer, got '" + s + "'"};
}

// --seed, else ADVQA_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::string>& flag) {
  if (flag) return parse_seed(*flag, "--seed");
  if (const char* env = std::getenv("ADVQA_SEED"); env && *env) return parse_seed(env, "ADVQA_SEED");
  return 0;
}

template <class F>
auto flag_value(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw UsageError{e.what()};
  }
}

Dataset load(const std::string& path, bool strict, std::ostream& err) {
  auto r = load_dataset(path, ParseOptions{strict});
  for (const auto& w : r.warnings) err << "warning: " << path << ": " << w << "\n";
  return std::move(r.dataset);
}

PredictionSet load_predictions(const std::string& path, std::ostream& err) {
  auto r = parse_predictions(read_file(path));
  for (const auto& w : r.warnings) err << "warning: " << path << ": " << w << "\n";
  return std::move(r.predictions);
}

void emit(const std::optional<std::string>& path, const std::string& bytes, std::ostream& out) {
  if (path) {
    write_file(*path, bytes);
  } else {
    out << bytes;
  }
}

std::string dataset_stats(const Dataset& ds, std::size_t n_warnings) {
  ojson j;
  std::size_t answers = 0, impossible = 0, negation = 0, entity_rich = 0, spans = 0, chars = 0;
  std::map<std::string, std::size_t> origins, attack_types;
  for (const auto& ex : ds.examples) {
    answers += ex.answers.size();
    impossible += ex.is_impossible ? 1 : 0;
    negation += ex.is_negation ? 1 : 0;
    entity_rich += ex.is_entity_rich ? 1 : 0;
    spans += ex.distractor_spans.size();
    chars += text::length(ex.context);
    ++origins[std::string(to_string(ex.origin))];
    if (ex.attack_type) ++attack_types[std::string(to_string(*ex.attack_type))];
  }
  j["n_examples"] = ds.size();
  j["n_answers"] = answers;
  j["n_impossible"] = impossible;
  j["n_negation"] = negation;
  j["n_entity_rich"] = entity_rich;
  j["n_distractor_spans"] = spans;
  j["mean_context_chars"] = ds.empty() ? 0.0 : static_cast<double>(chars) / static_cast<double>(ds.size());
  j["origins"] = origins;
  j["attack_types"] = attack_types;
  j["n_warnings"] = n_warnings;
  return j.dump(2) + "\n";
}

std::string negatives_json(const std::vector<entity::HardNegativeSet>& sets) {
  auto span = [](const entity::EntitySpan& s) {
    return ojson{{"surface", s.surface},
                 {"char_start", s.char_start},
                 {"char_end", s.char_end},
                 {"entity_type", entity::to_string(s.entity_type)}};
  };
  ojson arr = ojson::array();
  for (const auto& s : sets) {
    ojson negs = ojson::array();
    for (const auto& n : s.negatives) negs.push_back(span(n));
    arr.push_back({{"id", s.example_id}, {"answer", span(s.answer_span)}, {"negatives", negs}});
  }
  return arr.dump(2) + "\n";
}

struct AugmentFlags {
  std::string input, out;
  std::optional<std::string> config_path, attacks, rate_base, seed, report_path;
  std::optional<double> rate;
  std::optional<unsigned> threads;
  bool strict = false;

  void add_to(CLI::App* sub) {
    sub->add_option("--input", input, "Input dataset (SQuAD JSON or JSONL)")->required();
    sub->add_option("--out", out, "Output JSONL")->required();
    sub->add_option("--config", config_path, "key = value attack configuration file");
    sub->add_option("--attacks", attacks, "Comma-separated attack types");
    sub->add_option("--rate", rate, "Share of the rate base to attack")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--rate-base", rate_base, "eligible or dataset")->check(CLI::IsMember({"eligible", "dataset"}));
    sub->add_option("--seed", seed, "Seed (default: ADVQA_SEED or 0)");
    sub->add_option("--threads", threads, "Worker threads");
    sub->add_option("--report", report_path, "Write the augmentation report here instead of stdout");
    sub->add_flag("--strict", strict, "Reject malformed input instead of skipping it");
  }

  attacks::AttackConfig resolve(attacks::AttackConfig cfg) const {
    if (config_path) cfg = attacks::parse_config(read_file(*config_path), cfg);
    if (attacks) {
      cfg = flag_value([&] { return attacks::parse_config("attacks = " + *attacks, cfg); });
    }
    if (rate) cfg.rate = *rate;
    if (rate_base) cfg.rate_base = *rate_base == "dataset" ? attacks::RateBase::Dataset : attacks::RateBase::Eligible;
    if (seed || !config_path) cfg.seed = resolve_seed(seed);
    if (threads) cfg.threads = *threads;
    flag_value([&] { cfg.validate(); return 0; });
    return cfg;
  }

  int run(const attacks::AttackConfig& cfg, std::ostream& out, std::ostream& err) const {
    Dataset ds = load(input, strict, err);
    auto result = attacks::run_augmentation(ds, cfg);
    write_file(out_path(), write_augmented(result.dataset));
    for (const auto& n : result.report.notes) err << "note: " << n << "\n";
    emit(report_path, attacks::report_json(result.report), out);
    return kExitOk;
  }

  const std::string& out_path() const { return out; }
};

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial QA robustness toolkit", "advqa"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::function<int()> action;

  // parse-stats
  auto* ps = app.add_subcommand("parse-stats", "Parse a dataset and print summary statistics");
  struct {
    std::string input;
    std::optional<std::string> out;
    bool strict = false;
  } ps_f;
  ps->add_option("--input", ps_f.input, "Dataset (SQuAD JSON or JSONL)")->required();
  ps->add_option("--out", ps_f.out, "Also write the parsed dataset as JSONL");
  ps->add_flag("--strict", ps_f.strict, "Fail on the first invalid answer");
  ps->callback([&] {
    action = [&] {
      auto r = load_dataset(ps_f.input, ParseOptions{ps_f.strict});
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      if (ps_f.out) write_file(*ps_f.out, write_augmented(r.dataset));
      out << dataset_stats(r.dataset, r.warnings.size());
      return kExitOk;
    };
  });

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score predictions with Exact Match and F1");
  struct {
    std::string dataset, predictions;
    std::optional<std::string> per_example;
  } ev_f;
  ev->add_option("--dataset", ev_f.dataset, "Gold dataset")->required();
  ev->add_option("--predictions", ev_f.predictions, "Predictions JSON {id: answer}")->required();
  ev->add_option("--per-example", ev_f.per_example, "Write per-example scores as CSV");
  ev->callback([&] {
    action = [&] {
      Dataset ds = load(ev_f.dataset, false, err);
      auto rep = metrics::evaluate(ds, load_predictions(ev_f.predictions, err));
      for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
      if (ev_f.per_example) {
        std::string csv = "id,em,f1,predicted,gold\r\n";
        for (const auto& [id, s] : rep.per_example) {
          std::string gold;
          for (const auto& g : s.gold) gold += (gold.empty() ? "" : " | ") + g;
          csv += report::csv_field(id) + "," + std::to_string(s.em) + "," + metrics::format_pct(s.f1, 4) + "," +
                 report::csv_field(s.predicted) + "," + report::csv_field(gold) + "\r\n";
        }
        write_file(*ev_f.per_example, csv);
      }
      ojson j{{"em", rep.em}, {"f1", rep.f1}, {"n", rep.n_examples}};
      out << j.dump() << "\n";
      return kExitOk;
    };
  });

  // analyze-errors
  auto* an = app.add_subcommand("analyze-errors", "Categorize errors under the five taxonomy schemes");
  struct {
    std::string dataset, predictions;
    std::optional<std::string> out, csv_dir;
    unsigned threads = 1;
  } an_f;
  an->add_option("--dataset", an_f.dataset, "Gold dataset")->required();
  an->add_option("--predictions", an_f.predictions, "Predictions JSON {id: answer}")->required();
  an->add_option("--out", an_f.out, "Analysis JSON (default: stdout)");
  an->add_option("--csv-dir", an_f.csv_dir, "Write one CSV per scheme plus the pattern distribution");
  an->add_option("--threads", an_f.threads, "Worker threads (0 = all cores)");
  an->callback([&] {
    action = [&] {
      Dataset ds = load(an_f.dataset, false, err);
      auto rep = taxonomy::analyze(ds, load_predictions(an_f.predictions, err), an_f.threads);
      for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
      if (an_f.csv_dir) {
        std::filesystem::create_directories(*an_f.csv_dir);
        const std::filesystem::path dir(*an_f.csv_dir);
        for (auto s : report::kSchemes) {
          write_file((dir / (std::string(report::file_stem(s)) + ".csv")).string(), report::scheme_csv(rep, s));
        }
        write_file((dir / "pattern_distribution.csv").string(), report::pattern_distribution_csv(rep));
      }
      emit(an_f.out, report::analysis_json(rep), out);
      return kExitOk;
    };
  });

  // augment
  auto* au = app.add_subcommand("augment", "Generate adversarial variants of a dataset");
  AugmentFlags au_f;
  std::string preset = "suite";
  au_f.add_to(au);
  au->add_option("--preset", preset, "Starting configuration")
      ->check(CLI::IsMember({"suite", "negation-pairs", "entity-substitution"}));
  au->callback([&] {
    action = [&] {
      auto base = preset == "suite"            ? attacks::AttackConfig::suite()
                  : preset == "negation-pairs" ? attacks::AttackConfig::negation_pairs()
                                               : attacks::AttackConfig::entity_substitution();
      return au_f.run(au_f.resolve(base), out, err);
    };
  });

  // pairs-negation
  auto* pn = app.add_subcommand("pairs-negation", "Generate additive and transformative negation pairs");
  AugmentFlags pn_f;
  pn_f.add_to(pn);
  pn->callback([&] {
    action = [&] { return pn_f.run(pn_f.resolve(attacks::AttackConfig::negation_pairs()), out, err); };
  });

  // mine-negatives
  auto* mn = app.add_subcommand("mine-negatives", "Mine same-type hard negatives and flag entity-rich examples");
  struct {
    std::string input, out;
    std::optional<std::string> negatives;
    bool strict = false;
  } mn_f;
  mn->add_option("--input", mn_f.input, "Dataset")->required();
  mn->add_option("--out", mn_f.out, "Output JSONL with entity-rich flags")->required();
  mn->add_option("--negatives", mn_f.negatives, "Write the mined negative sets as JSON");
  mn->add_flag("--strict", mn_f.strict, "Reject malformed input instead of skipping it");
  mn->callback([&] {
    action = [&] {
      Dataset ds = load(mn_f.input, mn_f.strict, err);
      auto res = entity::mine_corpus(ds);
      write_file(mn_f.out, write_augmented(ds));
      if (mn_f.negatives) write_file(*mn_f.negatives, negatives_json(res.sets));
      ojson j;
      j["n_examples"] = res.stats.n_examples;
      j["n_entity_answers"] = res.stats.n_entity_answers;
      j["n_entity_rich"] = res.stats.n_entity_rich;
      j["entity_rich_fraction"] = res.stats.entity_rich_fraction();
      j["mean_negatives"] = res.stats.mean_negatives();
      ojson types = ojson::object();
      for (const auto& [t, c] : res.stats.answer_type_counts) types[std::string(entity::to_string(t))] = c;
      j["answer_types"] = types;
      out << j.dump(2) << "\n";
      return kExitOk;
    };
  });

  // mix
  auto* mx = app.add_subcommand("mix", "Mix clean and adversarial data at a fixed ratio");
  struct {
    std::string clean, adversarial, out, ratio = "80-20";
    std::optional<std::size_t> total;
    std::optional<std::string> seed;
    bool with_replacement = false, sweep = false;
  } mx_f;
  mx->add_option("--clean", mx_f.clean, "Clean dataset")->required();
  mx->add_option("--adversarial", mx_f.adversarial, "Adversarial dataset")->required();
  mx->add_option("--ratio", mx_f.ratio, "Clean-adversarial ratio, e.g. 80-20");
  mx->add_option("--total", mx_f.total, "Output size (default: keep every clean example)");
  mx->add_option("--seed", mx_f.seed, "Seed (default: ADVQA_SEED or 0)");
  mx->add_option("--out", mx_f.out, "Output JSONL, or a directory with --sweep")->required();
  mx->add_flag("--with-replacement", mx_f.with_replacement, "Resample a short pool instead of failing");
  mx->add_flag("--sweep", mx_f.sweep, "Run the 90-10 ... 50-50 sweep into the --out directory");
  mx->callback([&] {
    const auto ratio = flag_value([&] { return mixer::parse_ratio(mx_f.ratio); });
    const auto seed = resolve_seed(mx_f.seed);
    action = [&, ratio, seed] {
      Dataset clean = load(mx_f.clean, false, err);
      Dataset adv = load(mx_f.adversarial, false, err);
      const auto sampling =
          mx_f.with_replacement ? mixer::Sampling::WithReplacementIfShort : mixer::Sampling::WithoutReplacement;
      if (mx_f.sweep) {
        auto entries = mixer::mix_sweep(clean, adv, mixer::standard_ratios(), seed, mx_f.total, sampling);
        std::filesystem::create_directories(mx_f.out);
        ojson all = ojson::array();
        for (const auto& e : entries) {
          const auto path = std::filesystem::path(mx_f.out) / ("mix_" + e.ratio.label() + ".jsonl");
          write_file(path.string(), write_augmented(e.result.dataset));
          all.push_back(ojson::parse(mixer::stats_json(e.result.stats)));
        }
        out << all.dump(2) << "\n";
        return kExitOk;
      }
      auto res = mixer::mix(clean, adv, mixer::MixConfig{ratio, mx_f.total, seed, sampling});
      for (const auto& n : res.stats.notes) err << "note: " << n << "\n";
      write_file(mx_f.out, write_augmented(res.dataset));
      out << mixer::stats_json(res.stats);
      return kExitOk;
    };
  });

  // loss-check
  auto* lc = app.add_subcommand("loss-check", "Verify loss values and gradients numerically");
  struct {
    std::optional<std::string> seed;
    std::size_t instances = 100;
  } lc_f;
  lc->add_option("--seed", lc_f.seed, "Seed (default: ADVQA_SEED or 0)");
  lc->add_option("--instances", lc_f.instances, "Random instances per gradient check")->check(CLI::PositiveNumber);
  lc->callback([&] {
    const auto seed = resolve_seed(lc_f.seed);
    action = [&, seed] {
      bool all = true;
      for (const auto& c : losskit::run_self_checks(seed, lc_f.instances)) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        all = all && c.pass;
      }
      return all ? kExitOk : kExitData;
    };
  });

  // toy-train
  auto* tt = app.add_subcommand("toy-train", "Train the linear span scorer with the combined loss");
  struct {
    double alpha = 0.5;
    toy::Hyper hyper;
    std::optional<std::string> seed, train, eval, out, curve;
    std::size_t n_train = 600, n_eval = 300;
  } tt_f;
  tt->add_option("--alpha", tt_f.alpha, "Contrastive weight")->check(CLI::Range(0.0, 1.0));
  tt->add_option("--epochs", tt_f.hyper.epochs, "Training epochs")->check(CLI::PositiveNumber);
  tt->add_option("--lr", tt_f.hyper.lr, "Learning rate")->check(CLI::PositiveNumber);
  tt->add_option("--batch-size", tt_f.hyper.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  tt->add_option("--seed", tt_f.seed, "Seed (default: ADVQA_SEED or 0)");
  auto* tr_opt = tt->add_option("--train", tt_f.train, "Training dataset (default: synthetic)");
  auto* ev_opt = tt->add_option("--eval", tt_f.eval, "Evaluation dataset");
  tr_opt->needs(ev_opt);
  ev_opt->needs(tr_opt);
  tt->add_option("--n-train", tt_f.n_train, "Synthetic training size")->check(CLI::PositiveNumber);
  tt->add_option("--n-eval", tt_f.n_eval, "Synthetic evaluation size")->check(CLI::PositiveNumber);
  tt->add_option("--out", tt_f.out, "Report JSON (default: stdout)");
  tt->add_option("--curve", tt_f.curve, "Write the loss curve as CSV");
  tt->callback([&] {
    tt_f.hyper.seed = resolve_seed(tt_f.seed);
    action = [&] {
      toy::ToySplit split;
      if (tt_f.train) {
        split.train = load(*tt_f.train, false, err);
        split.eval = load(*tt_f.eval, false, err);
        entity::mine_corpus(split.train);
        entity::mine_corpus(split.eval);
      } else {
        split = toy::synthetic_split(tt_f.n_train, tt_f.n_eval, tt_f.hyper.seed);
      }
      losskit::LossConfig cfg;
      cfg.alpha = tt_f.alpha;
      auto rep = toy::toy_train(split.train, split.eval, cfg, tt_f.hyper);
      if (tt_f.curve) write_file(*tt_f.curve, toy::curve_csv(rep));
      emit(tt_f.out, toy::report_json(rep), out);
      return kExitOk;
    };
  });

  // report
  auto* rp = app.add_subcommand("report", "Render an analysis as tables");
  struct {
    std::string from, format = "markdown";
    std::optional<std::string> out, figure;
  } rp_f;
  rp->add_option("--from", rp_f.from, "Analysis JSON from analyze-errors")->required();
  rp->add_option("--format", rp_f.format, "json, csv or markdown");
  rp->add_option("--out", rp_f.out, "Output file (default: stdout)");
  rp->add_option("--figure", rp_f.figure, "Write the pattern distribution CSV");
  rp->callback([&] {
    action = [&] {
      const auto format = report::parse_format(rp_f.format);
      auto analysis = report::parse_analysis(read_file(rp_f.from));
      if (rp_f.figure) write_file(*rp_f.figure, report::pattern_distribution_csv(analysis));
      emit(rp_f.out, report::emit_report(analysis, format), out);
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace advqa::cli
