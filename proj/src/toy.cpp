#include "advqa/toy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "advqa/entity.hpp"
#include "advqa/error.hpp"
#include "advqa/metrics.hpp"
#include "advqa/mixer.hpp"
#include "advqa/random.hpp"
#include "advqa/synthetic.hpp"

namespace advqa::toy {

using entity::EntityType;

namespace {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> kWords = {
      "a",   "an",  "the", "of",   "in",   "on",    "at",   "to",  "by",   "for",  "with", "was",
      "is",  "are", "were", "did", "does", "do",    "its",  "it",  "and",  "or",   "as",   "who",
      "what", "when", "where", "which", "how", "why", "whom", "whose", "that", "this", "from"};
  return kWords;
}

std::vector<EntityType> expected_types(const std::string& question) {
  auto w = text::cue_words(question);
  auto has = [&](std::string_view x) { return std::find(w.begin(), w.end(), x) != w.end(); };
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == "how" && (w[i + 1] == "many" || w[i + 1] == "much")) {
      return {EntityType::Number, EntityType::Money, EntityType::Percent};
    }
    if ((w[i] == "what" || w[i] == "which") && w[i + 1] == "year") return {EntityType::Year, EntityType::Date};
  }
  if (has("when")) return {EntityType::Date, EntityType::Year, EntityType::Time};
  if (has("who") || has("whom") || has("whose")) return {EntityType::Person, EntityType::Organization};
  if (has("where")) return {EntityType::Location, EntityType::Facility};
  return {};
}

// Crude suffix stripping so "moved" meets "move" and "acquired" meets "acquire".
std::string stem(std::string w) {
  for (std::string_view suf : {"ing", "ed", "es", "s", "e"}) {
    if (w.size() > suf.size() + 2 && std::string_view(w).substr(w.size() - suf.size()) == suf) {
      w.resize(w.size() - suf.size());
      break;
    }
  }
  return w;
}

bool is_word_token(const std::string& t) {
  return !t.empty() && !(t.size() == 1 && text::is_punct(static_cast<unsigned char>(t[0])));
}

}  // namespace

std::vector<Featurized> featurize(const Dataset& dataset) {
  std::vector<Featurized> out;
  for (const auto& ex : dataset.examples) {
    Featurized f;
    f.example_id = ex.id;
    f.context = ex.context;
    f.weight = ex.loss_weight;
    f.gold_texts = metrics::gold_texts(ex);
    const auto ctx = text::decode(ex.context);
    const auto tok = entity::tokenize_with_offsets(ex.context);
    f.offsets = tok.offsets;
    const std::size_t L = tok.tokens.size();

    if (!ex.is_impossible && !ex.answers.empty()) {
      const auto& a = ex.answers.front();
      try {
        auto [s, e] = entity::map_to_token_positions({a.answer_start, a.answer_start + text::length(a.text)}, tok, ctx);
        f.gold = {s + 1, e + 1};
      } catch (const Error&) {
        continue;
      }
      if (auto set = entity::mine_hard_negatives(ex)) {
        for (const auto& n : set->negatives) {
          losskit::Span sp{*n.token_start + 1, *n.token_end + 1};
          if (sp != f.gold) f.negatives.push_back(sp);
        }
      }
    }

    std::set<std::string> qwords;
    std::set<std::string> qcues;
    {
      const auto qtok = entity::tokenize_with_offsets(ex.question);
      for (const auto& w : qtok.tokens) {
        auto lw = text::to_lower(w);
        if (!is_word_token(w) || stopwords().contains(lw)) continue;
        qwords.insert(stem(lw));
        if (!text::is_upper(text::decode(w).front())) qcues.insert(stem(lw));
      }
    }
    std::vector<double> inq(L, 0.0);
    std::vector<std::string> stems(L);
    for (std::size_t t = 0; t < L; ++t) {
      stems[t] = stem(text::to_lower(tok.tokens[t]));
      inq[t] = is_word_token(tok.tokens[t]) && qwords.contains(stems[t]) ? 1.0 : 0.0;
    }
    const auto types = expected_types(ex.question);
    std::vector<int> ent_of(L, -1);
    std::vector<bool> ent_start(L, false), ent_end(L, false), typed(L, false);
    const auto ents = entity::extract_entities(ex.context);
    for (std::size_t k = 0; k < ents.size(); ++k) {
      const bool match = std::find(types.begin(), types.end(), ents[k].entity_type) != types.end();
      std::optional<std::size_t> first;
      std::size_t last = 0;
      for (std::size_t t = 0; t < L; ++t) {
        if (!ents[k].range().overlaps(tok.offsets[t])) continue;
        ent_of[t] = static_cast<int>(k);
        typed[t] = match;
        if (!first) first = t;
        last = t;
      }
      if (first) {
        ent_start[*first] = true;
        ent_end[last] = true;
      }
    }
    const auto sentences = text::split_sentences(ctx);
    std::vector<double> sent_overlap(sentences.size(), 0.0);
    std::vector<double> cue_overlap(sentences.size(), 0.0);
    std::vector<bool> sent_neg(sentences.size(), false);
    auto share = [](const std::set<std::string>& want, const std::set<std::string>& present) {
      std::size_t hit = 0;
      for (const auto& q : want) hit += present.count(q);
      return want.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(want.size());
    };
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      auto stext = text::encode(std::u32string_view(ctx).substr(sentences[s].start, sentences[s].size()));
      std::set<std::string> present;
      for (const auto& w : text::cue_words(stext)) present.insert(stem(w));
      sent_overlap[s] = share(qwords, present);
      cue_overlap[s] = share(qcues, present);
      sent_neg[s] = text::contains_negation(stext);
    }

    f.features.assign(L + 1, std::vector<double>(kFeatureCount, 0.0));
    f.features[0][kIsNull] = 1.0;
    std::vector<std::size_t> hits;
    for (std::size_t t = 0; t < L; ++t) {
      if (inq[t] > 0) hits.push_back(t);
    }
    for (std::size_t t = 0; t < L; ++t) {
      auto& row = f.features[t + 1];
      row[kInQuestion] = inq[t];
      double win = 0.0;
      int cnt = 0;
      for (std::ptrdiff_t d = -5; d <= 5; ++d) {
        if (d == 0) continue;
        auto u = static_cast<std::ptrdiff_t>(t) + d;
        if (u < 0 || u >= static_cast<std::ptrdiff_t>(L)) continue;
        win += inq[static_cast<std::size_t>(u)];
        ++cnt;
      }
      row[kWindowOverlap] = cnt == 0 ? 0.0 : win / cnt;
      const auto s = text::sentence_index(sentences, tok.offsets[t].start);
      row[kSentenceOverlap] = sent_overlap[s];
      row[kCueOverlap] = cue_overlap[s];
      std::size_t best = L + 1;
      for (auto h : hits) best = std::min(best, h > t ? h - t : t - h);
      row[kNearOverlap] = hits.empty() ? 0.0 : 1.0 / (1.0 + static_cast<double>(best));
      row[kTypeMatch] = typed[t] ? 1.0 : 0.0;
      row[kEntityStart] = ent_start[t] ? 1.0 : 0.0;
      row[kEntityEnd] = ent_end[t] ? 1.0 : 0.0;
      row[kTypedStart] = ent_start[t] && typed[t] ? 1.0 : 0.0;
      row[kTypedEnd] = ent_end[t] && typed[t] ? 1.0 : 0.0;
      for (const auto& d : ex.distractor_spans) {
        if (d.overlaps(tok.offsets[t])) row[kInDistractor] = 1.0;
      }
      row[kNegatedSentence] = sent_neg[s] ? 1.0 : 0.0;
      const auto c0 = ctx[tok.offsets[t].start];
      row[kIsNumber] = text::is_digit(c0) ? 1.0 : 0.0;
      row[kCapitalized] = text::is_upper(c0) ? 1.0 : 0.0;
      if (t > 0) row[kDenseFeatures + fnv1a(text::to_lower(tok.tokens[t - 1])) % kLexicalBuckets] = 1.0;
      if (t + 1 < L) {
        row[kDenseFeatures + kLexicalBuckets + fnv1a(text::to_lower(tok.tokens[t + 1])) % kLexicalBuckets] = 1.0;
      }
      if (!qcues.empty()) {
        std::size_t pairs = 0;
        for (std::size_t u = t >= 4 ? t - 4 : 0; u < std::min(L, t + 5); ++u) {
          if (u == t || !is_word_token(tok.tokens[u])) continue;
          for (const auto& q : qcues) {
            row[kPairOffset + fnv1a(q + '|' + stems[u]) % kPairBuckets] += 1.0;
            ++pairs;
          }
        }
        if (pairs > 0) {
          for (std::size_t d = kPairOffset; d < kFeatureCount; ++d) row[d] /= static_cast<double>(pairs);
        }
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

std::vector<double> scores(const Featurized& f, const std::vector<double>& w) {
  std::vector<double> out(f.features.size(), 0.0);
  for (std::size_t t = 0; t < f.features.size(); ++t) {
    double s = 0.0;
    for (std::size_t d = 0; d < kFeatureCount; ++d) s += f.features[t][d] * w[d];
    out[t] = s;
  }
  return out;
}

losskit::SpanExample to_span_example(const Featurized& f, const std::vector<double>& ws, const std::vector<double>& we) {
  losskit::SpanExample ex;
  ex.start_logits = scores(f, ws);
  ex.end_logits = scores(f, we);
  ex.gold = f.gold;
  ex.weight = f.weight;
  ex.negatives = f.negatives;
  return ex;
}

struct Step {
  double loss = 0.0;
  std::vector<double> gs;
  std::vector<double> ge;
};

Step objective(const std::vector<const Featurized*>& items, const std::vector<double>& ws,
               const std::vector<double>& we, const losskit::LossConfig& cfg) {
  losskit::SpanBatch batch;
  batch.reserve(items.size());
  for (const auto* f : items) batch.push_back(to_span_example(*f, ws, we));
  auto r = losskit::total_loss(batch, cfg);
  Step st;
  st.loss = r.value;
  st.gs.assign(kFeatureCount, 0.0);
  st.ge.assign(kFeatureCount, 0.0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& feats = items[i]->features;
    for (std::size_t t = 0; t < feats.size(); ++t) {
      const double a = r.grads[i].d_start[t];
      const double b = r.grads[i].d_end[t];
      if (a == 0.0 && b == 0.0) continue;
      for (std::size_t d = 0; d < kFeatureCount; ++d) {
        st.gs[d] += a * feats[t][d];
        st.ge[d] += b * feats[t][d];
      }
    }
  }
  return st;
}

std::string predict(const Featurized& f, const std::vector<double>& s, const std::vector<double>& e,
                    std::size_t max_len) {
  double best = s[0] + e[0];
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    for (std::size_t j = i; j < s.size() && j < i + max_len; ++j) {
      const double v = s[i] + e[j];
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  }
  if (bi == 0) return "";
  return text::slice(f.context, f.offsets[bi - 1].start, f.offsets[bj - 1].end);
}

}  // namespace

TrainReport toy_train(const Dataset& train, const Dataset& eval, const losskit::LossConfig& config,
                      const Hyper& hyper) {
  config.validate();
  if (hyper.batch_size == 0) throw Error(ErrorCode::InvalidConfig, "batch size must be positive");
  if (!std::isfinite(hyper.lr) || hyper.lr < 0.0) throw Error(ErrorCode::InvalidConfig, "learning rate must be >= 0");
  const auto tr = featurize(train);
  const auto ev = featurize(eval);
  if (tr.empty()) throw Error(ErrorCode::EmptyBatch, "no trainable examples");

  TrainReport rep;
  rep.alpha = config.alpha;
  rep.hyper = hyper;
  rep.n_train = tr.size();
  rep.n_eval = ev.size();
  std::vector<double> ws(kFeatureCount, 0.0), we(kFeatureCount, 0.0);

  std::vector<const Featurized*> all;
  for (const auto& f : tr) all.push_back(&f);
  auto full_loss = [&] {
    double v = objective(all, ws, we, config).loss;
    if (!std::isfinite(v)) throw Error(ErrorCode::DivergenceDetected, "training loss became non-finite");
    return v;
  };
  rep.loss_curve.push_back(full_loss());

  Rng rng(derive_seed(hyper.seed, std::string_view("toy-train")));
  std::vector<std::size_t> order(tr.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    for (std::size_t lo = 0; lo < order.size(); lo += hyper.batch_size) {
      std::vector<const Featurized*> batch;
      for (std::size_t k = lo; k < std::min(order.size(), lo + hyper.batch_size); ++k) batch.push_back(&tr[order[k]]);
      auto st = objective(batch, ws, we, config);
      if (!std::isfinite(st.loss)) throw Error(ErrorCode::DivergenceDetected, "batch loss became non-finite");
      for (std::size_t d = 0; d < kFeatureCount; ++d) {
        ws[d] -= hyper.lr * st.gs[d];
        we[d] -= hyper.lr * st.ge[d];
      }
    }
    rep.loss_curve.push_back(full_loss());
  }

  metrics::CompensatedSum em;
  std::size_t ranked = 0, wins = 0;
  for (const auto& f : ev) {
    const auto s = scores(f, ws);
    const auto e = scores(f, we);
    em.add(metrics::exact_match(predict(f, s, e, hyper.max_answer_tokens), f.gold_texts));
    if (f.negatives.empty()) continue;
    ++ranked;
    const double g = losskit::span_score(s, e, f.gold);
    double best_neg = -INFINITY;
    for (const auto& n : f.negatives) best_neg = std::max(best_neg, losskit::span_score(s, e, n));
    wins += g > best_neg ? 1 : 0;
  }
  rep.eval_em = ev.empty() ? 0.0 : 100.0 * em.value() / static_cast<double>(ev.size());
  rep.n_ranked = ranked;
  rep.ranking_accuracy = ranked == 0 ? 0.0 : 100.0 * static_cast<double>(wins) / static_cast<double>(ranked);
  rep.start_weights = ws;
  rep.end_weights = we;
  return rep;
}

std::string report_json(const TrainReport& r) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["epochs"] = r.hyper.epochs;
  j["lr"] = r.hyper.lr;
  j["batch_size"] = r.hyper.batch_size;
  j["seed"] = r.hyper.seed;
  j["n_train"] = r.n_train;
  j["n_eval"] = r.n_eval;
  j["n_ranked"] = r.n_ranked;
  j["eval_em"] = r.eval_em;
  j["ranking_accuracy"] = r.ranking_accuracy;
  j["initial_loss"] = r.loss_curve.front();
  j["final_loss"] = r.loss_curve.back();
  j["loss_curve"] = r.loss_curve;
  j["start_weights"] = r.start_weights;
  j["end_weights"] = r.end_weights;
  return j.dump(2) + "\n";
}

std::string curve_csv(const TrainReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,loss\r\n";
  for (std::size_t i = 0; i < r.loss_curve.size(); ++i) os << i << ',' << r.loss_curve[i] << "\r\n";
  return os.str();
}

ToySplit synthetic_split(std::size_t n_train, std::size_t n_eval, std::uint64_t seed) {
  ToySplit split;
  auto clean = synthetic::entity_corpus(n_train, derive_seed(seed, std::string_view("clean")), "tr");
  auto adv = synthetic::entity_corpus(n_train, derive_seed(seed, std::string_view("adversarial")), "av", 1.0);
  mixer::MixConfig mc;
  mc.ratio = {4, 5};
  mc.total_size = n_train;
  mc.seed = derive_seed(seed, std::string_view("mix"));
  split.train = mixer::mix(clean, adv, mc).dataset;
  entity::mine_corpus(split.train);
  split.eval = synthetic::entity_corpus(n_eval, derive_seed(seed, std::string_view("eval")), "ev", 1.0);
  entity::mine_corpus(split.eval);
  return split;
}

}  // namespace advqa::toy
