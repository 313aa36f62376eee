#include "advqa/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "advqa/error.hpp"

namespace advqa {

using json = nlohmann::json;

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::Clean: return "clean";
    case Origin::AddSent: return "addsent";
    case Origin::Augmented: return "augmented";
  }
  return "clean";
}

std::string_view to_string(AttackType a) {
  switch (a) {
    case AttackType::Paraphrase: return "paraphrase";
    case AttackType::EntitySwap: return "entity_swap";
    case AttackType::NegationAttack: return "negation_attack";
    case AttackType::NumericAttack: return "numeric_attack";
    case AttackType::AdditiveNegation: return "additive_negation";
    case AttackType::TransformativeNegation: return "transformative_negation";
    case AttackType::EntitySubstitution: return "entity_substitution";
  }
  return "paraphrase";
}

Origin parse_origin(std::string_view s) {
  for (auto o : {Origin::Clean, Origin::AddSent, Origin::Augmented}) {
    if (to_string(o) == s) return o;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown origin '" + std::string(s) + "'");
}

AttackType parse_attack_type(std::string_view s) {
  for (auto a : {AttackType::Paraphrase, AttackType::EntitySwap, AttackType::NegationAttack,
                 AttackType::NumericAttack, AttackType::AdditiveNegation,
                 AttackType::TransformativeNegation, AttackType::EntitySubstitution}) {
    if (to_string(a) == s) return a;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown attack_type '" + std::string(s) + "'");
}

namespace {

std::optional<std::string> check_answer(const std::u32string& ctx, const Answer& a) {
  auto want = text::decode(a.text);
  if (a.answer_start > ctx.size() || want.size() > ctx.size() - a.answer_start) {
    return "answer '" + a.text + "' at " + std::to_string(a.answer_start) +
           " runs past the context end";
  }
  if (ctx.compare(a.answer_start, want.size(), want) != 0) {
    return "answer '" + a.text + "' does not occur at offset " + std::to_string(a.answer_start);
  }
  return std::nullopt;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw Error(ErrorCode::SchemaViolation, path + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::SchemaViolation, "missing field " + path + "." + key);
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) {
    throw Error(ErrorCode::SchemaViolation, path + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_array()) {
    throw Error(ErrorCode::SchemaViolation, path + "." + key + " must be an array");
  }
  return v;
}

std::size_t require_offset(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorCode::SchemaViolation, path + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

json parse_json(std::string_view bytes, const json::parser_callback_t& cb = nullptr) {
  try {
    return json::parse(bytes.begin(), bytes.end(), cb);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
}

}  // namespace

std::optional<std::string> validate(const QAExample& ex) {
  if (ex.id.empty()) return "empty id";
  auto ctx = text::decode(ex.context);
  if (ex.is_impossible && !ex.answers.empty()) return "impossible example carries answers";
  for (const auto& a : ex.answers) {
    if (auto err = check_answer(ctx, a)) return err;
  }
  std::size_t prev_end = 0;
  for (const auto& s : ex.distractor_spans) {
    if (s.start >= s.end) return "empty or inverted distractor span";
    if (s.end > ctx.size()) return "distractor span out of bounds";
    if (s.start < prev_end) return "distractor spans overlap or are unsorted";
    prev_end = s.end;
  }
  if (!(ex.loss_weight > 0.0)) return "loss_weight must be positive";
  return std::nullopt;
}

ParseResult parse_squad(std::string_view bytes, ParseOptions opts) {
  json root = parse_json(bytes);
  ParseResult out;
  if (!root.is_object()) throw Error(ErrorCode::SchemaViolation, "top level must be an object");
  if (auto it = root.find("version"); it != root.end() && it->is_string()) {
    out.dataset.version = it->get<std::string>();
  }
  const auto& data = require_array(root, "data", "$");
  std::unordered_set<std::string> seen;
  for (std::size_t a = 0; a < data.size(); ++a) {
    const std::string apath = "$.data[" + std::to_string(a) + "]";
    const auto& article = data[a];
    if (out.dataset.source_label.empty() && article.is_object()) {
      if (auto t = article.find("title"); t != article.end() && t->is_string()) {
        out.dataset.source_label = t->get<std::string>();
      }
    }
    const auto& paragraphs = require_array(article, "paragraphs", apath);
    for (std::size_t p = 0; p < paragraphs.size(); ++p) {
      const std::string ppath = apath + ".paragraphs[" + std::to_string(p) + "]";
      const auto& para = paragraphs[p];
      std::string context = require_string(para, "context", ppath);
      auto ctx32 = text::decode(context);
      const auto& qas = require_array(para, "qas", ppath);
      for (std::size_t q = 0; q < qas.size(); ++q) {
        const std::string qpath = ppath + ".qas[" + std::to_string(q) + "]";
        const auto& qa = qas[q];
        QAExample ex;
        ex.id = require_string(qa, "id", qpath);
        ex.question = require_string(qa, "question", qpath);
        ex.context = context;
        if (auto imp = qa.find("is_impossible"); imp != qa.end() && imp->is_boolean()) {
          ex.is_impossible = imp->get<bool>();
        }
        const auto& answers = require_array(qa, "answers", qpath);
        bool dropped = false;
        for (std::size_t k = 0; k < answers.size(); ++k) {
          const std::string kpath = qpath + ".answers[" + std::to_string(k) + "]";
          Answer ans{require_string(answers[k], "text", kpath),
                     require_offset(answers[k], "answer_start", kpath)};
          if (auto err = check_answer(ctx32, ans)) {
            if (opts.strict) throw Error(ErrorCode::OffsetMismatch, ex.id + ": " + *err);
            out.warnings.push_back("OffsetMismatch " + ex.id + ": " + *err + " (answer dropped)");
            dropped = true;
            continue;
          }
          ex.answers.push_back(std::move(ans));
        }
        if (ex.is_impossible) {
          ex.answers.clear();
        } else if (ex.answers.empty() && dropped) {
          out.warnings.push_back("skipped " + ex.id + ": no valid answers left");
          continue;
        }
        if (!seen.insert(ex.id).second) {
          if (opts.strict) throw Error(ErrorCode::DuplicateId, "duplicate id " + ex.id);
          out.warnings.push_back("skipped duplicate id " + ex.id);
          continue;
        }
        out.dataset.examples.push_back(std::move(ex));
      }
    }
  }
  return out;
}

PredictionParseResult parse_predictions(std::string_view bytes, ParseOptions opts) {
  PredictionParseResult out;
  std::set<std::string> keys;
  std::vector<std::string> dups;
  // nlohmann silently keeps the last duplicate key; the callback sees each
  // top-level key as it is parsed.
  json::parser_callback_t cb = [&](int depth, json::parse_event_t ev, json& parsed) {
    if (ev == json::parse_event_t::key && depth == 1) {
      auto k = parsed.get<std::string>();
      if (!keys.insert(k).second) dups.push_back(k);
    }
    return true;
  };
  json root = parse_json(bytes, cb);
  if (!root.is_object()) throw Error(ErrorCode::SchemaViolation, "predictions must be an object");
  if (!dups.empty()) {
    if (opts.strict) throw Error(ErrorCode::DuplicateId, "duplicate prediction key " + dups.front());
    for (const auto& d : dups) out.warnings.push_back("duplicate prediction key " + d + " (last wins)");
  }
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (!it.value().is_string()) {
      throw Error(ErrorCode::SchemaViolation, "prediction for " + it.key() + " must be a string");
    }
    out.predictions[it.key()] = it.value().get<std::string>();
  }
  return out;
}

namespace {

json example_to_json(const QAExample& ex) {
  json answers = json::array();
  for (const auto& a : ex.answers) answers.push_back({{"text", a.text}, {"answer_start", a.answer_start}});
  json spans = json::array();
  for (const auto& s : ex.distractor_spans) spans.push_back(json::array({s.start, s.end}));
  json j = json::object();
  j["id"] = ex.id;
  j["question"] = ex.question;
  j["context"] = ex.context;
  j["answers"] = std::move(answers);
  j["is_impossible"] = ex.is_impossible;
  j["origin"] = std::string(to_string(ex.origin));
  j["attack_type"] = ex.attack_type ? json(std::string(to_string(*ex.attack_type))) : json(nullptr);
  j["loss_weight"] = ex.loss_weight;
  j["is_negation"] = ex.is_negation;
  j["is_entity_rich"] = ex.is_entity_rich;
  j["distractor_spans"] = std::move(spans);
  return j;
}

bool require_bool(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_boolean()) throw Error(ErrorCode::SchemaViolation, path + "." + key + " must be a boolean");
  return v.get<bool>();
}

QAExample example_from_json(const json& j, const std::string& path) {
  QAExample ex;
  ex.id = require_string(j, "id", path);
  ex.question = require_string(j, "question", path);
  ex.context = require_string(j, "context", path);
  const auto& answers = require_array(j, "answers", path);
  for (std::size_t k = 0; k < answers.size(); ++k) {
    const std::string kpath = path + ".answers[" + std::to_string(k) + "]";
    ex.answers.push_back({require_string(answers[k], "text", kpath),
                          require_offset(answers[k], "answer_start", kpath)});
  }
  ex.is_impossible = require_bool(j, "is_impossible", path);
  ex.origin = parse_origin(require_string(j, "origin", path));
  const auto& at = require(j, "attack_type", path);
  if (at.is_string()) {
    ex.attack_type = parse_attack_type(at.get<std::string>());
  } else if (!at.is_null()) {
    throw Error(ErrorCode::SchemaViolation, path + ".attack_type must be a string or null");
  }
  const auto& w = require(j, "loss_weight", path);
  if (!w.is_number()) throw Error(ErrorCode::SchemaViolation, path + ".loss_weight must be a number");
  ex.loss_weight = w.get<double>();
  ex.is_negation = require_bool(j, "is_negation", path);
  ex.is_entity_rich = require_bool(j, "is_entity_rich", path);
  const auto& spans = require_array(j, "distractor_spans", path);
  for (const auto& s : spans) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned()) {
      throw Error(ErrorCode::SchemaViolation, path + ".distractor_spans entries must be [start,end]");
    }
    ex.distractor_spans.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>()});
  }
  return ex;
}

}  // namespace

std::string write_augmented(const Dataset& dataset) {
  std::string out;
  for (const auto& ex : dataset.examples) {
    out += example_to_json(ex).dump();
    out += '\n';
  }
  return out;
}

ParseResult read_augmented(std::string_view bytes, ParseOptions opts) {
  ParseResult out;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    auto line = bytes.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::SchemaViolation, where + ": " + e.what());
    }
    QAExample ex;
    try {
      ex = example_from_json(j, where);
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaViolation, std::string(e.what()));
    }
    if (auto err = validate(ex)) {
      if (opts.strict) throw Error(ErrorCode::SchemaViolation, where + " (" + ex.id + "): " + *err);
      out.warnings.push_back(where + " (" + ex.id + "): " + *err + " (skipped)");
      continue;
    }
    if (!seen.insert(ex.id).second) {
      if (opts.strict) throw Error(ErrorCode::DuplicateId, where + ": duplicate id " + ex.id);
      out.warnings.push_back(where + ": duplicate id " + ex.id + " (skipped)");
      continue;
    }
    out.dataset.examples.push_back(std::move(ex));
  }
  return out;
}

std::string serialize_squad(const Dataset& dataset) {
  json paragraphs = json::array();
  const std::string* current = nullptr;
  for (const auto& ex : dataset.examples) {
    if (current == nullptr || *current != ex.context) {
      paragraphs.push_back({{"context", ex.context}, {"qas", json::array()}});
      current = &ex.context;
    }
    json answers = json::array();
    for (const auto& a : ex.answers) answers.push_back({{"text", a.text}, {"answer_start", a.answer_start}});
    json qa = {{"id", ex.id}, {"question", ex.question}, {"answers", std::move(answers)}};
    if (ex.is_impossible) qa["is_impossible"] = true;
    paragraphs.back()["qas"].push_back(std::move(qa));
  }
  json root = {{"version", dataset.version},
               {"data", json::array({{{"title", dataset.source_label}, {"paragraphs", paragraphs}}})}};
  return root.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ParseResult load_dataset(const std::string& path, ParseOptions opts) {
  auto bytes = read_file(path);
  auto ends_with = [&](std::string_view suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  ParseResult r = ends_with(".jsonl") ? read_augmented(bytes, opts) : parse_squad(bytes, opts);
  if (r.dataset.source_label.empty()) r.dataset.source_label = path;
  return r;
}

}  // namespace advqa
