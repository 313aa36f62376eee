#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "advqa/corpus.hpp"
#include "advqa/text.hpp"

// Loader for tests/fixtures/taxonomy_cases.json. Gold and distractor offsets
// are the first occurrence of their text in the context.
struct TaxonomyCase {
  advqa::QAExample example;
  std::string prediction;
  std::string question_type, answer_type, complexity;
  std::optional<std::string> error_type;
  std::optional<std::vector<std::string>> patterns;
};

inline std::vector<TaxonomyCase> load_taxonomy_cases(const std::string& path) {
  auto j = nlohmann::json::parse(advqa::read_file(path));
  std::vector<TaxonomyCase> out;
  for (const auto& c : j) {
    TaxonomyCase tc;
    auto& ex = tc.example;
    ex.id = c.at("id").get<std::string>();
    ex.question = c.at("question").get<std::string>();
    ex.context = c.at("context").get<std::string>();
    const auto ctx = advqa::text::decode(ex.context);
    const auto gold = c.at("gold").get<std::string>();
    ex.answers.push_back({gold, advqa::text::find(ctx, advqa::text::decode(gold))});
    if (c.contains("distractor")) {
      const auto d = advqa::text::decode(c.at("distractor").get<std::string>());
      const auto at = advqa::text::find(ctx, d);
      ex.distractor_spans.push_back({at, at + d.size()});
      ex.origin = advqa::Origin::AddSent;
    }
    tc.prediction = c.at("prediction").get<std::string>();
    const auto& l = c.at("labels");
    tc.question_type = l.at("question_type").get<std::string>();
    tc.answer_type = l.at("answer_type").get<std::string>();
    tc.complexity = l.at("complexity").get<std::string>();
    if (!l.at("error_type").is_null()) tc.error_type = l.at("error_type").get<std::string>();
    if (!l.at("patterns").is_null()) tc.patterns = l.at("patterns").get<std::vector<std::string>>();
    out.push_back(std::move(tc));
  }
  return out;
}
