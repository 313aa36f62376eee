#include <doctest.h>

#include "advqa/error.hpp"
#include "advqa/report.hpp"
#include "taxonomy_fixture.hpp"

using namespace advqa;
using namespace advqa::taxonomy;
using namespace advqa::report;

namespace {

TaxonomyReport fixture_report() {
  Dataset ds;
  PredictionSet preds;
  for (auto& c : load_taxonomy_cases(std::string(ADVQA_FIXTURES) + "/taxonomy_cases.json")) {
    preds[c.example.id] = c.prediction;
    ds.examples.push_back(c.example);
  }
  return analyze(ds, preds);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("markdown tables") {
  auto r = fixture_report();
  auto md = emit_report(r, Format::Markdown);
  CHECK(md.find("| Type | Total | Correct | Accuracy (%) |") != std::string::npos);
  CHECK(md.find("| Error Type | Count | % |") != std::string::npos);
  CHECK(md.find("| Pattern | Count | % |") != std::string::npos);
  CHECK(md.find("## Error Type Distribution") != std::string::npos);
  CHECK(md.find("When") == std::string::npos);
  CHECK(md == emit_report(r, Format::Markdown));

  // Rows under each header run in descending count order.
  std::vector<long> counts;
  bool in_table = false;
  for (const auto& l : lines(md)) {
    if (l.starts_with("| ---")) {
      in_table = true;
      counts.clear();
      continue;
    }
    if (!in_table || !l.starts_with("| ")) {
      in_table = false;
      continue;
    }
    auto first = l.find(" | ");
    counts.push_back(std::stol(l.substr(first + 3)));
    if (counts.size() > 1) CHECK(counts[counts.size() - 2] >= counts.back());
  }
}

TEST_CASE("accuracy and share columns") {
  auto r = fixture_report();
  auto csv = scheme_csv(r, Scheme::QuestionType);
  CHECK(csv.starts_with("Type,Total,Correct,Accuracy (%)\r\n"));
  std::size_t who_total = r.question_type.at(QuestionType::Who).total;
  std::size_t who_ok = r.question_type.at(QuestionType::Who).correct;
  char buf[64];
  std::snprintf(buf, sizeof buf, "Who,%zu,%zu,", who_total, who_ok);
  CHECK(csv.find(buf) != std::string::npos);
  auto et = scheme_csv(r, Scheme::ErrorType);
  CHECK(et.starts_with("Error Type,Count,%\r\n"));
}

TEST_CASE("empty analysis gives headers only") {
  TaxonomyReport empty;
  CHECK(scheme_csv(empty, Scheme::Patterns) == "Pattern,Count,%\r\n");
  CHECK(pattern_distribution_csv(empty) == "pattern,count,percent\r\n");
  auto md = emit_report(empty, Format::Markdown);
  for (const auto& l : lines(md)) {
    if (l.starts_with("| ") && !l.starts_with("| ---")) {
      CHECK((l.starts_with("| Type") || l.starts_with("| Error Type") || l.starts_with("| Pattern")));
    }
  }
}

TEST_CASE("CSV quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(scheme_csv(fixture_report(), Scheme::Complexity).find("Comparative") == std::string::npos);
  CHECK(scheme_csv(fixture_report(), Scheme::Patterns).find("Comparative/Superlative") != std::string::npos);
}

TEST_CASE("analysis JSON round-trips") {
  auto r = fixture_report();
  auto bytes = analysis_json(r);
  auto back = parse_analysis(bytes);
  CHECK(back == r);
  CHECK(analysis_json(back) == bytes);
  CHECK_THROWS_AS(parse_analysis("{"), Error);
  CHECK_THROWS_AS(parse_analysis("{}"), Error);
  CHECK_THROWS_AS(parse_analysis(R"({"n_examples": -1})"), Error);
}

TEST_CASE("formats") {
  CHECK(parse_format("json") == Format::Json);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK(parse_format("markdown") == Format::Markdown);
  try {
    parse_format("xml");
    FAIL("expected UnsupportedFormat");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFormat);
  }
  auto j = nlohmann::json::parse(emit_report(fixture_report(), Format::Json));
  CHECK(j["tables"].size() == 5);
}
