#include "advqa/report.hpp"

#include <algorithm>
#include <json.hpp>
#include <vector>

#include "advqa/error.hpp"
#include "advqa/metrics.hpp"

namespace advqa::report {

using nlohmann::json;
using namespace taxonomy;

namespace {

template <class E>
json stats_map(const std::map<E, LabelStats>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::string(to_string(k))] = {{"total", v.total}, {"correct", v.correct}};
  return j;
}

template <class E>
json count_map(const std::map<E, std::size_t>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::string(to_string(k))] = v;
  return j;
}

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaViolation, "analysis: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t as_count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    schema(where + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) schema(where + " must be a string");
  return j.get<std::string>();
}

template <class E>
std::map<E, LabelStats> read_stats(const json& j, const char* key) {
  const json& m = field(j, key);
  if (!m.is_object()) schema(std::string(key) + " must be an object");
  std::map<E, LabelStats> out;
  for (const auto& [k, v] : m.items()) {
    LabelStats s{as_count(field(v, "total"), k + ".total"), as_count(field(v, "correct"), k + ".correct")};
    if (s.correct > s.total) schema(k + ": correct exceeds total");
    out[parse_label<E>(k)] = s;
  }
  return out;
}

template <class E>
std::map<E, std::size_t> read_counts(const json& j, const char* key) {
  const json& m = field(j, key);
  if (!m.is_object()) schema(std::string(key) + " must be an object");
  std::map<E, std::size_t> out;
  for (const auto& [k, v] : m.items()) out[parse_label<E>(k)] = as_count(v, k);
  return out;
}

struct Row {
  std::string label;
  std::size_t count = 0;
  std::size_t correct = 0;
  std::size_t order = 0;
};

bool has_accuracy(Scheme s) {
  return s == Scheme::QuestionType || s == Scheme::AnswerType || s == Scheme::Complexity;
}

std::vector<std::string> header(Scheme s) {
  switch (s) {
    case Scheme::QuestionType:
    case Scheme::AnswerType:
    case Scheme::Complexity:
      return {"Type", "Total", "Correct", "Accuracy (%)"};
    case Scheme::ErrorType:
      return {"Error Type", "Count", "%"};
    case Scheme::Patterns:
      return {"Pattern", "Count", "%"};
  }
  return {};
}

template <class E, class V>
void collect(std::vector<Row>& rows, const std::map<E, V>& m, const auto& kinds) {
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    auto it = m.find(kinds[i]);
    if (it == m.end()) continue;
    if constexpr (std::is_same_v<V, LabelStats>) {
      rows.push_back({std::string(to_string(kinds[i])), it->second.total, it->second.correct, i});
    } else {
      rows.push_back({std::string(to_string(kinds[i])), it->second, 0, i});
    }
  }
}

std::vector<Row> rows_of(const TaxonomyReport& r, Scheme s) {
  std::vector<Row> rows;
  switch (s) {
    case Scheme::QuestionType: {
      // Fold When into Other, the table has no When row.
      std::map<QuestionType, LabelStats> folded;
      for (const auto& [k, v] : r.question_type) {
        auto& f = folded[table_label(k)];
        f.total += v.total;
        f.correct += v.correct;
      }
      collect(rows, folded, kQuestionTypes);
      break;
    }
    case Scheme::AnswerType:
      collect(rows, r.answer_type, kAnswerTypes);
      break;
    case Scheme::Complexity:
      collect(rows, r.complexity, kComplexities);
      break;
    case Scheme::ErrorType:
      collect(rows, r.error_type, kErrorTypes);
      break;
    case Scheme::Patterns:
      collect(rows, r.patterns, kPatterns);
      break;
  }
  std::erase_if(rows, [](const Row& x) { return x.count == 0; });
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.order < b.order;
  });
  return rows;
}

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::vector<std::string> cells(const TaxonomyReport& r, Scheme s, const Row& row) {
  if (has_accuracy(s)) {
    return {row.label, std::to_string(row.count), std::to_string(row.correct),
            metrics::format_pct(pct(row.correct, row.count))};
  }
  return {row.label, std::to_string(row.count), metrics::format_pct(pct(row.count, r.n_errors))};
}

std::string markdown_row(const std::vector<std::string>& c) {
  std::string out = "|";
  for (const auto& x : c) out += " " + x + " |";
  return out + "\n";
}

std::string csv_row(const std::vector<std::string>& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += csv_field(c[i]);
  }
  return out + "\r\n";
}

}  // namespace

Format parse_format(std::string_view s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "markdown" || s == "md") return Format::Markdown;
  throw Error(ErrorCode::UnsupportedFormat, "unknown report format '" + std::string(s) + "'");
}

std::string_view title(Scheme s) {
  switch (s) {
    case Scheme::QuestionType: return "Performance by Question Type";
    case Scheme::AnswerType: return "Performance by Answer Type";
    case Scheme::Complexity: return "Performance by Question Complexity";
    case Scheme::ErrorType: return "Error Type Distribution";
    case Scheme::Patterns: return "Linguistic Patterns";
  }
  return "";
}

std::string_view file_stem(Scheme s) {
  switch (s) {
    case Scheme::QuestionType: return "question_type";
    case Scheme::AnswerType: return "answer_type";
    case Scheme::Complexity: return "complexity";
    case Scheme::ErrorType: return "error_type";
    case Scheme::Patterns: return "patterns";
  }
  return "";
}

std::string analysis_json(const TaxonomyReport& r) {
  json j;
  j["n_examples"] = r.n_examples;
  j["n_errors"] = r.n_errors;
  j["question_type"] = stats_map(r.question_type);
  j["answer_type"] = stats_map(r.answer_type);
  j["complexity"] = stats_map(r.complexity);
  j["error_type"] = count_map(r.error_type);
  j["patterns"] = count_map(r.patterns);
  json co = json::array();
  for (const auto& row : r.co_occurrence) co.push_back(row);
  j["co_occurrence"] = co;
  json recs = json::array();
  for (const auto& e : r.records) {
    json p = json::array();
    for (auto x : e.patterns.to_vector()) p.push_back(to_string(x));
    recs.push_back({{"id", e.example_id},
                    {"question_type", to_string(e.question_type)},
                    {"answer_type", to_string(e.answer_type)},
                    {"complexity", to_string(e.complexity)},
                    {"error_type", to_string(e.error_type)},
                    {"patterns", p},
                    {"predicted", e.predicted},
                    {"gold", e.gold}});
  }
  j["records"] = recs;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

TaxonomyReport parse_analysis(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("analysis: ") + e.what());
  }
  if (!j.is_object()) schema("top level must be an object");
  TaxonomyReport r;
  r.n_examples = as_count(field(j, "n_examples"), "n_examples");
  r.n_errors = as_count(field(j, "n_errors"), "n_errors");
  if (r.n_errors > r.n_examples) schema("n_errors exceeds n_examples");
  r.question_type = read_stats<QuestionType>(j, "question_type");
  r.answer_type = read_stats<AnswerType>(j, "answer_type");
  r.complexity = read_stats<Complexity>(j, "complexity");
  r.error_type = read_counts<ErrorType>(j, "error_type");
  r.patterns = read_counts<Pattern>(j, "patterns");

  const json& co = field(j, "co_occurrence");
  if (!co.is_array() || co.size() != kPatterns.size()) schema("co_occurrence must be a square pattern matrix");
  for (std::size_t a = 0; a < kPatterns.size(); ++a) {
    if (!co[a].is_array() || co[a].size() != kPatterns.size()) schema("co_occurrence must be a square pattern matrix");
    for (std::size_t b = 0; b < kPatterns.size(); ++b) r.co_occurrence[a][b] = as_count(co[a][b], "co_occurrence");
  }
  for (std::size_t a = 0; a < kPatterns.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (r.co_occurrence[a][b] != r.co_occurrence[b][a]) schema("co_occurrence is not symmetric");
    }
  }

  const json& recs = field(j, "records");
  if (!recs.is_array()) schema("records must be an array");
  for (const auto& e : recs) {
    ErrorRecord rec;
    rec.example_id = as_string(field(e, "id"), "record id");
    rec.question_type = parse_label<QuestionType>(as_string(field(e, "question_type"), "question_type"));
    rec.answer_type = parse_label<AnswerType>(as_string(field(e, "answer_type"), "answer_type"));
    rec.complexity = parse_label<Complexity>(as_string(field(e, "complexity"), "complexity"));
    rec.error_type = parse_label<ErrorType>(as_string(field(e, "error_type"), "error_type"));
    const json& p = field(e, "patterns");
    if (!p.is_array()) schema("record patterns must be an array");
    for (const auto& x : p) rec.patterns.insert(parse_label<Pattern>(as_string(x, "pattern")));
    rec.predicted = as_string(field(e, "predicted"), "predicted");
    rec.gold = as_string(field(e, "gold"), "gold");
    r.records.push_back(std::move(rec));
  }
  if (j.contains("warnings")) {
    const json& w = j.at("warnings");
    if (!w.is_array()) schema("warnings must be an array");
    for (const auto& x : w) r.warnings.push_back(as_string(x, "warning"));
  }
  return r;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string scheme_csv(const TaxonomyReport& r, Scheme s) {
  std::string out = csv_row(header(s));
  for (const auto& row : rows_of(r, s)) out += csv_row(cells(r, s, row));
  return out;
}

std::string emit_report(const TaxonomyReport& r, Format format) {
  std::string out;
  switch (format) {
    case Format::Markdown:
      for (auto s : kSchemes) {
        if (!out.empty()) out += "\n";
        out += "## " + std::string(title(s)) + "\n\n";
        const auto h = header(s);
        out += markdown_row(h);
        out += "|";
        for (std::size_t i = 0; i < h.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
        out += "\n";
        for (const auto& row : rows_of(r, s)) out += markdown_row(cells(r, s, row));
      }
      return out;
    case Format::Csv:
      for (auto s : kSchemes) {
        if (!out.empty()) out += "\r\n";
        out += scheme_csv(r, s);
      }
      return out;
    case Format::Json: {
      json j;
      j["n_examples"] = r.n_examples;
      j["n_errors"] = r.n_errors;
      json tables = json::array();
      for (auto s : kSchemes) {
        json rows = json::array();
        for (const auto& row : rows_of(r, s)) {
          const auto c = cells(r, s, row);
          json o = json::object();
          const auto h = header(s);
          for (std::size_t i = 0; i < h.size(); ++i) o[h[i]] = c[i];
          rows.push_back(o);
        }
        tables.push_back({{"table", file_stem(s)}, {"title", title(s)}, {"rows", rows}});
      }
      j["tables"] = tables;
      return j.dump(2) + "\n";
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown report format");
}

std::string pattern_distribution_csv(const TaxonomyReport& r) {
  std::string out = csv_row({"pattern", "count", "percent"});
  for (const auto& row : rows_of(r, Scheme::Patterns)) {
    out += csv_row({row.label, std::to_string(row.count), metrics::format_pct(pct(row.count, r.n_errors))});
  }
  return out;
}

}  // namespace advqa::report
