#pragma once

#include <string>
#include <string_view>

#include "advqa/taxonomy.hpp"

// Analysis artifacts and the table views rendered from them.
namespace advqa::report {

enum class Format { Json, Csv, Markdown };

// Throws UnsupportedFormat.
Format parse_format(std::string_view s);

// Full analysis artifact, keys sorted so output bytes are stable.
std::string analysis_json(const taxonomy::TaxonomyReport& report);
// Inverse of analysis_json. Throws MalformedJson or SchemaViolation.
taxonomy::TaxonomyReport parse_analysis(std::string_view json_bytes);

enum class Scheme { QuestionType, AnswerType, Complexity, ErrorType, Patterns };
inline constexpr std::array kSchemes = {Scheme::QuestionType, Scheme::AnswerType, Scheme::Complexity,
                                        Scheme::ErrorType, Scheme::Patterns};

std::string_view title(Scheme s);
std::string_view file_stem(Scheme s);

// RFC-4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

// One scheme as CSV. Rows are sorted by descending count, ties in label
// order; zero rows are left out, so an empty analysis gives the header only.
std::string scheme_csv(const taxonomy::TaxonomyReport& report, Scheme s);

// The five tables. CSV blocks are separated by an empty line.
std::string emit_report(const taxonomy::TaxonomyReport& report, Format format);

// pattern,count,percent rows for plotting the pattern distribution.
std::string pattern_distribution_csv(const taxonomy::TaxonomyReport& report);

}  // namespace advqa::report
