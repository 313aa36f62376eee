#pragma once

#include <string_view>

// Fixed word lists backing the rule-based entity extractor and the answer-type
// classifier. Lookups are case-sensitive unless noted.
namespace advqa::gazetteer {

bool is_given_name(std::string_view w);
bool is_honorific(std::string_view w);
// Countries, US states, major cities, continents and regions. Takes the full
// (possibly multi-word) surface.
bool is_location(std::string_view surface);
bool has_location_suffix(std::string_view w);
bool is_location_head(std::string_view w);   // River, Lake, County...
bool is_facility_head(std::string_view w);   // Stadium, Arena, Tower...
bool is_organization_cue(std::string_view w);  // Inc, Corp, University...
bool is_event_cue(std::string_view w);       // Bowl, Olympics, War...
bool is_connector(std::string_view w);       // of, de, von...
// Capitalized words that never start an entity (sentence-initial function words).
bool is_capitalized_stopword(std::string_view w);

// Month number 1..12 for full or abbreviated month names (case-insensitive), else 0.
int month_number(std::string_view w);
bool is_weekday(std::string_view w);

// Lowercase spelled numbers zero..twenty -> value, else -1.
int spelled_number(std::string_view lowered);
// first..twentieth -> value, else -1.
int spelled_ordinal(std::string_view lowered);
bool is_scale_word(std::string_view lowered);     // hundred, thousand, million...
bool is_currency_word(std::string_view lowered);  // dollars, euros...

// Lowercase venue keyword for answer typing (stadium, arena, field...).
bool is_venue_keyword(std::string_view lowered);

}  // namespace advqa::gazetteer
