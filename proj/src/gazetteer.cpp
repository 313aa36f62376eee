#include "advqa/gazetteer.hpp"

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "advqa/text.hpp"

namespace advqa::gazetteer {

namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet kGivenNames = {
    "Aaron", "Abraham", "Adam", "Adrian", "Alan", "Albert", "Alexander", "Alfred", "Alice",
    "Amanda", "Amelia", "Amy", "Andrew", "Angela", "Ann", "Anna", "Anne", "Anthony", "Antonio",
    "Arthur", "Barack", "Barbara", "Benjamin", "Bernard", "Beth", "Betty", "Bill", "Bob", "Brian",
    "Bruce", "Carl", "Carlos", "Carol", "Caroline", "Catherine", "Charles", "Charlotte", "Chris",
    "Christian", "Christopher", "Claude", "Daniel", "David", "Deborah", "Dennis", "Diana",
    "Donald", "Dorothy", "Douglas", "Edmond", "Edmund", "Edward", "Eleanor",
    "Fanny", "Francis", "Elizabeth", "Emily", "Emma", "Eric", "Ernest",
    "Frank", "Franklin", "Frederick", "Friedrich", "Gary", "George", "Georg", "Grace", "Gregory",
    "Gustave", "Hannah", "Hugo", "Isabel", "Ivan", "Ada", "Agnes", "Otto", "Marcus", "Leo",
    "Harold", "Harry", "Helen", "Henry", "Isaac", "Jack", "Jacob", "James",
    "Jane", "Janet", "Jason", "Jean", "Jeff", "Jennifer", "Jessica", "Joan", "Johann", "John",
    "Johnny", "Jonathan", "Jose", "Joseph", "Joshua", "Juan", "Julia", "Julie", "Karen", "Karl",
    "Kate", "Katherine", "Kevin", "Laura", "Lawrence", "Leonardo", "Linda", "Lisa", "Louis",
    "Lucy", "Ludwig", "Margaret", "Maria", "Marie", "Mark", "Martin", "Mary", "Matthew",
    "Maurice", "Michael", "Michelle", "Napoleon", "Nancy", "Nicholas", "Nikola", "Oliver", "Patricia",
    "Patrick", "Paul", "Peter", "Philip", "Pierre", "Rachel", "Ralph", "Raymond", "Rebecca",
    "Richard", "Robert", "Roger", "Ronald", "Rose", "Ruth", "Ryan", "Samuel", "Sandra", "Sarah",
    "Scott", "Sharon", "Sophie", "Stephen", "Steven", "Susan", "Thomas", "Timothy", "Tom",
    "Victor", "Victoria", "Vincent", "Walter", "Wilhelm", "William", "Wolfgang"};

const WordSet kHonorifics = {"Mr",     "Mrs",      "Ms",       "Dr",      "Sir",     "Dame",
                             "President", "King",  "Queen",    "Prince",  "Princess", "Pope",
                             "Saint",  "General",  "Captain",  "Professor", "Lord",  "Lady",
                             "Senator", "Governor", "Emperor", "Empress", "Chancellor", "Judge"};

const WordSet kLocations = {
    // continents and regions
    "Africa", "Antarctica", "Asia", "Australia", "Europe", "North America", "South America",
    "Middle East", "Scandinavia", "Siberia", "Caribbean", "Balkans",
    // countries
    "Afghanistan", "Albania", "Algeria", "Argentina", "Armenia", "Austria", "Bangladesh",
    "Belgium", "Bolivia", "Brazil", "Bulgaria", "Cambodia", "Canada", "Chile", "China",
    "Colombia", "Croatia", "Cuba", "Denmark", "Egypt", "England", "Ethiopia", "Finland", "France",
    "Germany", "Ghana", "Greece", "Hungary", "Iceland", "India", "Indonesia", "Iran", "Iraq",
    "Ireland", "Israel", "Italy", "Jamaica", "Japan", "Jordan", "Kenya", "Korea", "Lebanon",
    "Libya", "Mexico", "Morocco", "Nepal", "Netherlands", "New Zealand", "Nigeria", "Norway",
    "Pakistan", "Peru", "Philippines", "Poland", "Portugal", "Romania", "Russia", "Scotland",
    "Serbia", "Singapore", "South Africa", "Spain", "Sweden", "Switzerland", "Syria", "Taiwan",
    "Thailand", "Turkey", "Ukraine", "United Kingdom", "United States", "Uruguay", "Venezuela",
    "Vietnam", "Wales", "Yemen", "Zimbabwe",
    // US states
    "Alabama", "Alaska", "Arizona", "Arkansas", "California", "Colorado", "Connecticut",
    "Delaware", "Florida", "Georgia", "Hawaii", "Idaho", "Illinois", "Indiana", "Iowa", "Kansas",
    "Kentucky", "Louisiana", "Maine", "Maryland", "Massachusetts", "Michigan", "Minnesota",
    "Mississippi", "Missouri", "Montana", "Nebraska", "Nevada", "New Hampshire", "New Jersey",
    "New Mexico", "New York", "North Carolina", "North Dakota", "Ohio", "Oklahoma", "Oregon",
    "Pennsylvania", "Rhode Island", "South Carolina", "South Dakota", "Tennessee", "Texas", "Utah",
    "Vermont", "Virginia", "Washington", "West Virginia", "Wisconsin", "Wyoming",
    // cities
    "Amsterdam", "Athens", "Atlanta", "Baltimore", "Bangkok", "Barcelona", "Beijing", "Berlin",
    "Boston", "Brussels", "Budapest", "Buenos Aires", "Cairo", "Charlotte", "Chicago",
    "Cleveland", "Copenhagen", "Dallas", "Delhi", "Denver", "Detroit", "Dublin", "Edinburgh",
    "Geneva", "Hamburg", "Havana", "Hong Kong", "Houston", "Istanbul", "Jakarta", "Jerusalem",
    "Kyoto", "Lisbon", "London", "Los Angeles", "Madrid", "Manchester", "Melbourne", "Miami",
    "Milan", "Montreal", "Moscow", "Mumbai", "Munich", "Nairobi", "Naples", "New Orleans",
    "Oslo", "Paris", "Philadelphia", "Phoenix", "Pittsburgh", "Prague", "Rome", "San Diego",
    "San Francisco", "San Jose", "Santa Clara", "Seattle", "Seoul", "Shanghai", "Stockholm",
    "Sydney", "Tokyo", "Toronto", "Vancouver", "Venice", "Vienna", "Warsaw", "Zurich"};

const WordSet kLocationHeads = {"River",   "Lake",   "Mountain", "Mountains", "Island", "Islands",
                                "Ocean",   "Sea",    "Valley",   "County",    "City",   "State",
                                "Province", "Bay",   "Desert",   "Peninsula", "Gulf",   "Coast",
                                "Republic", "Kingdom", "Empire", "Region",    "District", "Springs",
                                "Falls",   "Heights", "Hills"};

const WordSet kFacilityHeads = {
    "Stadium", "Arena",    "Field",    "Center",   "Centre",   "Park",     "Hall",     "Tower",
    "Bridge",  "Airport",  "Station",  "Building", "Palace",   "Castle",   "Cathedral", "Church",
    "Museum",  "Library",  "Theatre",  "Theater",  "Dome",     "Coliseum", "Colosseum", "Gardens",
    "Garden",  "Square",   "Temple",   "Mosque",   "Hospital", "Abbey",    "Speedway", "Ballpark"};

const WordSet kOrganizationCues = {
    "Inc",        "Corp",       "Corporation", "Company",    "Co",          "Ltd",
    "LLC",        "Group",      "University",  "College",    "Institute",   "Association",
    "Party",      "Council",    "Committee",   "Agency",     "Bank",        "Foundation",
    "Society",    "League",     "Club",        "Union",      "Department",  "Ministry",
    "Army",       "Navy",       "Court",       "Senate",     "Congress",    "Parliament",
    "Organization", "Organisation", "Federation", "Academy", "Commission",  "Industries",
    "Technologies", "Systems",  "Airlines",    "Records",    "Studios",     "Press",
    "Times",      "Church of",  "School",      "Orchestra",  "Band",        "Team"};

const WordSet kEventCues = {"Bowl",     "Olympics",  "Olympiad", "Cup",     "War",
                            "Fair",     "Festival",  "Championship", "Championships", "Games",
                            "Revolution", "Expo",    "Series",   "Prix",    "Marathon",
                            "Summit",   "Crusade",   "Battle",   "Treaty",  "Awards",
                            "Tournament", "Classic", "Rebellion", "Uprising", "Election"};

const WordSet kConnectors = {"of", "de", "da", "du", "von", "van", "der", "del", "la", "le", "y", "&"};

const WordSet kCapitalizedStopwords = {
    "The",     "A",        "An",       "This",      "That",     "These",   "Those",   "It",
    "Its",     "He",       "She",      "They",      "We",       "I",       "You",     "His",
    "Her",     "Their",    "Our",      "My",        "Your",     "In",      "On",      "At",
    "By",      "For",      "From",     "To",        "With",     "Without", "Of",      "As",
    "However", "Some",     "But",      "And",       "Or",       "Although", "Though", "While",
    "When",    "Where",    "Why",      "How",       "What",     "Which",   "Who",     "Whom",
    "Whose",   "After",    "Before",   "During",    "Since",    "Until",   "If",      "Because",
    "Many",    "Most",     "Several",  "Few",       "All",      "Both",    "Each",    "Every",
    "Contrary", "According", "Despite", "Also",     "Later",    "Then",    "There",   "Here",
    "Such",    "Other",    "Another",  "One",       "Once",     "Not",     "No",      "Yes",
    "Is",      "Was",      "Were",     "Are",       "Did",      "Does",    "Do",      "Has",
    "Have",    "Had",      "Can",      "Could",     "Would",    "Should",  "Will",    "Might",
    "Must",    "Name",     "List",     "Give",      "Since",    "Thus",    "Therefore", "Meanwhile",
    "Furthermore", "Moreover", "Nevertheless", "Today", "Yesterday", "Tomorrow", "Under", "Over",
    "About",   "Among",    "Between",  "Into",      "Within",   "Upon",    "Along",   "Around",
    "Following", "Previously", "Subsequently", "Reportedly", "Initially", "Finally", "Eventually"};

const std::unordered_map<std::string, int> kMonths = {
    {"january", 1},  {"jan", 1},   {"february", 2}, {"feb", 2},       {"march", 3},
    {"mar", 3},      {"april", 4}, {"apr", 4},      {"may", 5},       {"june", 6},
    {"jun", 6},      {"july", 7},  {"jul", 7},      {"august", 8},    {"aug", 8},
    {"september", 9}, {"sep", 9},  {"sept", 9},     {"october", 10},  {"oct", 10},
    {"november", 11}, {"nov", 11}, {"december", 12}, {"dec", 12}};

const WordSet kWeekdays = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};

const std::unordered_map<std::string_view, int> kSpelledNumbers = {
    {"zero", 0},      {"one", 1},       {"two", 2},       {"three", 3},    {"four", 4},
    {"five", 5},      {"six", 6},       {"seven", 7},     {"eight", 8},    {"nine", 9},
    {"ten", 10},      {"eleven", 11},   {"twelve", 12},   {"thirteen", 13}, {"fourteen", 14},
    {"fifteen", 15},  {"sixteen", 16},  {"seventeen", 17}, {"eighteen", 18}, {"nineteen", 19},
    {"twenty", 20}};

const std::unordered_map<std::string_view, int> kSpelledOrdinals = {
    {"first", 1},       {"second", 2},      {"third", 3},       {"fourth", 4},
    {"fifth", 5},       {"sixth", 6},       {"seventh", 7},     {"eighth", 8},
    {"ninth", 9},       {"tenth", 10},      {"eleventh", 11},   {"twelfth", 12},
    {"thirteenth", 13}, {"fourteenth", 14}, {"fifteenth", 15},  {"sixteenth", 16},
    {"seventeenth", 17}, {"eighteenth", 18}, {"nineteenth", 19}, {"twentieth", 20}};

const WordSet kScaleWords = {"hundred", "thousand", "million", "billion", "trillion"};
const WordSet kCurrencyWords = {"dollar", "dollars", "euro",  "euros", "pound", "pounds",
                                "yen",    "cents",   "francs", "marks", "rupees", "pesos"};

const WordSet kVenueKeywords = {"stadium", "arena",   "field",    "center",  "centre",
                                "park",    "hall",    "coliseum", "colosseum", "dome",
                                "theater", "theatre", "ballpark", "speedway", "gardens",
                                "garden",  "bowl"};

}  // namespace

bool is_given_name(std::string_view w) { return kGivenNames.contains(w); }
bool is_honorific(std::string_view w) { return kHonorifics.contains(w); }
bool is_location(std::string_view surface) { return kLocations.contains(surface); }

bool has_location_suffix(std::string_view w) {
  static constexpr std::string_view kSuffixes[] = {"land", "ville", "burg", "borough", "shire",
                                                    "stan", "polis", "grad", "sburg"};
  if (w.size() < 6 || !text::is_upper(static_cast<unsigned char>(w.front()))) return false;
  for (auto s : kSuffixes) {
    if (w.size() > s.size() + 2 && w.substr(w.size() - s.size()) == s) return true;
  }
  return false;
}

bool is_location_head(std::string_view w) { return kLocationHeads.contains(w); }
bool is_facility_head(std::string_view w) { return kFacilityHeads.contains(w); }
bool is_organization_cue(std::string_view w) { return kOrganizationCues.contains(w); }
bool is_event_cue(std::string_view w) { return kEventCues.contains(w); }
bool is_connector(std::string_view w) { return kConnectors.contains(w); }
bool is_capitalized_stopword(std::string_view w) { return kCapitalizedStopwords.contains(w); }

int month_number(std::string_view w) {
  auto it = kMonths.find(text::to_lower(w));
  return it == kMonths.end() ? 0 : it->second;
}

bool is_weekday(std::string_view w) { return kWeekdays.contains(w); }

int spelled_number(std::string_view lowered) {
  auto it = kSpelledNumbers.find(lowered);
  return it == kSpelledNumbers.end() ? -1 : it->second;
}

int spelled_ordinal(std::string_view lowered) {
  auto it = kSpelledOrdinals.find(lowered);
  return it == kSpelledOrdinals.end() ? -1 : it->second;
}

bool is_scale_word(std::string_view lowered) { return kScaleWords.contains(lowered); }
bool is_currency_word(std::string_view lowered) { return kCurrencyWords.contains(lowered); }
bool is_venue_keyword(std::string_view lowered) { return kVenueKeywords.contains(lowered); }

}  // namespace advqa::gazetteer
