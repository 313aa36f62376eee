#pragma once

#include <cstdint>

#include "advqa/corpus.hpp"

// Template-built corpora for desk-scale runs. Every gold answer sits at a
// verified offset, and generation is a pure function of the arguments.
namespace advqa::synthetic {

// Short paragraphs whose answer sentence carries a supported verb shape.
// Exactly round(n x negation_fraction) examples contain a negation marker.
Dataset negation_corpus(std::size_t n, double negation_fraction, std::uint64_t seed);

// Paragraphs holding three same-type entities (years, people or cities), one
// of them asked about. Questions reuse the answer sentence's wording half the
// time and a paraphrase otherwise. With probability `addsent_rate` a sentence
// mirroring the question about another company, with a fresh value of the
// same type, is appended and recorded as a distractor span.
Dataset entity_corpus(std::size_t n, std::uint64_t seed, const std::string& id_prefix = "ent",
                      double addsent_rate = 0.0);

}  // namespace advqa::synthetic
