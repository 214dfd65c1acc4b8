#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evchain {

/// Case-folds (ASCII plus the Latin-1 supplement), trims, and collapses
/// internal whitespace runs to a single space. Idempotent.
std::string normalize(std::string_view text);

/// Splits normalized text on spaces and strips punctuation from token edges.
/// A single leading '#' survives as the hashtag sigil; tokens that strip to
/// nothing are dropped.
std::vector<std::string> tokenize(std::string_view normalized);

/// Tokens ready for embedding: normalize + tokenize + drop the '#' sigil.
std::vector<std::string> embedding_tokens(std::string_view raw_text);

/// Hashtag surfaces ('#' stripped, normalized, deduplicated in order of
/// first appearance) derived from raw tweet text.
std::vector<std::string> hashtags_from_text(std::string_view raw_text);

/// Removes ASCII punctuation from both ends of a token, keeping interior
/// characters ("notre-dame." -> "notre-dame").
std::string strip_edge_punct(std::string_view token);

bool starts_uppercase(std::string_view raw_token);

}  // namespace evchain
