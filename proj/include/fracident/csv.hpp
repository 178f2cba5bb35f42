#pragma once

#include <map>
#include <string>

namespace fracident {

/// Shortest round-trip decimal representation of a double ("inf" allowed).
std::string csv_number(double v);

/// Key=value lines prefixed with "# ", one per entry; parseable back by
/// parse_key_values after stripping the prefix.
std::string metadata_block(const std::map<std::string, std::string>& kv);

/// Flat key=value text: one pair per line, '#' starts a comment. Lines of the
/// form "# key=value" (a metadata echo) are parsed too when strip_comments is
/// false.
std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    bool strip_comments = true);

} // namespace fracident
