#pragma once

#include <string>
#include <string_view>

namespace blogext::detail {

// Charset label for a raw document: BOM first, then a <meta> declaration in
// the first 1024 bytes, then "utf-8". Labels are lowercased.
std::string sniff_charset(std::string_view bytes);

// Converts raw bytes to well-formed UTF-8. Undecodable input becomes U+FFFD.
std::string decode_to_utf8(std::string_view bytes);

// Replaces every malformed UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

void append_utf8(std::string& out, char32_t cp);

// Decodes one code point at `pos`, advancing it. Malformed input yields
// U+FFFD and advances by one byte.
char32_t next_code_point(std::string_view s, std::size_t& pos);

}  // namespace blogext::detail
