#include <algorithm>
#include <array>

#include "blogext/features.hpp"
#include "encoding.hpp"
#include "text_util.hpp"

namespace blogext {

namespace {

constexpr std::array<char32_t, 10> kAsciiMarks = {U'.', U',', U';', U':', U'!', U'?', U'"', U'\'', U'(', U')'};
constexpr std::array<char32_t, 14> kWideMarks = {U'。', U'，', U'、', U'；', U'：', U'！', U'？',
                                                 U'“',  U'”',  U'‘',  U'’',  U'（', U'）', U'…'};

bool is_mark(char32_t cp)
{
    return std::find(kAsciiMarks.begin(), kAsciiMarks.end(), cp) != kAsciiMarks.end() ||
           std::find(kWideMarks.begin(), kWideMarks.end(), cp) != kWideMarks.end();
}

// Whether a code point can make a token a word (rules out tokens made only
// of punctuation such as a lone "-" or "|").
bool is_wordish(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9');
    }
    if (cp >= 0x2000 && cp <= 0x206F) {
        return false;  // general punctuation
    }
    return cp >= 0xC0 && !detail::is_cjk_breakable(cp) && cp != 0xFFFD;
}

std::u32string_view trim_trailing(std::u32string_view s)
{
    while (!s.empty() && detail::is_space_cp(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

std::u32string decode(std::string_view text)
{
    std::u32string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        out.push_back(detail::next_code_point(text, pos));
    }
    return out;
}

}  // namespace

std::size_t count_words(std::string_view text)
{
    std::size_t words = 0;
    bool in_token = false;
    bool token_counts = false;
    auto end_token = [&] {
        if (in_token && token_counts) {
            ++words;
        }
        in_token = false;
        token_counts = false;
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char32_t cp = detail::next_code_point(text, pos);
        if (detail::is_space_cp(cp)) {
            end_token();
        } else if (detail::is_cjk_letter(cp)) {
            end_token();
            ++words;
        } else if (detail::is_cjk_breakable(cp)) {
            end_token();
        } else {
            in_token = true;
            token_counts = token_counts || is_wordish(cp);
        }
    }
    end_token();
    return words;
}

std::size_t count_marks(std::string_view text)
{
    std::size_t marks = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (is_mark(detail::next_code_point(text, pos))) {
            ++marks;
        }
    }
    return marks;
}

bool ends_with_title_mark(std::string_view text)
{
    const auto decoded = decode(text);
    const auto s = trim_trailing(decoded);
    if (s.empty()) {
        return false;
    }
    const char32_t last = s.back();
    return last == U':' || last == U';' || last == U'.' || last == U'：' || last == U'；' || last == U'。';
}

bool ends_with_ellipsis(std::string_view text)
{
    const auto decoded = decode(text);
    const auto s = trim_trailing(decoded);
    return s.ends_with(U"...") || s.ends_with(U"…");
}

}  // namespace blogext
