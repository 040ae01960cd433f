#pragma once

namespace blogext::detail {

// Ideographs, kana and hangul syllables: each counts as one word.
constexpr bool is_cjk_letter(char32_t cp) noexcept
{
    return (cp >= 0x3040 && cp <= 0x30FF) || (cp >= 0x3400 && cp <= 0x4DBF) || (cp >= 0x4E00 && cp <= 0x9FFF) ||
           (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0xAC00 && cp <= 0xD7AF) || (cp >= 0x20000 && cp <= 0x2FFFF);
}

// Characters a line may break around without surrounding spaces.
constexpr bool is_cjk_breakable(char32_t cp) noexcept
{
    return is_cjk_letter(cp) || (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFF00 && cp <= 0xFFEF);
}

constexpr bool is_space_cp(char32_t cp) noexcept
{
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == 0xA0 || cp == 0x3000 ||
           (cp >= 0x2000 && cp <= 0x200A) || cp == 0x202F || cp == 0x205F;
}

}  // namespace blogext::detail
