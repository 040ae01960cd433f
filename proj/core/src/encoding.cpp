#include "encoding.hpp"

#include <iconv.h>

#include <cerrno>
#include <vector>

#include "blogext/dom.hpp"

namespace blogext::detail {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool starts_with(std::string_view s, std::string_view prefix)
{
    return s.substr(0, prefix.size()) == prefix;
}

std::string meta_charset(std::string_view bytes)
{
    const std::string head = ascii_lower(bytes.substr(0, 1024));
    std::size_t pos = 0;
    while ((pos = head.find("<meta", pos)) != std::string::npos) {
        const auto end = head.find('>', pos);
        const std::string_view tag = std::string_view(head).substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos += 5;
        const auto cs = tag.find("charset");
        if (cs == std::string_view::npos) {
            continue;
        }
        auto i = cs + 7;
        while (i < tag.size() && is_ascii_space(tag[i])) ++i;
        if (i >= tag.size() || tag[i] != '=') {
            continue;
        }
        ++i;
        while (i < tag.size() && (is_ascii_space(tag[i]) || tag[i] == '"' || tag[i] == '\'')) ++i;
        std::string label;
        while (i < tag.size() && !is_ascii_space(tag[i]) && tag[i] != '"' && tag[i] != '\'' && tag[i] != ';' &&
               tag[i] != '/') {
            label += tag[i++];
        }
        if (!label.empty()) {
            return label;
        }
    }
    return {};
}

// Maps a declared label to something iconv understands, following the
// usual browser aliasing (latin1 means windows-1252, gb2312 means gbk...).
std::string iconv_name(const std::string& label)
{
    if (label == "iso-8859-1" || label == "latin1" || label == "us-ascii" || label == "ascii" ||
        label == "windows-1252" || label == "cp1252") {
        return "WINDOWS-1252";
    }
    if (label == "gb2312" || label == "gbk" || label == "x-gbk" || label == "gb18030") {
        return "GB18030";
    }
    return label;
}

std::string convert_with_iconv(std::string_view bytes, const std::string& from)
{
    iconv_t cd = iconv_open("UTF-8", from.c_str());
    if (cd == reinterpret_cast<iconv_t>(-1)) {
        return sanitize_utf8(bytes);
    }
    std::string out;
    std::vector<char> buf(4096);
    std::string input(bytes);
    char* in_ptr = input.data();
    std::size_t in_left = input.size();
    while (in_left > 0) {
        char* out_ptr = buf.data();
        std::size_t out_left = buf.size();
        const auto rc = iconv(cd, &in_ptr, &in_left, &out_ptr, &out_left);
        out.append(buf.data(), buf.size() - out_left);
        if (rc == static_cast<std::size_t>(-1)) {
            if (errno == E2BIG) {
                continue;
            }
            append_utf8(out, kReplacement);
            if (errno == EINVAL) {
                break;  // truncated multibyte sequence at end of input
            }
            ++in_ptr;
            --in_left;
            iconv(cd, nullptr, nullptr, nullptr, nullptr);
        }
    }
    iconv_close(cd);
    return out;
}

}  // namespace

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

char32_t next_code_point(std::string_view s, std::size_t& pos)
{
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
        ++pos;
        return kReplacement;
    }
    if (pos + static_cast<std::size_t>(len) > s.size()) {
        ++pos;
        return kReplacement;
    }
    for (int i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
        if ((b & 0xC0) != 0x80) {
            ++pos;
            return kReplacement;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++pos;
        return kReplacement;
    }
    pos += static_cast<std::size_t>(len);
    return cp;
}

std::string sanitize_utf8(std::string_view bytes)
{
    std::string out;
    out.reserve(bytes.size());
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const auto start = pos;
        const char32_t cp = next_code_point(bytes, pos);
        if (cp == kReplacement && !(pos - start == 3 && bytes.substr(start, 3) == "\xEF\xBF\xBD")) {
            append_utf8(out, kReplacement);
        } else {
            out.append(bytes.substr(start, pos - start));
        }
    }
    return out;
}

std::string sniff_charset(std::string_view bytes)
{
    if (starts_with(bytes, "\xEF\xBB\xBF")) {
        return "utf-8";
    }
    if (starts_with(bytes, "\xFF\xFE")) {
        return "utf-16le";
    }
    if (starts_with(bytes, "\xFE\xFF")) {
        return "utf-16be";
    }
    auto declared = meta_charset(bytes);
    // A meta tag readable as ASCII cannot truthfully declare UTF-16.
    if (declared.empty() || declared == "utf8" || starts_with(declared, "utf-16")) {
        return "utf-8";
    }
    return declared;
}

std::string decode_to_utf8(std::string_view bytes)
{
    const auto charset = sniff_charset(bytes);
    if (charset == "utf-8") {
        if (starts_with(bytes, "\xEF\xBB\xBF")) {
            bytes.remove_prefix(3);
        }
        return sanitize_utf8(bytes);
    }
    if (charset == "utf-16le" || charset == "utf-16be") {
        bytes.remove_prefix(2);
        return convert_with_iconv(bytes, charset == "utf-16le" ? "UTF-16LE" : "UTF-16BE");
    }
    return convert_with_iconv(bytes, iconv_name(charset));
}

}  // namespace blogext::detail
