// Error-tolerant HTML tokenizer and tree builder. Follows the shape of the
// HTML5 tree construction rules for the cases that matter on real blog
// markup: implied html/head/body, implied end tags for p/li/dd/dt/headings,
// table sections and cells, void elements, raw text elements. The adoption
// agency algorithm and foster parenting are not implemented; misnested
// formatting elements are closed by simple stack popping.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blogext/dom.hpp"
#include "blogext/error.hpp"
#include "encoding.hpp"

namespace blogext {

namespace {

using namespace std::string_view_literals;

template <std::size_t N>
bool one_of(std::string_view name, const std::array<std::string_view, N>& set)
{
    return std::find(set.begin(), set.end(), name) != set.end();
}

constexpr std::array kVoidTags = {"area"sv, "base"sv,  "br"sv,   "col"sv,   "embed"sv, "hr"sv,    "img"sv,
                                  "input"sv, "link"sv, "meta"sv, "param"sv, "source"sv, "track"sv, "wbr"sv,
                                  "keygen"sv, "basefont"sv, "bgsound"sv, "frame"sv};

constexpr std::array kRawTextTags = {"script"sv, "style"sv, "xmp"sv, "iframe"sv, "noembed"sv, "noframes"sv,
                                     "noscript"sv};
constexpr std::array kRcDataTags = {"title"sv, "textarea"sv};

constexpr std::array kHeadTags = {"meta"sv, "link"sv, "base"sv, "style"sv, "script"sv, "title"sv,
                                  "noscript"sv, "template"sv, "basefont"sv, "bgsound"sv};

constexpr std::array kClosesP = {
    "address"sv, "article"sv, "aside"sv, "blockquote"sv, "center"sv, "details"sv, "dialog"sv, "dir"sv,
    "div"sv,     "dl"sv,      "fieldset"sv, "figcaption"sv, "figure"sv, "footer"sv, "header"sv, "hgroup"sv,
    "main"sv,    "menu"sv,    "nav"sv,     "ol"sv,       "p"sv,        "section"sv, "summary"sv, "ul"sv,
    "h1"sv,      "h2"sv,      "h3"sv,      "h4"sv,       "h5"sv,       "h6"sv,      "pre"sv,     "listing"sv,
    "form"sv,    "li"sv,      "dd"sv,      "dt"sv,       "plaintext"sv, "table"sv,  "hr"sv,      "xmp"sv};

constexpr std::array kHeadings = {"h1"sv, "h2"sv, "h3"sv, "h4"sv, "h5"sv, "h6"sv};

constexpr std::array kSpecial = {
    "address"sv, "applet"sv,  "area"sv,    "article"sv,  "aside"sv,    "base"sv,     "basefont"sv, "bgsound"sv,
    "blockquote"sv, "body"sv, "br"sv,      "button"sv,   "caption"sv,  "center"sv,   "col"sv,      "colgroup"sv,
    "dd"sv,      "details"sv, "dir"sv,     "div"sv,      "dl"sv,       "dt"sv,       "embed"sv,    "fieldset"sv,
    "figcaption"sv, "figure"sv, "footer"sv, "form"sv,    "frame"sv,    "frameset"sv, "h1"sv,       "h2"sv,
    "h3"sv,      "h4"sv,      "h5"sv,      "h6"sv,       "head"sv,     "header"sv,   "hgroup"sv,   "hr"sv,
    "html"sv,    "iframe"sv,  "img"sv,     "input"sv,    "li"sv,       "link"sv,     "listing"sv,  "main"sv,
    "marquee"sv, "menu"sv,    "meta"sv,    "nav"sv,      "noembed"sv,  "noframes"sv, "noscript"sv, "object"sv,
    "ol"sv,      "p"sv,       "param"sv,   "plaintext"sv, "pre"sv,     "script"sv,   "section"sv,  "select"sv,
    "source"sv,  "style"sv,   "summary"sv, "table"sv,    "tbody"sv,    "td"sv,       "template"sv, "textarea"sv,
    "tfoot"sv,   "th"sv,      "thead"sv,   "title"sv,    "tr"sv,       "track"sv,    "ul"sv,       "wbr"sv,
    "xmp"sv};

constexpr std::array kDefaultScope = {"applet"sv, "caption"sv, "html"sv, "table"sv, "td"sv,
                                      "th"sv,     "marquee"sv, "object"sv, "template"sv};
constexpr std::array kImpliedEnd = {"dd"sv, "dt"sv, "li"sv, "optgroup"sv, "option"sv,
                                    "p"sv,  "rb"sv, "rp"sv, "rt"sv,       "rtc"sv};
constexpr std::array kTableSections = {"tbody"sv, "thead"sv, "tfoot"sv};

struct NamedEntity {
    std::string_view name;
    char32_t cp;
};

constexpr std::array kEntities = {
    NamedEntity{"amp", U'&'},      NamedEntity{"lt", U'<'},       NamedEntity{"gt", U'>'},
    NamedEntity{"quot", U'"'},     NamedEntity{"apos", U'\''},    NamedEntity{"nbsp", 0xA0},
    NamedEntity{"copy", 0xA9},     NamedEntity{"reg", 0xAE},      NamedEntity{"trade", 0x2122},
    NamedEntity{"hellip", 0x2026}, NamedEntity{"mdash", 0x2014},  NamedEntity{"ndash", 0x2013},
    NamedEntity{"lsquo", 0x2018},  NamedEntity{"rsquo", 0x2019},  NamedEntity{"ldquo", 0x201C},
    NamedEntity{"rdquo", 0x201D},  NamedEntity{"laquo", 0xAB},    NamedEntity{"raquo", 0xBB},
    NamedEntity{"middot", 0xB7},   NamedEntity{"bull", 0x2022},   NamedEntity{"deg", 0xB0},
    NamedEntity{"times", 0xD7},    NamedEntity{"divide", 0xF7},   NamedEntity{"euro", 0x20AC},
    NamedEntity{"pound", 0xA3},    NamedEntity{"yen", 0xA5},      NamedEntity{"cent", 0xA2},
    NamedEntity{"sect", 0xA7},     NamedEntity{"para", 0xB6},     NamedEntity{"iexcl", 0xA1},
    NamedEntity{"iquest", 0xBF},   NamedEntity{"shy", 0xAD},      NamedEntity{"ensp", 0x2002},
    NamedEntity{"emsp", 0x2003},   NamedEntity{"thinsp", 0x2009}, NamedEntity{"zwnj", 0x200C},
    NamedEntity{"zwj", 0x200D},    NamedEntity{"eacute", 0xE9},   NamedEntity{"egrave", 0xE8},
    NamedEntity{"agrave", 0xE0},   NamedEntity{"aacute", 0xE1},   NamedEntity{"ouml", 0xF6},
    NamedEntity{"uuml", 0xFC},     NamedEntity{"auml", 0xE4},     NamedEntity{"szlig", 0xDF},
    NamedEntity{"ccedil", 0xE7},   NamedEntity{"ntilde", 0xF1},   NamedEntity{"larr", 0x2190},
    NamedEntity{"rarr", 0x2192},   NamedEntity{"uarr", 0x2191},   NamedEntity{"darr", 0x2193},
};

// Entities browsers accept without the trailing semicolon.
constexpr std::array kLegacyEntities = {"amp"sv, "lt"sv, "gt"sv, "quot"sv, "nbsp"sv, "copy"sv, "reg"sv};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_alnum(char c) { return is_alpha(c) || (c >= '0' && c <= '9'); }

std::string decode_entities(std::string_view s)
{
    if (s.find('&') == std::string_view::npos) {
        return std::string(s);
    }
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        std::size_t j = i + 1;
        if (j < s.size() && s[j] == '#') {
            ++j;
            int base = 10;
            if (j < s.size() && (s[j] == 'x' || s[j] == 'X')) {
                base = 16;
                ++j;
            }
            std::size_t k = j;
            while (k < s.size() && (base == 16 ? std::isxdigit(static_cast<unsigned char>(s[k])) != 0
                                               : (s[k] >= '0' && s[k] <= '9'))) {
                ++k;
            }
            std::uint32_t value = 0;
            if (k > j && std::from_chars(s.data() + j, s.data() + k, value, base).ec == std::errc{}) {
                char32_t cp = value;
                if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
                    cp = 0xFFFD;
                }
                detail::append_utf8(out, cp);
                i = (k < s.size() && s[k] == ';') ? k + 1 : k;
                continue;
            }
            out += s[i++];
            continue;
        }
        std::size_t k = j;
        while (k < s.size() && is_alnum(s[k])) {
            ++k;
        }
        const auto name = s.substr(j, k - j);
        const bool terminated = k < s.size() && s[k] == ';';
        const auto it = std::find_if(kEntities.begin(), kEntities.end(), [&](const auto& e) { return e.name == name; });
        if (it != kEntities.end() && (terminated || one_of(name, kLegacyEntities))) {
            detail::append_utf8(out, it->cp);
            i = terminated ? k + 1 : k;
            continue;
        }
        out += s[i++];
    }
    return out;
}

struct Token {
    enum class Type { start_tag, end_tag, text, comment, doctype };
    Type type = Type::text;
    std::string name;
    std::vector<Attribute> attributes;
    std::string data;
};

class Tokenizer {
public:
    explicit Tokenizer(std::string_view input) : in_(input) {}

    std::optional<Token> next()
    {
        if (!pending_raw_.empty()) {
            return read_raw_text();
        }
        if (pos_ >= in_.size()) {
            return std::nullopt;
        }
        if (in_[pos_] == '<') {
            if (auto t = read_markup()) {
                return t;
            }
        }
        return read_text();
    }

private:
    std::optional<Token> read_markup()
    {
        const auto rest = in_.substr(pos_);
        if (rest.starts_with("<!--")) {
            const auto end = rest.find("-->", 4);
            Token t{Token::Type::comment, {}, {}, {}};
            if (end == std::string_view::npos) {
                t.data = std::string(rest.substr(4));
                pos_ = in_.size();
            } else {
                t.data = std::string(rest.substr(4, end - 4));
                pos_ += end + 3;
            }
            return t;
        }
        if (rest.starts_with("<!") || rest.starts_with("<?")) {
            const auto end = rest.find('>');
            pos_ = end == std::string_view::npos ? in_.size() : pos_ + end + 1;
            return Token{Token::Type::doctype, {}, {}, {}};
        }
        if (rest.starts_with("</")) {
            if (rest.size() > 2 && is_alpha(rest[2])) {
                std::size_t i = 2;
                std::string name;
                while (i < rest.size() && !is_ascii_space(rest[i]) && rest[i] != '>' && rest[i] != '/') {
                    name += rest[i++];
                }
                const auto end = rest.find('>', i);
                pos_ = end == std::string_view::npos ? in_.size() : pos_ + end + 1;
                return Token{Token::Type::end_tag, ascii_lower(name), {}, {}};
            }
            const auto end = rest.find('>');
            pos_ = end == std::string_view::npos ? in_.size() : pos_ + end + 1;
            return Token{Token::Type::doctype, {}, {}, {}};
        }
        if (rest.size() > 1 && is_alpha(rest[1])) {
            return read_start_tag();
        }
        return std::nullopt;
    }

    Token read_start_tag()
    {
        ++pos_;
        std::string name;
        while (pos_ < in_.size() && !is_ascii_space(in_[pos_]) && in_[pos_] != '>' && in_[pos_] != '/') {
            name += in_[pos_++];
        }
        Token t{Token::Type::start_tag, ascii_lower(name), {}, {}};
        while (pos_ < in_.size()) {
            while (pos_ < in_.size() && (is_ascii_space(in_[pos_]) || in_[pos_] == '/')) {
                ++pos_;
            }
            if (pos_ >= in_.size()) {
                break;
            }
            if (in_[pos_] == '>') {
                ++pos_;
                break;
            }
            std::string attr;
            while (pos_ < in_.size() && !is_ascii_space(in_[pos_]) && in_[pos_] != '=' && in_[pos_] != '>' &&
                   (in_[pos_] != '/' || attr.empty())) {
                attr += in_[pos_++];
            }
            while (pos_ < in_.size() && is_ascii_space(in_[pos_])) {
                ++pos_;
            }
            std::string value;
            if (pos_ < in_.size() && in_[pos_] == '=') {
                ++pos_;
                while (pos_ < in_.size() && is_ascii_space(in_[pos_])) {
                    ++pos_;
                }
                if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
                    const char quote = in_[pos_++];
                    const auto end = in_.find(quote, pos_);
                    const auto stop = end == std::string_view::npos ? in_.size() : end;
                    value = decode_entities(in_.substr(pos_, stop - pos_));
                    pos_ = end == std::string_view::npos ? in_.size() : end + 1;
                } else {
                    const auto start = pos_;
                    while (pos_ < in_.size() && !is_ascii_space(in_[pos_]) && in_[pos_] != '>') {
                        ++pos_;
                    }
                    value = decode_entities(in_.substr(start, pos_ - start));
                }
            }
            attr = ascii_lower(attr);
            const bool dup = std::any_of(t.attributes.begin(), t.attributes.end(),
                                         [&](const Attribute& a) { return a.name == attr; });
            if (!attr.empty() && !dup) {
                t.attributes.push_back({std::move(attr), std::move(value)});
            }
        }
        if (one_of(t.name, kRawTextTags)) {
            pending_raw_ = t.name;
            raw_decode_ = false;
        } else if (one_of(t.name, kRcDataTags)) {
            pending_raw_ = t.name;
            raw_decode_ = true;
        }
        return t;
    }

    Token read_raw_text()
    {
        const std::string name = std::move(pending_raw_);
        pending_raw_.clear();
        std::size_t search = pos_;
        std::size_t end = in_.size();
        while (search < in_.size()) {
            const auto lt = in_.find("</", search);
            if (lt == std::string_view::npos) {
                break;
            }
            const auto candidate = ascii_lower(in_.substr(lt + 2, name.size()));
            const auto after = lt + 2 + name.size();
            if (candidate == name &&
                (after >= in_.size() || is_ascii_space(in_[after]) || in_[after] == '>' || in_[after] == '/')) {
                end = lt;
                break;
            }
            search = lt + 2;
        }
        const auto raw = in_.substr(pos_, end - pos_);
        pos_ = end;
        return Token{Token::Type::text, {}, {}, raw_decode_ ? decode_entities(raw) : std::string(raw)};
    }

    Token read_text()
    {
        const auto start = pos_;
        ++pos_;  // consumes a literal '<' when markup did not parse
        while (pos_ < in_.size() && in_[pos_] != '<') {
            ++pos_;
        }
        return Token{Token::Type::text, {}, {}, decode_entities(in_.substr(start, pos_ - start))};
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    std::string pending_raw_;
    bool raw_decode_ = false;
};

bool all_space(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return is_ascii_space(c); });
}

class TreeBuilder {
public:
    void process(Token& t)
    {
        switch (t.type) {
        case Token::Type::doctype:
            return;
        case Token::Type::comment:
            if (html_) {
                b_.append_comment(current(), std::move(t.data));
            }
            return;
        case Token::Type::text:
            return on_text(t.data);
        case Token::Type::start_tag:
            return on_start(t);
        case Token::Type::end_tag:
            return on_end(t.name);
        }
    }

    DomTree finish(std::optional<std::string> url)
    {
        if (!html_) {
            throw Error(ErrorCode::EmptyDocument, "no element could be produced from the input");
        }
        ensure_body();
        return b_.finish(*html_, std::move(url));
    }

private:
    NodeId current() const { return stack_.back(); }
    const std::string& tag(NodeId id) const { return b_.node(id).tag; }
    bool current_is(std::string_view name) const { return !stack_.empty() && tag(current()) == name; }

    void ensure_html(std::vector<Attribute> attrs = {})
    {
        if (!html_) {
            html_ = b_.create_element("html", std::move(attrs));
            stack_.push_back(*html_);
        } else {
            merge_attributes(*html_, std::move(attrs));
        }
    }

    void ensure_head()
    {
        ensure_html();
        if (!head_) {
            head_ = b_.create_element("head");
            b_.append_child(*html_, *head_);
        }
    }

    void ensure_body(std::vector<Attribute> attrs = {})
    {
        ensure_head();
        if (!body_) {
            stack_.resize(1);  // leave head
            body_ = b_.create_element("body", std::move(attrs));
            b_.append_child(*html_, *body_);
            stack_.push_back(*body_);
        } else {
            merge_attributes(*body_, std::move(attrs));
        }
    }

    void merge_attributes(NodeId id, std::vector<Attribute> attrs)
    {
        auto& node = b_.node(id);
        for (auto& a : attrs) {
            if (!node.attribute(a.name)) {
                node.attributes.push_back(std::move(a));
            }
        }
    }

    void insert(const std::string& name, std::vector<Attribute> attrs)
    {
        const NodeId id = b_.create_element(name, std::move(attrs));
        b_.append_child(current(), id);
        if (!one_of(name, kVoidTags)) {
            stack_.push_back(id);
        }
    }

    void on_text(const std::string& text)
    {
        if (!body_) {
            const bool at_top = !html_ || current() == *html_ || (head_ && current() == *head_);
            if (at_top) {
                if (all_space(text)) {
                    return;
                }
                ensure_body();
            }
        }
        b_.append_text(current(), text);
    }

    bool in_scope(std::string_view name, std::initializer_list<std::string_view> extra_boundaries = {}) const
    {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            const auto& t = tag(*it);
            if (t == name) {
                return true;
            }
            if (one_of(t, kDefaultScope) ||
                std::find(extra_boundaries.begin(), extra_boundaries.end(), t) != extra_boundaries.end()) {
                return false;
            }
        }
        return false;
    }

    bool in_table_scope(std::string_view name) const
    {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            const auto& t = tag(*it);
            if (t == name) {
                return true;
            }
            if (t == "html" || t == "table" || t == "template") {
                return false;
            }
        }
        return false;
    }

    // Pops until an element named `name` has been popped. Never pops body/html.
    void pop_until(std::string_view name)
    {
        while (stack_.size() > 2 || (stack_.size() > 1 && !body_)) {
            const bool hit = tag(current()) == name;
            stack_.pop_back();
            if (hit) {
                return;
            }
        }
    }

    template <std::size_t N>
    void pop_until_any(const std::array<std::string_view, N>& names)
    {
        while (stack_.size() > 2) {
            const bool hit = one_of(tag(current()), names);
            stack_.pop_back();
            if (hit) {
                return;
            }
        }
    }

    void generate_implied_end_tags(std::string_view except = {})
    {
        while (stack_.size() > 2 && one_of(tag(current()), kImpliedEnd) && tag(current()) != except) {
            stack_.pop_back();
        }
    }

    void close_p()
    {
        generate_implied_end_tags("p");
        pop_until("p");
    }

    void close_list_item(std::initializer_list<std::string_view> items)
    {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            const auto& t = tag(*it);
            if (std::find(items.begin(), items.end(), t) != items.end()) {
                const std::string name = t;
                generate_implied_end_tags(name);
                pop_until(name);
                return;
            }
            if (one_of(t, kSpecial) && t != "address" && t != "div" && t != "p") {
                return;
            }
        }
    }

    void on_start(Token& t)
    {
        const std::string& name = t.name;
        if (name == "html") {
            ensure_html(std::move(t.attributes));
            return;
        }
        if (!body_) {
            if (name == "head") {
                ensure_head();
                if (stack_.size() == 1) {
                    stack_.push_back(*head_);
                }
                return;
            }
            if (one_of(name, kHeadTags)) {
                ensure_head();
                if (stack_.size() == 1) {
                    stack_.push_back(*head_);
                }
                insert(name, std::move(t.attributes));
                return;
            }
            if (name == "body") {
                ensure_body(std::move(t.attributes));
                return;
            }
            ensure_body();
        }
        if (name == "body") {
            merge_attributes(*body_, std::move(t.attributes));
            return;
        }
        if (name == "head") {
            return;
        }
        if (one_of(name, kClosesP) && in_scope("p", {"button"})) {
            close_p();
        }
        if (one_of(name, kHeadings) && one_of(tag(current()), kHeadings)) {
            stack_.pop_back();
        }
        if (name == "li") {
            close_list_item({"li"});
        } else if (name == "dd" || name == "dt") {
            close_list_item({"dd", "dt"});
        } else if (name == "a") {
            for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
                if (tag(*it) == "a") {
                    pop_until("a");
                    break;
                }
                if (one_of(tag(*it), kSpecial)) {
                    break;
                }
            }
        } else if (name == "option") {
            if (current_is("option")) {
                stack_.pop_back();
            }
        } else if (name == "tbody" || name == "thead" || name == "tfoot") {
            if (!in_table_scope("table")) {
                return;
            }
            while (!current_is("table")) {
                stack_.pop_back();
            }
        } else if (name == "tr") {
            if (!in_table_scope("table")) {
                return;
            }
            while (!current_is("table") && !one_of(tag(current()), kTableSections)) {
                stack_.pop_back();
            }
            if (current_is("table")) {
                insert("tbody", {});
            }
        } else if (name == "td" || name == "th") {
            if (!in_table_scope("table")) {
                return;
            }
            if (in_table_scope("td") || in_table_scope("th")) {
                generate_implied_end_tags();
                pop_until_any(std::array{"td"sv, "th"sv});
            }
            while (!current_is("table") && !current_is("tr") && !one_of(tag(current()), kTableSections)) {
                stack_.pop_back();
            }
            if (current_is("table")) {
                insert("tbody", {});
            }
            if (!current_is("tr")) {
                insert("tr", {});
            }
        }
        insert(name, std::move(t.attributes));
    }

    void on_end(const std::string& name)
    {
        if (name == "html" || name == "body") {
            return;
        }
        if (!body_) {
            if (name == "head") {
                if (head_ && current() == *head_) {
                    stack_.pop_back();
                }
                return;
            }
            if (stack_.size() > 1 && current_is(name)) {
                stack_.pop_back();
                return;
            }
            if (name != "br" && name != "p") {
                return;
            }
            ensure_body();
        }
        if (name == "br") {
            insert("br", {});
            return;
        }
        if (name == "p") {
            if (!in_scope("p", {"button"})) {
                insert("p", {});
                stack_.pop_back();
                return;
            }
            close_p();
            return;
        }
        if (name == "li") {
            if (in_scope("li", {"ol", "ul"})) {
                generate_implied_end_tags("li");
                pop_until("li");
            }
            return;
        }
        if (name == "dd" || name == "dt") {
            if (in_scope(name)) {
                generate_implied_end_tags(name);
                pop_until(name);
            }
            return;
        }
        if (one_of(name, kHeadings)) {
            const bool any = std::any_of(kHeadings.begin(), kHeadings.end(), [&](auto h) { return in_scope(h); });
            if (any) {
                generate_implied_end_tags();
                pop_until_any(kHeadings);
            }
            return;
        }
        if (name == "table" || name == "tbody" || name == "thead" || name == "tfoot" || name == "tr" ||
            name == "td" || name == "th") {
            if (in_table_scope(name)) {
                pop_until(name);
            }
            return;
        }
        if (one_of(name, kSpecial)) {
            if (in_scope(name)) {
                generate_implied_end_tags(name);
                pop_until(name);
            }
            return;
        }
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            const auto& t = tag(*it);
            if (t == name) {
                pop_until(name);
                return;
            }
            if (one_of(t, kSpecial)) {
                return;
            }
        }
    }

    DomBuilder b_;
    std::optional<NodeId> html_;
    std::optional<NodeId> head_;
    std::optional<NodeId> body_;
    std::vector<NodeId> stack_;
};

}  // namespace

DomTree parse_html(std::string_view bytes, std::optional<std::string> base_url)
{
    const std::string text = detail::decode_to_utf8(bytes);
    Tokenizer tokenizer(text);
    TreeBuilder builder;
    bool saw_content = false;
    while (auto token = tokenizer.next()) {
        if (token->type == Token::Type::start_tag || token->type == Token::Type::end_tag ||
            (token->type == Token::Type::text && !all_space(token->data))) {
            saw_content = true;
        }
        builder.process(*token);
    }
    if (!saw_content) {
        throw Error(ErrorCode::EmptyDocument, "input contains no markup or text");
    }
    return builder.finish(std::move(base_url));
}

}  // namespace blogext
