#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "blogext/candidates.hpp"
#include "blogext/corpus.hpp"
#include "blogext/error.hpp"
#include "rng.hpp"

namespace blogext {

namespace {

using detail::Rng;

constexpr std::string_view kTitleMark = " data-bx=\"t\"";
constexpr std::string_view kBodyMark = " data-bx=\"b\"";

const std::vector<std::string> kWords = {
    "morning", "coffee", "river",   "garden",  "journey", "winter",  "summer",   "kitchen", "recipe",  "bread",
    "market",  "street", "city",    "village", "mountain", "forest", "ocean",    "harbor",  "train",   "station",
    "letter",  "friend", "family",  "weekend", "holiday", "project", "software", "design",  "camera",  "photo",
    "light",   "shadow", "window",  "door",    "table",   "chair",   "book",     "chapter", "story",   "music",
    "guitar",  "piano",  "concert", "evening", "night",   "dream",   "memory",   "history", "museum",  "bridge",
    "road",    "bike",   "walk",    "run",     "swim",    "climb",   "cook",     "bake",    "write",   "read",
    "think",   "learn",  "build",   "fix",     "paint",   "draw",    "travel",   "visit",   "return",  "leave",
    "small",   "large",  "quiet",   "loud",    "bright",  "dark",    "warm",     "cold",    "early",   "late",
    "simple",  "strange", "happy",  "tired",   "busy",    "slow",    "quick",    "little",  "old",     "new",
    "really",  "almost", "always",  "never",   "often",   "today",   "finally",  "again",   "together", "still",
    "the",     "a",      "of",      "and",     "to",      "in",      "with",     "for",     "on",      "about",
    "we",      "I",      "it",      "they",    "our",     "my",      "this",     "that",    "some",    "every",
    "was",     "is",     "had",     "made",    "found",   "took",    "saw",      "went",    "came",    "got"};

const std::vector<std::string> kTitleWords = {
    "Notes",   "Thoughts", "Days",    "Lessons", "Return",  "Weekend", "Morning", "Trip",     "Recipe",
    "Garden",  "Winter",   "Summer",  "Harbor",  "Market",  "Light",   "Letters", "Journey",  "Bread",
    "Project", "Camera",   "Station", "Village", "Concert", "Evening", "Walk",    "Mountain", "River",
    "Small",   "Quiet",    "Strange", "First",   "Last",    "Long",    "Short",   "Better",   "Simple",
    "My",      "Our",      "The",     "A",       "On",      "In",      "After",   "Before",   "Without"};

const std::vector<std::string> kCjkChars = {
    "我", "们", "今", "天", "的", "一", "个", "人", "在", "这", "里", "有", "很", "多", "好", "看", "到",
    "了", "生", "活", "时", "间", "工", "作", "学", "习", "朋", "友", "家", "城", "市", "山", "水", "花",
    "春", "夏", "秋", "冬", "早", "晚", "吃", "饭", "茶", "书", "写", "字", "路", "上", "走", "来", "去",
    "想", "说", "心", "情", "日", "记", "旅", "行", "风", "景", "雨", "雪", "光", "影", "音", "乐", "电",
    "影", "周", "末", "回", "忆", "故", "事", "新", "年", "老", "街", "小", "大", "海", "边", "车", "站"};

const std::vector<std::string> kMonths = {"January", "February", "March",     "April",   "May",      "June",
                                          "July",    "August",   "September", "October", "November", "December"};

const std::vector<std::string> kNames = {"Anna", "Ben", "Chloe", "David", "Emma", "Felix", "Grace", "Hugo"};

std::string capitalized(std::string w)
{
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') {
        w[0] = static_cast<char>(w[0] - 'a' + 'A');
    }
    return w;
}

std::string words(Rng& rng, int n)
{
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += rng.pick(kWords);
    }
    return out;
}

std::string sentence(Rng& rng)
{
    const int n = rng.between(7, 16);
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += (i > 3 && rng.chance(0.12)) ? ", " : " ";
        out += i == 0 ? capitalized(rng.pick(kWords)) : rng.pick(kWords);
    }
    const double r = rng.unit();
    out += r < 0.8 ? "." : (r < 0.9 ? "!" : "?");
    return out;
}

std::string paragraph(Rng& rng, int min_sentences, int max_sentences)
{
    std::string out;
    const int n = rng.between(min_sentences, max_sentences);
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += sentence(rng);
    }
    return out;
}

std::string title_text(Rng& rng)
{
    const int n = rng.between(3, 8);
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += i == 0 || rng.chance(0.6) ? rng.pick(kTitleWords) : rng.pick(kWords);
    }
    if (rng.chance(0.1)) out += "?";
    if (rng.chance(0.06)) out += "!";
    return out;
}

std::string cjk_run(Rng& rng, int n)
{
    std::string out;
    for (int i = 0; i < n; ++i) out += rng.pick(kCjkChars);
    return out;
}

std::string cjk_paragraph(Rng& rng, int min_clauses, int max_clauses)
{
    std::string out;
    const int n = rng.between(min_clauses, max_clauses);
    for (int i = 0; i < n; ++i) {
        out += cjk_run(rng, rng.between(6, 18));
        out += (i + 1 == n || rng.chance(0.3)) ? "。" : (rng.chance(0.2) ? "、" : "，");
    }
    return out;
}

std::string slug(const std::string& text)
{
    std::string out;
    for (char c : text) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            out += c;
        } else if (c >= 'A' && c <= 'Z') {
            out += static_cast<char>(c - 'A' + 'a');
        } else if (c == ' ' && !out.empty() && out.back() != '-') {
            out += '-';
        }
    }
    return out.empty() ? "post" : out;
}

std::string date_text(Rng& rng, bool iso)
{
    const int year = rng.between(2008, 2012);
    const int month = rng.between(1, 12);
    const int day = rng.between(1, 28);
    char buf[40];
    if (iso) {
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%s %d, %d", kMonths[static_cast<std::size_t>(month - 1)].c_str(), day, year);
    return buf;
}

// Everything a template needs while writing one page.
struct PageCtx {
    Rng& rng;  // page stream
    Rng& site_rng;  // reseeded per page so site chrome is identical on every page
    std::string domain;
    std::string blog_name;
    int posts = 3;
    std::size_t page_index = 0;
    std::string html;

    void add(std::string_view s) { html += s; }
    std::string permalink(const std::string& title)
    {
        return "/" + std::to_string(rng.between(2008, 2012)) + "/" + std::to_string(rng.between(10, 12)) + "/" +
               slug(title) + ".html";
    }
};

void open_doc(PageCtx& p, std::string_view extra_head = {})
{
    p.add("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>");
    p.add(p.blog_name);
    p.add("</title>\n<style>body{font-family:Georgia}</style>\n");
    p.add(extra_head);
    p.add("</head>\n<body>\n");
}

void close_doc(PageCtx& p)
{
    p.add("<script>var _track = 1;</script>\n</body>\n</html>\n");
}

void nav_list(PageCtx& p, Rng& chrome, int n)
{
    p.add("<ul class=\"nav\">");
    for (int i = 0; i < n; ++i) {
        p.add("<li><a href=\"/" + slug(chrome.pick(kTitleWords)) + "\">" + capitalized(chrome.pick(kWords)) +
              "</a></li>");
    }
    p.add("</ul>\n");
}

void link_widget(PageCtx& p, Rng& chrome, const char* tag, const std::string& heading, int n, bool external)
{
    p.add("<div class=\"widget\"><" + std::string(tag) + ">" + heading + "</" + tag + "><ul>");
    for (int i = 0; i < n; ++i) {
        const std::string text = capitalized(words(chrome, chrome.between(1, 3)));
        const std::string href =
            external ? "http://" + slug(chrome.pick(kWords)) + "-" + slug(chrome.pick(kWords)) + ".example.org/"
                     : "/archive/" + std::to_string(2008 + i) + "/";
        p.add("<li><a href=\"" + href + "\">" + text + "</a></li>");
    }
    p.add("</ul></div>\n");
}

void about_widget(PageCtx& p, Rng& chrome, const char* tag)
{
    p.add("<div class=\"widget\"><" + std::string(tag) + ">About me</" + tag + "><p>" + paragraph(chrome, 2, 3) +
          "</p></div>\n");
}

void ad_block(PageCtx& p)
{
    p.add("<div class=\"ad\"><a href=\"http://ads.adnetwork.example.com/c?" + std::to_string(p.rng.between(1, 9999)) +
          "\">" + capitalized(words(p.rng, p.rng.between(3, 6))) + "</a> <span>Sponsored</span></div>\n");
}

void footer(PageCtx& p)
{
    p.add("<div class=\"footer\"><p>Copyright 2012 " + p.blog_name +
          ". Powered by <a href=\"http://www.blogger.com/\">Blogger</a>.</p></div>\n");
}

// Single fixed-width column of <article> posts: linked h2 titles, date line,
// paragraphs, footer.
void template_plain(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div id=\"header\"><h1><a href=\"/\">" + p.blog_name + "</a></h1><p class=\"description\">" +
          capitalized(words(chrome, 6)) + "</p></div>\n");
    nav_list(p, chrome, 5);
    p.add("<div id=\"main\" style=\"width:620px\">\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = title_text(p.rng);
        p.add("<article class=\"post\">\n<header><h2" + std::string(kTitleMark) + "><a href=\"" +
              p.permalink(title) + "\">" + title + "</a></h2>\n");
        p.add("<div class=\"date\">" + date_text(p.rng, false) + "</div></header>\n");
        p.add("<div class=\"entry\"" + std::string(kBodyMark) + ">\n");
        const int paras = p.rng.between(4, 9);
        for (int k = 0; k < paras; ++k) {
            p.add("<p>" + paragraph(p.rng, 3, 8) + "</p>\n");
        }
        p.add("</div>\n<footer>Posted by <a href=\"/profile\">" + p.rng.pick(kNames) + "</a> | <a href=\"/comments\">" +
              std::to_string(p.rng.between(0, 30)) + " comments</a></footer>\n</article>\n");
    }
    p.add("</div>\n");
    footer(p);
    close_doc(p);
}

// Two table columns, sidebar on the right; h3 titles; body text broken by <br>.
void template_table_right(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div class=\"banner\"><h1 style=\"font-size:28px\">" + p.blog_name + "</h1></div>\n");
    p.add("<table width=\"100%\"><tr><td width=\"70%\">\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = title_text(p.rng);
        p.add("<h3" + std::string(kTitleMark) + "><a href=\"http://" + p.domain + p.permalink(title) + "\">" + title +
              "</a></h3>\n");
        p.add("<div class=\"post-body\"" + std::string(kBodyMark) + ">");
        const int lines = p.rng.between(3, 5);
        for (int k = 0; k < lines; ++k) {
            if (k) p.add("<br>\n");
            p.add(paragraph(p.rng, 1, 3));
        }
        p.add("</div>\n<div class=\"post-meta\"><span>" + date_text(p.rng, true) +
              "</span> <a href=\"/comments\">Comments (" + std::to_string(p.rng.between(0, 9)) + ")</a></div>\n");
    }
    p.add("</td><td>\n");
    about_widget(p, chrome, "h3");
    link_widget(p, chrome, "h3", "Archives", 6, false);
    link_widget(p, chrome, "h3", "Blogroll", 5, true);
    p.add("</td></tr></table>\n");
    footer(p);
    close_doc(p);
}

// Left sidebar, unlinked styled h1 titles, ads between posts, single-p bodies.
void template_table_left_ads(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<table width=\"100%\"><tr><td width=\"25%\">\n");
    p.add("<div class=\"logo\"><a href=\"/\"><b>" + p.blog_name + "</b></a></div>\n");
    link_widget(p, chrome, "h4", "Categories:", 7, false);
    link_widget(p, chrome, "h4", "Friends:", 4, true);
    p.add("</td><td>\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = title_text(p.rng);
        p.add("<h1 style=\"font-size:22px\"" + std::string(kTitleMark) + ">" + title + "</h1>\n");
        p.add("<div class=\"byline\">by " + p.rng.pick(kNames) + " on " + date_text(p.rng, false) + "</div>\n");
        // Some posts are short notes.
        const bool note = p.rng.chance(0.1);
        p.add("<div class=\"entry\"" + std::string(kBodyMark) + "><p>" +
              (note ? paragraph(p.rng, 2, 3) : paragraph(p.rng, 4, 8)) + "</p></div>\n");
        if (i + 1 < p.posts && p.rng.chance(0.6)) {
            ad_block(p);
        }
    }
    p.add("</td></tr></table>\n");
    close_doc(p);
}

// Stream of list-item boxes; titles are bare styled anchors.
void template_anchor_titles(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div class=\"top\"><span style=\"font-size:30px\">" + p.blog_name + "</span></div>\n");
    nav_list(p, chrome, 4);
    p.add("<ul class=\"stream\" style=\"width:760px\">\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = title_text(p.rng);
        p.add("<li class=\"box\">\n<a class=\"t\" style=\"font-size:20px\" href=\"" + p.permalink(title) + "\"" +
              std::string(kTitleMark) + ">" + title + "</a>\n");
        p.add("<div class=\"meta\">" + date_text(p.rng, true) + " &middot; " + p.rng.pick(kNames) + "</div>\n");
        p.add("<div class=\"text\"" + std::string(kBodyMark) + ">");
        const int paras = p.rng.between(2, 4);
        for (int k = 0; k < paras; ++k) {
            p.add("<p>" + paragraph(p.rng, 3, 6) + "</p>");
        }
        p.add("</div>\n<div class=\"tags\">Tags: <a href=\"/t/1\">" + p.rng.pick(kWords) + "</a>, <a href=\"/t/2\">" +
              p.rng.pick(kWords) + "</a></div>\n</li>\n");
    }
    p.add("</ul>\n");
    footer(p);
    close_doc(p);
}

// Chinese-language blog with a right sidebar.
void template_cjk(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div id=\"head\"><h1><a href=\"/\">" + p.blog_name + "</a></h1></div>\n");
    p.add("<table width=\"100%\"><tr><td width=\"72%\">\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = cjk_run(p.rng, p.rng.between(5, 12));
        p.add("<h2" + std::string(kTitleMark) + "><a href=\"/post/" +
              std::to_string(p.rng.between(1000, 9999)) + ".html\">" + title + "</a></h2>\n");
        p.add("<span class=\"time\">" + date_text(p.rng, true) + "</span>\n");
        p.add("<div class=\"content\"" + std::string(kBodyMark) + ">");
        const int paras = p.rng.between(2, 3);
        for (int k = 0; k < paras; ++k) {
            p.add("<p>" + cjk_paragraph(p.rng, 4, 8) + "</p>");
        }
        p.add("</div>\n<div class=\"info\">阅读(" + std::to_string(p.rng.between(10, 999)) +
              ") <a href=\"/comment\">评论</a></div>\n");
    }
    p.add("</td><td>\n");
    p.add("<div class=\"widget\"><h3>关于我</h3><p>" + cjk_paragraph(chrome, 2, 3) + "</p></div>\n");
    p.add("<div class=\"widget\"><h3>分类</h3><ul>");
    for (int i = 0; i < 6; ++i) {
        p.add("<li><a href=\"/c/" + std::to_string(i) + "\">" + cjk_run(chrome, 2) + "</a></li>");
    }
    p.add("</ul></div>\n</td></tr></table>\n");
    p.add("<div class=\"footer\"><p>版权所有 " + p.blog_name + "</p></div>\n");
    close_doc(p);
}

// Front page of excerpts ending in an ellipsis, each with a read-more link.
void template_excerpts(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div id=\"header\"><h1><a href=\"/\">" + p.blog_name + "</a></h1></div>\n");
    nav_list(p, chrome, 6);
    p.add("<table width=\"100%\"><tr><td width=\"68%\">\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = title_text(p.rng);
        const std::string link = p.permalink(title);
        p.add("<h2 class=\"entry-title\"" + std::string(kTitleMark) + "><a href=\"" + link + "\">" + title +
              "</a></h2>\n");
        p.add("<p class=\"excerpt\"" + std::string(kBodyMark) + ">" + paragraph(p.rng, 3, 6) + " " +
              words(p.rng, p.rng.between(3, 8)) + "...</p>\n");
        p.add("<p class=\"more\"><a href=\"" + link + "\">Read more &raquo;</a></p>\n");
    }
    p.add("</td><td>\n");
    link_widget(p, chrome, "h2", "Recent posts", 5, false);
    about_widget(p, chrome, "h2");
    p.add("</td></tr></table>\n");
    footer(p);
    close_doc(p);
}

// Magazine grid: two posts side by side per table row.
void template_magazine(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div class=\"masthead\"><h1 style=\"font-size:36px\">" + p.blog_name + "</h1><p>" +
          capitalized(words(chrome, 5)) + "</p></div>\n");
    nav_list(p, chrome, 5);
    p.add("<table width=\"100%\">\n");
    for (int i = 0; i < p.posts; i += 2) {
        p.add("<tr>");
        for (int j = i; j < std::min(i + 2, p.posts); ++j) {
            const std::string title = title_text(p.rng);
            p.add("<td width=\"50%\"><h3" + std::string(kTitleMark) + "><a href=\"" + p.permalink(title) + "\">" +
                  title + "</a></h3>");
            p.add("<div class=\"summary\"" + std::string(kBodyMark) + "><p>" + paragraph(p.rng, 2, 3) + "</p><p>" +
                  paragraph(p.rng, 1, 3) + "</p></div>");
            p.add("<div class=\"small\">" + date_text(p.rng, false) + "</div></td>");
        }
        p.add("</tr>\n");
    }
    p.add("</table>\n");
    ad_block(p);
    footer(p);
    close_doc(p);
}

// Date above the title, wrapped title anchors, span bodies, tag lines.
void template_dated(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div class=\"header\"><div class=\"name\" style=\"font-size:26px\"><a href=\"/\">" + p.blog_name +
          "</a></div></div>\n");
    p.add("<table width=\"100%\"><tr><td width=\"20%\">\n");
    link_widget(p, chrome, "h5", "Pages", 5, false);
    p.add("</td><td width=\"60%\">\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = title_text(p.rng);
        p.add("<div class=\"day\">" + date_text(p.rng, false) + "</div>\n");
        p.add("<div class=\"post-title\" style=\"font-size:18px\"" + std::string(kTitleMark) + "><a href=\"" +
              p.permalink(title) + "\">" + title + "</a></div>\n");
        const bool note = p.rng.chance(0.1);
        p.add("<span class=\"entry\"" + std::string(kBodyMark) + ">" +
              (note ? paragraph(p.rng, 2, 3) : paragraph(p.rng, 4, 7)) + "</span>\n");
        p.add("<div class=\"tags\">Filed under <a href=\"/t\">" + p.rng.pick(kWords) + "</a>; " +
              std::to_string(p.rng.between(0, 12)) + " responses</div>\n");
    }
    p.add("</td><td>\n");
    about_widget(p, chrome, "h5");
    ad_block(p);
    p.add("</td></tr></table>\n");
    close_doc(p);
}

// Chinese excerpt list with h4 titles and full-width ellipses.
void template_cjk_excerpts(PageCtx& p)
{
    open_doc(p);
    Rng& chrome = p.site_rng;
    p.add("<div class=\"title-bar\"><h1><a href=\"/\">" + p.blog_name + "</a></h1><p>" + cjk_run(chrome, 10) +
          "</p></div>\n");
    p.add("<div class=\"menu\">");
    for (int i = 0; i < 5; ++i) {
        p.add("<a href=\"/m/" + std::to_string(i) + "\">" + cjk_run(chrome, 2) + "</a> ");
    }
    p.add("</div>\n");
    for (int i = 0; i < p.posts; ++i) {
        const std::string title = cjk_run(p.rng, p.rng.between(6, 14));
        p.add("<div class=\"item\">\n<h4 style=\"font-size:18px\"" + std::string(kTitleMark) + "><a href=\"/blog/" +
              std::to_string(p.rng.between(100, 999)) + "\">" + title + "</a></h4>\n");
        p.add("<div class=\"desc\"" + std::string(kBodyMark) + ">" + cjk_paragraph(p.rng, 5, 9) + cjk_run(p.rng, 6) +
              "……</div>\n");
        p.add("<p class=\"foot\">" + date_text(p.rng, true) + " | <a href=\"/blog/more\">阅读全文</a></p>\n</div>\n");
    }
    p.add("<div class=\"links\"><h4>友情链接</h4><a href=\"http://friends.example.net/\">" + cjk_run(chrome, 4) +
          "</a></div>\n");
    close_doc(p);
}

using TemplateFn = void (*)(PageCtx&);

constexpr std::array<TemplateFn, 9> kTemplates = {
    template_plain,       template_table_right, template_table_left_ads, template_anchor_titles, template_cjk,
    template_excerpts,    template_magazine,    template_dated,          template_cjk_excerpts};

constexpr std::array<std::string_view, 9> kTemplateNames = {"plain",    "sidebar", "leftads", "anchors", "cjk",
                                                            "excerpts", "grid",    "dated",   "cjklist"};

std::string erase_all(std::string s, std::string_view what)
{
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (true) {
        const auto hit = s.find(what, pos);
        out.append(s, pos, hit == std::string::npos ? std::string::npos : hit - pos);
        if (hit == std::string::npos) break;
        pos = hit + what.size();
    }
    return out;
}

void collect_labels(const std::string& marked, LabeledPage& page)
{
    const DomTree tree = parse_html(marked, page.url);
    const TextIndex text(tree);
    for (NodeId id : tree.document_order()) {
        const auto mark = tree.node(id).attribute("data-bx");
        if (!mark) {
            continue;
        }
        if (*mark == "t") {
            const auto c = canonical_title_node(tree, text, id);
            if (!c) {
                throw Error(ErrorCode::UnresolvedLabel, "generator produced an unusable title in " + page.html_path);
            }
            page.title_paths.push_back(path_of(tree, *c));
        } else {
            page.body_paths.push_back(path_of(tree, id));
        }
    }
}

}  // namespace

Corpus generate_synthetic_corpus(std::uint64_t seed, std::size_t n_sites, std::size_t pages_per_site,
                                 std::pair<int, int> posts_per_page)
{
    if (n_sites == 0) {
        throw Error(ErrorCode::InvalidArgument, "n_sites must be at least 1");
    }
    if (posts_per_page.first < 1 || posts_per_page.second < posts_per_page.first) {
        throw Error(ErrorCode::InvalidArgument, "posts per page range must satisfy 1 <= min <= max");
    }
    Corpus corpus;
    corpus.pages.reserve(n_sites * pages_per_site);
    for (std::size_t s = 0; s < n_sites; ++s) {
        const auto kind = s % kTemplates.size();
        char site_id[32];
        std::snprintf(site_id, sizeof site_id, "s%02zu-%s", s + 1, kTemplateNames[kind].data());
        Rng naming(detail::mix_seed(seed, 1, s));
        const bool cjk = kind == 4 || kind == 8;
        const std::string blog_name = cjk ? cjk_run(naming, 4) + "的博客"
                                          : capitalized(naming.pick(kWords)) + " " +
                                                capitalized(naming.pick(kTitleWords)) + " Blog";
        const std::string domain = slug(naming.pick(kWords)) + "-" + slug(naming.pick(kWords)) +
                                   (s % 3 == 1 ? ".blogspot.com" : (s % 3 == 2 ? ".wordpress.com" : ".example.com"));
        const auto chrome_seed = detail::mix_seed(seed, 2, s);
        for (std::size_t i = 0; i < pages_per_site; ++i) {
            Rng rng(detail::mix_seed(seed, 3, s, i));
            Rng chrome(chrome_seed);
            PageCtx ctx{rng, chrome, domain, blog_name, rng.between(posts_per_page.first, posts_per_page.second), i, {}};
            kTemplates[kind](ctx);

            LabeledPage page;
            char name[64];
            std::snprintf(name, sizeof name, "%s/page-%04zu.html", site_id, i + 1);
            page.html_path = name;
            page.url = "http://" + domain + "/page/" + std::to_string(i + 1);
            page.site_id = site_id;
            collect_labels(ctx.html, page);
            page.html = erase_all(erase_all(std::move(ctx.html), kTitleMark), kBodyMark);
            corpus.pages.push_back(std::move(page));
        }
    }
    index_sites(corpus);
    return corpus;
}

}  // namespace blogext
