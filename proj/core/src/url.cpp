#include <algorithm>
#include <array>
#include <string>

#include "blogext/features.hpp"

namespace blogext {

namespace {

using namespace std::string_view_literals;

// Two-label public suffixes plus a few hosted-blog platforms whose
// subdomains belong to different owners.
constexpr std::array kMultiLabelSuffixes = {
    "co.uk"sv,  "org.uk"sv, "ac.uk"sv,  "gov.uk"sv, "me.uk"sv,  "com.cn"sv, "net.cn"sv, "org.cn"sv,
    "gov.cn"sv, "edu.cn"sv, "com.au"sv, "net.au"sv, "org.au"sv, "co.jp"sv,  "ne.jp"sv,  "or.jp"sv,
    "co.kr"sv,  "com.br"sv, "com.tw"sv, "com.hk"sv, "co.nz"sv,  "co.in"sv,  "com.sg"sv, "com.mx"sv,
    "blogspot.com"sv, "wordpress.com"sv, "github.io"sv, "tumblr.com"sv, "livejournal.com"sv};

bool is_ipv4(std::string_view host)
{
    return !host.empty() && std::all_of(host.begin(), host.end(), [](char c) { return (c >= '0' && c <= '9') || c == '.'; });
}

}  // namespace

std::string url_host(std::string_view url)
{
    const auto scheme_end = url.find("://");
    std::string_view rest;
    if (url.starts_with("//")) {
        rest = url.substr(2);
    } else if (scheme_end != std::string_view::npos) {
        const auto scheme = ascii_lower(url.substr(0, scheme_end));
        if (scheme != "http" && scheme != "https") {
            return {};
        }
        rest = url.substr(scheme_end + 3);
    } else {
        return {};
    }
    auto end = rest.find_first_of("/?#");
    auto authority = rest.substr(0, end);
    if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
        authority.remove_prefix(at + 1);
    }
    if (const auto colon = authority.find(':'); colon != std::string_view::npos) {
        authority = authority.substr(0, colon);
    }
    while (authority.ends_with('.')) {
        authority.remove_suffix(1);
    }
    return ascii_lower(authority);
}

std::string registrable_domain(std::string_view host)
{
    std::string h = ascii_lower(host);
    if (h.starts_with("www.")) {
        h.erase(0, 4);
    }
    if (is_ipv4(h)) {
        return h;
    }
    std::vector<std::size_t> dots;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] == '.') {
            dots.push_back(i);
        }
    }
    if (dots.size() < 2) {
        return h;
    }
    const std::string_view last_two = std::string_view(h).substr(dots[dots.size() - 2] + 1);
    const bool multi = std::find(kMultiLabelSuffixes.begin(), kMultiLabelSuffixes.end(), last_two) !=
                       kMultiLabelSuffixes.end();
    if (!multi) {
        return std::string(last_two);
    }
    if (dots.size() < 3) {
        return h;
    }
    return h.substr(dots[dots.size() - 3] + 1);
}

}  // namespace blogext
