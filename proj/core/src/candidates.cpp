#include "blogext/candidates.hpp"

#include <algorithm>

namespace blogext {

namespace {

bool has_own_text(const DomTree& tree, NodeId id)
{
    for (NodeId c : tree.node(id).children) {
        const auto& child = tree.node(c);
        if (child.is_text() && child.rendered &&
            std::any_of(child.text.begin(), child.text.end(), [](char ch) { return !is_ascii_space(ch); })) {
            return true;
        }
    }
    return false;
}

// The only text-bearing child element, if the node has no own text and its
// whole text sits in that child.
std::optional<NodeId> sole_text_child(const DomTree& tree, const TextIndex& text, NodeId id)
{
    if (has_own_text(tree, id)) {
        return std::nullopt;
    }
    std::optional<NodeId> found;
    for (NodeId c : tree.node(id).children) {
        const auto& child = tree.node(c);
        if (!child.is_element() || !child.rendered || text.text(c).empty()) {
            continue;
        }
        if (found) {
            return std::nullopt;
        }
        found = c;
    }
    if (found && text.text(*found) == text.text(id)) {
        return found;
    }
    return std::nullopt;
}

bool title_eligible(const DomTree& tree, const TextIndex& text, NodeId id)
{
    const auto& n = tree.node(id);
    return n.is_element() && n.rendered && !text.text(id).empty() && n.tag != "html" && n.tag != "head" &&
           n.tag != "body";
}

}  // namespace

TextIndex::TextIndex(const DomTree& tree) : texts_(tree.size())
{
    for (NodeId id = 0; id < tree.size(); ++id) {
        if (tree.node(id).kind != NodeKind::comment) {
            texts_[id] = text_content(tree, id);
        }
    }
}

bool is_body_tag(const std::string& tag) noexcept
{
    return tag == "div" || tag == "span" || tag == "p";
}

CandidateSet title_candidates(const DomTree& tree)
{
    return title_candidates(tree, TextIndex(tree));
}

CandidateSet title_candidates(const DomTree& tree, const TextIndex& text)
{
    CandidateSet set{CandidateKind::title, {}};
    for (NodeId id : tree.document_order()) {
        if (title_eligible(tree, text, id) && !sole_text_child(tree, text, id)) {
            set.nodes.push_back(id);
        }
    }
    return set;
}

CandidateSet body_candidates(const DomTree& tree)
{
    CandidateSet set{CandidateKind::body, {}};
    for (NodeId id : tree.document_order()) {
        const auto& n = tree.node(id);
        if (n.is_element() && n.rendered && is_body_tag(n.tag)) {
            set.nodes.push_back(id);
        }
    }
    return set;
}

std::optional<NodeId> canonical_title_node(const DomTree& tree, const TextIndex& text, NodeId node)
{
    NodeId cur = node;
    while (title_eligible(tree, text, cur)) {
        const auto child = sole_text_child(tree, text, cur);
        if (!child) {
            return cur;
        }
        cur = *child;
    }
    return std::nullopt;
}

NodeId canonical_body_node(const DomTree& tree, const TextIndex& text, NodeId node)
{
    NodeId cur = node;
    while (!text.text(cur).empty()) {
        const auto child = sole_text_child(tree, text, cur);
        if (!child || !is_body_tag(tree.node(*child).tag)) {
            break;
        }
        cur = *child;
    }
    return cur;
}

}  // namespace blogext
