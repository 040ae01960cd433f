#include "blogext/dom.hpp"

#include <algorithm>
#include <array>

#include "blogext/error.hpp"

namespace blogext {

namespace {

constexpr std::array kHiddenTags = {
    std::string_view{"head"},  std::string_view{"script"}, std::string_view{"style"},
    std::string_view{"noscript"}, std::string_view{"template"}, std::string_view{"title"},
    std::string_view{"meta"},  std::string_view{"link"},   std::string_view{"base"},
};

bool hides_itself(const DomNode& n)
{
    if (n.kind == NodeKind::comment) {
        return true;
    }
    if (n.kind == NodeKind::text) {
        return false;
    }
    if (std::find(kHiddenTags.begin(), kHiddenTags.end(), n.tag) != kHiddenTags.end()) {
        return true;
    }
    if (n.attribute("hidden")) {
        return true;
    }
    if (auto display = style_property(n, "display"); display && ascii_lower(*display) == "none") {
        return true;
    }
    if (auto vis = style_property(n, "visibility"); vis && ascii_lower(*vis) == "hidden") {
        return true;
    }
    return false;
}

}  // namespace

bool is_ascii_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

std::optional<std::string_view> DomNode::attribute(std::string_view name) const
{
    for (const auto& a : attributes) {
        if (a.name == name) {
            return std::string_view{a.value};
        }
    }
    return std::nullopt;
}

std::string NodePath::to_string() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += std::to_string(indices[i]);
    }
    out += ']';
    return out;
}

const DomNode& DomTree::node(NodeId id) const
{
    if (id >= nodes_.size()) {
        throw Error(ErrorCode::InvalidArgument, "node id " + std::to_string(id) + " out of range");
    }
    return nodes_[id];
}

bool DomTree::is_ancestor(NodeId ancestor, NodeId descendant) const
{
    if (!contains(ancestor) || !contains(descendant) || ancestor == descendant) {
        return false;
    }
    const auto a = preorder_index_[ancestor];
    const auto d = preorder_index_[descendant];
    return d > a && d < a + subtree_size_[ancestor];
}

std::span<const NodeId> DomTree::subtree(NodeId id) const
{
    node(id);
    return std::span<const NodeId>(order_).subspan(preorder_index_[id], subtree_size_[id]);
}

NodeId DomBuilder::create_element(std::string tag, std::vector<Attribute> attributes)
{
    DomNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::element;
    n.tag = std::move(tag);
    n.attributes = std::move(attributes);
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
}

void DomBuilder::append_child(NodeId parent, NodeId child)
{
    nodes_.at(child).parent = parent;
    nodes_.at(parent).children.push_back(child);
}

void DomBuilder::append_text(NodeId parent, std::string_view text)
{
    if (text.empty()) {
        return;
    }
    auto& p = nodes_.at(parent);
    if (!p.children.empty()) {
        auto& last = nodes_[p.children.back()];
        if (last.kind == NodeKind::text) {
            last.text.append(text);
            return;
        }
    }
    DomNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::text;
    n.text = std::string(text);
    nodes_.push_back(std::move(n));
    append_child(parent, nodes_.back().id);
}

void DomBuilder::append_comment(NodeId parent, std::string text)
{
    DomNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = NodeKind::comment;
    n.text = std::move(text);
    nodes_.push_back(std::move(n));
    append_child(parent, nodes_.back().id);
}

DomTree DomBuilder::finish(NodeId root, std::optional<std::string> source_url)
{
    DomTree tree;
    tree.nodes_ = std::move(nodes_);
    nodes_.clear();
    tree.root_ = root;
    tree.source_url_ = std::move(source_url);

    const auto n = tree.nodes_.size();
    tree.preorder_index_.assign(n, 0);
    tree.subtree_size_.assign(n, 1);
    tree.order_.reserve(n);

    // Iterative preorder walk; assigns rendered flags top-down.
    std::vector<NodeId> stack{root};
    tree.nodes_[root].parent.reset();
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        auto& node = tree.nodes_[id];
        const bool parent_rendered = node.parent ? tree.nodes_[*node.parent].rendered : true;
        node.rendered = parent_rendered && !hides_itself(node);
        tree.preorder_index_[id] = static_cast<std::uint32_t>(tree.order_.size());
        tree.order_.push_back(id);
        for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
            stack.push_back(*it);
        }
    }
    if (tree.order_.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "DOM builder produced unreachable nodes");
    }
    for (auto it = tree.order_.rbegin(); it != tree.order_.rend(); ++it) {
        const auto& node = tree.nodes_[*it];
        if (node.parent) {
            tree.subtree_size_[*node.parent] += tree.subtree_size_[*it];
        }
    }
    return tree;
}

namespace {

void collect_text(const DomTree& tree, NodeId id, std::string& out)
{
    const auto& n = tree.node(id);
    if (!n.rendered) {
        return;
    }
    if (n.kind == NodeKind::text) {
        out += n.text;
        return;
    }
    for (NodeId c : n.children) {
        collect_text(tree, c, out);
    }
}

}  // namespace

std::string text_content(const DomTree& tree, NodeId node)
{
    std::string raw;
    collect_text(tree, node, raw);
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_ascii_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += c;
    }
    return out;
}

NodeId node_at_path(const DomTree& tree, const NodePath& path)
{
    NodeId cur = tree.root();
    for (std::size_t depth = 0; depth < path.indices.size(); ++depth) {
        const auto& children = tree.node(cur).children;
        const auto idx = path.indices[depth];
        if (idx >= children.size()) {
            throw Error(ErrorCode::InvalidPath,
                        "path " + path.to_string() + " has no child " + std::to_string(idx) + " at depth " +
                            std::to_string(depth),
                        depth);
        }
        cur = children[idx];
    }
    return cur;
}

NodePath path_of(const DomTree& tree, NodeId node)
{
    NodePath path;
    NodeId cur = node;
    while (const auto parent = tree.node(cur).parent) {
        const auto& siblings = tree.node(*parent).children;
        const auto pos = std::find(siblings.begin(), siblings.end(), cur) - siblings.begin();
        path.indices.push_back(static_cast<std::size_t>(pos));
        cur = *parent;
    }
    std::reverse(path.indices.begin(), path.indices.end());
    return path;
}

std::optional<std::string> style_property(const DomNode& node, std::string_view property)
{
    const auto style = node.attribute("style");
    if (!style) {
        return std::nullopt;
    }
    std::optional<std::string> found;
    std::string_view rest = *style;
    while (!rest.empty()) {
        const auto semi = rest.find(';');
        std::string_view decl = rest.substr(0, semi);
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        const auto colon = decl.find(':');
        if (colon == std::string_view::npos) {
            continue;
        }
        auto trim = [](std::string_view s) {
            while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
            while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
            return s;
        };
        if (ascii_lower(trim(decl.substr(0, colon))) == property) {
            // Later declarations win, as in CSS.
            found = std::string(trim(decl.substr(colon + 1)));
        }
    }
    return found;
}

}  // namespace blogext
