#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blogext {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { element, text, comment };

struct Attribute {
    std::string name;
    std::string value;
};

struct DomNode {
    NodeId id = 0;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;
    NodeKind kind = NodeKind::element;
    std::string tag;  // lowercase; empty for text and comment nodes
    std::vector<Attribute> attributes;
    std::string text;  // decoded character data of text and comment nodes
    // False for script/style/head-like content, comments, and anything under
    // an inline display:none or visibility:hidden. Inherited by descendants.
    bool rendered = true;

    bool is_element() const noexcept { return kind == NodeKind::element; }
    bool is_text() const noexcept { return kind == NodeKind::text; }
    std::optional<std::string_view> attribute(std::string_view name) const;
};

// Child-index address of a node, starting at the root. Indices count every
// child (elements, text and comments), matching the DOM childNodes order.
struct NodePath {
    std::vector<std::size_t> indices;

    bool operator==(const NodePath&) const = default;
    auto operator<=>(const NodePath&) const = default;
    std::string to_string() const;
};

class DomTree {
public:
    const DomNode& node(NodeId id) const;
    std::span<const DomNode> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    NodeId root() const noexcept { return root_; }
    const std::optional<std::string>& source_url() const noexcept { return source_url_; }

    bool contains(NodeId id) const noexcept { return id < nodes_.size(); }
    // Strict ancestry; a node is not its own ancestor.
    bool is_ancestor(NodeId ancestor, NodeId descendant) const;
    // Node ids in document (pre-)order.
    std::span<const NodeId> document_order() const noexcept { return order_; }
    // The node followed by all its descendants, in document order.
    std::span<const NodeId> subtree(NodeId id) const;

private:
    friend class DomBuilder;

    std::vector<DomNode> nodes_;
    NodeId root_ = 0;
    std::optional<std::string> source_url_;
    std::vector<NodeId> order_;
    std::vector<std::uint32_t> preorder_index_;
    std::vector<std::uint32_t> subtree_size_;
};

// Incremental construction of a DomTree. finish() computes rendered flags
// and traversal indices and freezes the tree.
class DomBuilder {
public:
    NodeId create_element(std::string tag, std::vector<Attribute> attributes = {});
    // Appends text to `parent`, merging with a trailing text child if present.
    void append_text(NodeId parent, std::string_view text);
    void append_comment(NodeId parent, std::string text);
    void append_child(NodeId parent, NodeId child);

    DomNode& node(NodeId id) { return nodes_.at(id); }
    const DomNode& node(NodeId id) const { return nodes_.at(id); }
    std::size_t size() const noexcept { return nodes_.size(); }

    DomTree finish(NodeId root, std::optional<std::string> source_url);

private:
    std::vector<DomNode> nodes_;
};

// Error-tolerant HTML parsing. Encoding is taken from a BOM, then a meta
// charset declaration, then defaults to UTF-8. Throws EmptyDocument when the
// input yields no element.
DomTree parse_html(std::string_view bytes, std::optional<std::string> base_url = std::nullopt);

// Rendered descendant text in document order, whitespace runs collapsed to a
// single space and trimmed.
std::string text_content(const DomTree& tree, NodeId node);

NodeId node_at_path(const DomTree& tree, const NodePath& path);
NodePath path_of(const DomTree& tree, NodeId node);

// Value of a declaration in the element's inline style attribute, lowercased
// property match, value trimmed.
std::optional<std::string> style_property(const DomNode& node, std::string_view property);

bool is_ascii_space(char c) noexcept;
std::string ascii_lower(std::string_view s);

}  // namespace blogext
