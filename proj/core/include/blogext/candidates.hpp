#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blogext/dom.hpp"

namespace blogext {

enum class CandidateKind { title, body };

struct CandidateSet {
    CandidateKind kind = CandidateKind::title;
    std::vector<NodeId> nodes;  // document order, no duplicates
};

// Cached text_content of every node of a tree.
class TextIndex {
public:
    explicit TextIndex(const DomTree& tree);
    const std::string& text(NodeId id) const { return texts_.at(id); }

private:
    std::vector<std::string> texts_;
};

// Rendered elements with non-empty text, excluding html/head/body. An element
// is pruned when it has no text of its own and exactly one child element
// carries all of its text; the deeper node stays.
CandidateSet title_candidates(const DomTree& tree);
CandidateSet title_candidates(const DomTree& tree, const TextIndex& text);

// Every rendered div, span or p element. No pruning.
CandidateSet body_candidates(const DomTree& tree);

// The title candidate a node stands for: itself if it is a candidate, the
// text-equal descendant that survived pruning if it was pruned, nullopt if it
// can never be a title candidate (no text, hidden, html/head/body).
std::optional<NodeId> canonical_title_node(const DomTree& tree, const TextIndex& text, NodeId node);

// Descends through body wrappers that hold no text of their own and a single
// text-equal div/span/p child. Two body nodes with the same canonical node
// extract the same text.
NodeId canonical_body_node(const DomTree& tree, const TextIndex& text, NodeId node);

bool is_body_tag(const std::string& tag) noexcept;

}  // namespace blogext
