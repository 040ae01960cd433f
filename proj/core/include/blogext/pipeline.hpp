#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "blogext/candidates.hpp"
#include "blogext/dom.hpp"
#include "blogext/features.hpp"
#include "blogext/layout.hpp"
#include "blogext/svm.hpp"

namespace blogext {

struct PageInput {
    std::string html;
    std::optional<std::string> url;
    // Sidecar document; nullopt selects the heuristic layout engine.
    std::optional<std::string> sidecar;
    Viewport viewport;
};

struct ExtractedBlock {
    NodePath path;
    std::string text;

    bool operator==(const ExtractedBlock&) const = default;
};

struct ExtractionDiagnostics {
    std::size_t title_candidates = 0;
    std::size_t body_candidates = 0;
    std::size_t title_positives = 0;
    std::size_t body_positives = 0;
    bool viewport_mismatch = false;  // models trained at another viewport
    std::size_t ignored_style_units = 0;

    bool operator==(const ExtractionDiagnostics&) const = default;
};

struct ExtractionResult {
    std::optional<std::string> url;
    std::vector<ExtractedBlock> titles;
    std::vector<ExtractedBlock> bodies;
    ExtractionDiagnostics diagnostics;

    bool operator==(const ExtractionResult&) const = default;
};

// A parsed page with geometry and every feature that does not depend on the
// title stage. Training and extraction share it.
struct PreparedPage {
    DomTree tree;
    Geometry geometry;
    TextIndex text;
    Viewport viewport;
    std::vector<NodeId> title_nodes;  // candidates that have geometry
    std::vector<TitleFeatures> title_rows;
    std::vector<NodeId> body_nodes;
    std::vector<BodyFeatures> body_rows;  // title relations at the sentinel
    std::size_t title_candidate_count = 0;
    std::size_t body_candidate_count = 0;
};

// Throws EmptyDocument, SchemaError, PathMismatch.
PreparedPage prepare_page(const PageInput& page);

// Title blocks for the given nodes; nodes with an empty rect are skipped.
std::vector<TitleBlock> title_blocks(const PreparedPage& page, const std::vector<NodeId>& titles);

// Body rows of `page` with title relations computed against `titles`.
std::vector<BodyFeatures> body_rows_for(const PreparedPage& page, const std::vector<TitleBlock>& titles);

// Keeps the deepest of nested positives.
std::vector<NodeId> resolve_title_overlaps(const DomTree& tree, std::vector<NodeId> positives);
// Drops positives strictly inside another positive.
std::vector<NodeId> resolve_body_overlaps(const DomTree& tree, std::vector<NodeId> positives);

// Two-stage extraction: titles first, then bodies with title-relative
// features. Throws InvalidArgument when the models have the wrong schemas.
ExtractionResult extract(const PageInput& page, const SvmModel& title_model, const SvmModel& body_model);
ExtractionResult extract_prepared(const PreparedPage& page, const SvmModel& title_model, const SvmModel& body_model,
                                  const std::optional<std::string>& url = std::nullopt);

// {url, titles:[{path,text}], bodies:[{path,text}], diagnostics}, fixed field
// order, two-space indent.
std::string to_json(const ExtractionResult& result);

}  // namespace blogext
