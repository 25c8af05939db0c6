#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rpqshap {

using VertexId = std::string;
using EdgeId = std::string;
using Label = std::string;

/// Endogenous items are players of the contribution games; exogenous items
/// are background that is never removed.
enum class Origin : std::uint8_t { Endogenous, Exogenous };

struct Vertex {
    VertexId id;
    Origin origin = Origin::Endogenous;

    bool operator==(const Vertex&) const = default;
};

struct Edge {
    EdgeId id;
    VertexId source;
    Label label;
    VertexId target;
    Origin origin = Origin::Endogenous;

    bool operator==(const Edge&) const = default;
};

/// Edge id used when a graph file does not name the edge explicitly.
EdgeId default_edge_id(std::string_view source, std::string_view target);

/// Per-index liveness flags used to evaluate queries on a subgraph without
/// materializing it. Index i refers to edge(i) or vertex(i) of the graph.
using Mask = std::vector<std::uint8_t>;

/// Directed edge-labeled graph with at most one edge per ordered vertex
/// pair. Vertices and edges are kept sorted by id, so indices are stable
/// and deterministic for a given content. Immutable once built.
class LabeledGraph {
public:
    LabeledGraph() = default;

    /// Validates and indexes. Vertices named by edges but missing from
    /// `vertices` are added as endogenous. Throws MalformedGraph.
    static LabeledGraph build(std::vector<Vertex> vertices, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const Vertex& vertex(std::size_t index) const { return vertices_.at(index); }
    const Edge& edge(std::size_t index) const { return edges_.at(index); }
    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::size_t source_index(std::size_t edge) const { return edge_source_[edge]; }
    std::size_t target_index(std::size_t edge) const { return edge_target_[edge]; }
    std::span<const std::size_t> out_edges(std::size_t vertex) const { return out_[vertex]; }
    std::span<const std::size_t> in_edges(std::size_t vertex) const { return in_[vertex]; }

    std::optional<std::size_t> find_vertex(std::string_view id) const;
    std::optional<std::size_t> find_edge(std::string_view id) const;
    std::optional<std::size_t> find_edge_between(std::size_t source, std::size_t target) const;

    /// Index lists in id order.
    std::vector<std::size_t> endogenous_edges() const;
    std::vector<std::size_t> exogenous_edges() const;
    std::vector<std::size_t> endogenous_vertices() const;
    std::vector<std::size_t> exogenous_vertices() const;

    std::set<Label> labels() const;

    bool operator==(const LabeledGraph& other) const {
        return vertices_ == other.vertices_ && edges_ == other.edges_;
    }

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> edge_source_;
    std::vector<std::size_t> edge_target_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
    std::unordered_map<std::string, std::size_t> vertex_index_;
    std::unordered_map<std::string, std::size_t> edge_index_;
};

/// Parses the whitespace-separated graph format:
///   `<src> <label> <dst> <n|x> [edge-id]`   edge
///   `v <id> <n|x>`                          vertex classification
///   `# ...`                                 comment
LabeledGraph load_graph(std::string_view text);
LabeledGraph load_graph_file(const std::string& path);

/// Inverse of load_graph: vertex lines, then edge lines, each sorted.
std::string serialize(const LabeledGraph& graph);

/// G[B ∪ E_x]. Throws InvalidPlayerSet when B names an unknown or exogenous edge.
LabeledGraph edge_subgraph(const LabeledGraph& graph, const std::set<EdgeId>& coalition);

/// Subgraph induced by B ∪ V_x. Throws InvalidPlayerSet like edge_subgraph.
LabeledGraph vertex_subgraph(const LabeledGraph& graph, const std::set<VertexId>& coalition);

/// Copy of `graph` with one edge reclassified.
LabeledGraph with_edge_origin(const LabeledGraph& graph, std::size_t edge, Origin origin);

/// Copy of `graph` with one edge deleted (all vertices kept).
LabeledGraph without_edge(const LabeledGraph& graph, std::size_t edge);

/// Liveness mask for G[B ∪ E_x] given B as edge indices.
Mask edge_mask(const LabeledGraph& graph, std::span<const std::size_t> coalition);

/// Liveness mask for G[B ∪ V_x] given B as vertex indices.
Mask vertex_mask(const LabeledGraph& graph, std::span<const std::size_t> coalition);

}  // namespace rpqshap
