#include "rpqshap/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "rpqshap/errors.hpp"

namespace rpqshap {

namespace {

Error malformed(std::size_t line, const std::string& message) {
    return Error(ErrorKind::MalformedGraph,
                 "graph line " + std::to_string(line) + ": " + message);
}

std::optional<Origin> parse_origin(std::string_view tag) {
    if (tag == "n") return Origin::Endogenous;
    if (tag == "x") return Origin::Exogenous;
    return std::nullopt;
}

char origin_tag(Origin origin) { return origin == Origin::Endogenous ? 'n' : 'x'; }

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) fields.emplace_back(line.substr(start, i - start));
    }
    return fields;
}

}  // namespace

EdgeId default_edge_id(std::string_view source, std::string_view target) {
    EdgeId id;
    id.reserve(source.size() + target.size() + 2);
    id.append(source).append("->").append(target);
    return id;
}

LabeledGraph LabeledGraph::build(std::vector<Vertex> vertices, std::vector<Edge> edges) {
    LabeledGraph g;
    std::map<std::string, Origin> vertex_origin;
    for (auto& v : vertices) {
        if (v.id.empty()) throw Error(ErrorKind::MalformedGraph, "empty vertex id");
        auto [it, inserted] = vertex_origin.emplace(v.id, v.origin);
        if (!inserted && it->second != v.origin) {
            throw Error(ErrorKind::MalformedGraph, "conflicting classification for vertex " + v.id);
        }
    }
    for (const auto& e : edges) {
        if (e.source.empty() || e.target.empty()) {
            throw Error(ErrorKind::MalformedGraph, "edge with empty endpoint");
        }
        if (e.label.empty()) throw Error(ErrorKind::MalformedGraph, "edge with empty label");
        vertex_origin.emplace(e.source, Origin::Endogenous);
        vertex_origin.emplace(e.target, Origin::Endogenous);
    }
    for (auto& [id, origin] : vertex_origin) g.vertices_.push_back(Vertex{id, origin});
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) g.vertex_index_.emplace(g.vertices_[i].id, i);

    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    std::set<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.id.empty()) throw Error(ErrorKind::MalformedGraph, "edge with empty id");
        if (i > 0 && edges[i - 1].id == e.id) {
            throw Error(ErrorKind::MalformedGraph, "duplicate edge id " + e.id);
        }
        if (!pairs.emplace(e.source, e.target).second) {
            throw Error(ErrorKind::MalformedGraph,
                        "parallel edges between " + e.source + " and " + e.target);
        }
    }
    g.edges_ = std::move(edges);
    g.out_.resize(g.vertices_.size());
    g.in_.resize(g.vertices_.size());
    for (std::size_t i = 0; i < g.edges_.size(); ++i) {
        const std::size_t s = g.vertex_index_.at(g.edges_[i].source);
        const std::size_t t = g.vertex_index_.at(g.edges_[i].target);
        g.edge_source_.push_back(s);
        g.edge_target_.push_back(t);
        g.out_[s].push_back(i);
        g.in_[t].push_back(i);
        g.edge_index_.emplace(g.edges_[i].id, i);
    }
    return g;
}

std::optional<std::size_t> LabeledGraph::find_vertex(std::string_view id) const {
    auto it = vertex_index_.find(std::string(id));
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> LabeledGraph::find_edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> LabeledGraph::find_edge_between(std::size_t source,
                                                           std::size_t target) const {
    for (std::size_t e : out_[source]) {
        if (edge_target_[e] == target) return e;
    }
    return std::nullopt;
}

std::vector<std::size_t> LabeledGraph::endogenous_edges() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].origin == Origin::Endogenous) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> LabeledGraph::exogenous_edges() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].origin == Origin::Exogenous) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> LabeledGraph::endogenous_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].origin == Origin::Endogenous) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> LabeledGraph::exogenous_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].origin == Origin::Exogenous) out.push_back(i);
    }
    return out;
}

std::set<Label> LabeledGraph::labels() const {
    std::set<Label> out;
    for (const auto& e : edges_) out.insert(e.label);
    return out;
}

LabeledGraph load_graph(std::string_view text) {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::map<std::string, Origin> declared;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty() || fields[0][0] == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (fields.size() == 3 && fields[0] == "v") {
            const auto origin = parse_origin(fields[2]);
            if (!origin) throw malformed(line_no, "unknown classification '" + fields[2] + "'");
            auto [it, inserted] = declared.emplace(fields[1], *origin);
            if (!inserted && it->second != *origin) {
                throw malformed(line_no, "vertex " + fields[1] + " classified twice");
            }
            vertices.push_back(Vertex{fields[1], *origin});
        } else if (fields.size() == 4 || fields.size() == 5) {
            const auto origin = parse_origin(fields[3]);
            if (!origin) throw malformed(line_no, "unknown classification '" + fields[3] + "'");
            Edge e;
            e.source = fields[0];
            e.label = fields[1];
            e.target = fields[2];
            e.origin = *origin;
            e.id = fields.size() == 5 ? fields[4] : default_edge_id(e.source, e.target);
            edges.push_back(std::move(e));
        } else {
            throw malformed(line_no, "expected 'src label dst n|x [id]' or 'v id n|x'");
        }
        if (end == text.size()) break;
    }
    try {
        return LabeledGraph::build(std::move(vertices), std::move(edges));
    } catch (const Error& err) {
        throw Error(ErrorKind::MalformedGraph, err.what());
    }
}

LabeledGraph load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MalformedGraph, "cannot open graph file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_graph(buffer.str());
}

std::string serialize(const LabeledGraph& graph) {
    std::vector<std::string> vertex_lines;
    for (const auto& v : graph.vertices()) {
        vertex_lines.push_back("v\t" + v.id + '\t' + origin_tag(v.origin));
    }
    std::vector<std::string> edge_lines;
    for (const auto& e : graph.edges()) {
        std::string line = e.source + '\t' + e.label + '\t' + e.target + '\t' + origin_tag(e.origin);
        if (e.id != default_edge_id(e.source, e.target)) line += '\t' + e.id;
        edge_lines.push_back(std::move(line));
    }
    std::sort(vertex_lines.begin(), vertex_lines.end());
    std::sort(edge_lines.begin(), edge_lines.end());
    std::string out;
    for (const auto& l : vertex_lines) out += l + '\n';
    for (const auto& l : edge_lines) out += l + '\n';
    return out;
}

LabeledGraph edge_subgraph(const LabeledGraph& graph, const std::set<EdgeId>& coalition) {
    for (const auto& id : coalition) {
        const auto index = graph.find_edge(id);
        if (!index) throw Error(ErrorKind::InvalidPlayerSet, "unknown edge " + id);
        if (graph.edge(*index).origin != Origin::Endogenous) {
            throw Error(ErrorKind::InvalidPlayerSet, "edge " + id + " is not endogenous");
        }
    }
    std::vector<Edge> edges;
    for (const auto& e : graph.edges()) {
        if (e.origin == Origin::Exogenous || coalition.count(e.id)) edges.push_back(e);
    }
    return LabeledGraph::build(graph.vertices(), std::move(edges));
}

LabeledGraph vertex_subgraph(const LabeledGraph& graph, const std::set<VertexId>& coalition) {
    for (const auto& id : coalition) {
        const auto index = graph.find_vertex(id);
        if (!index) throw Error(ErrorKind::InvalidPlayerSet, "unknown vertex " + id);
        if (graph.vertex(*index).origin != Origin::Endogenous) {
            throw Error(ErrorKind::InvalidPlayerSet, "vertex " + id + " is not endogenous");
        }
    }
    std::vector<Vertex> vertices;
    std::set<VertexId> kept;
    for (const auto& v : graph.vertices()) {
        if (v.origin == Origin::Exogenous || coalition.count(v.id)) {
            vertices.push_back(v);
            kept.insert(v.id);
        }
    }
    std::vector<Edge> edges;
    for (const auto& e : graph.edges()) {
        if (kept.count(e.source) && kept.count(e.target)) edges.push_back(e);
    }
    return LabeledGraph::build(std::move(vertices), std::move(edges));
}

LabeledGraph with_edge_origin(const LabeledGraph& graph, std::size_t edge, Origin origin) {
    std::vector<Edge> edges = graph.edges();
    edges.at(edge).origin = origin;
    return LabeledGraph::build(graph.vertices(), std::move(edges));
}

LabeledGraph without_edge(const LabeledGraph& graph, std::size_t edge) {
    std::vector<Edge> edges = graph.edges();
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(edge));
    return LabeledGraph::build(graph.vertices(), std::move(edges));
}

Mask edge_mask(const LabeledGraph& graph, std::span<const std::size_t> coalition) {
    Mask mask(graph.edge_count(), 0);
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
        mask[i] = graph.edge(i).origin == Origin::Exogenous;
    }
    for (std::size_t e : coalition) mask.at(e) = 1;
    return mask;
}

Mask vertex_mask(const LabeledGraph& graph, std::span<const std::size_t> coalition) {
    Mask mask(graph.vertex_count(), 0);
    for (std::size_t i = 0; i < graph.vertex_count(); ++i) {
        mask[i] = graph.vertex(i).origin == Origin::Exogenous;
    }
    for (std::size_t v : coalition) mask.at(v) = 1;
    return mask;
}

}  // namespace rpqshap
