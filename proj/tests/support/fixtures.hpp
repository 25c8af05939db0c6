#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rpqshap/graph.hpp"
#include "rpqshap/query.hpp"
#include "rpqshap/regex.hpp"

namespace fixtures {

using namespace rpqshap;

/// The six-vertex running example with named edges e12 .. e56.
inline LabeledGraph example_graph(const std::set<std::string>& exogenous = {}) {
    struct Row {
        const char* id;
        const char* s;
        const char* label;
        const char* t;
    };
    const Row rows[] = {
        {"e12", "v1", "a", "v2"}, {"e13", "v1", "a", "v3"}, {"e32", "v3", "a", "v2"},
        {"e43", "v4", "a", "v3"}, {"e24", "v2", "b", "v4"}, {"e46", "v4", "b", "v6"},
        {"e35", "v3", "b", "v5"}, {"e26", "v2", "b", "v6"}, {"e56", "v5", "c", "v6"},
    };
    std::vector<Edge> edges;
    for (const auto& r : rows) {
        edges.push_back({r.id, r.s, r.label, r.t,
                         exogenous.count(r.id) ? Origin::Exogenous : Origin::Endogenous});
    }
    return LabeledGraph::build({}, edges);
}

inline std::string vertex_name(std::size_t i) { return "u" + std::to_string(i); }

/// Random simple graph on `vertices` vertices with up to `max_edges` edges
/// over `labels`. Self-loops only when `loops` is set.
inline LabeledGraph random_graph(std::mt19937_64& rng, std::size_t vertices, std::size_t max_edges,
                                 const std::vector<std::string>& labels, double exogenous_rate,
                                 bool loops = false) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t a = 0; a < vertices; ++a) {
        for (std::size_t b = 0; b < vertices; ++b) {
            if (a != b || loops) slots.emplace_back(a, b);
        }
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    std::uniform_int_distribution<std::size_t> count(1, std::min(max_edges, slots.size()));
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    std::bernoulli_distribution exo(exogenous_rate);
    const std::size_t m = count(rng);
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < vertices; ++i) vs.push_back({vertex_name(i), Origin::Endogenous});
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i) {
        auto [a, b] = slots[i];
        edges.push_back({"e" + std::to_string(i), vertex_name(a), labels[pick(rng)], vertex_name(b),
                         exo(rng) ? Origin::Exogenous : Origin::Endogenous});
    }
    return LabeledGraph::build(vs, edges);
}

/// Random language over {a, b} whose words all have length ≤ 2, written as
/// a union of explicit words. Never empty.
inline std::string random_short_language(std::mt19937_64& rng, bool allow_epsilon = false) {
    std::vector<std::string> words = {"a", "b", "a a", "a b", "b a", "b b"};
    if (allow_epsilon) words.push_back("@");
    std::shuffle(words.begin(), words.end(), rng);
    std::uniform_int_distribution<std::size_t> count(1, 3);
    const std::size_t n = count(rng);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += " | ";
        out += "(" + words[i] + ")";
    }
    return out;
}

inline Crpq single_atom(const std::string& regex, const LabeledGraph& g) {
    return parse_crpq("(x, " + regex + ", y)", g);
}

inline Assignment bind(const std::string& s, const std::string& t) { return {{"x", s}, {"y", t}}; }

}  // namespace fixtures
