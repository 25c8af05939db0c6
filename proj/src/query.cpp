#include "rpqshap/query.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "rpqshap/errors.hpp"

namespace rpqshap {

namespace {

std::string trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

Error malformed_query(const std::string& message) {
    return Error(ErrorKind::MalformedQuery, message);
}

ParsedAtom parse_atom(std::string_view text) {
    const std::string body = trim(text);
    if (body.size() < 2 || body.front() != '(' || body.back() != ')') {
        throw malformed_query("atom must look like (var, regex, var): '" + body + "'");
    }
    const std::string_view inner(body.data() + 1, body.size() - 2);
    const std::size_t first = inner.find(',');
    const std::size_t last = inner.rfind(',');
    if (first == std::string_view::npos || first == last) {
        throw malformed_query("atom needs two commas: '" + body + "'");
    }
    ParsedAtom atom{trim(inner.substr(0, first)), trim(inner.substr(first + 1, last - first - 1)),
                    RegexAst::epsilon(), trim(inner.substr(last + 1))};
    if (!is_identifier(atom.source_var) || !is_identifier(atom.target_var)) {
        throw malformed_query("bad variable name in atom '" + body + "'");
    }
    atom.regex = parse_regex(atom.expression);
    return atom;
}

}  // namespace

Crpq::Crpq(std::vector<std::string> variables, std::vector<RpqAtom> atoms)
    : variables_(std::move(variables)), atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw malformed_query("query has no atoms");
    std::set<std::string> listed;
    for (const auto& v : variables_) {
        if (!listed.insert(v).second) throw malformed_query("variable " + v + " listed twice");
    }
    std::set<std::string> used;
    for (const auto& atom : atoms_) {
        used.insert(atom.source_var);
        used.insert(atom.target_var);
    }
    if (used != listed) throw malformed_query("query variables do not match the atoms' variables");
}

bool Crpq::all_finite() const {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const RpqAtom& a) { return a.profile.is_finite; });
}

bool Crpq::is_single_short2_atom() const {
    return atoms_.size() == 1 && atoms_.front().profile.short2;
}

bool Crpq::has_empty_atom() const {
    return std::any_of(atoms_.begin(), atoms_.end(),
                       [](const RpqAtom& a) { return a.profile.is_empty; });
}

std::vector<ParsedAtom> parse_crpq_atoms(std::string_view text) {
    const std::string body = trim(text);
    if (body.empty()) throw malformed_query("query has no atoms");
    std::vector<ParsedAtom> atoms;
    if (body.front() != '(' || body.find(',') == std::string::npos) {
        atoms.push_back(ParsedAtom{"x", body, parse_regex(body), "y"});
        return atoms;
    }
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || (body[i] == '&' && depth == 0)) {
            atoms.push_back(parse_atom(std::string_view(body).substr(start, i - start)));
            start = i + 1;
            continue;
        }
        if (body[i] == '(') ++depth;
        if (body[i] == ')') --depth;
        if (depth < 0) throw malformed_query("unbalanced parentheses in query");
    }
    return atoms;
}

Crpq compile_crpq(const std::vector<ParsedAtom>& atoms, const std::set<Label>& graph_labels) {
    std::set<Label> alphabet = graph_labels;
    for (const auto& atom : atoms) {
        const auto symbols = atom.regex.symbols();
        alphabet.insert(symbols.begin(), symbols.end());
    }
    // A label nobody uses keeps Σ nonempty for wildcard-only queries on
    // edgeless graphs; no edge can carry it.
    if (alphabet.empty()) alphabet.insert("'unused'");

    std::vector<std::string> variables;
    std::vector<RpqAtom> compiled;
    for (const auto& atom : atoms) {
        for (const auto* var : {&atom.source_var, &atom.target_var}) {
            if (std::find(variables.begin(), variables.end(), *var) == variables.end()) {
                variables.push_back(*var);
            }
        }
        Dfa dfa = compile(atom.regex, alphabet);
        LanguageProfile profile = language_profile(dfa);
        compiled.push_back(RpqAtom{atom.source_var, atom.expression, std::move(dfa), atom.target_var,
                                   profile});
    }
    return Crpq(std::move(variables), std::move(compiled));
}

Crpq parse_crpq(std::string_view text, const LabeledGraph& graph) {
    return compile_crpq(parse_crpq_atoms(text), graph.labels());
}

Assignment parse_assignment(std::string_view text) {
    Assignment binding;
    std::size_t start = 0;
    const std::string body = trim(text);
    if (body.empty()) return binding;
    while (start <= body.size()) {
        std::size_t comma = body.find(',', start);
        if (comma == std::string::npos) comma = body.size();
        const std::string item = trim(std::string_view(body).substr(start, comma - start));
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw malformed_query("binding item '" + item + "' lacks '='");
        const std::string var = trim(std::string_view(item).substr(0, eq));
        const std::string vertex = trim(std::string_view(item).substr(eq + 1));
        if (!is_identifier(var) || vertex.empty()) {
            throw malformed_query("bad binding item '" + item + "'");
        }
        if (!binding.emplace(var, vertex).second) {
            throw malformed_query("variable " + var + " bound twice");
        }
        start = comma + 1;
    }
    return binding;
}

std::vector<std::size_t> resolve_assignment(const LabeledGraph& graph, const Crpq& query,
                                            const Assignment& binding) {
    std::vector<std::size_t> out;
    for (const auto& var : query.variables()) {
        auto it = binding.find(var);
        if (it == binding.end()) throw malformed_query("variable " + var + " is not bound");
        const auto vertex = graph.find_vertex(it->second);
        if (!vertex) throw Error(ErrorKind::UnknownVertex, "unknown vertex " + it->second);
        out.push_back(*vertex);
    }
    for (const auto& [var, vertex] : binding) {
        if (std::find(query.variables().begin(), query.variables().end(), var) ==
            query.variables().end()) {
            throw malformed_query("binding names variable " + var + " absent from the query");
        }
    }
    return out;
}

RpqEvaluator::RpqEvaluator(const LabeledGraph& graph, const Dfa& dfa)
    : graph_(&graph), dfa_(&dfa), edge_symbol_(graph.edge_count(), -1) {
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        if (auto index = dfa.symbol_index(graph.edge(e).label)) {
            edge_symbol_[e] = static_cast<int>(*index);
        }
    }
}

bool RpqEvaluator::edge_alive(std::size_t e, const Mask* edges, const Mask* vertices) const {
    if (edge_symbol_[e] < 0) return false;
    if (edges && !(*edges)[e]) return false;
    if (vertices && (!(*vertices)[graph_->source_index(e)] || !(*vertices)[graph_->target_index(e)])) {
        return false;
    }
    return true;
}

std::vector<std::uint8_t> RpqEvaluator::sweep(std::size_t source, const Mask* edges,
                                              const Mask* vertices) const {
    const std::size_t q = dfa_->state_count();
    std::vector<std::uint8_t> seen(graph_->vertex_count() * q, 0);
    if (vertices && !(*vertices)[source]) return seen;
    const std::size_t start = dfa_->start();
    if (!dfa_->is_useful(start)) return seen;
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    auto push_successors = [&](std::size_t v, std::size_t s) {
        for (std::size_t e : graph_->out_edges(v)) {
            if (!edge_alive(e, edges, vertices)) continue;
            const std::size_t t = dfa_->next(s, static_cast<std::size_t>(edge_symbol_[e]));
            if (!dfa_->is_useful(t)) continue;
            const std::size_t w = graph_->target_index(e);
            if (!seen[w * q + t]) {
                seen[w * q + t] = 1;
                stack.emplace_back(w, t);
            }
        }
    };
    if (empty_path_matches()) {
        seen[source * q + start] = 1;
        stack.emplace_back(source, start);
    } else {
        push_successors(source, start);
    }
    while (!stack.empty()) {
        const auto [v, s] = stack.back();
        stack.pop_back();
        push_successors(v, s);
    }
    return seen;
}

bool RpqEvaluator::holds(std::size_t source, std::size_t target, const Mask* edges,
                         const Mask* vertices) const {
    if (vertices && (!(*vertices)[source] || !(*vertices)[target])) return false;
    const std::size_t q = dfa_->state_count();
    if (source == target && dfa_->accepts_empty_word() && empty_path_matches()) return true;
    const std::size_t start = dfa_->start();
    if (!dfa_->is_useful(start)) return false;
    std::vector<std::uint8_t> seen(graph_->vertex_count() * q, 0);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{source, start}};
    seen[source * q + start] = 1;
    while (!stack.empty()) {
        const auto [v, s] = stack.back();
        stack.pop_back();
        for (std::size_t e : graph_->out_edges(v)) {
            if (!edge_alive(e, edges, vertices)) continue;
            const std::size_t t = dfa_->next(s, static_cast<std::size_t>(edge_symbol_[e]));
            if (!dfa_->is_useful(t)) continue;
            const std::size_t w = graph_->target_index(e);
            if (w == target && dfa_->is_accepting(t)) return true;
            if (!seen[w * q + t]) {
                seen[w * q + t] = 1;
                stack.emplace_back(w, t);
            }
        }
    }
    return false;
}

std::vector<std::uint8_t> RpqEvaluator::targets(std::size_t source, const Mask* edges,
                                                const Mask* vertices) const {
    std::vector<std::uint8_t> out(graph_->vertex_count(), 0);
    if (vertices && !(*vertices)[source]) return out;
    const std::size_t q = dfa_->state_count();
    const auto seen = sweep(source, edges, vertices);
    for (std::size_t v = 0; v < graph_->vertex_count(); ++v) {
        for (std::size_t s = 0; s < q; ++s) {
            if (seen[v * q + s] && dfa_->is_accepting(s)) out[v] = 1;
        }
    }
    return out;
}

std::vector<std::uint8_t> RpqEvaluator::coreachable(std::size_t target, const Mask* edges,
                                                    const Mask* vertices) const {
    const std::size_t q = dfa_->state_count();
    std::vector<std::uint8_t> seen(graph_->vertex_count() * q, 0);
    if (vertices && !(*vertices)[target]) return seen;
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t s = 0; s < q; ++s) {
        if (dfa_->is_accepting(s) && dfa_->is_useful(s)) {
            seen[target * q + s] = 1;
            stack.emplace_back(target, s);
        }
    }
    while (!stack.empty()) {
        const auto [w, t] = stack.back();
        stack.pop_back();
        for (std::size_t e : graph_->in_edges(w)) {
            if (!edge_alive(e, edges, vertices)) continue;
            const std::size_t v = graph_->source_index(e);
            const auto symbol = static_cast<std::size_t>(edge_symbol_[e]);
            for (std::size_t s = 0; s < q; ++s) {
                if (!dfa_->is_useful(s) || dfa_->next(s, symbol) != t || seen[v * q + s]) continue;
                seen[v * q + s] = 1;
                stack.emplace_back(v, s);
            }
        }
    }
    return seen;
}

bool eval_rpq(const LabeledGraph& graph, std::string_view source, std::string_view target,
              const Dfa& dfa) {
    const auto s = graph.find_vertex(source);
    const auto t = graph.find_vertex(target);
    if (!s) throw Error(ErrorKind::UnknownVertex, "unknown vertex " + std::string(source));
    if (!t) throw Error(ErrorKind::UnknownVertex, "unknown vertex " + std::string(target));
    return RpqEvaluator(graph, dfa).holds(*s, *t);
}

bool eval_crpq_bound(const LabeledGraph& graph, const Crpq& query, const Assignment& binding) {
    const auto vertices = resolve_assignment(graph, query, binding);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < query.variables().size(); ++i) {
        index.emplace(query.variables()[i], vertices[i]);
    }
    for (const auto& atom : query.atoms()) {
        if (!RpqEvaluator(graph, atom.dfa).holds(index.at(atom.source_var), index.at(atom.target_var))) {
            return false;
        }
    }
    return true;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> relation_indices(const LabeledGraph& graph,
                                                                  const Dfa& dfa, bool diagonal_only) {
    RpqEvaluator evaluator(graph, dfa);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t s = 0; s < graph.vertex_count(); ++s) {
        if (diagonal_only) {
            if (evaluator.holds(s, s)) out.emplace_back(s, s);
            continue;
        }
        const auto reached = evaluator.targets(s);
        for (std::size_t t = 0; t < graph.vertex_count(); ++t) {
            if (reached[t]) out.emplace_back(s, t);
        }
    }
    return out;
}

}  // namespace

std::set<std::pair<VertexId, VertexId>> atom_relation(const LabeledGraph& graph, const Dfa& dfa) {
    std::set<std::pair<VertexId, VertexId>> out;
    for (auto [s, t] : relation_indices(graph, dfa, false)) {
        out.emplace(graph.vertex(s).id, graph.vertex(t).id);
    }
    return out;
}

std::vector<std::vector<VertexId>> enumerate_answers(const LabeledGraph& graph, const Crpq& query,
                                                     std::size_t cap) {
    const auto& atoms = query.atoms();
    const auto& variables = query.variables();
    auto var_index = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(variables.begin(), variables.end(), name) -
                                        variables.begin());
    };

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> relations(atoms.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(atoms.size()); ++i) {
        const auto& atom = atoms[static_cast<std::size_t>(i)];
        relations[static_cast<std::size_t>(i)] =
            relation_indices(graph, atom.dfa, atom.source_var == atom.target_var);
    }

    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return relations[a].size() < relations[b].size();
    });

    constexpr std::size_t kUnbound = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> partial{std::vector<std::size_t>(variables.size(), kUnbound)};
    std::vector<std::uint8_t> bound(variables.size(), 0);
    auto check_cap = [&](std::size_t size) {
        if (size > cap) {
            throw Error(ErrorKind::EnumerationOverflow,
                        "more than " + std::to_string(cap) + " answer tuples");
        }
    };

    for (std::size_t a : order) {
        const std::size_t x = var_index(atoms[a].source_var);
        const std::size_t y = var_index(atoms[a].target_var);
        const auto& relation = relations[a];
        std::vector<std::vector<std::size_t>> next;
        if (bound[x] && bound[y]) {
            std::unordered_set<std::size_t> pairs;
            for (auto [s, t] : relation) pairs.insert(s * graph.vertex_count() + t);
            for (auto& tuple : partial) {
                if (pairs.count(tuple[x] * graph.vertex_count() + tuple[y])) next.push_back(std::move(tuple));
            }
        } else if (bound[x] || bound[y]) {
            const bool from_source = bound[x] != 0;
            std::unordered_map<std::size_t, std::vector<std::size_t>> index;
            for (auto [s, t] : relation) {
                if (from_source) {
                    index[s].push_back(t);
                } else {
                    index[t].push_back(s);
                }
            }
            const std::size_t key_var = from_source ? x : y;
            const std::size_t new_var = from_source ? y : x;
            for (const auto& tuple : partial) {
                auto it = index.find(tuple[key_var]);
                if (it == index.end()) continue;
                for (std::size_t value : it->second) {
                    auto extended = tuple;
                    extended[new_var] = value;
                    next.push_back(std::move(extended));
                    check_cap(next.size());
                }
            }
        } else {
            for (const auto& tuple : partial) {
                for (auto [s, t] : relation) {
                    auto extended = tuple;
                    extended[x] = s;
                    extended[y] = t;
                    next.push_back(std::move(extended));
                    check_cap(next.size());
                }
            }
        }
        bound[x] = bound[y] = 1;
        partial = std::move(next);
        if (partial.empty()) break;
    }
    check_cap(partial.size());

    std::vector<std::vector<VertexId>> answers;
    answers.reserve(partial.size());
    for (const auto& tuple : partial) {
        std::vector<VertexId> row;
        for (std::size_t v : tuple) row.push_back(graph.vertex(v).id);
        answers.push_back(std::move(row));
    }
    std::sort(answers.begin(), answers.end());
    return answers;
}

}  // namespace rpqshap
