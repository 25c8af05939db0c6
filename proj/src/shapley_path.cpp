#include "rpqshap/shapley_path.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "rpqshap/errors.hpp"

namespace rpqshap {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::size_t vertex_or_throw(const LabeledGraph& graph, std::string_view id) {
    auto index = graph.find_vertex(id);
    if (!index) throw Error(ErrorKind::UnknownVertex, "unknown vertex '" + std::string(id) + "'");
    return *index;
}

std::vector<std::pair<std::size_t, std::size_t>> atom_endpoints(
    const Crpq& query, const std::vector<std::size_t>& binding) {
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < query.variables().size(); ++i) slot[query.variables()[i]] = i;
    std::vector<std::pair<std::size_t, std::size_t>> ends;
    for (const auto& atom : query.atoms()) {
        ends.emplace_back(binding[slot.at(atom.source_var)], binding[slot.at(atom.target_var)]);
    }
    return ends;
}

/// Owns copies of the inputs so the evaluators' references stay valid for
/// as long as any game built on them is alive.
class GameContext {
public:
    GameContext(const LabeledGraph& graph, const Crpq& query, const Assignment& binding,
                PlayerKind kind)
        : graph_(graph), query_(query), kind_(kind) {
        ends_ = atom_endpoints(query_, resolve_assignment(graph_, query_, binding));
        for (const auto& atom : query_.atoms()) evaluators_.emplace_back(graph_, atom.dfa);
        if (kind_ == PlayerKind::Edge) {
            items_ = graph_.endogenous_edges();
            base_ = edge_mask(graph_, {});
        } else {
            items_ = graph_.endogenous_vertices();
            base_ = vertex_mask(graph_, {});
        }
        baseline_ = evaluate(base_);
    }

    GameContext(const GameContext&) = delete;
    GameContext& operator=(const GameContext&) = delete;

    bool baseline() const noexcept { return baseline_; }

    bool value(const PlayerSet& coalition) const {
        if (baseline_) return false;
        Mask mask = base_;
        for (std::size_t p : coalition.members()) mask[items_[p]] = 1;
        return evaluate(mask);
    }

    std::vector<std::string> player_ids() const {
        std::vector<std::string> ids;
        for (std::size_t item : items_) {
            ids.push_back(kind_ == PlayerKind::Edge ? graph_.edge(item).id : graph_.vertex(item).id);
        }
        return ids;
    }

private:
    bool evaluate(const Mask& mask) const {
        const Mask* edges = kind_ == PlayerKind::Edge ? &mask : nullptr;
        const Mask* vertices = kind_ == PlayerKind::Vertex ? &mask : nullptr;
        for (std::size_t i = 0; i < evaluators_.size(); ++i) {
            if (!evaluators_[i].holds(ends_[i].first, ends_[i].second, edges, vertices)) return false;
        }
        return true;
    }

    LabeledGraph graph_;
    Crpq query_;
    PlayerKind kind_;
    std::vector<std::pair<std::size_t, std::size_t>> ends_;
    std::vector<RpqEvaluator> evaluators_;
    std::vector<std::size_t> items_;
    Mask base_;
    bool baseline_ = false;
};

// ---- short-word structure -------------------------------------------------

/// Matching s→t paths of length ≤ 2, each as its edge sequence.
std::vector<std::vector<std::size_t>> short_matches(const LabeledGraph& graph, std::size_t s,
                                                    std::size_t t, const Dfa& dfa) {
    if (!language_profile(dfa).short2) {
        throw Error(ErrorKind::InvalidArgument, "language has words longer than two symbols");
    }
    auto symbol_of = [&](std::size_t e) { return dfa.symbol_index(graph.edge(e).label); };
    std::vector<std::vector<std::size_t>> matches;
    if (s == t && empty_path_matches() && dfa.accepts_empty_word()) matches.push_back({});
    for (std::size_t e1 : graph.out_edges(s)) {
        auto a = symbol_of(e1);
        if (!a) continue;
        const std::size_t q1 = dfa.next(dfa.start(), *a);
        const std::size_t mid = graph.target_index(e1);
        if (mid == t && dfa.is_accepting(q1)) matches.push_back({e1});
        if (!dfa.is_useful(q1)) continue;
        for (std::size_t e2 : graph.out_edges(mid)) {
            if (graph.target_index(e2) != t) continue;
            auto b = symbol_of(e2);
            if (b && dfa.is_accepting(dfa.next(q1, *b))) matches.push_back({e1, e2});
        }
    }
    return matches;
}

bool endogenous(const LabeledGraph& graph, std::size_t e) {
    return graph.edge(e).origin == Origin::Endogenous;
}

struct IndexCategories {
    std::vector<std::size_t> permitted;
    std::vector<std::size_t> on_path1;
    std::vector<std::size_t> on_path2x;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    bool exogenous_match = false;
};

IndexCategories categorize_indices(const LabeledGraph& graph, std::size_t s, std::size_t t,
                                   const Dfa& dfa) {
    const auto matches = short_matches(graph, s, t, dfa);
    std::vector<int> uses(graph.edge_count(), 0);
    for (const auto& path : matches) {
        for (std::size_t e : path) {
            if (endogenous(graph, e) && ++uses[e] > 1) {
                throw Error(ErrorKind::NonDisjointStructure,
                            "edge '" + graph.edge(e).id + "' lies on more than one matching path");
            }
        }
    }
    IndexCategories out;
    std::vector<std::uint8_t> placed(graph.edge_count(), 0);
    for (const auto& path : matches) {
        std::vector<std::size_t> endo;
        for (std::size_t e : path) {
            if (endogenous(graph, e)) endo.push_back(e);
        }
        if (endo.empty()) {
            out.exogenous_match = true;
        } else if (endo.size() == 2) {
            out.pairs.emplace_back(endo[0], endo[1]);
        } else if (path.size() == 1) {
            out.on_path1.push_back(endo[0]);
        } else {
            out.on_path2x.push_back(endo[0]);
        }
        for (std::size_t e : endo) placed[e] = 1;
    }
    for (std::size_t e : graph.endogenous_edges()) {
        if (!placed[e]) out.permitted.push_back(e);
    }
    return out;
}

BigInt closed_form_blocking(std::size_t permitted, std::size_t pairs, bool exogenous_match,
                            std::size_t k) {
    if (exogenous_match) return 0;
    BigInt total = 0;
    for (std::size_t i = 0; i <= k && i <= permitted; ++i) {
        const std::size_t from_pairs = k - i;
        if (from_pairs > pairs) continue;
        total += binomial(permitted, i) * binomial(pairs, from_pairs) * (BigInt(1) << from_pairs);
    }
    return total;
}

/// Independent sets of a small graph on vertices 0..n-1, counted by size.
std::vector<BigInt> independent_set_polynomial(const std::vector<std::uint64_t>& adjacency) {
    const std::size_t n = adjacency.size();
    std::vector<BigInt> poly(n + 1, 0);
    // Vertex i is decided at depth i; `banned` holds neighbours of chosen vertices.
    auto recurse = [&](auto&& self, std::size_t i, std::uint64_t banned, std::size_t size) -> void {
        if (i == n) {
            poly[size] += 1;
            return;
        }
        self(self, i + 1, banned, size);
        if (!(banned >> i & 1u)) self(self, i + 1, banned | adjacency[i], size + 1);
    };
    recurse(recurse, 0, 0, 0);
    return poly;
}

std::vector<BigInt> multiply(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    std::vector<BigInt> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

/// Blocking sets are independent sets of the conflict graph over the
/// endogenous edges that are not forced out by a single-edge match.
std::vector<BigInt> component_blocking(const LabeledGraph& graph, std::size_t s, std::size_t t,
                                       const Dfa& dfa, std::size_t cap,
                                       std::size_t& largest_component) {
    const auto matches = short_matches(graph, s, t, dfa);
    const std::size_t m = graph.endogenous_edges().size();
    std::vector<std::uint8_t> forced(graph.edge_count(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> conflicts;
    bool exogenous_match = false;
    for (const auto& path : matches) {
        std::set<std::size_t> endo;
        for (std::size_t e : path) {
            if (endogenous(graph, e)) endo.insert(e);
        }
        if (endo.empty()) exogenous_match = true;
        else if (endo.size() == 1) forced[*endo.begin()] = 1;
        else conflicts.emplace_back(*endo.begin(), *endo.rbegin());
    }
    largest_component = 0;
    if (exogenous_match) return std::vector<BigInt>(m + 1, 0);

    std::vector<std::size_t> free_edges;
    std::vector<std::size_t> slot(graph.edge_count(), kNone);
    for (std::size_t e : graph.endogenous_edges()) {
        if (forced[e]) continue;
        slot[e] = free_edges.size();
        free_edges.push_back(e);
    }
    std::vector<std::vector<std::size_t>> neighbours(free_edges.size());
    for (auto [a, b] : conflicts) {
        if (forced[a] || forced[b]) continue;
        neighbours[slot[a]].push_back(slot[b]);
        neighbours[slot[b]].push_back(slot[a]);
    }

    std::vector<BigInt> blocking{1};
    std::vector<std::uint8_t> seen(free_edges.size(), 0);
    for (std::size_t root = 0; root < free_edges.size(); ++root) {
        if (seen[root]) continue;
        std::vector<std::size_t> component{root};
        seen[root] = 1;
        for (std::size_t i = 0; i < component.size(); ++i) {
            for (std::size_t n : neighbours[component[i]]) {
                if (!seen[n]) {
                    seen[n] = 1;
                    component.push_back(n);
                }
            }
        }
        largest_component = std::max(largest_component, component.size());
        if (component.size() > cap || component.size() > 63) {
            throw Error(ErrorKind::EnumerationOverflow,
                        "conflict component of " + std::to_string(component.size()) +
                            " edges exceeds the cap of " + std::to_string(cap));
        }
        std::map<std::size_t, std::size_t> local;
        for (std::size_t i = 0; i < component.size(); ++i) local[component[i]] = i;
        std::vector<std::uint64_t> adjacency(component.size(), 0);
        for (std::size_t i = 0; i < component.size(); ++i) {
            for (std::size_t n : neighbours[component[i]]) {
                adjacency[i] |= std::uint64_t{1} << local[n];
            }
        }
        blocking = multiply(blocking, independent_set_polynomial(adjacency));
    }
    blocking.resize(m + 1, 0);
    return blocking;
}

// ---- supports -------------------------------------------------------------

class Budget {
public:
    explicit Budget(std::uint64_t limit) : left_(limit) {}
    void spend(const char* what) {
        if (left_ == 0) {
            throw Error(ErrorKind::BudgetExceeded, std::string(what) + " exceeded its search budget");
        }
        --left_;
    }

private:
    std::uint64_t left_;
};

std::vector<PlayerSet> minimal_sets(std::set<PlayerSet> sets) {
    std::vector<PlayerSet> ordered(sets.begin(), sets.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const PlayerSet& a, const PlayerSet& b) {
        return a.count() < b.count();
    });
    std::vector<PlayerSet> kept;
    for (const auto& candidate : ordered) {
        bool dominated = std::any_of(kept.begin(), kept.end(),
                                     [&](const PlayerSet& k) { return k.subset_of(candidate); });
        if (!dominated) kept.push_back(candidate);
    }
    return kept;
}

std::string rational_flag(const char* name, const Rational& value) {
    return std::string(name) + "=" + to_string(value);
}

}  // namespace

bool query_holds(const LabeledGraph& graph, const Crpq& query,
                 const std::vector<std::size_t>& binding, const Mask* edges,
                 const Mask* vertices) {
    const auto ends = atom_endpoints(query, binding);
    for (std::size_t i = 0; i < ends.size(); ++i) {
        RpqEvaluator evaluator(graph, query.atoms()[i].dfa);
        if (!evaluator.holds(ends[i].first, ends[i].second, edges, vertices)) return false;
    }
    return true;
}

CoalitionGame make_game(const LabeledGraph& graph, const Crpq& query, const Assignment& binding,
                        PlayerKind kind) {
    auto context = std::make_shared<const GameContext>(graph, query, binding, kind);
    return CoalitionGame(context->player_ids(),
                         [context](const PlayerSet& coalition) { return context->value(coalition); });
}

CoalitionGame edge_game(const LabeledGraph& graph, const Crpq& query, const Assignment& binding) {
    return make_game(graph, query, binding, PlayerKind::Edge);
}

CoalitionGame vertex_game(const LabeledGraph& graph, const Crpq& query,
                          const Assignment& binding) {
    return make_game(graph, query, binding, PlayerKind::Vertex);
}

bool answer_is_exogenous(const LabeledGraph& graph, const Crpq& query, const Assignment& binding,
                         PlayerKind kind) {
    return GameContext(graph, query, binding, kind).baseline();
}

EdgeCategorization categorize_edges(const LabeledGraph& graph, std::string_view source,
                                    std::string_view target, const Dfa& dfa) {
    const auto found = categorize_indices(graph, vertex_or_throw(graph, source),
                                          vertex_or_throw(graph, target), dfa);
    auto ids = [&](const std::vector<std::size_t>& edges) {
        std::vector<EdgeId> out;
        for (std::size_t e : edges) out.push_back(graph.edge(e).id);
        std::sort(out.begin(), out.end());
        return out;
    };
    EdgeCategorization out;
    out.permitted = ids(found.permitted);
    out.on_path1 = ids(found.on_path1);
    out.on_path2x = ids(found.on_path2x);
    for (auto [a, b] : found.pairs) {
        auto pair = std::minmax(graph.edge(a).id, graph.edge(b).id);
        out.on_path2e_pairs.emplace_back(pair.first, pair.second);
    }
    std::sort(out.on_path2e_pairs.begin(), out.on_path2e_pairs.end());
    out.exogenous_match = found.exogenous_match;
    return out;
}

BigInt count_blocking(const EdgeCategorization& categories, std::size_t k) {
    if (k > categories.endogenous_count()) return 0;
    return closed_form_blocking(categories.permitted.size(), categories.on_path2e_pairs.size(),
                                categories.exogenous_match, k);
}

BigInt count_enabling(const LabeledGraph& graph, std::string_view source, std::string_view target,
                      const Dfa& dfa, std::size_t k) {
    const auto categories = categorize_edges(graph, source, target, dfa);
    const std::size_t m = categories.endogenous_count();
    if (k > m) return 0;
    return binomial(m, k) - count_blocking(categories, k);
}

EnablingProfile enabling_profile(const LabeledGraph& graph, std::size_t source, std::size_t target,
                                 const Dfa& dfa, BlockingCounter counter,
                                 std::size_t component_cap) {
    const std::size_t m = graph.endogenous_edges().size();
    EnablingProfile profile;
    std::vector<BigInt> blocking(m + 1, 0);
    if (counter == BlockingCounter::ClosedForm) {
        const auto c = categorize_indices(graph, source, target, dfa);
        for (std::size_t k = 0; k <= m; ++k) {
            blocking[k] = closed_form_blocking(c.permitted.size(), c.pairs.size(),
                                               c.exogenous_match, k);
        }
    } else {
        blocking = component_blocking(graph, source, target, dfa, component_cap,
                                      profile.largest_component);
    }
    for (std::size_t k = 0; k <= m; ++k) profile.counts.push_back(binomial(m, k) - blocking[k]);
    return profile;
}

Rational shapley_short_rpq(const LabeledGraph& graph, std::string_view source,
                           std::string_view target, const Dfa& dfa, std::string_view edge,
                           BlockingCounter counter, std::size_t component_cap,
                           std::size_t* largest_component) {
    auto e = graph.find_edge(edge);
    if (!e || !endogenous(graph, *e)) {
        throw Error(ErrorKind::InvalidPlayerSet,
                    "'" + std::string(edge) + "' is not an endogenous edge");
    }
    const std::size_t m = graph.endogenous_edges().size();
    const LabeledGraph fixed = with_edge_origin(graph, *e, Origin::Exogenous);
    const LabeledGraph removed = without_edge(graph, *e);
    const auto with = enabling_profile(fixed, vertex_or_throw(fixed, source),
                                       vertex_or_throw(fixed, target), dfa, counter, component_cap);
    const auto without =
        enabling_profile(removed, vertex_or_throw(removed, source),
                         vertex_or_throw(removed, target), dfa, counter, component_cap);
    if (largest_component) {
        *largest_component = std::max(with.largest_component, without.largest_component);
    }
    Rational total = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const BigInt diff = with.counts[k] - without.counts[k];
        if (diff != 0) total += Rational(diff) * shapley_weight(k, m);
    }
    return total;
}

GapBound gap_bound(const Crpq& query, std::size_t m_n, PlayerKind kind) {
    GapBound bound;
    bound.m_n = m_n;
    for (const auto& atom : query.atoms()) {
        if (!atom.profile.is_finite) {
            throw Error(ErrorKind::InfiniteLanguage, "atom '" + atom.expression +
                                                         "' has an infinite language; no gap bound");
        }
        bound.k_sum += atom.profile.max_word_length.value_or(0);
        if (kind == PlayerKind::Vertex) bound.k_sum += 1;
    }
    BigInt product = 1;
    for (std::size_t j = 0; j < std::min(bound.k_sum, m_n); ++j) product *= m_n - j;
    bound.gap = Rational(BigInt(1), product);
    return bound;
}

Estimate shapley_multiplicative(const CoalitionGame& game, std::size_t player,
                                const GapBound& bound, double eps, double delta,
                                std::uint64_t seed) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "multiplicative eps must lie in (0, 1)");
    }
    const double gap = bound.gap.convert_to<double>();
    Estimate estimate = shapley_mc(game, player, gap * eps / (1.0 + eps), delta, seed);
    estimate.eps = eps;
    if (estimate.value < gap / 2.0) estimate.value = 0.0;
    return estimate;
}

bool edge_on_simple_path(const LabeledGraph& graph, std::string_view source,
                         std::string_view target, std::string_view edge, std::uint64_t budget) {
    const std::size_t s = vertex_or_throw(graph, source);
    const std::size_t t = vertex_or_throw(graph, target);
    auto e = graph.find_edge(edge);
    if (!e) throw Error(ErrorKind::InvalidPlayerSet, "unknown edge '" + std::string(edge) + "'");
    const std::size_t u = graph.source_index(*e);
    const std::size_t w = graph.target_index(*e);
    if (s == t || u == w || u == t || w == s) return false;

    const std::size_t n = graph.vertex_count();
    // Vertices that can still reach u without touching w or t.
    std::vector<std::uint8_t> reaches_u(n, 0);
    std::vector<std::size_t> stack{u};
    reaches_u[u] = 1;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t in : graph.in_edges(v)) {
            const std::size_t p = graph.source_index(in);
            if (reaches_u[p] || p == w || p == t) continue;
            reaches_u[p] = 1;
            stack.push_back(p);
        }
    }
    if (!reaches_u[s]) return false;

    Budget nodes(budget);
    std::vector<std::uint8_t> on_prefix(n, 0);
    auto suffix_exists = [&]() {
        std::vector<std::uint8_t> seen(on_prefix);
        std::vector<std::size_t> frontier{w};
        seen[w] = 1;
        while (!frontier.empty()) {
            const std::size_t v = frontier.back();
            frontier.pop_back();
            if (v == t) return true;
            for (std::size_t out : graph.out_edges(v)) {
                const std::size_t next = graph.target_index(out);
                if (seen[next]) continue;
                seen[next] = 1;
                frontier.push_back(next);
            }
        }
        return false;
    };
    auto extend = [&](auto&& self, std::size_t v) -> bool {
        nodes.spend("simple-path search");
        on_prefix[v] = 1;
        bool found = false;
        if (v == u) {
            found = suffix_exists();
        } else {
            for (std::size_t out : graph.out_edges(v)) {
                const std::size_t next = graph.target_index(out);
                if (on_prefix[next] || !reaches_u[next]) continue;
                if (self(self, next)) {
                    found = true;
                    break;
                }
            }
        }
        on_prefix[v] = 0;
        return found;
    };
    return extend(extend, s);
}

void candidate_supports(const LabeledGraph& graph, const Crpq& query, const Assignment& binding,
                        PlayerKind kind, const SupportVisitor& visit, std::uint64_t budget) {
    const auto ends = atom_endpoints(query, resolve_assignment(graph, query, binding));
    const bool edges = kind == PlayerKind::Edge;
    const auto items = edges ? graph.endogenous_edges() : graph.endogenous_vertices();
    const std::size_t players = items.size();
    std::vector<std::size_t> player_of(edges ? graph.edge_count() : graph.vertex_count(), kNone);
    for (std::size_t p = 0; p < players; ++p) player_of[items[p]] = p;

    Budget nodes(budget);
    std::vector<std::vector<PlayerSet>> per_atom;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        const Dfa& dfa = query.atoms()[i].dfa;
        const auto [s, t] = ends[i];
        RpqEvaluator evaluator(graph, dfa);
        const auto alive = evaluator.coreachable(t);
        const std::size_t states = dfa.state_count();
        std::set<PlayerSet> found;
        std::vector<std::uint8_t> visited(graph.vertex_count() * states, 0);
        std::vector<int> uses(players, 0);
        auto take = [&](std::size_t item, int delta) {
            if (player_of[item] != kNone) uses[player_of[item]] += delta;
        };
        auto record = [&]() {
            PlayerSet set(players);
            for (std::size_t p = 0; p < players; ++p) {
                if (uses[p] > 0) set.insert(p);
            }
            found.insert(std::move(set));
        };
        auto walk = [&](auto&& self, std::size_t v, std::size_t q, std::size_t depth) -> void {
            nodes.spend("support enumeration");
            visited[v * states + q] = 1;
            if (v == t && dfa.is_accepting(q) && (depth > 0 || empty_path_matches())) record();
            for (std::size_t e : graph.out_edges(v)) {
                const int symbol = evaluator.edge_symbol(e);
                if (symbol < 0) continue;
                const std::size_t next = graph.target_index(e);
                const std::size_t q2 = dfa.next(q, static_cast<std::size_t>(symbol));
                if (!alive[next * states + q2] || visited[next * states + q2]) continue;
                take(edges ? e : next, +1);
                self(self, next, q2, depth + 1);
                take(edges ? e : next, -1);
            }
            visited[v * states + q] = 0;
        };
        if (alive[s * states + dfa.start()]) {
            if (!edges) take(s, +1);
            walk(walk, s, dfa.start(), 0);
        }
        if (found.empty()) return;
        per_atom.push_back(minimal_sets(std::move(found)));
    }

    PlayerSet current(players);
    auto combine = [&](auto&& self, std::size_t atom, const PlayerSet& acc) -> bool {
        if (atom == per_atom.size()) {
            nodes.spend("support enumeration");
            return visit(acc);
        }
        for (const auto& choice : per_atom[atom]) {
            PlayerSet next = acc;
            next |= choice;
            if (!self(self, atom + 1, next)) return false;
        }
        return true;
    };
    combine(combine, 0, current);
}

const char* to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::Auto: return "auto";
        case Mode::Exact: return "exact";
        case Mode::ApproxAdditive: return "approx-additive";
        case Mode::ApproxMultiplicative: return "approx-multiplicative";
    }
    return "?";
}

const char* to_string(Method method) noexcept {
    switch (method) {
        case Method::ExactPoly: return "exact-poly";
        case Method::ExactSubset: return "exact-subset";
        case Method::McAdditive: return "mc-additive";
        case Method::McMultiplicative: return "mc-multiplicative";
    }
    return "?";
}

const char* to_string(PlayerKind kind) noexcept {
    return kind == PlayerKind::Edge ? "edge" : "vertex";
}

Mode parse_mode(std::string_view text) {
    for (Mode m : {Mode::Auto, Mode::Exact, Mode::ApproxAdditive, Mode::ApproxMultiplicative}) {
        if (text == to_string(m)) return m;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

PlayerKind parse_player_kind(std::string_view text) {
    if (text == "edge") return PlayerKind::Edge;
    if (text == "vertex") return PlayerKind::Vertex;
    throw Error(ErrorKind::InvalidArgument, "unknown player kind '" + std::string(text) + "'");
}

std::size_t resolve_focus(const ExplainRequest& request, const CoalitionGame& game) {
    const std::string& id = *request.focus;
    if (auto index = game.index_of(id)) return *index;
    if (request.player_kind == PlayerKind::Edge) {
        const auto arrow = id.find("->");
        if (arrow != std::string::npos) {
            auto s = request.graph.find_vertex(id.substr(0, arrow));
            auto t = request.graph.find_vertex(id.substr(arrow + 2));
            if (s && t) {
                if (auto e = request.graph.find_edge_between(*s, *t)) {
                    if (auto index = game.index_of(request.graph.edge(*e).id)) return *index;
                }
            }
        }
    }
    throw Error(ErrorKind::InvalidPlayerSet,
                "'" + id + "' is not an endogenous " + to_string(request.player_kind));
}

namespace {

std::vector<std::size_t> selected_players(const ExplainRequest& request,
                                          const CoalitionGame& game) {
    if (request.focus) return {resolve_focus(request, game)};
    std::vector<std::size_t> all(game.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
}

/// Exact values through the short-word counter; nullopt when neither the
/// closed form nor the component counter applies.
std::optional<std::vector<Rational>> try_exact_poly(const ExplainRequest& request,
                                                    const CoalitionGame& game,
                                                    const std::vector<std::size_t>& chosen,
                                                    std::vector<std::string>& flags) {
    const auto& atom = request.query.atoms().front();
    const VertexId& s = request.binding.at(atom.source_var);
    const VertexId& t = request.binding.at(atom.target_var);
    auto run = [&](BlockingCounter counter, std::size_t& largest) {
        std::vector<Rational> values;
        for (std::size_t p : chosen) {
            std::size_t seen = 0;
            values.push_back(shapley_short_rpq(request.graph, s, t, atom.dfa, game.player(p),
                                               counter, request.component_cap, &seen));
            largest = std::max(largest, seen);
        }
        return values;
    };
    std::size_t largest = 0;
    try {
        return run(BlockingCounter::ClosedForm, largest);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonDisjointStructure) throw;
    }
    try {
        auto values = run(BlockingCounter::ConflictComponents, largest);
        flags.push_back("conflict-components:largest=" + std::to_string(largest));
        return values;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EnumerationOverflow) throw;
    }
    flags.push_back("conflict component over cap; generic engine used");
    return std::nullopt;
}

std::vector<Rational> exact_subset(const CoalitionGame& game, const std::vector<std::size_t>& chosen,
                                   std::size_t cap) {
    if (chosen.size() == 1) return {shapley_exact_subset(game, chosen.front(), cap)};
    return shapley_exact_subset_all(game, cap);
}

}  // namespace

ShapleyReport solve(const ExplainRequest& request) {
    const CoalitionGame game =
        make_game(request.graph, request.query, request.binding, request.player_kind);
    if (game.size() == 0) {
        throw Error(ErrorKind::NoPlayers, std::string("the graph has no endogenous ") +
                                              to_string(request.player_kind) + "s");
    }
    const auto chosen = selected_players(request, game);

    ShapleyReport report;
    if (request.query.has_empty_atom()) report.flags.push_back("empty-language");
    if (answer_is_exogenous(request.graph, request.query, request.binding, request.player_kind)) {
        report.flags.push_back("answer-exogenous");
    } else if (!game.value(PlayerSet::full(game.size()))) {
        report.flags.push_back("not-an-answer");
    }

    auto set_exact = [&](Method method, const std::vector<Rational>& values) {
        report.method = method;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            report.values.push_back({game.player(chosen[i]), values[i]});
        }
    };
    auto run_sampler = [&](Method method, const std::optional<GapBound>& bound, double eps) {
        report.method = method;
        const CoalitionGame cached = game.with_cache(std::size_t{1} << 16);
        for (std::size_t p : chosen) {
            Estimate estimate =
                bound ? shapley_multiplicative(cached, p, *bound, eps, request.delta, request.seed)
                      : shapley_mc(cached, p, eps, request.delta, request.seed);
            report.values.push_back({game.player(p), estimate});
        }
    };
    auto run_multiplicative = [&]() {
        const GapBound bound = gap_bound(request.query, game.size(), request.player_kind);
        double eps = request.eps;
        if (eps >= 1.0) {
            eps = 0.99;
            report.flags.push_back("eps clamped to 0.99");
        }
        report.flags.push_back(rational_flag("gap", bound.gap));
        run_sampler(Method::McMultiplicative, bound, eps);
    };

    const bool poly_eligible =
        request.player_kind == PlayerKind::Edge && request.query.is_single_short2_atom();

    switch (request.mode) {
        case Mode::Auto:
        case Mode::Exact: {
            if (poly_eligible) {
                if (auto values = try_exact_poly(request, game, chosen, report.flags)) {
                    set_exact(Method::ExactPoly, *values);
                    break;
                }
            }
            if (request.mode == Mode::Exact || game.size() <= request.subset_cap) {
                set_exact(Method::ExactSubset, exact_subset(game, chosen, request.subset_cap));
            } else if (request.query.all_finite()) {
                run_multiplicative();
            } else {
                report.flags.push_back(
                    request.atoms_non_redundant
                        ? "multiplicative guarantee unavailable for infinite-language atoms"
                        : "infinite-language atoms marked possibly redundant; only the additive "
                          "guarantee is cited");
                run_sampler(Method::McAdditive, std::nullopt, request.eps);
            }
            break;
        }
        case Mode::ApproxAdditive:
            run_sampler(Method::McAdditive, std::nullopt, request.eps);
            break;
        case Mode::ApproxMultiplicative:
            run_multiplicative();
            break;
    }
    return report;
}

}  // namespace rpqshap
