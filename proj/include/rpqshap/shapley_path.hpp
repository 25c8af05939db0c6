#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rpqshap/game.hpp"
#include "rpqshap/graph.hpp"
#include "rpqshap/numeric.hpp"
#include "rpqshap/query.hpp"

namespace rpqshap {

enum class PlayerKind { Edge, Vertex };

/// Does the bound query hold when only the masked items are present?
/// `binding` holds vertex indices in variable order.
bool query_holds(const LabeledGraph& graph, const Crpq& query,
                 const std::vector<std::size_t>& binding, const Mask* edges = nullptr,
                 const Mask* vertices = nullptr);

/// Players are the endogenous edges in id order. v(B) = 1 iff the answer
/// holds on G[B ∪ E_x] but not on G[E_x].
CoalitionGame edge_game(const LabeledGraph& graph, const Crpq& query, const Assignment& binding);

/// Players are the endogenous vertices in id order, including any bound
/// endpoint that is endogenous.
CoalitionGame vertex_game(const LabeledGraph& graph, const Crpq& query, const Assignment& binding);

CoalitionGame make_game(const LabeledGraph& graph, const Crpq& query, const Assignment& binding,
                        PlayerKind kind);

/// True when the answer already holds on the exogenous items alone.
bool answer_is_exogenous(const LabeledGraph& graph, const Crpq& query, const Assignment& binding,
                         PlayerKind kind);

struct EdgeCategorization {
    std::vector<EdgeId> permitted;
    std::vector<EdgeId> on_path1;
    std::vector<EdgeId> on_path2x;
    std::vector<std::pair<EdgeId, EdgeId>> on_path2e_pairs;
    /// Some matching path uses exogenous edges only (or is the empty path).
    bool exogenous_match = false;

    std::size_t endogenous_count() const {
        return permitted.size() + on_path1.size() + on_path2x.size() + 2 * on_path2e_pairs.size();
    }
};

/// Classifies endogenous edges by the s→t paths of length ≤ 2 they lie on.
/// The DFA must accept only words of length ≤ 2. Throws NonDisjointStructure
/// when an endogenous edge takes part in two matches or a match uses an
/// edge twice.
EdgeCategorization categorize_edges(const LabeledGraph& graph, std::string_view source,
                                    std::string_view target, const Dfa& dfa);

/// Size-k endogenous subsets that complete no match.
BigInt count_blocking(const EdgeCategorization& categories, std::size_t k);

/// Size-k endogenous subsets that, together with E_x, contain a match.
BigInt count_enabling(const LabeledGraph& graph, std::string_view source, std::string_view target,
                      const Dfa& dfa, std::size_t k);

/// How enabling counts are obtained for a short-word instance.
enum class BlockingCounter {
    /// Closed form over the four categories; needs disjoint matches.
    ClosedForm,
    /// Independent sets of the match conflict graph, one component at a time.
    ConflictComponents,
};

struct EnablingProfile {
    /// counts[k] = |M(G, s, t, L, k)| for k = 0..m.
    std::vector<BigInt> counts;
    /// Largest conflict component seen (ConflictComponents only).
    std::size_t largest_component = 0;
};

inline constexpr std::size_t kDefaultComponentCap = 24;

EnablingProfile enabling_profile(const LabeledGraph& graph, std::size_t source, std::size_t target,
                                 const Dfa& dfa, BlockingCounter counter,
                                 std::size_t component_cap = kDefaultComponentCap);

/// Exact Shapley value of endogenous edge `edge` for a single short-word
/// atom, computed from enabling counts on G with e exogenous and on G∖e.
Rational shapley_short_rpq(const LabeledGraph& graph, std::string_view source,
                           std::string_view target, const Dfa& dfa, std::string_view edge,
                           BlockingCounter counter = BlockingCounter::ClosedForm,
                           std::size_t component_cap = kDefaultComponentCap,
                           std::size_t* largest_component = nullptr);

struct GapBound {
    std::size_t k_sum = 0;
    std::size_t m_n = 0;
    Rational gap = 1;
};

/// Lower bound on every nonzero value of a finite-language game with m_n
/// players. In vertex mode each atom also counts its endpoints, so k_sum
/// sums (longest word + 1). Throws InfiniteLanguage.
GapBound gap_bound(const Crpq& query, std::size_t m_n, PlayerKind kind = PlayerKind::Edge);

/// Additive sampler at tolerance gap·ε/(1+ε), with estimates below gap/2
/// rounded to 0.
Estimate shapley_multiplicative(const CoalitionGame& game, std::size_t player,
                                const GapBound& bound, double eps, double delta,
                                std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSearchBudget = 1'000'000;

/// Does some vertex-simple path from s to t use the edge? Backtracking;
/// throws BudgetExceeded after `budget` search nodes.
bool edge_on_simple_path(const LabeledGraph& graph, std::string_view source,
                         std::string_view target, std::string_view edge,
                         std::uint64_t budget = kDefaultSearchBudget);

/// Feeds every union of per-atom matching product-simple paths, reduced to
/// their endogenous players, to `visit`. Covers every minimal winning
/// coalition of the matching game. Throws BudgetExceeded.
void candidate_supports(const LabeledGraph& graph, const Crpq& query, const Assignment& binding,
                        PlayerKind kind, const SupportVisitor& visit,
                        std::uint64_t budget = kDefaultSearchBudget);

enum class Mode { Auto, Exact, ApproxAdditive, ApproxMultiplicative };
enum class Method { ExactPoly, ExactSubset, McAdditive, McMultiplicative };

const char* to_string(Mode mode) noexcept;
const char* to_string(Method method) noexcept;
const char* to_string(PlayerKind kind) noexcept;
Mode parse_mode(std::string_view text);
PlayerKind parse_player_kind(std::string_view text);

struct ExplainRequest {
    LabeledGraph graph;
    Crpq query;
    Assignment binding;
    PlayerKind player_kind = PlayerKind::Edge;
    std::optional<std::string> focus{};
    Mode mode = Mode::Auto;
    double eps = 0.05;
    double delta = 0.01;
    std::uint64_t seed = 0;
    std::size_t subset_cap = kDefaultSubsetCap;
    std::size_t component_cap = kDefaultComponentCap;
    /// Only changes which guarantee the report cites for infinite atoms.
    bool atoms_non_redundant = true;
};

struct PlayerValue {
    std::string id;
    std::variant<Rational, Estimate> value;
};

struct ShapleyReport {
    Method method = Method::ExactSubset;
    std::vector<PlayerValue> values;
    std::vector<std::string> flags;
};

/// Resolves a focus id: a player id, or for edges also "src->dst".
std::size_t resolve_focus(const ExplainRequest& request, const CoalitionGame& game);

ShapleyReport solve(const ExplainRequest& request);

}  // namespace rpqshap
