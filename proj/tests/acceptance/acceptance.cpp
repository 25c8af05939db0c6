#include <omp.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "rpqshap/cli.hpp"
#include "rpqshap/errors.hpp"
#include "rpqshap/kernels.hpp"
#include "rpqshap/shapley_path.hpp"

using namespace rpqshap;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

/// Runs one criterion, enforcing its time limit, and prints a single line.
bool criterion(int number, const std::string& title, double limit_seconds,
               const std::function<Verdict()>& body) {
    const auto start = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (seconds >= limit_seconds) {
        v.pass = false;
        v.detail += " (time limit exceeded)";
    }
    std::ostringstream line;
    line.precision(3);
    line << (v.pass ? "PASS" : "FAIL") << "  " << number << ". " << title << ": " << v.detail
         << " [" << seconds << " s]";
    std::cout << line.str() << std::endl;
    return v.pass;
}

ExplainRequest request_for(const LabeledGraph& g, const std::string& query,
                           const std::string& binding) {
    return ExplainRequest{.graph = g, .query = parse_crpq(query, g),
                          .binding = parse_assignment(binding)};
}

std::map<std::string, Rational> exact_values(const ShapleyReport& report) {
    std::map<std::string, Rational> out;
    for (const auto& v : report.values) out[v.id] = std::get<Rational>(v.value);
    return out;
}

bool matches(const std::map<std::string, Rational>& got,
             const std::map<std::string, Rational>& nonzero, std::string& why) {
    for (const auto& [id, value] : got) {
        const auto it = nonzero.find(id);
        const Rational want = it == nonzero.end() ? Rational(0) : it->second;
        if (value != want) {
            why += " " + id + "=" + to_string(value) + " expected " + to_string(want) + ";";
            return false;
        }
    }
    return true;
}

/// Checks the four axioms plus subset/permutation agreement on one game.
bool axioms_hold(const CoalitionGame& game, std::string& why) {
    const std::size_t n = game.size();
    const auto table = kernels::valuation_table(game);
    const auto values = shapley_exact_subset_all(game);
    Rational total = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (values[p] != shapley_exact_permutation(game, p)) {
            why = "subset and permutation forms differ";
            return false;
        }
        if (values[p] < 0) {
            why = "negative value";
            return false;
        }
        total += values[p];
        bool null = true;
        for (std::uint64_t m = 0; m < table.size() && null; ++m) {
            if (!(m >> p & 1u) && table[m] != table[m | (std::uint64_t{1} << p)]) null = false;
        }
        if (null && values[p] != 0) {
            why = "null player with nonzero value";
            return false;
        }
        for (std::size_t q = p + 1; q < n; ++q) {
            bool symmetric = true;
            for (std::uint64_t m = 0; m < table.size() && symmetric; ++m) {
                if ((m >> p & 1u) || (m >> q & 1u)) continue;
                if (table[m | (std::uint64_t{1} << p)] != table[m | (std::uint64_t{1} << q)]) {
                    symmetric = false;
                }
            }
            if (symmetric && values[p] != values[q]) {
                why = "symmetric players with different values";
                return false;
            }
        }
    }
    if (total != static_cast<int>(table.back()) - static_cast<int>(table.front())) {
        why = "efficiency violated";
        return false;
    }
    return true;
}

CoalitionGame random_monotone_game(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint64_t> generators;
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t g = rng() & ((std::uint64_t{1} << n) - 1);
        generators.push_back(g == 0 ? 1 : g);
    }
    std::vector<std::string> players;
    for (std::size_t i = 0; i < n; ++i) players.push_back("p" + std::to_string(i));
    return CoalitionGame(players, [generators](const PlayerSet& s) {
        const std::uint64_t mask = s.words().empty() ? 0 : s.words()[0];
        for (auto g : generators) {
            if ((g & mask) == g) return true;
        }
        return false;
    });
}

/// Smallest c with Pr[Binomial(n, p) <= c] >= level.
std::uint64_t binomial_quantile(std::uint64_t n, double p, double level) {
    double cdf = 0.0;
    for (std::uint64_t c = 0; c <= n; ++c) {
        const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(c + 1.0) - std::lgamma(n - c + 1.0) +
                               c * std::log(p) + (n - c) * std::log1p(-p);
        cdf += std::exp(log_pmf);
        if (cdf >= level) return c;
    }
    return n;
}

Verdict golden_values() {
    Verdict v;
    const auto g = fixtures::example_graph();
    std::string why;
    if (!matches(exact_values(solve(request_for(g, "a b c", "x=v1,y=v6"))),
                 {{"e13", Rational(1, 3)}, {"e35", Rational(1, 3)}, {"e56", Rational(1, 3)}}, why)) {
        v.pass = false;
    }
    const auto x = fixtures::example_graph({"e13"});
    if (!matches(exact_values(solve(request_for(x, "a b c", "x=v1,y=v6"))),
                 {{"e35", Rational(1, 2)}, {"e56", Rational(1, 2)}}, why)) {
        v.pass = false;
    }
    const auto ab = exact_values(solve(request_for(g, "a b*", "x=v1,y=v6")));
    if (!matches(ab,
                 {{"e12", Rational(7, 12)},
                  {"e26", Rational(1, 4)},
                  {"e24", Rational(1, 12)},
                  {"e46", Rational(1, 12)}},
                 why)) {
        v.pass = false;
    }
    Rational total = 0;
    for (const auto& [id, value] : ab) total += value;
    if (total != 1 || ab.size() != 9) {
        v.pass = false;
        why += " a b* values sum to " + to_string(total) + ";";
    }
    v.detail = v.pass ? "abc, abc with e13 fixed, and ab* match exactly; ab* sums to 1" : why;
    return v;
}

Verdict definition_agreement() {
    std::mt19937_64 rng(2718);
    std::string why;
    for (int round = 0; round < 200; ++round) {
        const auto game = random_monotone_game(rng, 1 + rng() % 8);
        if (!axioms_hold(game, why)) return {false, "random game " + std::to_string(round) + ": " + why};
    }
    const char* vertices[] = {"s", "u", "t"};
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) slots.emplace_back(a, b);
    }
    const char* queries[] = {"a b", "a* b", ".*", "a | b a", "(a|b) b*"};
    std::size_t games = 0;
    for (std::uint32_t choice = 0; choice < (1u << slots.size()); ++choice) {
        if (std::popcount(choice) != 4) continue;
        for (std::uint32_t labels = 0; labels < 16; ++labels) {
            std::vector<Edge> edges;
            std::size_t bit = 0;
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (!(choice >> i & 1u)) continue;
                edges.push_back({"e" + std::to_string(bit), vertices[slots[i].first],
                                 (labels >> bit & 1u) ? "b" : "a", vertices[slots[i].second],
                                 Origin::Endogenous});
                ++bit;
            }
            std::vector<Vertex> vs;
            for (const char* name : vertices) vs.push_back({name, Origin::Endogenous});
            const auto g = LabeledGraph::build(vs, edges);
            for (const char* q : queries) {
                const auto game = edge_game(g, fixtures::single_atom(q, g), fixtures::bind("s", "t"));
                ++games;
                if (!axioms_hold(game, why)) {
                    return {false, "4-edge graph with query " + std::string(q) + ": " + why};
                }
            }
        }
    }
    return {true, "200 random games and " + std::to_string(games) +
                      " exhaustive 4-edge games agree and satisfy the axioms"};
}

std::function<bool(std::uint64_t)> oracle_valuation(const LabeledGraph& g, const std::string& lang,
                                                    std::size_t s, std::size_t t) {
    return oracle::edge_valuation(g, {{parse_regex(lang), s, t}});
}

Verdict polynomial_algorithm() {
    std::mt19937_64 rng(31415);
    std::size_t disjoint = 0, fallback = 0, values = 0;
    auto check_instance = [&](const LabeledGraph& g, const std::string& lang, std::size_t s,
                              std::size_t t, BlockingCounter counter) -> std::string {
        const auto dfa = fixtures::single_atom(lang, g).atoms().front().dfa;
        const auto v = oracle_valuation(g, lang, s, t);
        const auto players = g.endogenous_edges();
        for (std::size_t i = 0; i < players.size(); ++i) {
            const auto expected = oracle::permutation_shapley(v, players.size(), i);
            const auto got = shapley_short_rpq(g, g.vertex(s).id, g.vertex(t).id, dfa,
                                               g.edge(players[i]).id, counter);
            ++values;
            if (got != expected) {
                return "language " + lang + " edge " + g.edge(players[i]).id + ": " + to_string(got) +
                       " vs oracle " + to_string(expected);
            }
        }
        return {};
    };
    while (disjoint < 500 || fallback < 200) {
        const bool loops = disjoint >= 500;
        const auto g = fixtures::random_graph(rng, 4, loops ? 7 : 9, {"a", "b"}, 0.3, loops);
        if (g.endogenous_edges().empty() || g.endogenous_edges().size() > 8) continue;
        const std::string lang = fixtures::random_short_language(rng, loops);
        const auto dfa = fixtures::single_atom(lang, g).atoms().front().dfa;
        const std::size_t s = rng() % g.vertex_count(), t = rng() % g.vertex_count();
        bool is_disjoint = true;
        try {
            categorize_edges(g, g.vertex(s).id, g.vertex(t).id, dfa);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NonDisjointStructure) throw;
            is_disjoint = false;
        }
        if (is_disjoint && disjoint < 500) {
            ++disjoint;
            const auto why = check_instance(g, lang, s, t, BlockingCounter::ClosedForm);
            if (!why.empty()) return {false, why};
        } else if (!is_disjoint && fallback < 200) {
            ++fallback;
            const auto why = check_instance(g, lang, s, t, BlockingCounter::ConflictComponents);
            if (!why.empty()) return {false, "fallback, " + why};
        }
    }
    return {true, std::to_string(disjoint) + " disjoint and " + std::to_string(fallback) +
                      " non-disjoint instances, " + std::to_string(values) +
                      " values equal the permutation oracle"};
}

Verdict additive_calibration() {
    const auto g = fixtures::example_graph();
    const auto game = edge_game(g, fixtures::single_atom("a b c", g), fixtures::bind("v1", "v6"))
                          .with_cache(1 << 10);
    const std::size_t e35 = *game.index_of("e35");
    const std::uint64_t runs = 2000;
    std::uint64_t failures = 0;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        const auto est = shapley_mc(game, e35, 0.1, 0.05, seed);
        if (est.samples != 185) return {false, "sample count " + std::to_string(est.samples)};
        if (std::abs(est.value - 1.0 / 3.0) > 0.1) ++failures;
    }
    const auto limit = binomial_quantile(runs, 0.05, 0.99);
    std::ostringstream d;
    d << failures << "/" << runs << " runs outside 0.1 (frequency " << double(failures) / runs
      << "), 99% binomial bound at rate 0.05 is " << limit;
    return {failures <= limit, d.str()};
}

Verdict multiplicative_wrapper() {
    const auto chain = load_graph("s a u n e1\nu b w n e2\nw c t n e3\n");
    const auto q = fixtures::single_atom("a b c", chain);
    const auto game = edge_game(chain, q, fixtures::bind("s", "t")).with_cache(64);
    const auto bound = gap_bound(q, game.size());
    if (bound.gap != Rational(1, 6)) return {false, "gap " + to_string(bound.gap)};
    const double v = 1.0 / 3.0;
    const std::uint64_t runs = 1000;
    std::uint64_t failures = 0;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        const auto est = shapley_multiplicative(game, *game.index_of("e2"), bound, 0.5, 0.05, seed);
        if (est.value < v / 1.5 || est.value > 1.5 * v) ++failures;
    }

    const auto extended = load_graph("s a u n e1\nu b w n e2\nw c t n e3\ns a t n e4\n");
    const auto q2 = fixtures::single_atom("a b c", extended);
    const auto game2 = edge_game(extended, q2, fixtures::bind("s", "t")).with_cache(64);
    const auto bound2 = gap_bound(q2, game2.size());
    const std::size_t null = *game2.index_of("e4");
    std::uint64_t null_nonzero = 0;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        if (shapley_multiplicative(game2, null, bound2, 0.5, 0.05, seed).value != 0.0) ++null_nonzero;
    }
    std::ostringstream d;
    d << failures << "/" << runs << " runs outside [v/1.5, 1.5v]; null player nonzero in "
      << null_nonzero << "/" << runs << " runs";
    return {failures <= runs / 20 && null_nonzero == 0, d.str()};
}

Verdict nonzero_decision() {
    std::mt19937_64 rng(16180);
    const char* queries[] = {".*", "a b*", "a | b a", "(a|b) (a|b)", "(x, a*, z) & (z, b, y)"};
    std::size_t decided = 0, path_checks = 0;
    for (int round = 0; round < 400; ++round) {
        const bool exogenous = round % 2 == 1;
        const auto g = fixtures::random_graph(rng, 5, 7, {"a", "b"}, exogenous ? 0.25 : 0.0,
                                              round % 3 == 0);
        const std::string query = queries[round % 5];
        const auto s = g.vertex(rng() % g.vertex_count()).id;
        const auto t = g.vertex(rng() % g.vertex_count()).id;
        Assignment binding = fixtures::bind(s, t);
        if (query.find('&') != std::string::npos) binding["z"] = g.vertex(rng() % g.vertex_count()).id;
        const auto q = parse_crpq(query, g);
        for (auto kind : {PlayerKind::Edge, PlayerKind::Vertex}) {
            const auto game = make_game(g, q, binding, kind);
            if (game.size() == 0 || game.size() > 7) continue;
            const auto values = shapley_exact_subset_all(game);
            const SupportEnumerator supports = [&](const SupportVisitor& visit) {
                candidate_supports(g, q, binding, kind, visit);
            };
            for (std::size_t p = 0; p < game.size(); ++p) {
                const bool truth = values[p] > 0;
                ++decided;
                if (shapley_nonzero(game, p, supports) != truth) {
                    return {false, "shapley_nonzero disagrees on " + game.player(p) + " for " + query +
                                       " (" + to_string(kind) + " game)"};
                }
                if (kind == PlayerKind::Edge && query == ".*" && !exogenous) {
                    ++path_checks;
                    if (edge_on_simple_path(g, s, t, game.player(p)) != truth) {
                        return {false, "edge_on_simple_path disagrees on " + game.player(p)};
                    }
                }
            }
        }
    }
    return {true, std::to_string(decided) + " verdicts from shapley_nonzero and " +
                      std::to_string(path_checks) + " from edge_on_simple_path match exact values"};
}

Verdict query_evaluation() {
    const auto g = fixtures::example_graph();
    auto rpq = [&](const std::string& re, const char* s, const char* t) {
        return eval_rpq(g, s, t, fixtures::single_atom(re, g).atoms().front().dfa);
    };
    const auto crpq = parse_crpq("(x1, a*, x2) & (x2, b*, x3)", g);
    auto bound = [&](const char* a, const char* b, const char* c) {
        return eval_crpq_bound(g, crpq, {{"x1", a}, {"x2", b}, {"x3", c}});
    };
    struct Case {
        const char* name;
        bool got;
        bool want;
    };
    const Case cases[] = {
        {"q1(v1,v6)", rpq(".*", "v1", "v6"), true},   {"q1(v1,v2)", rpq(".*", "v1", "v2"), true},
        {"q1(v3,v1)", rpq(".*", "v3", "v1"), false},  {"q2(v1,v6)", rpq("a b c", "v1", "v6"), true},
        {"q2(v3,v5)", rpq("a b c", "v3", "v5"), false}, {"q3(v1,v6)", rpq("a b*", "v1", "v6"), true},
        {"q3(v3,v5)", rpq("a b*", "v3", "v5"), false}, {"q[v1,v2,v6]", bound("v1", "v2", "v6"), true},
        {"q[v1,v3,v6]", bound("v1", "v3", "v6"), false},
    };
    for (const auto& c : cases) {
        if (c.got != c.want) return {false, std::string(c.name) + " wrong"};
    }
    return {true, std::to_string(std::size(cases)) + " evaluations match"};
}

std::string cli_output(const std::vector<std::string>& args, int& code) {
    std::vector<const char*> argv{"rpqshap"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
}

Verdict determinism() {
    const std::string example = RPQSHAP_DATA_DIR "/example.tsv";
    const std::vector<std::vector<std::string>> commands = {
        {"shapley", "--graph", example, "--query", "a b*", "--bind", "x=v1,y=v6", "--mode",
         "approx-additive", "--seed", "17", "--format", "json"},
        {"shapley", "--graph", example, "--query", "a b c", "--bind", "x=v1,y=v6", "--mode",
         "approx-additive", "--eps", "0.02", "--seed", "5", "--format", "csv"},
        {"shapley", "--graph", example, "--query", "a b", "--bind", "x=v1,y=v4", "--mode",
         "approx-multiplicative", "--eps", "0.5", "--seed", "99"},
        {"shapley", "--graph", example, "--query", "(x, a*, z) & (z, b*, y)", "--bind",
         "x=v1,z=v2,y=v6", "--player-kind", "vertex", "--mode", "approx-additive", "--seed", "3",
         "--format", "json"},
    };
    const int saved = omp_get_max_threads();
    std::size_t compared = 0;
    for (const auto& cmd : commands) {
        int code = 0;
        omp_set_num_threads(1);
        const auto reference = cli_output(cmd, code);
        if (code != 0 || reference.empty()) {
            omp_set_num_threads(saved);
            return {false, "command failed with exit code " + std::to_string(code)};
        }
        for (int threads : {1, 2, 3, 8}) {
            omp_set_num_threads(threads);
            for (int repeat = 0; repeat < 2; ++repeat) {
                ++compared;
                if (cli_output(cmd, code) != reference) {
                    omp_set_num_threads(saved);
                    return {false, "report changed with " + std::to_string(threads) + " threads"};
                }
            }
        }
    }
    omp_set_num_threads(saved);
    return {true, std::to_string(compared) + " repeated sampled reports are byte-identical"};
}

}  // namespace

int main() {
    bool ok = true;
    ok &= criterion(1, "golden exact values", 5, golden_values);
    ok &= criterion(2, "subset and permutation forms agree, axioms hold", 120, definition_agreement);
    ok &= criterion(3, "short-word algorithm equals the oracle", 300, polynomial_algorithm);
    ok &= criterion(4, "additive sampler calibration", 60, additive_calibration);
    ok &= criterion(5, "multiplicative wrapper", 120, multiplicative_wrapper);
    ok &= criterion(6, "nonzero decision", 300, nonzero_decision);
    ok &= criterion(7, "query evaluation ground truth", 1, query_evaluation);
    ok &= criterion(8, "sampled reports are deterministic", 600, determinism);
    return ok ? 0 : 1;
}
