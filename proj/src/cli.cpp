#include "rpqshap/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpqshap/errors.hpp"
#include "rpqshap/graph.hpp"
#include "rpqshap/query.hpp"
#include "rpqshap/regex.hpp"
#include "rpqshap/shapley_path.hpp"

namespace rpqshap::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string command;
    std::string graph_path;
    std::string query;
    std::string binding;
    std::string player_kind = "edge";
    std::optional<std::string> focus;
    std::string mode = "auto";
    double eps = 0.05;
    double delta = 0.01;
    std::uint64_t seed = 0;
    std::string format = "table";
    std::optional<std::size_t> cap;
    std::uint64_t budget = kDefaultSearchBudget;
    bool redundant_atoms = false;
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EnumerationOverflow: return kOverflow;
        case ErrorKind::InfiniteLanguage: return kInfiniteLanguage;
        case ErrorKind::BudgetExceeded: return kBudget;
        case ErrorKind::NonDisjointStructure: return kFailure;
        default: return kInvalidInput;
    }
}

std::string format_double(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

/// Left-aligned columns separated by two spaces; no trailing blanks.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string text;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            text += cells[c];
            if (c + 1 < cells.size()) text += std::string(width[c] - cells[c].size() + 2, ' ');
        }
        out << text << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

void print_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out << ',';
            out << cells[c];
        }
        out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

struct Loaded {
    LabeledGraph graph;
    Crpq query;
};

Loaded load_inputs(const RunConfig& cfg) {
    LabeledGraph graph = load_graph_file(cfg.graph_path);
    Crpq query = parse_crpq(cfg.query, graph);
    return {std::move(graph), std::move(query)};
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
    auto [graph, query] = load_inputs(cfg);
    const bool holds = eval_crpq_bound(graph, query, parse_assignment(cfg.binding));
    if (cfg.format == "json") {
        out << json{{"result", holds ? 1 : 0}}.dump() << '\n';
    } else if (cfg.format == "csv") {
        out << "result\n" << (holds ? 1 : 0) << '\n';
    } else {
        out << (holds ? 1 : 0) << '\n';
    }
    return kOk;
}

int cmd_answers(const RunConfig& cfg, std::ostream& out) {
    auto [graph, query] = load_inputs(cfg);
    const auto answers = enumerate_answers(graph, query, cfg.cap.value_or(1'000'000));
    if (cfg.format == "json") {
        out << json{{"variables", query.variables()}, {"answers", answers}}.dump() << '\n';
    } else if (cfg.format == "csv") {
        print_csv(out, query.variables(), answers);
    } else {
        print_table(out, query.variables(), answers);
    }
    return kOk;
}

ExplainRequest make_request(const RunConfig& cfg) {
    auto [graph, query] = load_inputs(cfg);
    ExplainRequest request{.graph = std::move(graph),
                           .query = std::move(query),
                           .binding = parse_assignment(cfg.binding)};
    request.player_kind = parse_player_kind(cfg.player_kind);
    request.focus = cfg.focus;
    request.mode = parse_mode(cfg.mode);
    request.eps = cfg.eps;
    request.delta = cfg.delta;
    request.seed = cfg.seed;
    if (cfg.cap) request.subset_cap = *cfg.cap;
    request.atoms_non_redundant = !cfg.redundant_atoms;
    return request;
}

json player_json(const PlayerValue& entry) {
    json row{{"id", entry.id}};
    if (const auto* exact = std::get_if<Rational>(&entry.value)) {
        row["value"] = to_string(*exact);
    } else {
        const auto& estimate = std::get<Estimate>(entry.value);
        row["value"] = estimate.value;
        row["eps"] = estimate.eps;
        row["delta"] = estimate.delta;
        row["samples"] = estimate.samples;
        row["seed"] = estimate.seed;
    }
    return row;
}

std::vector<std::string> player_cells(const PlayerValue& entry, bool sampled) {
    if (const auto* exact = std::get_if<Rational>(&entry.value)) {
        return sampled ? std::vector<std::string>{entry.id, to_string(*exact), "", "", "", ""}
                       : std::vector<std::string>{entry.id, to_string(*exact)};
    }
    const auto& e = std::get<Estimate>(entry.value);
    return {entry.id,
            format_double(e.value),
            format_double(e.eps),
            format_double(e.delta),
            std::to_string(e.samples),
            std::to_string(e.seed)};
}

double numeric_value(const PlayerValue& entry) {
    if (const auto* exact = std::get_if<Rational>(&entry.value)) return exact->convert_to<double>();
    return std::get<Estimate>(entry.value).value;
}

bool value_greater(const PlayerValue& a, const PlayerValue& b) {
    const auto* ra = std::get_if<Rational>(&a.value);
    const auto* rb = std::get_if<Rational>(&b.value);
    if (ra && rb && *ra != *rb) return *ra > *rb;
    if (!(ra && rb)) {
        const double x = numeric_value(a);
        const double y = numeric_value(b);
        if (x != y) return x > y;
    }
    return a.id < b.id;
}

int cmd_shapley(const RunConfig& cfg, std::ostream& out) {
    const ShapleyReport report = solve(make_request(cfg));
    const bool sampled =
        report.method == Method::McAdditive || report.method == Method::McMultiplicative;
    if (cfg.format == "json") {
        json players = json::array();
        for (const auto& entry : report.values) players.push_back(player_json(entry));
        out << json{{"method", to_string(report.method)},
                    {"players", players},
                    {"flags", report.flags}}
                   .dump(2)
            << '\n';
        return kOk;
    }
    std::vector<std::string> header{"id", "value"};
    if (sampled) header.insert(header.end(), {"eps", "delta", "samples", "seed"});
    std::vector<PlayerValue> ordered = report.values;
    if (cfg.format == "table") std::stable_sort(ordered.begin(), ordered.end(), value_greater);
    std::vector<std::vector<std::string>> rows;
    for (const auto& entry : ordered) rows.push_back(player_cells(entry, sampled));
    if (cfg.format == "csv") {
        print_csv(out, header, rows);
        return kOk;
    }
    out << "method: " << to_string(report.method) << '\n';
    for (const auto& flag : report.flags) out << "flag: " << flag << '\n';
    print_table(out, header, rows);
    return kOk;
}

enum class Verdict { False, True, Unknown };

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::False: return "false";
        case Verdict::True: return "true";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

int cmd_nonzero(const RunConfig& cfg, std::ostream& out) {
    const ExplainRequest request = make_request(cfg);
    const CoalitionGame game =
        make_game(request.graph, request.query, request.binding, request.player_kind);
    if (game.size() == 0) throw Error(ErrorKind::NoPlayers, "the graph has no endogenous players");

    std::vector<std::size_t> chosen;
    if (request.focus) {
        chosen.push_back(resolve_focus(request, game));
    } else {
        for (std::size_t p = 0; p < game.size(); ++p) chosen.push_back(p);
    }

    // Σ* over a fully endogenous edge set reduces to a simple-path question.
    const auto& atoms = request.query.atoms();
    const bool simple_path = request.player_kind == PlayerKind::Edge && atoms.size() == 1 &&
                             is_universal(atoms.front().dfa) &&
                             request.graph.exogenous_edges().empty();
    const std::string method = simple_path ? "simple-path" : "supports";

    std::vector<std::pair<std::string, Verdict>> verdicts;
    for (std::size_t p : chosen) {
        Verdict verdict;
        try {
            bool positive;
            if (simple_path) {
                positive = edge_on_simple_path(request.graph, request.binding.at(atoms[0].source_var),
                                               request.binding.at(atoms[0].target_var),
                                               game.player(p), cfg.budget);
            } else {
                positive = shapley_nonzero(game, p, [&](const SupportVisitor& visit) {
                    candidate_supports(request.graph, request.query, request.binding,
                                       request.player_kind, visit, cfg.budget);
                });
            }
            verdict = positive ? Verdict::True : Verdict::False;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded) throw;
            verdict = Verdict::Unknown;
        }
        verdicts.emplace_back(game.player(p), verdict);
    }

    if (cfg.format == "json") {
        json players = json::array();
        for (const auto& [id, v] : verdicts) players.push_back({{"id", id}, {"nonzero", to_string(v)}});
        out << json{{"method", method}, {"players", players}}.dump(2) << '\n';
    } else if (request.focus && cfg.format == "table") {
        out << to_string(verdicts.front().second) << '\n';
    } else {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [id, v] : verdicts) rows.push_back({id, to_string(v)});
        if (cfg.format == "csv") print_csv(out, {"id", "nonzero"}, rows);
        else print_table(out, {"id", "nonzero"}, rows);
    }
    const bool unknown = std::any_of(verdicts.begin(), verdicts.end(),
                                     [](const auto& v) { return v.second == Verdict::Unknown; });
    return unknown ? kBudget : kOk;
}

void add_common(CLI::App& sub, RunConfig& cfg, bool shapley_flags) {
    sub.add_option("--graph", cfg.graph_path, "graph file")->required();
    sub.add_option("--query", cfg.query, "query, e.g. \"(x, a b*, y)\"")->required();
    sub.add_option("--cap", cfg.cap, "enumeration cap");
    sub.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    if (sub.get_name() == "answers") return;
    sub.add_option("--bind", cfg.binding, "binding, e.g. x=v1,y=v6")->required();
    if (sub.get_name() == "eval") return;
    sub.add_option("--player-kind", cfg.player_kind, "edge or vertex")
        ->check(CLI::IsMember({"edge", "vertex"}));
    sub.add_option("--focus", cfg.focus, "single player id");
    sub.add_option("--budget", cfg.budget, "search-node budget");
    sub.add_flag("--redundant-atoms", cfg.redundant_atoms,
                 "do not assume the query's atoms are non-redundant");
    if (!shapley_flags) return;
    sub.add_option("--mode", cfg.mode, "auto, exact, approx-additive or approx-multiplicative")
        ->check(CLI::IsMember({"auto", "exact", "approx-additive", "approx-multiplicative"}));
    sub.add_option("--eps", cfg.eps, "tolerance");
    sub.add_option("--delta", cfg.delta, "failure probability");
    sub.add_option("--seed", cfg.seed, "random seed");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shapley contributions of graph edges and vertices to regular path query answers",
                 "rpqshap"};
    app.require_subcommand(1);
    RunConfig cfg;
    struct Command {
        const char* name;
        const char* help;
        int (*handler)(const RunConfig&, std::ostream&);
    };
    const Command commands[] = {
        {"eval", "evaluate the query on a bound answer (prints 1 or 0)", cmd_eval},
        {"answers", "list every answer of the query", cmd_answers},
        {"shapley", "Shapley values of the players for a bound answer", cmd_shapley},
        {"nonzero", "decide whether players have a positive Shapley value", cmd_nonzero},
    };
    for (const auto& command : commands) {
        CLI::App* sub = app.add_subcommand(command.name, command.help);
        add_common(*sub, cfg, std::string_view(command.name) == "shapley");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    for (const auto& command : commands) {
        if (!app.got_subcommand(command.name)) continue;
        try {
            return command.handler(cfg, out);
        } catch (const Error& e) {
            err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
            return exit_code_for(e.kind());
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kFailure;
        }
    }
    return kInvalidInput;
}

}  // namespace rpqshap::cli
