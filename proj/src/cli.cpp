#include "mswig/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "mswig/citest.hpp"
#include "mswig/graph_text.hpp"
#include "mswig/identification.hpp"
#include "mswig/missingness.hpp"
#include "mswig/moments.hpp"
#include "mswig/simulate.hpp"
#include <nlohmann/json.hpp>

namespace mswig {

namespace {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
    if (out_path.empty())
        out << content;
    else
        atomic_write(out_path, content);
}

// ---- small parsers -----------------------------------------------------------

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, delim)) out.push_back(trim(cur));
    return out;
}

Term parse_term(const std::string& raw) {
    std::string s = trim(raw);
    size_t p = s.find('(');
    if (p == std::string::npos) return Term(s);
    if (s.back() != ')') throw std::invalid_argument("malformed term: " + raw);
    Term t(trim(s.substr(0, p)));
    for (const auto& l : split(s.substr(p + 1, s.size() - p - 2), ','))
        t.labels.push_back(l);
    return t;
}

std::vector<Term> parse_terms(const std::string& s) {
    // commas inside label parentheses do not separate terms
    std::vector<Term> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            if (!trim(cur).empty()) out.push_back(parse_term(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(parse_term(cur));
    return out;
}

// "A,B _||_ C | D,E [given S=1]"
CIStatement parse_statement_text(const std::string& text) {
    std::string s = text;
    std::vector<std::string> events;
    size_t g = s.find("given ");
    if (g != std::string::npos) {
        std::string ev = s.substr(g + 6);
        s = s.substr(0, g);
        while (!ev.empty() && (ev.back() == ']' || ev.back() == ' ')) ev.pop_back();
        for (const auto& e : split(ev, ',')) {
            size_t eq = e.find('=');
            if (eq == std::string::npos || trim(e.substr(eq + 1)) != "1")
                throw std::invalid_argument("selection event must have the form S=1: " + e);
            events.push_back(trim(e.substr(0, eq)));
        }
        size_t br = s.rfind('[');
        if (br != std::string::npos) s = s.substr(0, br);
    }
    size_t sep = s.find("_||_");
    if (sep == std::string::npos)
        throw std::invalid_argument("statement must contain _||_ : " + text);
    std::string lhs = s.substr(0, sep), rest = s.substr(sep + 4);
    std::string rhs = rest, given;
    size_t bar = rest.find('|');
    if (bar != std::string::npos) {
        rhs = rest.substr(0, bar);
        given = rest.substr(bar + 1);
    }
    auto left = parse_terms(lhs), right = parse_terms(rhs), cond = parse_terms(given);
    if (left.empty() || right.empty())
        throw std::invalid_argument("statement needs nonempty sides: " + text);
    return CIStatement::make(left, right, cond, events);
}

Intervention parse_do(const std::vector<std::string>& items) {
    Intervention iv;
    for (const auto& item : items) {
        size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("intervention must have the form NODE=value: " + item);
        iv.assignments.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
    return iv;
}

void apply_learners_json(EstimatorConfig& cfg, const std::string& arg) {
    std::string text = !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
    json j = json::parse(text);
    if (j.contains("preset")) apply_learner_preset(cfg, j["preset"].get<std::string>());
    auto fill = [&](const char* key, LearnerSpec& spec) {
        if (!j.contains(key)) return;
        const json& sj = j[key];
        if (sj.contains("family")) spec.family = parse_family(sj["family"].get<std::string>());
        if (sj.contains("task")) spec.task = parse_task(sj["task"].get<std::string>());
        if (sj.contains("trees")) spec.trees = sj["trees"].get<int>();
        if (sj.contains("depth")) spec.depth = sj["depth"].get<int>();
        if (sj.contains("min_leaf")) spec.min_leaf = sj["min_leaf"].get<int>();
        if (sj.contains("bins")) spec.bins = sj["bins"].get<int>();
        if (sj.contains("k")) spec.k = sj["k"].get<int>();
        if (sj.contains("quantile_grid")) spec.quantile_grid = sj["quantile_grid"].get<int>();
        if (sj.contains("max_iter")) spec.max_iter = sj["max_iter"].get<int>();
        if (sj.contains("learning_rate")) spec.learning_rate = sj["learning_rate"].get<double>();
        if (sj.contains("ridge")) spec.ridge = sj["ridge"].get<double>();
    };
    fill("regression", cfg.regression);
    fill("propensity", cfg.propensity);
    fill("selection", cfg.selection);
    fill("quantile", cfg.quantile);
}

Roles load_roles(const std::string& arg) {
    std::string text = !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
    return parse_roles_json(text);
}

// ---- serialization -----------------------------------------------------------

json statements_json(const std::vector<CIStatement>& v) {
    json arr = json::array();
    for (const auto& s : v) arr.push_back(s.text());
    return arr;
}

std::string statements_text(const std::vector<CIStatement>& v) {
    std::ostringstream os;
    for (const auto& s : v) os << s.text() << "\n";
    return os.str();
}

json entry_json(const CatalogEntry& e) {
    json j;
    j["name"] = e.name;
    json rm = json::array();
    for (const auto& [a, b] : e.removed_edges) rm.push_back(json::array({a, b}));
    j["removed_edges"] = rm;
    j["implied"] = statements_json(e.implied);
    j["swig_statements"] = statements_json(e.swig_statements);
    j["untestable"] = statements_json(e.untestable);
    j["estimand_note"] = e.estimand_note;
    return j;
}

json estimate_json(const EstimateResult& r) {
    json j;
    j["estimand"] = r.estimand;
    j["value"] = r.value;
    j["std_error"] = r.std_error;
    j["ci_lower"] = r.ci_lower;
    j["ci_upper"] = r.ci_upper;
    j["n"] = r.n;
    j["clipped"] = r.clipped;
    j["note"] = r.note;
    return j;
}

json bounds_json(const BoundsResult& r) {
    json j;
    j["estimand"] = r.estimand;
    j["lower"] = r.lower;
    j["upper"] = r.upper;
    j["se_lower"] = r.se_lower;
    j["se_upper"] = r.se_upper;
    j["ci_lower"] = r.ci_lower;
    j["ci_upper"] = r.ci_upper;
    j["alpha"] = r.alpha;
    j["ci_method"] = r.ci_method;
    j["crossed"] = r.crossed;
    j["p_always_observed"] = r.p_always_observed;
    j["n"] = r.n;
    j["clipped"] = r.clipped;
    j["clamped_ratio_rows"] = r.clamped_ratio_rows;
    j["note"] = r.note;
    return j;
}

json het_json(const HetResult& h, const std::vector<std::string>& names) {
    json j;
    j["variables"] = names;
    json cells = json::array();
    for (const auto& c : h.cells) {
        json cj;
        cj["label"] = c.label;
        cj["value"] = c.value;
        cj["std_error"] = c.std_error;
        cj["n"] = c.n;
        cj["share"] = c.share;
        cells.push_back(cj);
    }
    j["cells"] = cells;
    j["aggregate"] = h.aggregate;
    j["aggregate_se"] = h.aggregate_se;
    return j;
}

json test_row_json(const CatalogTestRow& row) {
    json j;
    j["statement"] = row.result.statement;
    j["method"] = to_string(row.result.method);
    j["statistic"] = row.result.statistic;
    j["dof"] = row.result.dof;
    j["p_value"] = row.result.p_value;
    j["p_adjusted"] = row.p_adjusted;
    j["reject"] = row.result.reject;
    j["reject_adjusted"] = row.reject_adjusted;
    j["n_used"] = row.result.n_used;
    j["strata"] = row.result.strata_used;
    j["note"] = row.result.note;
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// exit 1: anything thrown while preparing inputs; exit 2: thrown while running
struct Command {
    std::function<std::function<int()>()> prepare;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"causal inference under missing data: graphs, tests, estimation"};
    app.require_subcommand(1);

    std::string graph_path, data_path, roles_arg, learners_arg, out_path;
    std::string format = "json";
    std::string scope_arg = "all";
    std::string method_arg = "chi2";
    std::string model_arg = "M2", estimand_arg = "ate", monotonicity_arg = "none";
    std::string catalog_arg, variant_arg = "no-exclusion";
    std::string treatment_arg = "D", outcome_arg = "Y";
    std::vector<std::string> do_items, subset_items, adjust_items, statement_items, coef_items;
    int max_conditioning = 4, folds = 5, permutations = 999, n_rows = 1000;
    std::uint64_t seed = 0;
    double alpha = 0.05, bound_alpha = 0.10, known_prop = -1.0;
    bool minimal = false, randomized_flag = false, marginal_trimming = false;
    bool force_selected = false, observational = false;
    bool exclusion_treatment = false, exclusion_confounding = false;
    std::string sim_model = "M2", roles_out, hidden_out;
    double tau = 1.0, tau_x = 0.0, p_treat = 0.5, p_select = 0.7;
    double gamma_d = 0.5, gamma_x = 0.3, gamma_u = 0.5, gamma_v = 1.0;
    double beta_x = 0.5, beta_u = 0.5, rho_xu = 0.5, negative_share = 0.0, a1 = 0.5;
    int x_levels = 4;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "output path, stdout when omitted");
        sub->add_option("--format", format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text", "dot"}));
    };

    auto* c_derive = app.add_subcommand("derive", "independencies implied by an m-graph");
    c_derive->add_option("--graph", graph_path, "graph file")->required();
    c_derive->add_option("--scope", scope_arg)->check(CLI::IsMember({"all", "observed"}));
    c_derive->add_option("--max-conditioning", max_conditioning);
    c_derive->add_flag("--minimal", minimal, "reduce by the semi-graphoid axioms");
    add_common(c_derive);

    auto* c_swig = app.add_subcommand("swig", "intervention graph and its independencies");
    c_swig->add_option("--graph", graph_path)->required();
    c_swig->add_option("--do", do_items, "intervention NODE=value")->required();
    c_swig->add_option("--scope", scope_arg)->check(CLI::IsMember({"all", "observed"}));
    c_swig->add_option("--max-conditioning", max_conditioning);
    add_common(c_swig);

    auto* c_classify = app.add_subcommand("classify-missingness", "MCAR/MAR/MNAR verdict");
    c_classify->add_option("--graph", graph_path)->required();
    c_classify->add_option("--do", do_items, "optional intervention NODE=value");
    c_classify->add_option("--subset", subset_items, "selection indicators to classify");
    add_common(c_classify);

    auto* c_ident = app.add_subcommand("check-identification", "plan for a treatment effect");
    c_ident->add_option("--graph", graph_path)->required();
    c_ident->add_option("--treatment", treatment_arg)->required();
    c_ident->add_option("--outcome", outcome_arg)->required();
    c_ident->add_option("--estimand", estimand_arg)->check(CLI::IsMember({"ate", "att"}));
    c_ident->add_option("--adjust", adjust_items, "adjustment set columns");
    c_ident->add_option("--monotonicity", monotonicity_arg)
        ->check(CLI::IsMember({"none", "positive", "conditional"}));
    add_common(c_ident);

    auto* c_impl = app.add_subcommand("implications", "testable implication batteries");
    c_impl->add_option("--graph", graph_path, "minimal testable set of this graph");
    c_impl->add_option("--catalog", catalog_arg)->check(CLI::IsMember({"attrition", "panel"}));
    c_impl->add_flag("--randomized", randomized_flag, "treatment is randomized");
    c_impl->add_option("--variant", variant_arg)
        ->check(CLI::IsMember({"no-exclusion", "exclusion-i", "exclusion-ii"}));
    add_common(c_impl);

    auto* c_test = app.add_subcommand("test", "test implications against data");
    c_test->add_option("--data", data_path)->required();
    c_test->add_option("--graph", graph_path, "test this graph's minimal testable set");
    c_test->add_option("--statement", statement_items, "statement like 'D _||_ S | X'");
    c_test->add_option("--method", method_arg)
        ->check(CLI::IsMember({"chi2", "wald", "permutation"}));
    c_test->add_option("--alpha", alpha);
    c_test->add_option("--permutations", permutations);
    c_test->add_option("--seed", seed);
    add_common(c_test);

    auto* c_est = app.add_subcommand("estimate", "treatment effect estimation");
    c_est->add_option("--data", data_path)->required();
    c_est->add_option("--roles", roles_arg, "roles json file or inline object")->required();
    c_est->add_option("--model", model_arg)
        ->check(CLI::IsMember({"M1", "M2D", "M2", "ZRLee", "M3"}));
    c_est->add_option("--estimand", estimand_arg)
        ->check(CLI::IsMember({"ate", "att", "always-observed"}));
    c_est->add_option("--learners", learners_arg, "learner spec json file or inline object");
    c_est->add_option("--folds", folds);
    c_est->add_option("--seed", seed);
    c_est->add_option("--alpha", bound_alpha, "bound confidence level is 1 - alpha");
    c_est->add_option("--known-propensity", known_prop, "fixed randomization probability");
    c_est->add_flag("--marginal-trimming", marginal_trimming,
                    "trim at the marginal selection ratio, no covariates");
    add_common(c_est);

    auto* c_overlap = app.add_subcommand("overlap", "propensity overlap diagnostics");
    c_overlap->add_option("--data", data_path)->required();
    c_overlap->add_option("--roles", roles_arg)->required();
    c_overlap->add_option("--learners", learners_arg);
    c_overlap->add_option("--folds", folds);
    c_overlap->add_option("--seed", seed);
    c_overlap->add_option("--known-propensity", known_prop);
    add_common(c_overlap);

    auto* c_sim = app.add_subcommand("simulate", "draw a sample with hidden ground truth");
    c_sim->add_option("--model", sim_model)
        ->check(CLI::IsMember({"M1", "M2", "M3", "M4", "custom"}));
    c_sim->add_option("--n", n_rows);
    c_sim->add_option("--seed", seed);
    c_sim->add_option("--out", out_path, "observed data csv")->required();
    c_sim->add_option("--roles-out", roles_out, "roles json");
    c_sim->add_option("--hidden-out", hidden_out, "potential outcome table csv");
    c_sim->add_option("--graph", graph_path, "custom template graph");
    c_sim->add_option("--coef", coef_items, "custom coefficient KEY=value");
    c_sim->add_option("--treatment", treatment_arg);
    c_sim->add_option("--outcome", outcome_arg);
    c_sim->add_option("--tau", tau);
    c_sim->add_option("--tau-x", tau_x);
    c_sim->add_option("--p-treat", p_treat);
    c_sim->add_option("--p-select", p_select);
    c_sim->add_option("--x-levels", x_levels);
    c_sim->add_option("--beta-x", beta_x);
    c_sim->add_option("--beta-u", beta_u);
    c_sim->add_option("--gamma-d", gamma_d);
    c_sim->add_option("--gamma-x", gamma_x);
    c_sim->add_option("--gamma-u", gamma_u);
    c_sim->add_option("--gamma-v", gamma_v);
    c_sim->add_option("--rho-xu", rho_xu);
    c_sim->add_option("--negative-share", negative_share);
    c_sim->add_option("--a1", a1);
    c_sim->add_flag("--observational", observational, "treatment depends on the covariate");
    c_sim->add_flag("--force-always-selected", force_selected);
    c_sim->add_flag("--exclusion-treatment", exclusion_treatment);
    c_sim->add_flag("--exclusion-confounding", exclusion_confounding);

    std::vector<const char*> argv;
    argv.push_back("mswig");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    std::string joined;
    for (const auto& a : args) {
        joined += a;
        joined += '\x1f';
    }
    std::string config_hash = hex64(fnv1a64(joined));
    CLI::App* sub = app.get_subcommands().front();
    err << "[mswig] " << sub->get_name() << " config_hash=" << config_hash << " seed=" << seed
        << "\n";

    json meta;
    meta["tool"] = "mswig";
    meta["subcommand"] = sub->get_name();
    meta["config_hash"] = config_hash;
    meta["seed"] = seed;

    std::function<std::function<int()>()> prepare;

    if (sub == c_derive) {
        prepare = [&] {
            MGraph g = parse_graph_file(graph_path);
            Scope scope = scope_arg == "observed" ? Scope::ObservedOnly : Scope::All;
            return std::function<int()>([=, &out] {
                // the minimal set is defined over observable statements, scope is implied
                auto stmts = minimal ? minimal_testable_set(g, max_conditioning)
                                     : enumerate_independencies(g, scope, max_conditioning);
                if (format == "json") {
                    json j;
                    j["meta"] = meta;
                    j["statements"] = statements_json(stmts);
                    emit(out_path, j.dump(2) + "\n", out);
                } else {
                    emit(out_path, statements_text(stmts), out);
                }
                return 0;
            });
        };
    } else if (sub == c_swig) {
        prepare = [&] {
            MGraph g = parse_graph_file(graph_path);
            SwigGraph sw = split(g, parse_do(do_items));
            Scope scope = scope_arg == "observed" ? Scope::ObservedOnly : Scope::All;
            return std::function<int()>([=, &out] {
                if (format == "dot") {
                    emit(out_path, sw.to_dot(), out);
                    return 0;
                }
                auto stmts = counterfactual_independencies(sw, scope, max_conditioning);
                if (format == "json") {
                    json j;
                    j["meta"] = meta;
                    json nodes = json::array();
                    for (int i = 0; i < static_cast<int>(sw.nodes().size()); ++i)
                        if (!sw.nodes()[i].fixed) nodes.push_back(sw.term_text(i));
                    j["nodes"] = nodes;
                    j["statements"] = statements_json(stmts);
                    emit(out_path, j.dump(2) + "\n", out);
                } else {
                    emit(out_path, statements_text(stmts), out);
                }
                return 0;
            });
        };
    } else if (sub == c_classify) {
        prepare = [&] {
            MGraph g = parse_graph_file(graph_path);
            Intervention iv = parse_do(do_items);
            std::optional<SwigGraph> sw;
            if (!do_items.empty()) sw = split(g, iv);
            return std::function<int()>([=, &out] {
                MissingnessVerdict v = sw ? classify(*sw, subset_items) : classify(g, subset_items);
                if (format == "json") {
                    json j;
                    j["meta"] = meta;
                    j["class"] = to_string(v.cls);
                    j["certifying"] = v.certifying ? json(v.certifying->text()) : json();
                    j["violating"] = v.violating ? json(v.violating->text()) : json();
                    j["witness_path"] = v.witness_path;
                    emit(out_path, j.dump(2) + "\n", out);
                } else {
                    std::ostringstream os;
                    os << to_string(v.cls) << "\n";
                    if (v.certifying) os << "certifying: " << v.certifying->text() << "\n";
                    if (v.violating) os << "violating: " << v.violating->text() << "\n";
                    if (!v.witness_path.empty()) {
                        os << "witness:";
                        for (const auto& w : v.witness_path) os << " " << w;
                        os << "\n";
                    }
                    emit(out_path, os.str(), out);
                }
                return 0;
            });
        };
    } else if (sub == c_ident) {
        prepare = [&] {
            MGraph g = parse_graph_file(graph_path);
            EstimandSpec spec;
            spec.treatment = treatment_arg;
            spec.outcome = outcome_arg;
            spec.effect = estimand_arg == "att" ? TreatmentEffect::ATT : TreatmentEffect::ATE;
            spec.adjustment = adjust_items;
            spec.monotonicity = monotonicity_arg == "positive" ? Monotonicity::Positive
                                : monotonicity_arg == "conditional"
                                    ? Monotonicity::ConditionalOnCovariates
                                    : Monotonicity::None;
            IdentificationPlan plan = plan_identification(g, spec);
            return std::function<int()>([=, &out] {
                json j;
                j["meta"] = meta;
                j["status"] = to_string(plan.status);
                j["strategy"] = to_string(plan.strategy);
                j["certifying"] = statements_json(plan.certifying);
                j["required_assumptions"] = plan.required_assumptions;
                j["estimand_formula"] = plan.estimand_formula;
                j["failed"] = plan.failed ? json(plan.failed->text()) : json();
                j["witness_path"] = plan.witness_path;
                if (format == "json") {
                    emit(out_path, j.dump(2) + "\n", out);
                } else {
                    std::ostringstream os;
                    os << to_string(plan.status) << " via " << to_string(plan.strategy) << "\n";
                    for (const auto& s : plan.certifying) os << "holds: " << s.text() << "\n";
                    for (const auto& a : plan.required_assumptions) os << "assumes: " << a << "\n";
                    if (!plan.estimand_formula.empty())
                        os << "formula: " << plan.estimand_formula << "\n";
                    if (plan.failed) os << "failed: " << plan.failed->text() << "\n";
                    emit(out_path, os.str(), out);
                }
                return 0;
            });
        };
    } else if (sub == c_impl) {
        prepare = [&] {
            if (graph_path.empty() == catalog_arg.empty())
                throw std::invalid_argument("pass exactly one of --graph or --catalog");
            MGraph g;
            if (!graph_path.empty()) g = parse_graph_file(graph_path);
            return std::function<int()>([=, &out] {
                if (!graph_path.empty()) {
                    auto stmts = minimal_testable_set(g, max_conditioning);
                    if (format == "json") {
                        json j;
                        j["meta"] = meta;
                        j["statements"] = statements_json(stmts);
                        emit(out_path, j.dump(2) + "\n", out);
                    } else {
                        emit(out_path, statements_text(stmts), out);
                    }
                    return 0;
                }
                std::vector<CatalogEntry> entries;
                std::string family = catalog_arg;
                if (catalog_arg == "attrition") {
                    entries = attrition_catalog(randomized_flag).entries;
                } else {
                    M4Variant v = variant_arg == "exclusion-i"    ? M4Variant::ExclusionI
                                  : variant_arg == "exclusion-ii" ? M4Variant::ExclusionII
                                                                  : M4Variant::NoExclusion;
                    entries = {panel_catalog(v)};
                }
                if (format == "json") {
                    json j;
                    j["meta"] = meta;
                    j["family"] = family;
                    json arr = json::array();
                    for (const auto& e : entries) arr.push_back(entry_json(e));
                    j["entries"] = arr;
                    emit(out_path, j.dump(2) + "\n", out);
                } else {
                    std::ostringstream os;
                    for (const auto& e : entries) {
                        os << "== " << e.name << "\n";
                        for (const auto& s : e.implied) os << "implied: " << s.text() << "\n";
                        for (const auto& s : e.swig_statements)
                            os << "counterfactual: " << s.text() << "\n";
                        for (const auto& s : e.untestable) os << "untestable: " << s.text() << "\n";
                        if (!e.estimand_note.empty()) os << "note: " << e.estimand_note << "\n";
                    }
                    emit(out_path, os.str(), out);
                }
                return 0;
            });
        };
    } else if (sub == c_test) {
        prepare = [&] {
            Dataset data = Dataset::read_csv(data_path);
            std::vector<CIStatement> stmts;
            if (!graph_path.empty()) {
                MGraph g = parse_graph_file(graph_path);
                stmts = minimal_testable_set(g, max_conditioning);
            }
            for (const auto& s : statement_items) stmts.push_back(parse_statement_text(s));
            if (stmts.empty())
                throw std::invalid_argument("nothing to test: pass --graph or --statement");
            TestMethod method = parse_test_method(method_arg);
            TestOptions opt;
            opt.alpha = alpha;
            opt.permutations = permutations;
            opt.seed = seed;
            return std::function<int()>([=, &out] {
                CatalogTestReport report = test_catalog(data, stmts, method, opt);
                if (format == "csv") {
                    std::ostringstream os;
                    os << "statement,method,statistic,dof,p_value,p_adjusted,reject,"
                          "reject_adjusted,n_used,strata,note\n";
                    for (const auto& r : report.rows) {
                        os << csv_escape(r.result.statement) << ","
                           << to_string(r.result.method) << "," << format_double(r.result.statistic)
                           << "," << format_double(r.result.dof) << ","
                           << format_double(r.result.p_value) << "," << format_double(r.p_adjusted)
                           << "," << (r.result.reject ? 1 : 0) << ","
                           << (r.reject_adjusted ? 1 : 0) << "," << r.result.n_used << ","
                           << r.result.strata_used << "," << csv_escape(r.result.note) << "\n";
                    }
                    emit(out_path, os.str(), out);
                } else {
                    json j;
                    j["meta"] = meta;
                    j["alpha"] = report.alpha;
                    j["method"] = to_string(method);
                    j["any_reject"] = report.any_reject;
                    json rows = json::array();
                    for (const auto& r : report.rows) rows.push_back(test_row_json(r));
                    j["results"] = rows;
                    emit(out_path, j.dump(2) + "\n", out);
                }
                return 0;
            });
        };
    } else if (sub == c_est) {
        prepare = [&] {
            Dataset data = Dataset::read_csv(data_path);
            Roles roles = load_roles(roles_arg);
            EstimatorConfig cfg;
            cfg.folds = folds;
            cfg.seed = seed;
            cfg.alpha = bound_alpha;
            cfg.use_covariates = !marginal_trimming;
            if (known_prop >= 0.0) {
                if (known_prop <= 0.0 || known_prop >= 1.0)
                    throw std::invalid_argument("--known-propensity must lie in (0, 1)");
                cfg.known_propensity = known_prop;
            }
            if (!learners_arg.empty()) apply_learners_json(cfg, learners_arg);
            bool bounds_model = model_arg == "ZRLee" || model_arg == "M3";
            if (bounds_model && estimand_arg != "always-observed" && !c_est->count("--estimand"))
                estimand_arg = "always-observed";
            if (bounds_model && estimand_arg != "always-observed")
                throw std::invalid_argument("model " + model_arg +
                                            " estimates the always-observed effect only");
            if (!bounds_model && estimand_arg == "always-observed")
                throw std::invalid_argument("estimand always-observed needs model ZRLee or M3");
            if (model_arg == "M1" && estimand_arg != "ate")
                throw std::invalid_argument("model M1 supports the ate estimand only");
            EstimationInput in = make_input(data, roles);
            if (model_arg == "M2D" || model_arg == "M1") in.x = Matrix(in.n(), 0);
            Matrix z;
            if (!roles.heterogeneity.empty()) z = data.matrix(roles.heterogeneity);
            std::string model = model_arg, estimand = estimand_arg;
            std::vector<std::string> het_names = roles.heterogeneity;
            return std::function<int()>([=, &out] {
                json j;
                j["meta"] = meta;
                j["model"] = model;
                j["estimand"] = estimand;
                std::vector<double> het_signals;
                EstimateResult point;
                BoundsResult bounds;
                bool is_point = true;
                if (model == "M1") {
                    point = estimate_complete_case(in, cfg);
                } else if (estimand == "ate") {
                    point = estimate_ate(in, cfg);
                } else if (estimand == "att") {
                    point = estimate_att(in, cfg);
                } else {
                    is_point = false;
                    bounds = estimate_bounds(in, cfg);
                }
                std::ostringstream csv;
                csv << "kind,label,value,std_error,ci_lower,ci_upper,n,share\n";
                if (is_point) {
                    j["estimate"] = estimate_json(point);
                    het_signals = point.signals;
                    csv << "estimate," << point.estimand << "," << format_double(point.value)
                        << "," << format_double(point.std_error) << ","
                        << format_double(point.ci_lower) << "," << format_double(point.ci_upper)
                        << "," << point.n << ",1\n";
                } else {
                    j["bounds"] = bounds_json(bounds);
                    csv << "bound_lower," << bounds.estimand << ","
                        << format_double(bounds.lower) << "," << format_double(bounds.se_lower)
                        << "," << format_double(bounds.ci_lower) << ","
                        << format_double(bounds.ci_upper) << "," << bounds.n << ",1\n";
                    csv << "bound_upper," << bounds.estimand << ","
                        << format_double(bounds.upper) << "," << format_double(bounds.se_upper)
                        << "," << format_double(bounds.ci_lower) << ","
                        << format_double(bounds.ci_upper) << "," << bounds.n << ",1\n";
                }
                if (!het_names.empty()) {
                    if (is_point) {
                        HetResult het = heterogeneous_effects(het_signals, z, het_names,
                                                              HetDictionary::Indicators);
                        j["heterogeneity"] = het_json(het, het_names);
                        for (const auto& c : het.cells)
                            csv << "cell," << csv_escape(c.label) << ","
                                << format_double(c.value) << "," << format_double(c.std_error)
                                << ",,," << c.n << "," << format_double(c.share) << "\n";
                    } else {
                        HetResult hl = heterogeneous_effects(bounds.lower_signals, z, het_names,
                                                             HetDictionary::Indicators);
                        HetResult hu = heterogeneous_effects(bounds.upper_signals, z, het_names,
                                                             HetDictionary::Indicators);
                        j["heterogeneity_lower"] = het_json(hl, het_names);
                        j["heterogeneity_upper"] = het_json(hu, het_names);
                        for (const auto& c : hl.cells)
                            csv << "cell_lower," << csv_escape(c.label) << ","
                                << format_double(c.value) << "," << format_double(c.std_error)
                                << ",,," << c.n << "," << format_double(c.share) << "\n";
                        for (const auto& c : hu.cells)
                            csv << "cell_upper," << csv_escape(c.label) << ","
                                << format_double(c.value) << "," << format_double(c.std_error)
                                << ",,," << c.n << "," << format_double(c.share) << "\n";
                    }
                }
                if (format == "csv")
                    emit(out_path, csv.str(), out);
                else
                    emit(out_path, j.dump(2) + "\n", out);
                return 0;
            });
        };
    } else if (sub == c_overlap) {
        prepare = [&] {
            Dataset data = Dataset::read_csv(data_path);
            Roles roles = load_roles(roles_arg);
            EstimatorConfig cfg;
            cfg.folds = folds;
            cfg.seed = seed;
            if (known_prop >= 0.0) cfg.known_propensity = known_prop;
            if (!learners_arg.empty()) apply_learners_json(cfg, learners_arg);
            EstimationInput in = make_input(data, roles);
            return std::function<int()>([=, &out] {
                OverlapReport rep = overlap_report(in, cfg);
                auto summary_json = [](const OverlapSummary& s) {
                    json j;
                    j["min"] = s.min;
                    j["max"] = s.max;
                    j["deciles"] = s.deciles;
                    j["share_below_005"] = s.share_below_005;
                    j["share_below_010"] = s.share_below_010;
                    j["share_above_090"] = s.share_above_090;
                    j["share_above_095"] = s.share_above_095;
                    j["n"] = s.n;
                    return j;
                };
                if (format == "csv") {
                    std::ostringstream os;
                    os << "bin_low,bin_high,treated,control\n";
                    for (int b = 0; b < 50; ++b)
                        os << format_double(0.02 * b) << "," << format_double(0.02 * (b + 1))
                           << "," << rep.histogram_treated[b] << "," << rep.histogram_control[b]
                           << "\n";
                    emit(out_path, os.str(), out);
                } else {
                    json j;
                    j["meta"] = meta;
                    j["treated"] = summary_json(rep.treated);
                    j["control"] = summary_json(rep.control);
                    j["histogram_treated"] = rep.histogram_treated;
                    j["histogram_control"] = rep.histogram_control;
                    j["positive_share"] = rep.positive_share;
                    j["no_trimming_required"] = rep.no_trimming_required;
                    j["has_selection"] = rep.has_selection;
                    j["n"] = rep.n;
                    emit(out_path, j.dump(2) + "\n", out);
                }
                return 0;
            });
        };
    } else {  // simulate
        prepare = [&] {
            SimConfig cfg;
            cfg.model = parse_sim_template(sim_model);
            cfg.n = n_rows;
            cfg.seed = seed;
            cfg.tau = tau;
            cfg.tau_x = tau_x;
            cfg.p_treat = p_treat;
            cfg.randomized = !observational;
            cfg.force_always_selected = force_selected;
            cfg.p_select = p_select;
            cfg.x_levels = x_levels;
            cfg.beta_x = beta_x;
            cfg.gamma_d = gamma_d;
            cfg.gamma_x = gamma_x;
            cfg.rho_xu = rho_xu;
            cfg.beta_u = beta_u;
            cfg.gamma_u = gamma_u;
            cfg.negative_share = negative_share;
            cfg.exclusion_treatment = exclusion_treatment;
            cfg.exclusion_confounding = exclusion_confounding;
            cfg.gamma_v = gamma_v;
            cfg.a1 = a1;
            cfg.treatment = treatment_arg;
            cfg.outcome = outcome_arg;
            if (cfg.model == SimTemplate::Custom) {
                if (graph_path.empty())
                    throw std::invalid_argument("custom template needs --graph");
                cfg.graph = parse_graph_file(graph_path);
                for (const auto& item : coef_items) {
                    size_t eq = item.find('=');
                    if (eq == std::string::npos)
                        throw std::invalid_argument("coefficient must have the form KEY=value: " +
                                                    item);
                    cfg.coef[trim(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
                }
            }
            return std::function<int()>([=, &out] {
                SimData sim = simulate(cfg);
                atomic_write(out_path, sim.observed.to_csv_text());
                if (!hidden_out.empty()) atomic_write(hidden_out, sim.hidden.to_csv_text());
                if (!roles_out.empty()) {
                    json rj;
                    rj["treatment"] = sim.roles.treatment;
                    rj["selection"] = sim.roles.selection;
                    rj["outcomeProxy"] = sim.roles.outcome;
                    rj["covariates"] = sim.roles.covariates;
                    rj["heterogeneity"] = sim.roles.heterogeneity;
                    atomic_write(roles_out, rj.dump(2) + "\n");
                }
                OracleTruth truth = oracle(sim);
                json j;
                j["meta"] = meta;
                j["model"] = to_string(cfg.model);
                j["n"] = cfg.n;
                j["files"] = json{{"data", out_path},
                                  {"roles", roles_out},
                                  {"hidden", hidden_out}};
                json o;
                o["ate"] = truth.ate;
                o["att"] = truth.att;
                o["always_observed_ate"] = truth.always_observed_ate;
                o["p_always_observed"] = truth.p_always_observed;
                j["oracle"] = o;
                out << j.dump(2) + "\n";
                return 0;
            });
        };
    }

    std::function<int()> run;
    try {
        run = prepare();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        return run();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mswig
