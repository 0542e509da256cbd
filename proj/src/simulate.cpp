#include "mswig/simulate.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

#include "mswig/rng.hpp"

namespace mswig {

SimTemplate parse_sim_template(const std::string& s) {
    if (s == "M1" || s == "m1") return SimTemplate::M1;
    if (s == "M2" || s == "m2") return SimTemplate::M2;
    if (s == "M3" || s == "m3") return SimTemplate::M3;
    if (s == "M4" || s == "m4" || s == "M4Panel" || s == "panel") return SimTemplate::M4Panel;
    if (s == "custom") return SimTemplate::Custom;
    throw std::invalid_argument("unknown simulation template: " + s);
}

const char* to_string(SimTemplate t) {
    switch (t) {
        case SimTemplate::M1: return "M1";
        case SimTemplate::M2: return "M2";
        case SimTemplate::M3: return "M3";
        case SimTemplate::M4Panel: return "M4Panel";
        case SimTemplate::Custom: return "custom";
    }
    return "?";
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Column full_column(std::string name, std::vector<double> values) {
    Column c;
    c.name = std::move(name);
    c.missing.assign(values.size(), 0);
    c.values = std::move(values);
    return c;
}

struct PotentialTables {
    std::vector<double> d, y0, y1, s0, s1;
    std::vector<double> y_nat, s_nat;  // natural regime, used for the observed proxy
};

// hidden table and the observed proxy column shared by every template
void assemble(SimData& out, PotentialTables& t, const SimConfig& config,
              const std::string& proxy_name,
              const std::vector<std::pair<std::string, std::vector<double>>>& latents) {
    int n = static_cast<int>(t.d.size());
    if (config.force_always_selected) {
        t.s0.assign(n, 1.0);
        t.s1.assign(n, 1.0);
        t.s_nat.assign(n, 1.0);
    }

    Column ystar;
    ystar.name = proxy_name;
    ystar.values.resize(n);
    ystar.missing.resize(n);
    for (int i = 0; i < n; ++i) {
        bool sel = t.s_nat[i] == 1.0;
        ystar.missing[i] = sel ? 0 : 1;
        ystar.values[i] = sel ? t.y_nat[i] : 0.0;
    }
    out.observed.add(std::move(ystar));

    out.hidden.add(full_column("Y0", t.y0));
    out.hidden.add(full_column("Y1", t.y1));
    out.hidden.add(full_column("S0", t.s0));
    out.hidden.add(full_column("S1", t.s1));
    std::vector<double> stratum(n);
    for (int i = 0; i < n; ++i) {
        bool a = t.s0[i] == 1.0, b = t.s1[i] == 1.0;
        stratum[i] = a && b    ? kStratumAlways
                     : !a && b ? kStratumTreatedOnly
                     : a       ? kStratumControlOnly
                               : kStratumNever;
    }
    out.hidden.add(full_column("stratum", std::move(stratum)));
    for (const auto& [name, values] : latents) out.hidden.add(full_column(name, values));
}

SimData simulate_m1(const SimConfig& config) {
    int n = config.n;
    Rng rng(config.seed);
    std::vector<double> ud(n), zy(n), us(n);
    for (auto& v : ud) v = rng.uniform();
    for (auto& v : zy) v = rng.normal();
    for (auto& v : us) v = rng.uniform();

    PotentialTables t;
    t.d.resize(n);
    t.y0.resize(n);
    t.y1.resize(n);
    t.s0.resize(n);
    t.s1.resize(n);
    t.y_nat.resize(n);
    t.s_nat.resize(n);
    for (int i = 0; i < n; ++i) {
        t.d[i] = ud[i] < config.p_treat ? 1.0 : 0.0;
        t.y0[i] = zy[i];
        t.y1[i] = config.tau + zy[i];
        double s = us[i] < config.p_select ? 1.0 : 0.0;
        t.s0[i] = s;
        t.s1[i] = s;
        t.y_nat[i] = t.d[i] == 1.0 ? t.y1[i] : t.y0[i];
        t.s_nat[i] = s;
    }

    SimData out;
    out.observed.add(full_column("D", t.d));
    out.observed.add(full_column("S", config.force_always_selected
                                          ? std::vector<double>(n, 1.0)
                                          : t.s_nat));
    assemble(out, t, config, "Y_star", {});
    out.roles.treatment = "D";
    out.roles.selection = "S";
    out.roles.outcome = "Y_star";
    return out;
}

// shared by the covariate templates; the latent factor loading is zero outside M3
SimData simulate_covariate(const SimConfig& config, bool with_factor) {
    if (config.x_levels < 2) throw std::invalid_argument("x_levels must be at least 2");
    int n = config.n;
    int levels = config.x_levels;
    Rng rng(config.seed);

    std::vector<double> zu(n), zx(n), ud(n), zy(n), us(n);
    if (with_factor)
        for (auto& v : zu) v = rng.normal();
    for (auto& v : zx) v = with_factor ? rng.normal() : rng.uniform();
    for (auto& v : ud) v = rng.uniform();
    for (auto& v : zy) v = rng.normal();
    for (auto& v : us) v = rng.uniform();

    std::vector<double> cuts;  // equal-probability bins of the latent covariate index
    if (with_factor) {
        boost::math::normal dist;
        for (int k = 1; k < levels; ++k)
            cuts.push_back(boost::math::quantile(dist, static_cast<double>(k) / levels));
    }
    int flipped = static_cast<int>(std::floor(config.negative_share * levels + 0.5));

    PotentialTables t;
    t.d.resize(n);
    t.y0.resize(n);
    t.y1.resize(n);
    t.s0.resize(n);
    t.s1.resize(n);
    t.y_nat.resize(n);
    t.s_nat.resize(n);
    std::vector<double> x(n), u(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (with_factor) {
            u[i] = zu[i];
            double xi = config.rho_xu * u[i] +
                        std::sqrt(1.0 - config.rho_xu * config.rho_xu) * zx[i];
            double level = 0;
            for (double c : cuts) level += xi > c ? 1.0 : 0.0;
            x[i] = level;
        } else {
            x[i] = std::min<double>(levels - 1, std::floor(zx[i] * levels));
        }

        double e = config.randomized ? config.p_treat
                                     : sigmoid(0.4 * (x[i] - 0.5 * (levels - 1)));
        t.d[i] = ud[i] < e ? 1.0 : 0.0;

        double base = config.beta_x * x[i] + config.beta_u * u[i] + zy[i];
        t.y0[i] = base;
        t.y1[i] = config.tau + config.tau_x * x[i] + base;

        double gd = x[i] < flipped ? -config.gamma_d : config.gamma_d;
        double lin = 0.5 + config.gamma_x * x[i] + config.gamma_u * u[i];
        t.s0[i] = us[i] < sigmoid(lin) ? 1.0 : 0.0;
        t.s1[i] = us[i] < sigmoid(lin + gd) ? 1.0 : 0.0;

        t.y_nat[i] = t.d[i] == 1.0 ? t.y1[i] : t.y0[i];
        t.s_nat[i] = t.d[i] == 1.0 ? t.s1[i] : t.s0[i];
    }

    SimData out;
    out.observed.add(full_column("X", x));
    out.observed.add(full_column("D", t.d));
    out.observed.add(full_column("S", config.force_always_selected
                                          ? std::vector<double>(n, 1.0)
                                          : t.s_nat));
    std::vector<std::pair<std::string, std::vector<double>>> latents;
    if (with_factor) latents.emplace_back("U", u);
    assemble(out, t, config, "Y_star", latents);
    out.roles.treatment = "D";
    out.roles.selection = "S";
    out.roles.outcome = "Y_star";
    out.roles.covariates = {"X"};
    return out;
}

SimData simulate_panel(const SimConfig& config) {
    int n = config.n;
    Rng rng(config.seed);
    std::vector<double> zf(n), z0(n), z1(n), zv(n), ud(n), zy0(n), zy1(n), us(n);
    for (auto& v : zf) v = rng.normal();
    for (auto& v : z0) v = rng.normal();
    for (auto& v : z1) v = rng.normal();
    for (auto& v : zv) v = rng.normal();
    for (auto& v : ud) v = rng.uniform();
    for (auto& v : zy0) v = rng.normal();
    for (auto& v : zy1) v = rng.normal();
    for (auto& v : us) v = rng.uniform();

    const double load = std::sqrt(0.5);
    PotentialTables t;
    t.d.resize(n);
    t.y0.resize(n);
    t.y1.resize(n);
    t.s0.resize(n);
    t.s1.resize(n);
    t.y_nat.resize(n);
    t.s_nat.resize(n);
    std::vector<double> u0(n), u1(n), v(n), ypre(n);
    double gd = config.exclusion_treatment ? 0.0 : config.gamma_d;
    for (int i = 0; i < n; ++i) {
        u0[i] = load * zf[i] + load * z0[i];
        u1[i] = load * zf[i] + load * z1[i];
        v[i] = config.exclusion_confounding ? zv[i] : load * zf[i] + load * zv[i];
        t.d[i] = ud[i] < config.p_treat ? 1.0 : 0.0;
        ypre[i] = u0[i] + zy0[i];
        t.y0[i] = config.a1 + u1[i] + zy1[i];
        t.y1[i] = config.a1 + config.tau + u1[i] + zy1[i];
        double lin = 0.5 + config.gamma_v * v[i];
        t.s0[i] = us[i] < sigmoid(lin) ? 1.0 : 0.0;
        t.s1[i] = us[i] < sigmoid(lin + gd) ? 1.0 : 0.0;
        t.y_nat[i] = t.d[i] == 1.0 ? t.y1[i] : t.y0[i];
        t.s_nat[i] = t.d[i] == 1.0 ? t.s1[i] : t.s0[i];
    }

    SimData out;
    out.observed.add(full_column("D", t.d));
    out.observed.add(full_column("Y_0", ypre));
    out.observed.add(full_column("S", config.force_always_selected
                                          ? std::vector<double>(n, 1.0)
                                          : t.s_nat));
    assemble(out, t, config, "Y_star",
             {{"U_0", u0}, {"U_1", u1}, {"V", v}});
    out.roles.treatment = "D";
    out.roles.selection = "S";
    out.roles.outcome = "Y_star";
    out.roles.covariates = {"Y_0"};
    return out;
}

struct CustomEngine {
    const SimConfig& config;
    MGraph expanded;
    std::vector<std::string> order;  // topological, proxies excluded
    std::map<std::string, std::vector<double>> unif, noise;

    bool is_binary(const std::string& id) const {
        if (expanded.node(id).kind == NodeKind::Selection) return true;
        if (id == config.treatment) return true;
        auto it = config.coef.find(id + ".binary");
        return it != config.coef.end() && it->second != 0.0;
    }

    // one regime; forced < 0 means the natural regime
    std::map<std::string, std::vector<double>> pass(int forced) const {
        std::map<std::string, std::vector<double>> val;
        int n = config.n;
        for (const auto& id : order) {
            auto& v = val[id];
            v.resize(n);
            double icept = lookup(id + ".icept", 0.0);
            double sd = lookup(id + ".sd", 1.0);
            auto parents = expanded.parents(id);
            for (int i = 0; i < n; ++i) {
                double lin = icept;
                for (const auto& p : parents)
                    lin += lookup(id + ".from." + p, 0.5) * val.at(p)[i];
                if (id == config.treatment && forced >= 0) {
                    v[i] = forced;
                } else if (is_binary(id)) {
                    v[i] = unif.at(id)[i] < sigmoid(lin) ? 1.0 : 0.0;
                } else {
                    v[i] = lin + sd * noise.at(id)[i];
                }
            }
        }
        return val;
    }

    double lookup(const std::string& key, double fallback) const {
        auto it = config.coef.find(key);
        return it == config.coef.end() ? fallback : it->second;
    }
};

SimData simulate_custom(const SimConfig& config) {
    MGraph g = config.graph;
    g.validate();
    if (!g.has_node(config.treatment))
        throw std::invalid_argument("treatment node not in graph: " + config.treatment);
    auto missing = g.partially_missing_nodes();
    if (missing.size() > 1)
        throw std::invalid_argument("custom simulation supports at most one partially missing node");

    std::string outcome = missing.empty() ? config.outcome : missing[0];
    if (!g.has_node(outcome))
        throw std::invalid_argument("outcome node not in graph: " + outcome);
    std::string sel = missing.empty() ? "" : g.selection_of(outcome);
    std::string proxy = missing.empty() ? "" : g.proxy_of(outcome);

    CustomEngine eng{config, g.expand_latents(), {}, {}, {}};
    for (const auto& id : eng.expanded.topological_sort())
        if (eng.expanded.node(id).kind != NodeKind::Proxy) eng.order.push_back(id);

    Rng rng(config.seed);
    int n = config.n;
    for (const auto& id : eng.order) {
        if (eng.is_binary(id)) {
            auto& u = eng.unif[id];
            u.resize(n);
            for (auto& x : u) x = rng.uniform();
        } else {
            auto& z = eng.noise[id];
            z.resize(n);
            for (auto& x : z) x = rng.normal();
        }
    }

    auto natural = eng.pass(-1);
    auto under0 = eng.pass(0);
    auto under1 = eng.pass(1);

    PotentialTables t;
    t.d = natural.at(config.treatment);
    t.y0 = under0.at(outcome);
    t.y1 = under1.at(outcome);
    t.y_nat = natural.at(outcome);
    if (sel.empty()) {
        t.s0.assign(n, 1.0);
        t.s1.assign(n, 1.0);
        t.s_nat.assign(n, 1.0);
    } else {
        t.s0 = under0.at(sel);
        t.s1 = under1.at(sel);
        t.s_nat = natural.at(sel);
    }

    SimData out;
    std::vector<std::pair<std::string, std::vector<double>>> latents;
    for (const auto& id : eng.order) {
        NodeKind kind = eng.expanded.node(id).kind;
        if (kind == NodeKind::Latent) {
            if (config.graph.has_node(id)) latents.emplace_back(id, natural.at(id));
            continue;
        }
        if (id == outcome) continue;  // published through the proxy column
        if (id == sel) {
            out.observed.add(full_column(id, config.force_always_selected
                                                 ? std::vector<double>(n, 1.0)
                                                 : t.s_nat));
            continue;
        }
        out.observed.add(full_column(id, natural.at(id)));
    }
    assemble(out, t, config, sel.empty() ? outcome : proxy, latents);
    out.roles.treatment = config.treatment;
    out.roles.selection = sel;
    out.roles.outcome = sel.empty() ? outcome : proxy;
    for (const auto& id : eng.order) {
        NodeKind kind = eng.expanded.node(id).kind;
        if (kind != NodeKind::Observed) continue;
        if (id == config.treatment || id == outcome) continue;
        out.roles.covariates.push_back(id);
    }
    return out;
}

}  // namespace

SimData simulate(const SimConfig& config) {
    if (config.n < 2) throw std::invalid_argument("simulation needs at least 2 rows");
    switch (config.model) {
        case SimTemplate::M1: return simulate_m1(config);
        case SimTemplate::M2: return simulate_covariate(config, false);
        case SimTemplate::M3: return simulate_covariate(config, true);
        case SimTemplate::M4Panel: return simulate_panel(config);
        case SimTemplate::Custom: return simulate_custom(config);
    }
    throw std::logic_error("unreachable");
}

OracleTruth oracle(const SimData& data) {
    const auto& y0 = data.hidden.col("Y0").values;
    const auto& y1 = data.hidden.col("Y1").values;
    const auto& s0 = data.hidden.col("S0").values;
    const auto& s1 = data.hidden.col("S1").values;
    const auto& d = data.observed.col(data.roles.treatment).values;
    int n = static_cast<int>(y0.size());

    OracleTruth t;
    double sum = 0.0, sum_t = 0.0, sum_ao = 0.0;
    int n_t = 0, n_ao = 0;
    for (int i = 0; i < n; ++i) {
        double eff = y1[i] - y0[i];
        sum += eff;
        if (d[i] == 1.0) {
            sum_t += eff;
            ++n_t;
        }
        if (s0[i] == 1.0 && s1[i] == 1.0) {
            sum_ao += eff;
            ++n_ao;
        }
    }
    t.ate = sum / n;
    t.att = n_t > 0 ? sum_t / n_t : 0.0;
    t.always_observed_ate = n_ao > 0 ? sum_ao / n_ao : 0.0;
    t.p_always_observed = static_cast<double>(n_ao) / n;
    return t;
}

}  // namespace mswig
