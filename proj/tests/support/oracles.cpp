#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

#include "mswig/rng.hpp"

namespace mswig::testing {

namespace {

struct Adjacency {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    std::vector<std::vector<int>> par, chi;
};

Adjacency flatten(const MGraph& g) {
    MGraph ge = g.expand_latents();
    Adjacency a;
    for (const auto& n : ge.nodes()) {
        a.index[n.id] = static_cast<int>(a.names.size());
        a.names.push_back(n.id);
    }
    a.par.resize(a.names.size());
    a.chi.resize(a.names.size());
    for (const auto& [from, to] : ge.edges()) {
        a.par[a.index.at(to)].push_back(a.index.at(from));
        a.chi[a.index.at(from)].push_back(a.index.at(to));
    }
    return a;
}

std::set<int> resolve(const Adjacency& a, const std::set<std::string>& ids) {
    std::set<int> out;
    for (const auto& id : ids) out.insert(a.index.at(id));
    return out;
}

}  // namespace

bool moral_separated(const MGraph& g, const std::set<std::string>& xs,
                     const std::set<std::string>& ys, const std::set<std::string>& zs) {
    Adjacency a = flatten(g);
    std::set<int> x = resolve(a, xs), y = resolve(a, ys), z = resolve(a, zs);

    std::set<int> anc;
    std::deque<int> work;
    for (const auto& s : {x, y, z})
        for (int i : s)
            if (anc.insert(i).second) work.push_back(i);
    while (!work.empty()) {
        int i = work.front();
        work.pop_front();
        for (int p : a.par[i])
            if (anc.insert(p).second) work.push_back(p);
    }

    std::vector<std::set<int>> und(a.names.size());
    auto connect = [&](int u, int v) {
        und[u].insert(v);
        und[v].insert(u);
    };
    for (int i : anc) {
        for (int p : a.par[i]) connect(i, p);
        for (size_t s = 0; s < a.par[i].size(); ++s)
            for (size_t t = s + 1; t < a.par[i].size(); ++t)
                connect(a.par[i][s], a.par[i][t]);
    }

    std::set<int> seen;
    for (int i : x)
        if (!z.count(i)) {
            seen.insert(i);
            work.push_back(i);
        }
    while (!work.empty()) {
        int i = work.front();
        work.pop_front();
        if (y.count(i)) return false;
        for (int nb : und[i]) {
            if (z.count(nb) || !anc.count(nb)) continue;
            if (seen.insert(nb).second) work.push_back(nb);
        }
    }
    return true;
}

namespace {

bool trail_active(const Adjacency& a, const std::vector<int>& trail, const std::set<int>& z,
                  const std::vector<std::set<int>>& desc) {
    for (size_t i = 1; i + 1 < trail.size(); ++i) {
        int prev = trail[i - 1], cur = trail[i], next = trail[i + 1];
        auto points_into = [&](int from, int to) {
            const auto& ch = a.chi[from];
            return std::find(ch.begin(), ch.end(), to) != ch.end();
        };
        bool collider = points_into(prev, cur) && points_into(next, cur);
        if (collider) {
            bool opened = false;
            for (int d : desc[cur])
                if (z.count(d)) {
                    opened = true;
                    break;
                }
            if (!opened) return false;
        } else if (z.count(cur)) {
            return false;
        }
    }
    return true;
}

bool search_trails(const Adjacency& a, std::vector<int>& trail, std::vector<char>& used, int goal,
                   const std::set<int>& z, const std::vector<std::set<int>>& desc) {
    int cur = trail.back();
    if (cur == goal) return trail_active(a, trail, z, desc);
    std::set<int> nbrs;
    for (int c : a.chi[cur]) nbrs.insert(c);
    for (int p : a.par[cur]) nbrs.insert(p);
    for (int nb : nbrs) {
        if (used[nb]) continue;
        used[nb] = 1;
        trail.push_back(nb);
        if (search_trails(a, trail, used, goal, z, desc)) return true;
        trail.pop_back();
        used[nb] = 0;
    }
    return false;
}

}  // namespace

bool trail_separated(const MGraph& g, const std::string& x, const std::string& y,
                     const std::set<std::string>& zs) {
    Adjacency a = flatten(g);
    std::set<int> z = resolve(a, zs);
    int n = static_cast<int>(a.names.size());

    std::vector<std::set<int>> desc(n);
    for (int i = 0; i < n; ++i) {
        std::deque<int> work{i};
        desc[i].insert(i);
        while (!work.empty()) {
            int c = work.front();
            work.pop_front();
            for (int ch : a.chi[c])
                if (desc[i].insert(ch).second) work.push_back(ch);
        }
    }

    std::vector<int> trail{a.index.at(x)};
    std::vector<char> used(n, 0);
    used[a.index.at(x)] = 1;
    return !search_trails(a, trail, used, a.index.at(y), z, desc);
}

MGraph random_dag(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    MGraph g;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        order[i] = i;
        g.add_node("v" + std::to_string(i), NodeKind::Observed);
    }
    rng.shuffle(order);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p)
                g.add_edge("v" + std::to_string(order[i]), "v" + std::to_string(order[j]));
    g.validate();
    return g;
}

MGraph random_mgraph(int n, double p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_mgraph needs n >= 2");
    Rng rng(seed);
    MGraph g;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    int miss = order[n - 1];
    for (int i = 0; i < n; ++i)
        g.add_node("v" + std::to_string(i),
                   i == miss ? NodeKind::PartiallyMissing : NodeKind::Observed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p)
                g.add_edge("v" + std::to_string(order[i]), "v" + std::to_string(order[j]));
    std::string miss_id = "v" + std::to_string(miss);
    g.add_selection("R_" + miss_id, miss_id);
    for (int i = 0; i < n; ++i)
        if (rng.uniform() < 0.3) g.add_edge("v" + std::to_string(i), "R_" + miss_id);
    if (n >= 3 && rng.uniform() < 0.4) {
        int a = order[rng.bounded(n)];
        int b = order[rng.bounded(n)];
        if (a != b) g.add_biedge("v" + std::to_string(a), "v" + std::to_string(b));
    }
    g.validate();
    return g;
}

namespace {

std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& t : s) {
        if (!out.empty()) out += ',';
        out += t;
    }
    return out;
}

SetStatement canonical(std::set<std::string> l, std::set<std::string> r,
                       std::set<std::string> g) {
    if (join(r) < join(l)) std::swap(l, r);
    return SetStatement{std::move(l), std::move(r), std::move(g)};
}

std::set<std::string> texts(const std::vector<Term>& ts) {
    std::set<std::string> out;
    for (const auto& t : ts) out.insert(t.text());
    return out;
}

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const auto& s : a)
        if (b.count(s)) return false;
    return true;
}

std::set<std::string> unite(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out = a;
    out.insert(b.begin(), b.end());
    return out;
}

std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& s : a)
        if (!b.count(s)) out.insert(s);
    return out;
}

void subsets(const std::set<std::string>& s,
             const std::function<void(const std::set<std::string>&)>& fn) {
    std::vector<std::string> v(s.begin(), s.end());
    int n = static_cast<int>(v.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::set<std::string> sub;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) sub.insert(v[i]);
        fn(sub);
    }
}

}  // namespace

std::string SetStatement::key() const {
    return join(left) + " _||_ " + join(right) + " | " + join(given);
}

SetStatement to_set_statement(const CIStatement& s) {
    return canonical(texts(s.left), texts(s.right), texts(s.given));
}

std::set<SetStatement> axiom_closure(const std::vector<CIStatement>& seed, std::size_t cap) {
    std::set<SetStatement> all;
    std::deque<SetStatement> work;
    auto push = [&](SetStatement st) {
        if (st.left.empty() || st.right.empty()) return;
        if (all.size() >= cap) throw std::runtime_error("axiom_closure exceeded its cap");
        if (all.insert(st).second) work.push_back(std::move(st));
    };
    for (const auto& s : seed) push(to_set_statement(s));

    while (!work.empty()) {
        SetStatement cur = work.front();
        work.pop_front();

        // decomposition and weak union shrink one side by a nonempty subset
        for (int side = 0; side < 2; ++side) {
            const auto& keep = side == 0 ? cur.left : cur.right;
            const auto& shrink = side == 0 ? cur.right : cur.left;
            subsets(shrink, [&](const std::set<std::string>& w) {
                if (w.size() == shrink.size()) return;
                push(canonical(keep, minus(shrink, w), cur.given));
                push(canonical(keep, minus(shrink, w), unite(cur.given, w)));
            });
        }

        // contraction pairs the new statement against the whole set
        std::vector<SetStatement> snapshot(all.begin(), all.end());
        for (const auto& other : snapshot) {
            for (int o1 = 0; o1 < 2; ++o1) {
                const auto& a1 = o1 == 0 ? cur.left : cur.right;
                const auto& b1 = o1 == 0 ? cur.right : cur.left;
                for (int o2 = 0; o2 < 2; ++o2) {
                    const auto& a2 = o2 == 0 ? other.left : other.right;
                    const auto& w = o2 == 0 ? other.right : other.left;
                    // (A _||_ B | Z ∪ W) and (A _||_ W | Z) give (A _||_ B ∪ W | Z)
                    if (a1 != a2) continue;
                    if (!disjoint(b1, w)) continue;
                    if (cur.given == unite(other.given, w) && disjoint(other.given, w))
                        push(canonical(a1, unite(b1, w), other.given));
                    // roles swapped: cur supplies (A _||_ W | Z)
                    if (other.given == unite(cur.given, b1) && disjoint(cur.given, b1))
                        push(canonical(a1, unite(w, b1), cur.given));
                }
            }
        }
    }
    return all;
}

bool closure_contains(const std::set<SetStatement>& closure, const CIStatement& s) {
    return closure.count(to_set_statement(s)) > 0;
}

namespace {

// smallest support point whose cumulative mass reaches u
double type1_quantile(const DiscreteBoundsModel::Arm& arm, double u) {
    double cum = 0.0;
    for (size_t i = 0; i < arm.y.size(); ++i) {
        cum += arm.prob[i];
        if (cum >= u - 1e-12) return arm.y[i];
    }
    return arm.y.back();
}

double arm_mean(const DiscreteBoundsModel::Arm& arm) {
    double m = 0.0;
    for (size_t i = 0; i < arm.y.size(); ++i) m += arm.y[i] * arm.prob[i];
    return m;
}

double trimmed_low(const DiscreteBoundsModel::Arm& arm, double u) {
    double q = type1_quantile(arm, u), m = 0.0;
    for (size_t i = 0; i < arm.y.size(); ++i)
        if (arm.y[i] <= q) m += arm.y[i] * arm.prob[i];
    return m;
}

double trimmed_high(const DiscreteBoundsModel::Arm& arm, double u) {
    double q = type1_quantile(arm, 1.0 - u), m = 0.0;
    for (size_t i = 0; i < arm.y.size(); ++i)
        if (arm.y[i] >= q) m += arm.y[i] * arm.prob[i];
    return m;
}

}  // namespace

BoundsTruth enumerate_bounds(const DiscreteBoundsModel& m) {
    BoundsTruth out;
    double a_low = 0.0, a_high = 0.0, b_low = 0.0, b_high = 0.0;
    for (const auto& c : m.cells) {
        double p0 = c.s0 / c.s1;
        out.p_always_observed += c.px * std::min(c.s0, c.s1);
        if (p0 <= 1.0) {
            double u = p0;
            a_low += c.px * c.s1 * trimmed_low(c.treated, u);
            a_high += c.px * c.s1 * trimmed_high(c.treated, u);
            b_low += c.px * c.s0 * arm_mean(c.control);
            b_high += c.px * c.s0 * arm_mean(c.control);
        } else {
            double r = 1.0 / p0;
            a_low += c.px * c.s1 * arm_mean(c.treated);
            a_high += c.px * c.s1 * arm_mean(c.treated);
            // lower bound subtracts the largest control mean, the top r mass
            b_low += c.px * c.s0 * trimmed_high(c.control, r);
            b_high += c.px * c.s0 * trimmed_low(c.control, r);
        }
    }
    out.lower = (a_low - b_low) / out.p_always_observed;
    out.upper = (a_high - b_high) / out.p_always_observed;
    return out;
}

}  // namespace mswig::testing
