#include "mswig/independence.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace mswig {

std::string Term::text() const {
    if (!display.empty()) return display;
    if (labels.empty()) return name;
    std::string out = name + "(";
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ",";
        out += labels[i];
    }
    return out + ")";
}

namespace {

std::string join_terms(const std::vector<Term>& ts) {
    std::string out;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ",";
        out += ts[i].text();
    }
    return out;
}

}  // namespace

CIStatement CIStatement::make(std::vector<Term> left, std::vector<Term> right,
                              std::vector<Term> given, std::vector<std::string> selection_events) {
    CIStatement s;
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    std::sort(given.begin(), given.end());
    if (join_terms(right) < join_terms(left)) std::swap(left, right);
    std::sort(selection_events.begin(), selection_events.end());
    selection_events.erase(std::unique(selection_events.begin(), selection_events.end()),
                           selection_events.end());
    s.left = std::move(left);
    s.right = std::move(right);
    s.given = std::move(given);
    s.selection_events = std::move(selection_events);
    return s;
}

std::string CIStatement::text() const {
    std::string out = join_terms(left) + " _||_ " + join_terms(right);
    if (!given.empty()) out += " | " + join_terms(given);
    if (!selection_events.empty()) {
        out += " [given ";
        for (size_t i = 0; i < selection_events.size(); ++i) {
            if (i) out += ",";
            out += selection_events[i] + "=1";
        }
        out += "]";
    }
    return out;
}

bool CIStatement::operator<(const CIStatement& o) const {
    if (given.size() != o.given.size()) return given.size() < o.given.size();
    return text() < o.text();
}

namespace detail {

int SepView::add(Term t, NodeKind k, const std::string& sel_event) {
    int idx = size();
    by_name[t.name] = idx;
    terms.push_back(std::move(t));
    kinds.push_back(k);
    selection_event.push_back(sel_event);
    par.emplace_back();
    chi.emplace_back();
    return idx;
}

void SepView::add_edge(int a, int b) {
    chi[a].push_back(b);
    par[b].push_back(a);
}

SepView make_view(const MGraph& g) {
    MGraph expanded = g.expand_latents();
    SepView v;
    for (const auto& n : expanded.nodes()) {
        std::string ev = n.kind == NodeKind::Proxy ? expanded.selection_of(n.of) : "";
        v.add(Term{n.id}, n.kind, ev);
    }
    for (const auto& [a, b] : expanded.edges())
        v.add_edge(v.by_name.at(a), v.by_name.at(b));
    return v;
}

// Active-trail reachability. State (i, arrived-by-edge-into-i?) expands per
// the path activity rules: chains and forks need i outside z, colliders need
// i or a descendant of i inside z.
SeparationVerdict reachable(const SepView& v, const std::set<int>& x, const std::set<int>& y,
                            const std::set<int>& z) {
    int n = v.size();
    std::vector<char> in_z(n, 0), anc_z(n, 0);
    for (int i : z) in_z[i] = 1;
    {
        std::deque<int> q(z.begin(), z.end());
        for (int i : z) anc_z[i] = 1;
        while (!q.empty()) {
            int cur = q.front();
            q.pop_front();
            for (int p : v.par[cur])
                if (!anc_z[p]) {
                    anc_z[p] = 1;
                    q.push_back(p);
                }
        }
    }

    // state = 2*i + dir, dir 0: arrived via edge into i, dir 1: via edge out of i
    std::vector<int> pred(2 * n, -2);  // -2 unvisited, -1 start
    std::vector<int> start_of(2 * n, -1);
    std::deque<int> q;
    auto push = [&](int state, int from_state, int start) {
        if (pred[state] != -2) return;
        pred[state] = from_state;
        start_of[state] = start;
        q.push_back(state);
    };
    for (int s : x) {
        for (int c : v.chi[s]) push(2 * c + 0, -1, s);
        for (int p : v.par[s]) push(2 * p + 1, -1, s);
    }

    while (!q.empty()) {
        int state = q.front();
        q.pop_front();
        int i = state / 2, dir = state % 2;
        if (y.count(i)) {
            std::vector<std::string> path;
            for (int s = state; s != -1; s = pred[s]) {
                path.push_back(v.terms[s / 2].text());
                if (pred[s] == -1) path.push_back(v.terms[start_of[s]].text());
            }
            std::reverse(path.begin(), path.end());
            return SeparationVerdict{false, std::move(path)};
        }
        if (dir == 0) {
            if (!in_z[i])
                for (int c : v.chi[i]) push(2 * c + 0, state, -1);
            if (anc_z[i])
                for (int p : v.par[i]) push(2 * p + 1, state, -1);
        } else {
            if (!in_z[i]) {
                for (int c : v.chi[i]) push(2 * c + 0, state, -1);
                for (int p : v.par[i]) push(2 * p + 1, state, -1);
            }
        }
    }
    return SeparationVerdict{true, {}};
}

namespace {

std::vector<std::string> events_for(const SepView& v, std::initializer_list<const std::vector<int>*> groups) {
    std::vector<std::string> out;
    for (const auto* g : groups)
        for (int i : *g)
            if (!v.selection_event[i].empty()) out.push_back(v.selection_event[i]);
    return out;
}

CIStatement statement_for(const SepView& v, int a, int b, const std::vector<int>& cond) {
    std::vector<Term> given;
    for (int c : cond) given.push_back(v.terms[c]);
    std::vector<int> ab{a, b};
    return CIStatement::make({v.terms[a]}, {v.terms[b]}, std::move(given),
                             events_for(v, {&ab, &cond}));
}

}  // namespace

std::vector<int> eligible_nodes(const SepView& v, Scope scope) {
    std::vector<int> out;
    for (int i = 0; i < v.size(); ++i) {
        if (scope == Scope::ObservedOnly &&
            (v.kinds[i] == NodeKind::Latent || v.kinds[i] == NodeKind::PartiallyMissing))
            continue;
        out.push_back(i);
    }
    return out;
}

std::vector<CIStatement> enumerate_core(const SepView& v, const std::vector<int>& eligible,
                                        int max_conditioning) {
    std::vector<CIStatement> out;
    size_t m = eligible.size();
    for (size_t ai = 0; ai < m; ++ai) {
        for (size_t bi = ai + 1; bi < m; ++bi) {
            int a = eligible[ai], b = eligible[bi];
            std::vector<int> pool;
            for (int e : eligible)
                if (e != a && e != b) pool.push_back(e);
            int pn = static_cast<int>(pool.size());
            int cap = std::min(max_conditioning, pn);
            // subsets by size for deterministic order before the final sort
            for (int size = 0; size <= cap; ++size) {
                std::vector<int> pick(size);
                std::vector<int> idx(size);
                auto rec = [&](auto&& self, int start, int depth) -> void {
                    if (depth == size) {
                        std::set<int> zs(pick.begin(), pick.end());
                        if (reachable(v, {a}, {b}, zs).separated)
                            out.push_back(statement_for(v, a, b, pick));
                        return;
                    }
                    for (int i = start; i < pn; ++i) {
                        pick[depth] = pool[i];
                        self(self, i + 1, depth + 1);
                    }
                };
                rec(rec, 0, 0);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Semi-graphoid statements over bitmask sides: key packs (a, b, c) with a < b.
constexpr int kMaxClosureNodes = 20;

uint64_t pack(uint32_t a, uint32_t b, uint32_t c) {
    if (b < a) std::swap(a, b);
    return (static_cast<uint64_t>(a)) | (static_cast<uint64_t>(b) << 20) |
           (static_cast<uint64_t>(c) << 40);
}

struct Packed {
    uint32_t a, b, c;
};

Packed unpack(uint64_t k) {
    return Packed{static_cast<uint32_t>(k & 0xFFFFF), static_cast<uint32_t>((k >> 20) & 0xFFFFF),
                  static_cast<uint32_t>((k >> 40) & 0xFFFFF)};
}

class SemiGraphoidClosure {
public:
    bool contains(uint64_t key) const { return known_.count(key) > 0; }

    void insert_and_saturate(uint32_t a, uint32_t b, uint32_t c) {
        push(a, b, c);
        while (!work_.empty()) {
            uint64_t k = work_.front();
            work_.pop_front();
            expand(unpack(k));
            if (known_.size() > kStatementCap)
                throw std::runtime_error("semi-graphoid closure exceeded statement cap");
        }
    }

private:
    static constexpr size_t kStatementCap = 500000;

    void push(uint32_t a, uint32_t b, uint32_t c) {
        if (a == 0 || b == 0 || (a & b) || (a & c) || (b & c)) return;
        uint64_t k = pack(a, b, c);
        if (known_.insert(k).second) work_.push_back(k);
    }

    void expand(Packed s) {
        // decomposition and weak union over each side
        for (int side = 0; side < 2; ++side) {
            uint32_t keep = side ? s.b : s.a;
            uint32_t split = side ? s.a : s.b;
            for (uint32_t sub = (split - 1) & split; sub; sub = (sub - 1) & split) {
                push(keep, sub, s.c);
                push(keep, sub, s.c | (split & ~sub));
            }
        }
        // contraction against everything known
        std::vector<uint64_t> snapshot(known_.begin(), known_.end());
        for (uint64_t k2 : snapshot) {
            Packed t = unpack(k2);
            try_contract(s, t);
            try_contract(t, s);
        }
    }

    // I(p;q|c2+t) from s1 and I(p;t|c2) from s2 imply I(p;q+t|c2)
    void try_contract(Packed s1, Packed s2) {
        const uint32_t sides1[2][2] = {{s1.a, s1.b}, {s1.b, s1.a}};
        const uint32_t sides2[2][2] = {{s2.a, s2.b}, {s2.b, s2.a}};
        for (auto& o1 : sides1) {
            for (auto& o2 : sides2) {
                uint32_t p = o1[0], q = o1[1], c1 = s1.c;
                uint32_t t = o2[1], c2 = s2.c;
                if (o2[0] != p) continue;
                if ((c2 & t) || (q & t)) continue;
                if (c1 != (c2 | t)) continue;
                push(p, q | t, c2);
            }
        }
    }

    std::unordered_set<uint64_t> known_;
    std::deque<uint64_t> work_;
};

}  // namespace

std::vector<CIStatement> minimal_core(const SepView& v, const std::vector<int>& eligible,
                                      int max_conditioning) {
    if (eligible.size() > kMaxClosureNodes)
        throw std::invalid_argument("minimal_testable_set supports at most 20 testable nodes");
    std::map<int, int> bit;  // view index -> bit position
    for (size_t i = 0; i < eligible.size(); ++i) bit[eligible[i]] = static_cast<int>(i);

    auto candidates = enumerate_core(v, eligible, max_conditioning);
    SemiGraphoidClosure closure;
    std::vector<CIStatement> retained;
    for (const auto& st : candidates) {
        auto mask_of = [&](const std::vector<Term>& ts) {
            uint32_t m = 0;
            for (const auto& t : ts) m |= 1u << bit.at(v.by_name.at(t.name));
            return m;
        };
        uint32_t a = mask_of(st.left), b = mask_of(st.right), c = mask_of(st.given);
        if (closure.contains(pack(a, b, c))) continue;
        retained.push_back(st);
        closure.insert_and_saturate(a, b, c);
    }
    return retained;
}

}  // namespace detail

namespace {

std::set<int> resolve_factual(const detail::SepView& v, const std::vector<Term>& ts,
                              const char* role) {
    std::set<int> out;
    for (const auto& t : ts) {
        if (!t.labels.empty())
            throw std::invalid_argument("counterfactual term " + t.text() +
                                        " cannot be queried on an m-graph");
        auto it = v.by_name.find(t.name);
        if (it == v.by_name.end())
            throw std::invalid_argument(std::string(role) + " term refers to unknown node: " + t.name);
        if (!out.insert(it->second).second)
            throw std::invalid_argument("duplicate term in " + std::string(role) + ": " + t.name);
    }
    return out;
}

void check_query_sets(const std::set<int>& x, const std::set<int>& y, const std::set<int>& z) {
    if (x.empty() || y.empty()) throw std::invalid_argument("x and y must be nonempty");
    for (int i : x)
        if (y.count(i) || z.count(i)) throw std::invalid_argument("query sets must be disjoint");
    for (int i : y)
        if (z.count(i)) throw std::invalid_argument("query sets must be disjoint");
}

}  // namespace

SeparationVerdict d_separated(const MGraph& g, const std::vector<Term>& x,
                              const std::vector<Term>& y, const std::vector<Term>& z) {
    auto v = detail::make_view(g);
    auto xs = resolve_factual(v, x, "x");
    auto ys = resolve_factual(v, y, "y");
    auto zs = resolve_factual(v, z, "z");
    check_query_sets(xs, ys, zs);
    return detail::reachable(v, xs, ys, zs);
}

std::vector<CIStatement> enumerate_independencies(const MGraph& g, Scope scope,
                                                  int max_conditioning) {
    if (max_conditioning < 0) throw std::invalid_argument("max_conditioning must be >= 0");
    auto v = detail::make_view(g);
    // expansion latents never become terms; restrict to declared nodes
    std::vector<int> eligible;
    for (int i : detail::eligible_nodes(v, scope))
        if (g.has_node(v.terms[i].name)) eligible.push_back(i);
    return detail::enumerate_core(v, eligible, max_conditioning);
}

std::vector<CIStatement> minimal_testable_set(const MGraph& g, int max_conditioning) {
    auto v = detail::make_view(g);
    std::vector<int> eligible;
    for (int i : detail::eligible_nodes(v, Scope::ObservedOnly))
        if (g.has_node(v.terms[i].name)) eligible.push_back(i);
    return detail::minimal_core(v, eligible, max_conditioning);
}

}  // namespace mswig
