#include "mswig/missingness.hpp"

#include <algorithm>
#include <stdexcept>

namespace mswig {

const char* to_string(MissingnessClass c) {
    switch (c) {
        case MissingnessClass::MCAR: return "MCAR";
        case MissingnessClass::MAR: return "MAR";
        case MissingnessClass::MNAR: return "MNAR";
    }
    return "?";
}

namespace {

MissingnessVerdict classify_view(const detail::SepView& v, const std::vector<int>& declared,
                                 const std::vector<std::string>& subset) {
    std::set<int> sel;
    std::vector<int> others, observables, hidden;
    for (int i : declared) {
        if (v.kinds[i] != NodeKind::Selection) continue;
        const std::string& nm = v.terms[i].name;
        if (subset.empty() || std::find(subset.begin(), subset.end(), nm) != subset.end())
            sel.insert(i);
    }
    if (!subset.empty()) {
        for (const auto& nm : subset) {
            auto it = v.by_name.find(nm);
            if (it == v.by_name.end() || v.kinds[it->second] != NodeKind::Selection)
                throw std::invalid_argument("subset entry is not a selection node: " + nm);
        }
    }
    if (sel.empty()) throw std::invalid_argument("graph has no selection nodes to classify");

    for (int i : declared) {
        if (sel.count(i) || v.kinds[i] == NodeKind::Proxy) continue;
        others.push_back(i);
        if (v.kinds[i] == NodeKind::Observed || v.kinds[i] == NodeKind::Selection)
            observables.push_back(i);
        else
            hidden.push_back(i);  // PartiallyMissing or declared Latent
    }

    auto terms_of = [&](const std::vector<int>& idx) {
        std::vector<Term> out;
        for (int i : idx) out.push_back(v.terms[i]);
        return out;
    };
    std::vector<Term> sel_terms;
    for (int i : sel) sel_terms.push_back(v.terms[i]);

    MissingnessVerdict verdict;
    if (!others.empty() &&
        detail::reachable(v, sel, std::set<int>(others.begin(), others.end()), {}).separated) {
        verdict.cls = MissingnessClass::MCAR;
        verdict.certifying = CIStatement::make(sel_terms, terms_of(others));
        return verdict;
    }

    std::set<int> hidden_set(hidden.begin(), hidden.end());
    std::set<int> obs_set(observables.begin(), observables.end());
    if (hidden.empty() || detail::reachable(v, sel, hidden_set, obs_set).separated) {
        verdict.cls = MissingnessClass::MAR;
        verdict.certifying = CIStatement::make(sel_terms, terms_of(hidden), terms_of(observables));
        return verdict;
    }

    // separation is compositional, so some singleton must fail; report the
    // first one, PartiallyMissing variables before latents
    std::stable_sort(hidden.begin(), hidden.end(), [&](int a, int b) {
        bool ma = v.kinds[a] == NodeKind::PartiallyMissing;
        bool mb = v.kinds[b] == NodeKind::PartiallyMissing;
        if (ma != mb) return ma;
        return v.terms[a].text() < v.terms[b].text();
    });
    for (int h : hidden) {
        auto r = detail::reachable(v, sel, {h}, obs_set);
        if (!r.separated) {
            verdict.cls = MissingnessClass::MNAR;
            verdict.violating = CIStatement::make(sel_terms, {v.terms[h]}, terms_of(observables));
            verdict.witness_path = r.witness_path;
            return verdict;
        }
    }
    throw std::logic_error("joint MAR query failed but every singleton passed");
}

}  // namespace

MissingnessVerdict classify(const MGraph& g, const std::vector<std::string>& subset) {
    g.validate();
    auto v = detail::make_view(g);
    std::vector<int> declared;
    for (int i = 0; i < v.size(); ++i)
        if (g.has_node(v.terms[i].name)) declared.push_back(i);
    return classify_view(v, declared, subset);
}

MissingnessVerdict classify(const SwigGraph& g, const std::vector<std::string>& subset) {
    auto v = detail::make_view(g);
    std::vector<int> declared;
    for (int i = 0; i < v.size(); ++i)
        if (g.source().has_node(v.terms[i].name)) declared.push_back(i);
    return classify_view(v, declared, subset);
}

}  // namespace mswig
