#include "mmdyn/coding.hpp"

#include <algorithm>
#include <cassert>

namespace mmdyn {

namespace {

bool allowed_at(const std::vector<bool>* allowed, std::size_t v) {
    return allowed == nullptr || (*allowed)[v];
}

}  // namespace

InverseComposite compose_inverse(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                 std::span<const std::size_t> word) {
    if (word.empty()) throw InadmissibleWord("empty word");
    for (std::size_t k = 0; k + 1 < word.size(); ++k) {
        if (!m.at(word[k], word[k + 1])) {
            throw InadmissibleWord("transition " + m.alphabet[word[k]] + " -> " +
                                   m.alphabet[word[k + 1]] + " is not admissible");
        }
    }
    InverseComposite out;
    out.word.assign(word.begin(), word.end());
    out.map = inverse_branch(mm.symbols[word.back()]);
    for (std::size_t k = word.size() - 1; k-- > 0;) {
        AffineBranch g = inverse_branch(mm.symbols[word[k]]);
        assert(g.domain.contains(out.map.image()));
        out.map = g.after(out.map);
    }
    out.interval = out.map.image();
    return out;
}

ContractionRate contraction_rate(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                 const std::vector<bool>* allowed) {
    ContractionRate out;
    for (std::size_t a = 0; a < mm.symbols.size(); ++a) {
        if (!allowed_at(allowed, a) || mm.symbols[a].cls != SymbolClass::interval) continue;
        for (const auto& p : mm.partition.points) {
            if (mm.symbols[a].range.contains_interior(p)) {
                out.d_set.push_back(a);
                break;
            }
        }
    }
    out.gamma = Rational(1);
    bool any = false;
    for (auto a : out.d_set) {
        for (std::size_t b = 0; b < mm.symbols.size(); ++b) {
            if (!allowed_at(allowed, b) || mm.symbols[b].cls != SymbolClass::interval) continue;
            if (!m.at(a, b)) continue;
            Rational ratio = mm.symbols[b].domain.length() / mm.symbols[a].range.length();
            if (!any || ratio > out.gamma) {
                out.gamma = ratio;
                any = true;
            }
        }
    }
    if (!any) out.gamma = Rational(1);
    return out;
}

CodingVerdict check_coding_condition(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                     const ComponentDecomposition& decomp,
                                     const std::vector<bool>* allowed,
                                     const std::vector<bool>* universe_cells) {
    CodingVerdict out;
    ContractionRate rate = contraction_rate(mm, m, allowed);
    out.d_set = rate.d_set;
    out.gamma = rate.gamma;

    if (out.d_set.empty()) {
        // No range spans an interior grid point, so appending symbols never
        // shrinks a coded interval: I_u = I_{u_0} for every admissible word
        // starting from an interval symbol. Any coding subshift has to use
        // interval symbols to cover cell interiors, which keeps the coded
        // interval lengths at or above the smallest cell.
        Rational min_cell(1);
        for (std::size_t i = 0; i + 1 < mm.partition.points.size(); ++i) {
            if (universe_cells && !(*universe_cells)[i]) continue;
            min_cell = min(min_cell, mm.partition.cell(i).length());
        }
        out.status = Status::fails;
        out.basis = "no-range-spans-interior-grid-point";
        out.detail = "every admissible word keeps its start interval (I_u = I_{u_0}); "
                     "coded interval lengths never drop below " + min_cell.str();
        out.min_cell_length = min_cell;
        return out;
    }

    std::vector<std::size_t> interval_symbols;
    for (std::size_t a = 0; a < mm.symbols.size(); ++a) {
        if (allowed_at(allowed, a) && mm.symbols[a].cls == SymbolClass::interval) {
            interval_symbols.push_back(a);
        }
    }
    auto home = decomp.common_component(interval_symbols);
    if (!home) {
        out.status = Status::unknown;
        out.basis = "";
        out.detail = "a contracting symbol exists but the interval symbols do not lie in one "
                     "irreducible component; the sufficient criterion does not apply";
        return out;
    }

    // Window N: the farthest any interval symbol sits from d_set, in steps.
    // Words that hit d_set at least once every N+1 symbols shrink their
    // coded interval by a factor of gamma per window.
    const std::size_t n = m.size();
    std::vector<long> dist(n, -1);
    std::vector<std::size_t> queue;
    for (auto a : out.d_set) {
        dist[a] = 0;
        queue.push_back(a);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        for (std::size_t p = 0; p < n; ++p) {
            if (!allowed_at(allowed, p) || dist[p] != -1 || !m.at(p, queue[qi])) continue;
            if (mm.symbols[p].cls != SymbolClass::interval) continue;
            dist[p] = dist[queue[qi]] + 1;
            queue.push_back(p);
        }
    }
    long worst = 0;
    for (auto a : interval_symbols) {
        assert(dist[a] >= 0);  // guaranteed by the common irreducible component
        worst = std::max(worst, dist[a]);
    }

    // A d_set range spans at least two cells while each successor domain is
    // one of them, so the ratio is strictly below one.
    if (!(out.gamma < Rational(1))) {
        throw std::logic_error("contracting symbol with ratio >= 1");
    }
    out.status = Status::holds;
    out.basis = "affine-contraction-with-interval-symbols-in-one-component";
    out.component = home;
    out.window = static_cast<unsigned>(std::max<long>(worst, 1));
    out.detail = "gamma = " + out.gamma.str() + ", window = " + std::to_string(*out.window);
    return out;
}

EquicontinuityModulus equicontinuity_modulus(const MarkovMultiMap& mm,
                                             const std::vector<bool>* allowed) {
    Rational best(0);
    for (std::size_t a = 0; a < mm.symbols.size(); ++a) {
        if (!allowed_at(allowed, a) || mm.symbols[a].cls != SymbolClass::interval) continue;
        for (std::size_t b = 0; b < mm.symbols.size(); ++b) {
            if (!allowed_at(allowed, b) || mm.symbols[b].cls != SymbolClass::interval) continue;
            Rational ratio = mm.symbols[a].domain.length() / mm.symbols[b].range.length();
            best = max(best, ratio);
        }
    }
    assert(best > Rational(0));
    return EquicontinuityModulus{best};
}

}  // namespace mmdyn
