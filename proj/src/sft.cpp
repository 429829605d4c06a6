#include "mmdyn/sft.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>

namespace mmdyn {

std::optional<std::size_t> TransitionMatrix::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (alphabet[i] == name) return i;
    }
    return std::nullopt;
}

std::vector<std::size_t> TransitionMatrix::successors(std::size_t a) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < size(); ++b) {
        if (entries[a][b]) out.push_back(b);
    }
    return out;
}

std::vector<std::size_t> TransitionMatrix::predecessors(std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < size(); ++a) {
        if (entries[a][b]) out.push_back(a);
    }
    return out;
}

TransitionMatrix build_transition_matrix(const MarkovMultiMap& mm) {
    TransitionMatrix m;
    const std::size_t n = mm.symbols.size();
    m.alphabet.reserve(n);
    m.classes.reserve(n);
    for (const auto& s : mm.symbols) {
        m.alphabet.push_back(s.name);
        m.classes.push_back(s.cls);
    }
    m.entries.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        const auto& sa = mm.symbols[a];
        for (std::size_t b = 0; b < n; ++b) {
            const auto& sb = mm.symbols[b];
            bool edge = false;
            if (sa.cls == SymbolClass::point) {
                // Degenerate open range {q} only absorbs degenerate domains at q.
                edge = sb.cls != SymbolClass::interval && sb.domain.lo == sa.range.lo;
            } else if (sb.cls == SymbolClass::interval) {
                edge = sa.range.lo <= sb.domain.lo && sb.domain.hi <= sa.range.hi;
            } else {
                edge = sa.range.contains_interior(sb.domain.lo);
            }
            m.entries[a][b] = edge;
        }
    }
    return m;
}

std::vector<Word> language(const TransitionMatrix& m, std::size_t length,
                           const std::vector<std::size_t>& restrict_to) {
    std::vector<std::size_t> admitted = restrict_to;
    if (admitted.empty()) {
        admitted.resize(m.size());
        std::iota(admitted.begin(), admitted.end(), 0);
    } else {
        std::sort(admitted.begin(), admitted.end());
        admitted.erase(std::unique(admitted.begin(), admitted.end()), admitted.end());
    }
    std::vector<bool> in(m.size(), false);
    for (auto s : admitted) in[s] = true;

    std::vector<Word> out;
    if (length == 0) return out;
    Word word;
    auto extend = [&](auto&& self, std::size_t prev) -> void {
        if (word.size() == length) {
            out.push_back(word);
            return;
        }
        for (auto s : admitted) {
            if (!word.empty() && !m.at(prev, s)) continue;
            word.push_back(s);
            self(self, s);
            word.pop_back();
        }
    };
    extend(extend, 0);
    return out;
}

namespace {

unsigned gcd_u(unsigned a, unsigned b) { return b == 0 ? a : gcd_u(b, a % b); }

}  // namespace

ComponentDecomposition components(const TransitionMatrix& m, const std::vector<bool>* allowed) {
    const std::size_t n = m.size();
    auto is_allowed = [&](std::size_t v) { return allowed == nullptr || (*allowed)[v]; };
    auto has_edge = [&](std::size_t a, std::size_t b) {
        return is_allowed(a) && is_allowed(b) && m.at(a, b);
    };

    // Tarjan, iterative to keep the stack shallow on long chains.
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> sccs;
    int counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next = 0;
    };
    for (std::size_t start = 0; start < n; ++start) {
        if (!is_allowed(start) || index[start] != -1) continue;
        std::vector<Frame> frames{{start}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            bool descended = false;
            while (f.next < n) {
                std::size_t w = f.next++;
                if (!has_edge(f.v, w)) continue;
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
            }
            if (descended) continue;
            if (low[f.v] == index[f.v]) {
                std::vector<std::size_t> scc;
                while (true) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc.push_back(w);
                    if (w == f.v) break;
                }
                std::sort(scc.begin(), scc.end());
                sccs.push_back(std::move(scc));
            }
            std::size_t v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }

    std::sort(sccs.begin(), sccs.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    ComponentDecomposition decomp;
    decomp.component_of.assign(n, static_cast<std::size_t>(-1));
    for (auto& scc : sccs) {
        Component c;
        c.symbols = std::move(scc);
        std::size_t id = decomp.components.size();
        for (auto v : c.symbols) decomp.component_of[v] = id;

        // Period: gcd of level(u) + 1 - level(v) over internal edges, with
        // levels from a BFS inside the component.
        std::map<std::size_t, long> level;
        std::vector<std::size_t> queue{c.symbols.front()};
        level[c.symbols.front()] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::size_t u = queue[qi];
            for (auto v : c.symbols) {
                if (!has_edge(u, v)) continue;
                if (!level.count(v)) {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        unsigned g = 0;
        for (auto u : c.symbols) {
            for (auto v : c.symbols) {
                if (!has_edge(u, v)) continue;
                long diff = level[u] + 1 - level[v];
                g = gcd_u(g, static_cast<unsigned>(diff < 0 ? -diff : diff));
            }
        }
        if (g != 0) c.period = g;
        bool self_loop = has_edge(c.symbols.front(), c.symbols.front());
        c.irreducible = c.symbols.size() >= 2 || self_loop;
        c.mixing = c.period.has_value() && *c.period == 1;
        decomp.components.push_back(std::move(c));
    }
    return decomp;
}

std::optional<std::size_t> ComponentDecomposition::common_component(
    const std::vector<std::size_t>& symbols) const {
    if (symbols.empty()) return std::nullopt;
    std::size_t id = component_of[symbols.front()];
    for (auto s : symbols) {
        if (component_of[s] != id) return std::nullopt;
    }
    return id;
}

std::string_view to_string(EssentialStatus s) {
    switch (s) {
        case EssentialStatus::by_class: return "essential-by-class";
        case EssentialStatus::by_reachability: return "essential-by-reachability";
        case EssentialStatus::by_isolation: return "essential-by-isolation";
        case EssentialStatus::inessential_up_to_bound: return "inessential-up-to-bound";
    }
    return "?";
}

std::vector<std::size_t> EssentialReport::undecided() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < per_symbol.size(); ++i) {
        if (per_symbol[i].status == EssentialStatus::inessential_up_to_bound) out.push_back(i);
    }
    return out;
}

namespace {

bool allowed_at(const std::vector<bool>* allowed, std::size_t v) {
    return allowed == nullptr || (*allowed)[v];
}

/// The unique trajectory pinned by a word ending in a point symbol:
/// the final pair is a single graph point and every earlier coordinate is
/// forced backwards through the inverse branches.
std::vector<Rational> pinned_trajectory(const MarkovMultiMap& mm, const Word& word) {
    const std::size_t len = word.size();
    std::vector<Rational> x(len + 1);
    const auto& last = mm.symbols[word[len - 1]];
    assert(last.cls == SymbolClass::point);
    x[len] = last.range.lo;
    x[len - 1] = last.domain.lo;
    for (std::size_t k = len - 1; k-- > 0;) {
        const auto& s = mm.symbols[word[k]];
        if (s.cls == SymbolClass::interval) {
            x[k] = inverse_branch(s).eval(x[k + 1]);
        } else {
            x[k] = s.domain.lo;
        }
    }
    return x;
}

/// True when the trajectory is isolated in the space of finite trajectories
/// of its length: no admissible labeling ending in an interval or vertical
/// symbol fits it, so it lies on no arc.
bool trajectory_isolated(const MarkovMultiMap& mm, const TransitionMatrix& m,
                         const std::vector<Rational>& x, const std::vector<bool>* allowed) {
    const std::size_t len = x.size() - 1;
    std::vector<bool> feasible(m.size(), false);
    for (std::size_t s = 0; s < m.size(); ++s) {
        feasible[s] = allowed_at(allowed, s) && closed_part_contains(mm.symbols[s], x[0], x[1]);
    }
    for (std::size_t k = 1; k < len; ++k) {
        std::vector<bool> next(m.size(), false);
        for (std::size_t b = 0; b < m.size(); ++b) {
            if (!allowed_at(allowed, b)) continue;
            if (!closed_part_contains(mm.symbols[b], x[k], x[k + 1])) continue;
            for (std::size_t a = 0; a < m.size(); ++a) {
                if (feasible[a] && m.at(a, b)) {
                    next[b] = true;
                    break;
                }
            }
        }
        feasible = std::move(next);
    }
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (feasible[s] && mm.symbols[s].cls != SymbolClass::point) return false;
    }
    return true;
}

}  // namespace

EssentialReport essential_alphabet(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                   unsigned bound, const std::vector<bool>* allowed) {
    assert(bound >= 1);
    const std::size_t n = m.size();
    EssentialReport report;
    report.bound = bound;
    report.per_symbol.assign(n, {});

    auto arc_class = [&](std::size_t s) { return mm.symbols[s].cls != SymbolClass::point; };

    for (std::size_t s = 0; s < n; ++s) {
        if (allowed_at(allowed, s) && arc_class(s)) {
            report.per_symbol[s] = {EssentialStatus::by_class, {s}};
        }
    }

    // Point symbols that reach an interval or vertical symbol appear in a
    // word ending there, and such words are always essential.
    for (std::size_t s = 0; s < n; ++s) {
        if (!allowed_at(allowed, s) || arc_class(s)) continue;
        std::vector<std::size_t> parent(n, n);
        std::vector<std::size_t> queue{s};
        parent[s] = s;
        std::optional<std::size_t> hit;
        for (std::size_t qi = 0; qi < queue.size() && !hit; ++qi) {
            for (std::size_t b = 0; b < n; ++b) {
                if (!allowed_at(allowed, b) || !m.at(queue[qi], b) || parent[b] != n) continue;
                parent[b] = queue[qi];
                if (arc_class(b)) {
                    hit = b;
                    break;
                }
                queue.push_back(b);
            }
        }
        if (hit) {
            Word path;
            for (std::size_t v = *hit; v != s; v = parent[v]) path.push_back(v);
            path.push_back(s);
            std::reverse(path.begin(), path.end());
            report.per_symbol[s] = {EssentialStatus::by_reachability, std::move(path)};
        }
    }

    // Remaining point symbols: search all words through them, up to the
    // bound, for one whose pinned trajectory is isolated.
    for (std::size_t s = 0; s < n; ++s) {
        if (!allowed_at(allowed, s)) continue;
        if (report.per_symbol[s].status != EssentialStatus::inessential_up_to_bound) continue;

        std::map<std::vector<Rational>, bool> seen;
        std::optional<Word> witness;

        // Suffixes starting at s stay inside the point class (s reaches no
        // arc symbols), so every word through s ends in a point symbol.
        for (std::size_t len = 1; len <= bound && !witness; ++len) {
            for (std::size_t pos = 0; pos < len && !witness; ++pos) {
                // prefix: word[0..pos] ends at s with no earlier s;
                // suffix: word[pos..len-1] continues from s.
                std::vector<Word> prefixes;
                Word buf{s};
                auto grow_prefix = [&](auto&& self) -> void {
                    if (buf.size() == pos + 1) {
                        prefixes.emplace_back(buf.rbegin(), buf.rend());
                        return;
                    }
                    for (std::size_t a = 0; a < n; ++a) {
                        if (a == s || !allowed_at(allowed, a) || !m.at(a, buf.back())) continue;
                        buf.push_back(a);
                        self(self);
                        buf.pop_back();
                    }
                };
                grow_prefix(grow_prefix);

                for (const auto& prefix : prefixes) {
                    if (witness) break;
                    Word word = prefix;
                    auto grow_suffix = [&](auto&& self) -> void {
                        if (witness) return;
                        if (word.size() == len) {
                            auto x = pinned_trajectory(mm, word);
                            auto it = seen.find(x);
                            bool isolated = it != seen.end()
                                                ? it->second
                                                : (seen[x] = trajectory_isolated(mm, m, x, allowed));
                            if (isolated) witness = word;
                            return;
                        }
                        for (std::size_t b = 0; b < n; ++b) {
                            if (!allowed_at(allowed, b) || !m.at(word.back(), b)) continue;
                            word.push_back(b);
                            self(self);
                            word.pop_back();
                            if (witness) return;
                        }
                    };
                    grow_suffix(grow_suffix);
                }
            }
        }
        if (witness) {
            report.per_symbol[s] = {EssentialStatus::by_isolation, std::move(*witness)};
        }
    }

    for (std::size_t s = 0; s < n; ++s) {
        if (allowed_at(allowed, s) && report.is_essential(s)) report.essential.push_back(s);
    }
    return report;
}

ConditionVerdicts check_conditions(const TransitionMatrix& m, const EssentialReport& essential,
                                   const ComponentDecomposition& decomp) {
    (void)m;
    ConditionVerdicts out;
    out.assumed_symbols = essential.undecided();
    out.assumed_inessential = !out.assumed_symbols.empty();

    auto home = decomp.common_component(essential.essential);
    std::string suffix = out.assumed_inessential
                             ? "; assumes the bound-limited symbols are inessential"
                             : "";
    if (home) {
        const Component& c = decomp.components[*home];
        out.ic = Verdict::make(Status::holds, "essential-symbols-lie-in-one-irreducible-component",
                               "component of " + std::to_string(c.symbols.size()) + " symbols" + suffix);
        out.ic_component = c.symbols;
        if (c.mixing) {
            out.mc = Verdict::make(Status::holds, "essential-symbols-lie-in-one-mixing-component",
                                   "component has period 1" + suffix);
            out.mc_component = c.symbols;
        } else {
            std::string why = c.period ? "component has period " + std::to_string(*c.period)
                                       : "component has no cycle";
            out.mc = Verdict::make(Status::fails, "no-mixing-component-contains-all-essential-symbols",
                                   why + suffix);
        }
    } else {
        out.ic = Verdict::make(Status::fails, "essential-symbols-split-across-components",
                               "no single component contains every essential symbol" + suffix);
        out.mc = Verdict::make(Status::fails, "no-mixing-component-contains-all-essential-symbols",
                               "essential symbols span several components" + suffix);
    }
    return out;
}

}  // namespace mmdyn
