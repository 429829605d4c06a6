#include "mmdyn/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace mmdyn {

namespace {

/// Internal invariant check that survives every build type: these guard
/// constructions whose outputs are advertised as machine-checked.
inline void require(bool condition, const char* what) {
    if (!condition) throw std::logic_error(std::string("internal invariant failed: ") + what);
}

}  // namespace

bool trajectory_valid(const MarkovMultiMap& mm, const FiniteTrajectory& x) {
    if (x.points.empty()) return false;
    for (const auto& p : x.points) {
        if (p < Rational(0) || p > Rational(1)) return false;
    }
    for (std::size_t k = 0; k + 1 < x.points.size(); ++k) {
        if (!multimap_contains(mm, x.points[k], x.points[k + 1])) return false;
    }
    return true;
}

Rational metric_d(const FiniteTrajectory& x, const FiniteTrajectory& y) {
    if (x.points.size() != y.points.size()) {
        throw std::invalid_argument("metric_d: trajectories have different lengths");
    }
    if (x.points.empty()) throw std::invalid_argument("metric_d: empty trajectories");
    Rational best(0);
    for (std::size_t k = 0; k < x.points.size(); ++k) {
        Rational term = (x.points[k] - y.points[k]).abs() / Rational(static_cast<long long>(k) + 1);
        best = max(best, term);
    }
    return best;
}

ValidationError::ValidationError(std::vector<Violation> violations_in, std::string proper_in)
    : std::runtime_error(proper_in.empty()
                             ? "multi-map violates " + std::to_string(violations_in.size()) +
                                   " defining condition(s)"
                             : "proper-parametrization: " + proper_in),
      violations(std::move(violations_in)),
      proper_message(std::move(proper_in)) {}

unsigned default_bound(const MarkovMultiMap& mm) {
    return static_cast<unsigned>(mm.symbols.size()) + 1;
}

namespace {

/// Smallest k >= 1 with the component's boolean matrix power entrywise
/// positive. Exists (and is at most the Wielandt exponent) for mixing
/// components.
std::optional<unsigned> primitivity_exponent(const TransitionMatrix& m,
                                             const std::vector<std::size_t>& comp) {
    const std::size_t c = comp.size();
    if (c == 0) return std::nullopt;
    const unsigned limit = static_cast<unsigned>(c * c - 2 * c + 2);
    std::vector<std::vector<bool>> base(c, std::vector<bool>(c, false));
    for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = 0; j < c; ++j) base[i][j] = m.at(comp[i], comp[j]);
    }
    auto all_positive = [&](const std::vector<std::vector<bool>>& p) {
        for (const auto& row : p) {
            for (bool b : row) {
                if (!b) return false;
            }
        }
        return true;
    };
    std::vector<std::vector<bool>> power = base;
    for (unsigned k = 1; k <= limit; ++k) {
        if (all_positive(power)) return k;
        std::vector<std::vector<bool>> next(c, std::vector<bool>(c, false));
        for (std::size_t i = 0; i < c; ++i) {
            for (std::size_t t = 0; t < c; ++t) {
                if (!power[i][t]) continue;
                for (std::size_t j = 0; j < c; ++j) {
                    if (base[t][j]) next[i][j] = true;
                }
            }
        }
        power = std::move(next);
    }
    return std::nullopt;
}

}  // namespace

AnalysisContext build_context(const MarkovMultiMap& mm, unsigned bound) {
    auto violations = validate_definition(mm);
    if (!violations.empty()) throw ValidationError(std::move(violations), "");
    auto proper = check_proper_parametrization(mm);
    if (!proper.holds) throw ValidationError({}, proper.message);

    AnalysisContext ctx;
    ctx.mm = mm;
    ctx.matrix = build_transition_matrix(mm);
    ctx.decomp = components(ctx.matrix);
    ctx.essential = essential_alphabet(mm, ctx.matrix, bound);
    ctx.conditions = check_conditions(ctx.matrix, ctx.essential, ctx.decomp);
    ctx.coding = check_coding_condition(mm, ctx.matrix, ctx.decomp);
    ctx.modulus = equicontinuity_modulus(mm);
    if (ctx.conditions.mc.status == Status::holds) {
        auto k = primitivity_exponent(ctx.matrix, ctx.conditions.mc_component);
        if (!k) throw std::logic_error("mixing component without a positive power");
        ctx.mixing_gap = std::max(1u, *k - 1);
    }
    return ctx;
}

// --- special approximation ---------------------------------------------

namespace {

std::vector<bool> essential_mask(const AnalysisContext& ctx) {
    std::vector<bool> mask(ctx.matrix.size(), false);
    for (auto s : ctx.essential.essential) mask[s] = true;
    return mask;
}

/// Lexicographically smallest admissible labeling of x over the masked
/// alphabet; pairs are matched against open parts when open_only is set,
/// closed graphs otherwise.
std::optional<Word> lex_labeling(const AnalysisContext& ctx, const FiniteTrajectory& x,
                                 const std::vector<bool>& mask, bool open_only) {
    const std::size_t L = x.points.size() - 1;
    const std::size_t n = ctx.matrix.size();
    auto fits = [&](std::size_t s, std::size_t k) {
        const auto& sym = ctx.mm.symbols[s];
        return open_only ? open_part_contains(sym, x.points[k], x.points[k + 1])
                         : closed_part_contains(sym, x.points[k], x.points[k + 1]);
    };
    std::vector<std::vector<bool>> feas(L, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) feas[L - 1][s] = mask[s] && fits(s, L - 1);
    for (std::size_t k = L - 1; k-- > 0;) {
        for (std::size_t s = 0; s < n; ++s) {
            if (!mask[s] || !fits(s, k)) continue;
            for (std::size_t t = 0; t < n; ++t) {
                if (feas[k + 1][t] && ctx.matrix.at(s, t)) {
                    feas[k][s] = true;
                    break;
                }
            }
        }
    }
    Word word;
    for (std::size_t k = 0; k < L; ++k) {
        bool found = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (!feas[k][s]) continue;
            if (!word.empty() && !ctx.matrix.at(word.back(), s)) continue;
            word.push_back(s);
            found = true;
            break;
        }
        if (!found) return std::nullopt;
    }
    return word;
}

}  // namespace

LabeledTrajectory special_approximation(const AnalysisContext& ctx, const FiniteTrajectory& x,
                                        const Rational& eps) {
    if (!(eps > Rational(0))) throw std::invalid_argument("eps must be positive");
    if (!trajectory_valid(ctx.mm, x)) throw std::invalid_argument("not a valid trajectory");
    if (x.points.size() == 1) return {x, {}, true};

    auto mask = essential_mask(ctx);
    if (auto word = lex_labeling(ctx, x, mask, /*open_only=*/true)) {
        return {x, std::move(*word), true};
    }
    auto word = lex_labeling(ctx, x, mask, /*open_only=*/false);
    if (!word) {
        throw std::runtime_error(
            "no essential labeling found; the essentiality search bound may be too small");
    }

    // The labeled arc is parametrized by its final coordinate over the
    // range of the last symbol; the trajectory is special exactly when
    // that coordinate sits in the open range. Here it does not, so nudge
    // it inside and rebuild the chain.
    const std::size_t L = word->size();
    const Interval& range = ctx.mm.symbols[word->back()].range;
    const Rational& t = x.points[L];
    require(!range.degenerate(), "perturbable labeling has a degenerate range");
    require(t == range.lo || t == range.hi, "non-special endpoint expected on the range boundary");

    Rational acc(1), worst(1);
    for (std::size_t k = L; k-- > 0;) {
        acc *= inverse_branch(ctx.mm.symbols[(*word)[k]]).slope.abs();
        worst = max(worst, acc);
    }
    Rational eta = min(eps, range.length()) / (Rational(2) * worst);
    Rational inside = (t == range.hi) ? t - eta : t + eta;

    FiniteTrajectory y;
    y.points.assign(L + 1, Rational(0));
    y.points[L] = inside;
    for (std::size_t k = L; k-- > 0;) {
        y.points[k] = inverse_branch(ctx.mm.symbols[(*word)[k]]).eval(y.points[k + 1]);
    }
    for (std::size_t k = 0; k <= L; ++k) {
        require((y.points[k] - x.points[k]).abs() < eps, "approximation drift exceeds eps");
    }
    for (std::size_t k = 0; k < L; ++k) {
        require(open_part_contains(ctx.mm.symbols[(*word)[k]], y.points[k], y.points[k + 1]),
                "perturbed trajectory is not special");
    }
    return {std::move(y), std::move(*word), true};
}

// --- witness machinery ---------------------------------------------------

namespace {

struct Descent {
    Word word;
    AffineBranch map;   // g_w, domain R(last)
    Interval interval;  // I_w
};

/// Walks the coded-interval refinement tree toward a word w with
/// target in I_w and length(I_w) < delta, staying inside the window
/// language: at most `window` consecutive symbols outside d_set. Children
/// are explored in index order, so ties at shared endpoints resolve to the
/// lexicographically smaller word.
Descent descend_coding_word(const AnalysisContext& ctx, const Rational& target,
                            std::optional<std::size_t> pred, const Rational& delta) {
    require(ctx.coding.status == Status::holds, "descent needs the coding condition");
    const auto& mm = ctx.mm;
    const auto& m = ctx.matrix;
    const std::size_t n = m.size();
    const unsigned window = *ctx.coding.window;
    const Rational& gamma = ctx.coding.gamma;

    std::vector<bool> in_d(n, false);
    for (auto a : ctx.coding.d_set) in_d[a] = true;

    // Steps from each interval symbol to d_set.
    std::vector<long> dist(n, -1);
    std::vector<std::size_t> queue;
    for (auto a : ctx.coding.d_set) {
        dist[a] = 0;
        queue.push_back(a);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        for (std::size_t p = 0; p < n; ++p) {
            if (dist[p] != -1 || mm.symbols[p].cls != SymbolClass::interval) continue;
            if (m.at(p, queue[qi])) {
                dist[p] = dist[queue[qi]] + 1;
                queue.push_back(p);
            }
        }
    }

    unsigned jmin = 0;
    {
        Rational v(1);
        while (!(v < delta)) {
            v *= gamma;
            ++jmin;
            require(jmin < 100000, "contraction ratio too close to one");
        }
    }
    const std::size_t max_len = static_cast<std::size_t>(std::max(1u, jmin) + 1) * (window + 1);

    Descent d;
    std::optional<std::size_t> start;
    for (std::size_t b = 0; b < n; ++b) {
        if (mm.symbols[b].cls != SymbolClass::interval) continue;
        if (pred && !m.at(*pred, b)) continue;
        if (mm.symbols[b].domain.contains(target)) {
            start = b;
            break;
        }
    }
    require(start.has_value(), "no admissible interval symbol covers the descent target");
    d.word = {*start};
    d.map = inverse_branch(mm.symbols[*start]);
    d.interval = mm.symbols[*start].domain;
    unsigned run = in_d[*start] ? 0 : 1;

    while (!(d.interval.length() < delta)) {
        std::size_t last = d.word.back();
        std::optional<std::size_t> next;
        if (in_d[last]) {
            // Children over interval successors partition I_w; take the
            // first that contains the target.
            for (std::size_t b = 0; b < n; ++b) {
                if (mm.symbols[b].cls != SymbolClass::interval || !m.at(last, b)) continue;
                if (d.map.image(mm.symbols[b].domain).contains(target)) {
                    next = b;
                    break;
                }
            }
        } else {
            // Off d_set the range is a single cell, so every interval
            // successor keeps I_w; step along a shortest path to d_set.
            long best = -1;
            for (std::size_t b = 0; b < n; ++b) {
                if (mm.symbols[b].cls != SymbolClass::interval || !m.at(last, b)) continue;
                if (dist[b] < 0) continue;
                if (best < 0 || dist[b] < best) {
                    best = dist[b];
                    next = b;
                }
            }
        }
        require(next.has_value(), "descent found no admissible child");
        AffineBranch g = inverse_branch(mm.symbols[*next]);
        d.map = d.map.after(g);
        d.interval = d.map.image();
        d.word.push_back(*next);
        run = in_d[*next] ? 0 : run + 1;
        require(run <= window, "descent left the window language");
        require(d.word.size() <= max_len, "descent exceeded its depth bound");
        require(d.interval.contains(target), "descent lost the target point");
    }
    return d;
}

/// Interior of the lexicographically smallest shortest connecting path
/// from -> ... -> to inside the component mask. Empty when the direct
/// transition is admissible.
Word connect_path(const AnalysisContext& ctx, std::size_t from, std::size_t to,
                  const std::vector<bool>& mask) {
    const auto& m = ctx.matrix;
    const std::size_t n = m.size();
    std::vector<long> dist(n, -1);
    std::vector<std::size_t> queue{to};
    dist[to] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        for (std::size_t p = 0; p < n; ++p) {
            if (!mask[p] || dist[p] != -1 || !m.at(p, queue[qi])) continue;
            dist[p] = dist[queue[qi]] + 1;
            queue.push_back(p);
        }
    }
    long steps = -1;
    if (from == to) {
        for (std::size_t s = 0; s < n; ++s) {
            if (!mask[s] || !m.at(from, s) || dist[s] < 0) continue;
            if (steps < 0 || dist[s] + 1 < steps) steps = dist[s] + 1;
        }
    } else {
        steps = dist[from];
    }
    require(steps >= 1, "no connecting path inside the component");

    Word interior;
    std::size_t cur = from;
    for (long remaining = steps; remaining > 0; --remaining) {
        std::optional<std::size_t> next;
        for (std::size_t s = 0; s < n; ++s) {
            if (!mask[s] || !m.at(cur, s)) continue;
            if (dist[s] == remaining - 1) {
                next = s;
                break;
            }
        }
        require(next.has_value(), "shortest-path walk got stuck");
        cur = *next;
        if (remaining > 1) interior.push_back(cur);
    }
    require(cur == to, "shortest-path walk missed its target");
    return interior;
}

/// Interior of the lexicographically smallest path from -> ... -> to with
/// exactly `edges` transitions, inside the component mask.
Word exact_length_path(const AnalysisContext& ctx, std::size_t from, std::size_t to,
                       std::size_t edges, const std::vector<bool>& mask) {
    const auto& m = ctx.matrix;
    const std::size_t n = m.size();
    std::vector<std::vector<bool>> can(edges + 1, std::vector<bool>(n, false));
    can[0][to] = true;
    for (std::size_t d = 1; d <= edges; ++d) {
        for (std::size_t s = 0; s < n; ++s) {
            if (!mask[s]) continue;
            for (std::size_t t = 0; t < n; ++t) {
                if (mask[t] && m.at(s, t) && can[d - 1][t]) {
                    can[d][s] = true;
                    break;
                }
            }
        }
    }
    require(can[edges][from], "no path of the scheduled length exists");
    Word interior;
    std::size_t cur = from;
    for (std::size_t remaining = edges; remaining > 0; --remaining) {
        std::optional<std::size_t> next;
        for (std::size_t s = 0; s < n; ++s) {
            if (!mask[s] || !m.at(cur, s) || !can[remaining - 1][s]) continue;
            next = s;
            break;
        }
        require(next.has_value(), "scheduled-length walk got stuck");
        cur = *next;
        if (remaining > 1) interior.push_back(cur);
    }
    require(cur == to, "scheduled-length walk missed its target");
    return interior;
}

FiniteTrajectory backward_chain(const MarkovMultiMap& mm, const Word& word, const Rational& last) {
    FiniteTrajectory z;
    z.points.assign(word.size() + 1, Rational(0));
    z.points[word.size()] = last;
    for (std::size_t k = word.size(); k-- > 0;) {
        AffineBranch g = inverse_branch(mm.symbols[word[k]]);
        require(g.domain.contains(z.points[k + 1]), "backward chain left a branch range");
        z.points[k] = g.eval(z.points[k + 1]);
    }
    return z;
}

/// A labeling ending in a point symbol pins its final coordinate, which
/// blocks the coded-interval descent (nothing slanted fits inside a
/// degenerate open range). Under the irreducibility condition every
/// essential point symbol reaches an interval or vertical symbol, and the
/// first such symbol on the path is vertical; extending the trajectory
/// exactly along that path re-anchors it with a usable open range.
LabeledTrajectory anchor_on_arc(const AnalysisContext& ctx, LabeledTrajectory lt) {
    const auto& mm = ctx.mm;
    const auto& m = ctx.matrix;
    if (lt.word.empty() || mm.symbols[lt.word.back()].cls != SymbolClass::point) return lt;

    const std::size_t n = m.size();
    std::size_t from = lt.word.back();
    std::vector<std::size_t> parent(n, n);
    std::vector<std::size_t> queue{from};
    parent[from] = from;
    std::optional<std::size_t> hit;
    for (std::size_t qi = 0; qi < queue.size() && !hit; ++qi) {
        for (std::size_t b = 0; b < n; ++b) {
            if (!m.at(queue[qi], b) || parent[b] != n) continue;
            parent[b] = queue[qi];
            if (mm.symbols[b].cls != SymbolClass::point) {
                hit = b;
                break;
            }
            queue.push_back(b);
        }
    }
    require(hit.has_value(), "essential point symbol cannot reach an arc symbol");

    Word path;
    for (std::size_t v = *hit; v != from; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        // Point symbols along the path pin the appended coordinates.
        lt.word.push_back(path[i]);
        lt.trajectory.points.push_back(mm.symbols[path[i]].range.lo);
    }
    const auto& anchor = mm.symbols[path.back()];
    require(anchor.cls == SymbolClass::vertical, "point symbols only feed degenerate domains");
    lt.word.push_back(path.back());
    lt.trajectory.points.push_back((anchor.range.lo + anchor.range.hi) / Rational(2));
    for (std::size_t k = 0; k + 1 < lt.trajectory.points.size(); ++k) {
        require(open_part_contains(mm.symbols[lt.word[k]], lt.trajectory.points[k],
                                   lt.trajectory.points[k + 1]),
                "anchored trajectory is not special");
    }
    return lt;
}

FiniteTrajectory extend_if_single(const AnalysisContext& ctx, const FiniteTrajectory& x) {
    if (x.points.size() >= 2) return x;
    const Rational& t = x.points.front();
    for (const auto& s : ctx.mm.symbols) {
        if (s.cls == SymbolClass::interval && s.domain.contains(t)) {
            FiniteTrajectory out = x;
            out.points.push_back(forward_branch(s).eval(t));
            return out;
        }
    }
    throw std::logic_error("no interval branch covers the point");  // coverage forbids this
}

std::vector<bool> component_mask(const AnalysisContext& ctx, std::size_t component) {
    std::vector<bool> mask(ctx.matrix.size(), false);
    for (auto s : ctx.decomp.components[component].symbols) mask[s] = true;
    return mask;
}

void require_connectivity_preconditions(const AnalysisContext& ctx) {
    if (ctx.coding.status != Status::holds) {
        throw PreconditionError("CC", "refused: CC: " + std::string(to_string(ctx.coding.status)));
    }
    if (ctx.conditions.ic.status != Status::holds) {
        throw PreconditionError("IC", "refused: IC: " + std::string(to_string(ctx.conditions.ic.status)));
    }
}

Word concat(std::initializer_list<const Word*> parts) {
    Word out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
}

}  // namespace

ConnectWitness connect_witness(const AnalysisContext& ctx, const FiniteTrajectory& head,
                               const FiniteTrajectory& tail, const Rational& eps) {
    require_connectivity_preconditions(ctx);
    if (!(eps > Rational(0))) throw std::invalid_argument("eps must be positive");
    if (!trajectory_valid(ctx.mm, head) || !trajectory_valid(ctx.mm, tail)) {
        throw std::invalid_argument("head and tail must be valid trajectories");
    }

    FiniteTrajectory head2 = extend_if_single(ctx, head);
    FiniteTrajectory tail2 = extend_if_single(ctx, tail);
    Rational half = eps / Rational(2);
    LabeledTrajectory hx = anchor_on_arc(ctx, special_approximation(ctx, head2, half));
    LabeledTrajectory ty = special_approximation(ctx, tail2, half);
    const std::size_t m = hx.trajectory.points.size() - 1;

    Rational delta = min(half, ctx.modulus.delta(half));
    Descent w = descend_coding_word(ctx, hx.trajectory.points[m], hx.word.back(), delta);
    auto mask = component_mask(ctx, *ctx.coding.component);
    Word vprime = connect_path(ctx, w.word.back(), ty.word.front(), mask);

    Word full = concat({&hx.word, &w.word, &vprime, &ty.word});
    FiniteTrajectory z = backward_chain(ctx.mm, full, ty.trajectory.points.back());
    std::size_t offset = m + w.word.size() + vprime.size();

    for (std::size_t k = 0; k < head.points.size(); ++k) {
        require((z.points[k] - head.points[k]).abs() < eps, "connect head bound violated");
    }
    for (std::size_t k = 0; k < tail.points.size(); ++k) {
        require((z.points[offset + k] - tail.points[k]).abs() < eps, "connect tail bound violated");
    }
    return {std::move(z), offset};
}

FiniteTrajectory periodic_witness(const AnalysisContext& ctx, const FiniteTrajectory& head,
                                  const Rational& eps) {
    require_connectivity_preconditions(ctx);
    if (!(eps > Rational(0))) throw std::invalid_argument("eps must be positive");
    if (!trajectory_valid(ctx.mm, head)) {
        throw std::invalid_argument("head must be a valid trajectory");
    }

    FiniteTrajectory head2 = extend_if_single(ctx, head);
    Rational half = eps / Rational(2);
    LabeledTrajectory hx = anchor_on_arc(ctx, special_approximation(ctx, head2, half));
    const std::size_t m = hx.trajectory.points.size() - 1;
    auto mask = component_mask(ctx, *ctx.coding.component);

    // Deepen the descent until the loop composite is a strict contraction;
    // its fixed point then seeds an exactly periodic chain.
    Rational threshold = min(half, ctx.modulus.delta(half));
    Descent w;
    Word vprime;
    InverseComposite loop;
    for (int attempt = 0;; ++attempt) {
        require(attempt < 200, "loop composite refuses to contract");
        w = descend_coding_word(ctx, hx.trajectory.points[m], hx.word.back(), threshold);
        vprime = connect_path(ctx, w.word.back(), hx.word.front(), mask);
        Word cycle = concat({&w.word, &vprime, &hx.word});
        loop = compose_inverse(ctx.mm, ctx.matrix, cycle);
        if (loop.map.slope.abs() < Rational(1)) break;
        threshold *= ctx.coding.gamma;
    }

    Rational fixed = loop.map.intercept / (Rational(1) - loop.map.slope);
    require(loop.map.domain.contains(fixed), "fixed point escaped the loop domain");

    Word full = concat({&hx.word, &w.word, &vprime, &hx.word});
    FiniteTrajectory chain = backward_chain(ctx.mm, full, fixed);
    std::size_t period = m + w.word.size() + vprime.size();

    FiniteTrajectory z;
    z.points.assign(chain.points.begin(), chain.points.begin() + static_cast<long>(period + 1));
    require(z.points.front() == z.points.back(), "periodic witness does not close");
    for (std::size_t k = 0; k < head.points.size(); ++k) {
        require((z.points[k] - head.points[k]).abs() < eps, "periodic head bound violated");
    }
    return z;
}

SpecificationWitness specification_witness(const AnalysisContext& ctx,
                                           const std::vector<FiniteTrajectory>& segments,
                                           const std::vector<unsigned>& gaps,
                                           const Rational& eps) {
    if (ctx.coding.status != Status::holds) {
        throw PreconditionError("CC", "refused: CC: " + std::string(to_string(ctx.coding.status)));
    }
    if (ctx.conditions.mc.status != Status::holds) {
        throw PreconditionError("MC", "refused: MC: " + std::string(to_string(ctx.conditions.mc.status)));
    }
    if (segments.empty() || segments.size() != gaps.size()) {
        throw std::invalid_argument("need one gap per segment");
    }
    if (!(eps > Rational(0))) throw std::invalid_argument("eps must be positive");
    const unsigned n2 = *ctx.mixing_gap;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        if (gaps[k] < n2) {
            throw PreconditionError("gap", "gap " + std::to_string(k) + " is " +
                                               std::to_string(gaps[k]) +
                                               ", below the minimum usable connector length " +
                                               std::to_string(n2));
        }
    }

    const std::size_t r = segments.size();
    Rational half = eps / Rational(2);
    std::vector<FiniteTrajectory> seg2;
    std::vector<LabeledTrajectory> approx;
    for (const auto& seg : segments) {
        if (!trajectory_valid(ctx.mm, seg)) {
            throw std::invalid_argument("every segment must be a valid trajectory");
        }
        seg2.push_back(extend_if_single(ctx, seg));
        approx.push_back(anchor_on_arc(ctx, special_approximation(ctx, seg2.back(), half)));
    }

    auto mc_component = ctx.decomp.component_of[ctx.conditions.mc_component.front()];
    auto mask = component_mask(ctx, mc_component);

    Rational threshold = min(half, ctx.modulus.delta(half));
    std::vector<Descent> ws(r);
    std::vector<Word> vs(r);
    InverseComposite loop;
    Word full;
    for (int attempt = 0;; ++attempt) {
        require(attempt < 200, "schedule composite refuses to contract");
        for (std::size_t k = 0; k < r; ++k) {
            std::size_t nk = approx[k].trajectory.points.size() - 1;
            ws[k] = descend_coding_word(ctx, approx[k].trajectory.points[nk],
                                        approx[k].word.back(), threshold);
        }
        for (std::size_t k = 0; k < r; ++k) {
            std::size_t to = approx[(k + 1) % r].word.front();
            vs[k] = exact_length_path(ctx, ws[k].word.back(), to, gaps[k] + 1, mask);
        }
        full.clear();
        for (std::size_t k = 0; k < r; ++k) {
            full.insert(full.end(), approx[k].word.begin(), approx[k].word.end());
            full.insert(full.end(), ws[k].word.begin(), ws[k].word.end());
            full.insert(full.end(), vs[k].begin(), vs[k].end());
        }
        loop = compose_inverse(ctx.mm, ctx.matrix, full);
        if (loop.map.slope.abs() < Rational(1)) break;
        threshold *= ctx.coding.gamma;
    }

    Rational fixed = loop.map.intercept / (Rational(1) - loop.map.slope);
    require(loop.map.domain.contains(fixed), "fixed point escaped the schedule domain");
    FiniteTrajectory z = backward_chain(ctx.mm, full, fixed);
    require(z.points.front() == z.points.back(), "specification witness does not close");

    SpecificationWitness out;
    out.z = std::move(z);
    out.min_gap = n2;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < r; ++k) {
        out.offsets.push_back(pos);
        for (std::size_t i = 0; i < segments[k].points.size(); ++i) {
            require((out.z.points[pos + i] - segments[k].points[i]).abs() < eps,
                    "specification segment bound violated");
        }
        pos += (approx[k].trajectory.points.size() - 1) + ws[k].word.size() + gaps[k];
    }
    return out;
}

// --- eventual range ------------------------------------------------------

namespace {

struct GridSet {
    std::vector<bool> cells;
    std::vector<bool> points;

    friend bool operator==(const GridSet& a, const GridSet& b) {
        return a.cells == b.cells && a.points == b.points;
    }
    bool subset_of(const GridSet& o) const {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i] && !o.cells[i]) return false;
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i] && !o.points[i]) return false;
        }
        return true;
    }
};

std::size_t point_index(const Partition& p, const Rational& v) {
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        if (p.points[i] == v) return i;
    }
    throw std::logic_error("not a grid point: " + v.str());
}

void add_interval(const Partition& p, GridSet& s, const Interval& range) {
    std::size_t lo = point_index(p, range.lo);
    std::size_t hi = point_index(p, range.hi);
    for (std::size_t i = lo; i <= hi; ++i) s.points[i] = true;
    for (std::size_t i = lo; i < hi; ++i) s.cells[i] = true;
}

GridSet apply_multimap(const MarkovMultiMap& mm, const GridSet& s) {
    GridSet out;
    out.cells.assign(s.cells.size(), false);
    out.points.assign(s.points.size(), false);
    for (const auto& sym : mm.symbols) {
        if (sym.cls == SymbolClass::interval) {
            std::size_t cell = *mm.partition.cell_index(sym.domain);
            if (s.cells[cell]) {
                add_interval(mm.partition, out, sym.range);
            } else {
                // The set can still clip the cell at its endpoints.
                AffineBranch f = forward_branch(sym);
                for (const Rational& end : {sym.domain.lo, sym.domain.hi}) {
                    if (s.points[point_index(mm.partition, end)]) {
                        out.points[point_index(mm.partition, f.eval(end))] = true;
                    }
                }
            }
        } else {
            if (s.points[point_index(mm.partition, sym.domain.lo)]) {
                add_interval(mm.partition, out, sym.range);
            }
        }
    }
    return out;
}

}  // namespace

EventualRange eventual_range(const MarkovMultiMap& mm) {
    const std::size_t r = mm.partition.cell_count();
    GridSet s;
    s.cells.assign(r, true);
    s.points.assign(r + 1, true);

    const unsigned cap =
        static_cast<unsigned>(mm.partition.points.size() * std::max<std::size_t>(mm.symbols.size(), 1));
    EventualRange out;
    out.iterations = 0;
    while (true) {
        GridSet next = apply_multimap(mm, s);
        ++out.iterations;
        require(next.subset_of(s), "image sequence is not decreasing");
        if (next == s) break;
        s = std::move(next);
        require(out.iterations <= cap, "image sequence failed to stabilize in time");
    }

    out.cells = s.cells;
    out.points = s.points;
    out.full = std::all_of(s.cells.begin(), s.cells.end(), [](bool b) { return b; }) &&
               std::all_of(s.points.begin(), s.points.end(), [](bool b) { return b; });
    out.cells_only = true;
    for (std::size_t i = 0; i <= r; ++i) {
        if (!s.points[i]) continue;
        bool captured = (i > 0 && s.cells[i - 1]) || (i < r && s.cells[i]);
        if (!captured) out.cells_only = false;
    }

    // Assemble pieces: maximal runs of cells, then leftover isolated points.
    std::size_t i = 0;
    while (i < r) {
        if (!s.cells[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < r && s.cells[j]) ++j;
        out.pieces.emplace_back(mm.partition.points[i], mm.partition.points[j]);
        i = j;
    }
    for (std::size_t k = 0; k <= r; ++k) {
        if (!s.points[k]) continue;
        bool captured = (k > 0 && s.cells[k - 1]) || (k < r && s.cells[k]);
        if (!captured) out.pieces.push_back(Interval::point(mm.partition.points[k]));
    }
    std::sort(out.pieces.begin(), out.pieces.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return out;
}

// --- classification ------------------------------------------------------

namespace {

PropertyVerdicts forward_table(const Verdict& ic, const Verdict& mc, Status cc) {
    PropertyVerdicts out;
    bool cc_holds = cc == Status::holds;

    if (cc_holds && ic.status == Status::holds) {
        out.transitive = Verdict::make(Status::holds, "coding+irreducibility-criterion");
        out.dense_periodic =
            Verdict::make(Status::holds, "coding+irreducibility-criterion(periodic-density)");
        out.devaney = Verdict::make(Status::holds, "transitive-with-dense-periodic-points");
    } else if (ic.status == Status::fails) {
        out.transitive = Verdict::make(Status::fails, "transitivity-forces-irreducibility",
                                       "no irreducible component contains all essential symbols");
        out.devaney = Verdict::make(Status::fails, "transitivity-forces-irreducibility");
        out.dense_periodic = Verdict::make(Status::unknown, "");
    } else {
        out.transitive = Verdict::make(Status::unknown, "");
        out.dense_periodic = Verdict::make(Status::unknown, "");
        out.devaney = Verdict::make(Status::unknown, "");
    }

    if (cc_holds && mc.status == Status::holds) {
        out.mixing = Verdict::make(Status::holds, "coding+mixing-component-criterion");
        out.specification =
            Verdict::make(Status::holds, "coding+mixing+equicontinuity-criterion");
    } else if (mc.status == Status::fails) {
        out.mixing = Verdict::make(Status::fails, "mixing-forces-mixing-condition");
        out.specification = Verdict::make(Status::fails, "specification-forces-mixing-condition");
    } else {
        out.mixing = Verdict::make(Status::unknown, "");
        out.specification = Verdict::make(Status::unknown, "");
    }
    return out;
}

Verdict reframe(const Verdict& v, const std::string& basis_suffix, const std::string& detail) {
    if (v.status == Status::unknown) return Verdict::make(Status::unknown, "", detail);
    return Verdict::make(v.status, v.basis + "+" + basis_suffix, detail);
}

void enforce_monotone(const PropertyVerdicts& p, const char* side) {
    auto holds = [](const Verdict& v) { return v.status == Status::holds; };
    if (holds(p.specification) && !holds(p.mixing)) {
        throw std::logic_error(std::string(side) + ": specification without mixing");
    }
    if (holds(p.mixing) && !holds(p.transitive)) {
        throw std::logic_error(std::string(side) + ": mixing without transitivity");
    }
}

std::string join_names(const TransitionMatrix& m, const std::vector<std::size_t>& symbols) {
    std::string out;
    for (auto s : symbols) {
        if (!out.empty()) out += ", ";
        out += m.alphabet[s];
    }
    return out;
}

}  // namespace

AnalysisReport classify(const MarkovMultiMap& mm, unsigned bound) {
    AnalysisReport report{.ctx = build_context(mm, bound),
                          .equicontinuity = {},
                          .forward = {},
                          .inverse = {},
                          .range = {},
                          .caveats = {}};
    AnalysisContext& ctx = report.ctx;

    report.equicontinuity =
        Verdict::make(Status::holds, "affine-branches-bound-inverse-slopes",
                      "uniform slope bound " + ctx.modulus.constant.str() +
                          " for the whole inverse family");

    report.forward = forward_table(ctx.conditions.ic, ctx.conditions.mc, ctx.coding.status);
    report.range = eventual_range(mm);

    if (ctx.conditions.assumed_inessential) {
        report.caveats.push_back(
            "essentiality of {" + join_names(ctx.matrix, ctx.conditions.assumed_symbols) +
            "} is undecided at search bound " + std::to_string(ctx.essential.bound) +
            "; irreducibility/mixing verdicts assume these symbols are inessential");
    }
    if (ctx.coding.status == Status::unknown) {
        report.caveats.push_back("coding condition undecided: " + ctx.coding.detail);
    }
    if (report.forward.transitive.status == Status::unknown) {
        report.caveats.push_back(
            ctx.coding.status == Status::fails
                ? "forward transitivity undetermined: the irreducibility condition holds but the "
                  "coding condition fails, and no implemented criterion decides this case"
                : "forward transitivity undetermined: the coding condition could not be decided");
    }

    // Inverse-limit side. With a full eventual range the two systems share
    // their Devaney/mixing/specification behavior outright; with a range
    // made of whole cells, reclassify the restriction; otherwise stay
    // agnostic beyond the one-directional implications.
    if (report.range.full) {
        const std::string why = "eventual range is the whole interval";
        report.inverse.transitive = reframe(report.forward.transitive, "full-range-equivalence", why);
        report.inverse.devaney = reframe(report.forward.devaney, "full-range-equivalence", why);
        report.inverse.mixing = reframe(report.forward.mixing, "full-range-equivalence", why);
        report.inverse.specification =
            reframe(report.forward.specification, "full-range-equivalence", why);
    } else if (report.range.cells_only) {
        std::vector<bool> allowed(ctx.matrix.size(), false);
        bool covered = true;
        for (std::size_t s = 0; s < ctx.matrix.size(); ++s) {
            const auto& sym = mm.symbols[s];
            if (sym.cls == SymbolClass::interval) {
                allowed[s] = report.range.cells[*mm.partition.cell_index(sym.domain)];
            } else {
                allowed[s] = report.range.points[point_index(mm.partition, sym.domain.lo)];
            }
        }
        for (std::size_t c = 0; c < report.range.cells.size(); ++c) {
            if (!report.range.cells[c]) continue;
            bool has_branch = false;
            for (std::size_t s = 0; s < ctx.matrix.size(); ++s) {
                if (allowed[s] && mm.symbols[s].cls == SymbolClass::interval &&
                    *mm.partition.cell_index(mm.symbols[s].domain) == c) {
                    has_branch = true;
                }
            }
            if (!has_branch) covered = false;
        }
        if (covered) {
            auto decomp2 = components(ctx.matrix, &allowed);
            auto essential2 = essential_alphabet(mm, ctx.matrix, bound, &allowed);
            auto conds2 = check_conditions(ctx.matrix, essential2, decomp2);
            auto coding2 = check_coding_condition(mm, ctx.matrix, decomp2, &allowed, &report.range.cells);
            PropertyVerdicts fwd2 = forward_table(conds2.ic, conds2.mc, coding2.status);
            const std::string why = "from the system restricted to the eventual range";
            report.inverse.transitive = reframe(fwd2.transitive, "range-restriction-equivalence", why);
            report.inverse.devaney = reframe(fwd2.devaney, "range-restriction-equivalence", why);
            report.inverse.mixing = reframe(fwd2.mixing, "range-restriction-equivalence", why);
            report.inverse.specification =
                reframe(fwd2.specification, "range-restriction-equivalence", why);
            if (conds2.assumed_inessential) {
                report.caveats.push_back(
                    "restricted system: essentiality of {" +
                    join_names(ctx.matrix, conds2.assumed_symbols) +
                    "} is undecided at search bound " + std::to_string(bound));
            }
        } else {
            report.caveats.push_back(
                "eventual range lost an interval branch; inverse verdicts beyond direct "
                "implications are unknown");
        }
    } else {
        report.caveats.push_back(
            "eventual range contains isolated grid points; inverse verdicts beyond direct "
            "implications are unknown");
    }

    // One-directional lifts always apply.
    auto lift = [](Verdict& inv, const Verdict& fwd, const char* rule) {
        if (fwd.status == Status::holds && inv.status != Status::holds) {
            inv = Verdict::make(Status::holds, rule, "lifted from the forward system");
        }
    };
    lift(report.inverse.transitive, report.forward.transitive,
         "forward-transitivity-lifts-to-inverse-limit");
    lift(report.inverse.devaney, report.forward.devaney, "inverse-limit-inherits-devaney");
    lift(report.inverse.mixing, report.forward.mixing, "inverse-limit-inherits-mixing");
    lift(report.inverse.specification, report.forward.specification,
         "inverse-limit-inherits-specification");

    if (report.inverse.devaney.status == Status::holds) {
        report.inverse.dense_periodic =
            Verdict::make(Status::holds, "devaney-includes-dense-periodic-points");
    } else {
        report.inverse.dense_periodic = Verdict::make(Status::unknown, "");
    }

    enforce_monotone(report.forward, "forward");
    enforce_monotone(report.inverse, "inverse");
    return report;
}

// --- forward sampling ----------------------------------------------------

namespace {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

}  // namespace

FiniteTrajectory sample_forward(const MarkovMultiMap& mm, const Rational& x0, std::size_t n,
                                std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("trajectory length must be at least 1");
    if (x0 < Rational(0) || x0 > Rational(1)) {
        throw std::invalid_argument("start point outside the unit interval");
    }
    SplitMix64 rng{seed};
    FiniteTrajectory out;
    out.points.push_back(x0);
    while (out.points.size() < n) {
        const Rational& cur = out.points.back();
        std::vector<std::size_t> applicable;
        for (std::size_t s = 0; s < mm.symbols.size(); ++s) {
            if (mm.symbols[s].domain.contains(cur)) applicable.push_back(s);
        }
        require(!applicable.empty(), "no symbol applies");  // domain coverage
        const auto& sym = mm.symbols[applicable[rng.next() % applicable.size()]];
        if (sym.cls == SymbolClass::interval) {
            out.points.push_back(forward_branch(sym).eval(cur));
        } else if (sym.range.degenerate()) {
            out.points.push_back(sym.range.lo);
        } else {
            // Midpoint of a seeded dyadic subdivision keeps the step rational
            // and strictly inside the open range.
            std::uint64_t k = rng.next() % 64;
            Rational frac(static_cast<long long>(2 * k + 1), 128);
            out.points.push_back(sym.range.lo + sym.range.length() * frac);
        }
    }
    return out;
}

}  // namespace mmdyn
