#include <doctest.h>

#include <algorithm>
#include <set>

#include "mmdyn/dynamics.hpp"
#include "mmdyn/spec_io.hpp"
#include "test_helpers.hpp"
#include "test_oracles.hpp"

using namespace mmdyn;
using mmtest::rat;
using mmtest::TestRng;

namespace {

/// Random slanted branches over a random grid (plus an occasional vertical
/// segment), then completion to a properly parametrized multi-map. Returns
/// nothing when the drawn geometry cannot be partitioned (crossing or
/// duplicated branch interiors).
std::optional<MarkovMultiMap> draw_multimap(TestRng& rng) {
    std::vector<Rational> pool = {rat("1/6"), rat("1/4"), rat("1/3"), rat("1/2"),
                                  rat("2/3"), rat("3/4"), rat("5/6")};
    MarkovMultiMap mm;
    mm.partition.points.push_back(Rational(0));
    std::set<std::size_t> chosen;
    std::size_t interior = rng.below(3);
    while (chosen.size() < interior) chosen.insert(rng.below(pool.size()));
    for (auto i : chosen) mm.partition.points.push_back(pool[i]);
    std::sort(mm.partition.points.begin(), mm.partition.points.end());
    mm.partition.points.push_back(Rational(1));

    const std::size_t cells = mm.partition.cell_count();
    int counter = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        std::set<std::pair<std::pair<std::size_t, std::size_t>, bool>> used;
        std::size_t branches = 1 + rng.below(2);
        for (std::size_t k = 0; k < branches; ++k) {
            std::size_t u = rng.below(mm.partition.points.size() - 1);
            std::size_t v = u + 1 + rng.below(mm.partition.points.size() - 1 - u);
            bool increasing = rng.below(2) == 0;
            if (!used.insert({{u, v}, increasing}).second) continue;
            BranchSymbol s;
            s.name = "s" + std::to_string(counter++);
            s.cls = SymbolClass::interval;
            s.domain = mm.partition.cell(c);
            s.range = Interval(mm.partition.points[u], mm.partition.points[v]);
            s.orientation = increasing ? Orientation::increasing : Orientation::decreasing;
            mm.symbols.push_back(std::move(s));
        }
    }
    if (rng.below(2) == 0) {
        // One vertical over a random grid point, spanning one cell.
        std::size_t p = rng.below(mm.partition.points.size());
        std::size_t c = rng.below(cells);
        BranchSymbol s;
        s.name = "v" + std::to_string(counter++);
        s.cls = SymbolClass::vertical;
        s.domain = Interval::point(mm.partition.points[p]);
        s.range = mm.partition.cell(c);
        mm.symbols.push_back(std::move(s));
    }

    if (!validate_definition(mm).empty()) return std::nullopt;
    try {
        return complete_parametrization(mm);
    } catch (const CompletionError&) {
        return std::nullopt;
    }
}

}  // namespace

TEST_CASE("generated multi-maps satisfy every pipeline contract") {
    TestRng rng(916);
    int accepted = 0;
    int attempts = 0;
    while (accepted < 25) {
        REQUIRE(++attempts < 500);
        auto drawn = draw_multimap(rng);
        if (!drawn) continue;
        ++accepted;
        const MarkovMultiMap& mm = *drawn;

        CHECK(validate_definition(mm).empty());
        CHECK(check_proper_parametrization(mm).holds);

        // Graph pieces agree with evaluation on a coarse rational grid.
        const int q = 16;
        for (int i = 0; i <= q; ++i) {
            Rational x(i, q);
            auto fx = evaluate(mm, x);
            for (int j = 0; j <= q; ++j) {
                Rational y(j, q);
                bool in_eval = false;
                for (const auto& piece : fx) in_eval = in_eval || piece.contains(y);
                CHECK(in_eval == multimap_contains(mm, x, y));
            }
        }

        auto report = classify(mm, 4);
        const auto& ctx = report.ctx;

        for (const auto& comp : ctx.decomp.components) {
            CHECK(comp.irreducible == mmtest::oracle_irreducible(ctx.matrix, comp.symbols));
            CHECK(comp.mixing == mmtest::oracle_mixing(ctx.matrix, comp.symbols));
        }
        for (std::size_t s = 0; s < ctx.matrix.size(); ++s) {
            if (mm.symbols[s].cls != SymbolClass::point) CHECK(ctx.essential.is_essential(s));
        }
        if (ctx.coding.status == Status::holds) CHECK(ctx.coding.gamma < Rational(1));

        auto monotone = [](const PropertyVerdicts& p) {
            if (p.specification.status == Status::holds) CHECK(p.mixing.status == Status::holds);
            if (p.mixing.status == Status::holds) CHECK(p.transitive.status == Status::holds);
        };
        monotone(report.forward);
        monotone(report.inverse);

        // Sound holds-verdicts force a full eventual range.
        if (report.forward.devaney.status == Status::holds ||
            report.forward.mixing.status == Status::holds ||
            report.forward.specification.status == Status::holds) {
            CHECK(report.range.full);
        }

        // Witnesses on every system the criteria can certify.
        if (ctx.coding.status == Status::holds &&
            ctx.conditions.ic.status == Status::holds) {
            Rational eps = rat("1/8");
            auto head = sample_forward(mm, rat("3/7"), 1 + rng.below(3), rng.next());
            auto tail = sample_forward(mm, rat("5/9"), 1 + rng.below(3), rng.next());
            auto out = connect_witness(ctx, head, tail, eps);
            CHECK(trajectory_valid(mm, out.z));
            for (std::size_t k = 0; k < head.points.size(); ++k) {
                CHECK((out.z.points[k] - head.points[k]).abs() < eps);
            }
            for (std::size_t k = 0; k < tail.points.size(); ++k) {
                CHECK((out.z.points[out.offset + k] - tail.points[k]).abs() < eps);
            }
            auto z = periodic_witness(ctx, head, eps);
            CHECK(trajectory_valid(mm, z));
            CHECK(z.points.front() == z.points.back());
            if (ctx.conditions.mc.status == Status::holds) {
                auto sw = specification_witness(ctx, {head, tail},
                                                {*ctx.mixing_gap, *ctx.mixing_gap}, eps);
                CHECK(trajectory_valid(mm, sw.z));
                CHECK(sw.z.points.front() == sw.z.points.back());
            }
        }
    }
}
