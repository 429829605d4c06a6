#include "mmdyn/report.hpp"

#include <sstream>

#include <json.hpp>

namespace mmdyn {

namespace {

using nlohmann::ordered_json;

std::vector<std::string> names_of(const TransitionMatrix& m, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (auto s : idx) out.push_back(m.alphabet[s]);
    return out;
}

ordered_json verdict_json(const Verdict& v) {
    ordered_json node;
    node["status"] = std::string(to_string(v.status));
    node["basis"] = v.basis;
    if (!v.detail.empty()) node["detail"] = v.detail;
    return node;
}

ordered_json interval_json(const Interval& iv) {
    return ordered_json{{"lo", iv.lo.str()}, {"hi", iv.hi.str()}};
}

ordered_json verdicts_json(const PropertyVerdicts& p) {
    ordered_json node;
    node["transitive"] = verdict_json(p.transitive);
    node["dense_periodic"] = verdict_json(p.dense_periodic);
    node["devaney"] = verdict_json(p.devaney);
    node["mixing"] = verdict_json(p.mixing);
    node["specification"] = verdict_json(p.specification);
    return node;
}

ordered_json build_document(const AnalysisReport& report) {
    const AnalysisContext& ctx = report.ctx;
    const TransitionMatrix& m = ctx.matrix;

    ordered_json doc;
    doc["schema"] = "mmdyn-report/1";

    ordered_json grid = ordered_json::array();
    for (const auto& p : ctx.mm.partition.points) grid.push_back(p.str());
    doc["partition"] = std::move(grid);

    ordered_json alphabet;
    alphabet["interval"] = names_of(m, ctx.mm.indices_of(SymbolClass::interval));
    alphabet["vertical"] = names_of(m, ctx.mm.indices_of(SymbolClass::vertical));
    alphabet["point"] = names_of(m, ctx.mm.indices_of(SymbolClass::point));
    doc["alphabet"] = std::move(alphabet);

    ordered_json essential;
    essential["symbols"] = names_of(m, ctx.essential.essential);
    essential["search_bound"] = ctx.essential.bound;
    ordered_json statuses = ordered_json::array();
    for (std::size_t s = 0; s < m.size(); ++s) {
        const auto& entry = ctx.essential.per_symbol[s];
        ordered_json node;
        node["symbol"] = m.alphabet[s];
        node["status"] = std::string(to_string(entry.status));
        if (entry.status == EssentialStatus::by_isolation ||
            entry.status == EssentialStatus::by_reachability) {
            node["witness_word"] = names_of(m, entry.witness);
        }
        statuses.push_back(std::move(node));
    }
    essential["statuses"] = std::move(statuses);
    essential["undecided"] = names_of(m, ctx.essential.undecided());
    doc["essential"] = std::move(essential);

    ordered_json comps = ordered_json::array();
    for (const auto& c : ctx.decomp.components) {
        ordered_json node;
        node["symbols"] = names_of(m, c.symbols);
        if (c.period) node["period"] = *c.period;
        else node["period"] = nullptr;
        node["irreducible"] = c.irreducible;
        node["mixing"] = c.mixing;
        comps.push_back(std::move(node));
    }
    doc["components"] = std::move(comps);

    ordered_json conditions;
    {
        ordered_json ic = verdict_json(ctx.conditions.ic);
        if (!ctx.conditions.ic_component.empty()) {
            ic["component"] = names_of(m, ctx.conditions.ic_component);
        }
        ic["assumes_undecided_inessential"] = ctx.conditions.assumed_inessential;
        conditions["IC"] = std::move(ic);

        ordered_json mc = verdict_json(ctx.conditions.mc);
        if (!ctx.conditions.mc_component.empty()) {
            mc["component"] = names_of(m, ctx.conditions.mc_component);
        }
        mc["assumes_undecided_inessential"] = ctx.conditions.assumed_inessential;
        conditions["MC"] = std::move(mc);

        ordered_json cc;
        cc["status"] = std::string(to_string(ctx.coding.status));
        cc["basis"] = ctx.coding.basis;
        if (!ctx.coding.detail.empty()) cc["detail"] = ctx.coding.detail;
        cc["d_set"] = names_of(m, ctx.coding.d_set);
        cc["gamma"] = ctx.coding.gamma.str();
        if (ctx.coding.window) cc["window"] = *ctx.coding.window;
        if (ctx.coding.component) {
            cc["component"] = names_of(m, ctx.decomp.components[*ctx.coding.component].symbols);
        }
        if (ctx.coding.status == Status::fails) {
            cc["min_cell_length"] = ctx.coding.min_cell_length.str();
        }
        conditions["CC"] = std::move(cc);

        ordered_json eq = verdict_json(report.equicontinuity);
        eq["constant"] = ctx.modulus.constant.str();
        conditions["equicontinuity"] = std::move(eq);
    }
    doc["conditions"] = std::move(conditions);

    if (ctx.mixing_gap) doc["specification_gap"] = *ctx.mixing_gap;

    doc["forward"] = verdicts_json(report.forward);
    doc["inverse"] = verdicts_json(report.inverse);

    ordered_json range;
    ordered_json pieces = ordered_json::array();
    for (const auto& piece : report.range.pieces) pieces.push_back(interval_json(piece));
    range["pieces"] = std::move(pieces);
    range["full"] = report.range.full;
    range["iterations"] = report.range.iterations;
    doc["eventual_range"] = std::move(range);

    doc["caveats"] = report.caveats;
    return doc;
}

void print_verdict_line(std::ostringstream& out, const std::string& label, const Verdict& v) {
    out << "  " << label << ": " << to_string(v.status);
    if (!v.basis.empty()) out << "  [" << v.basis << "]";
    if (!v.detail.empty()) out << "\n      " << v.detail;
    out << "\n";
}

}  // namespace

std::string report_to_json(const AnalysisReport& report) {
    return build_document(report).dump(2) + "\n";
}

std::string report_to_text(const AnalysisReport& report) {
    const AnalysisContext& ctx = report.ctx;
    const TransitionMatrix& m = ctx.matrix;
    std::ostringstream out;

    out << "partition:";
    for (const auto& p : ctx.mm.partition.points) out << " " << p.str();
    out << "\n";

    out << "essential alphabet (bound " << ctx.essential.bound << "):";
    for (auto s : ctx.essential.essential) out << " " << m.alphabet[s];
    auto undecided = ctx.essential.undecided();
    if (!undecided.empty()) {
        out << "   undecided:";
        for (auto s : undecided) out << " " << m.alphabet[s];
    }
    out << "\n";

    out << "components:\n";
    for (const auto& c : ctx.decomp.components) {
        out << "  {";
        for (std::size_t i = 0; i < c.symbols.size(); ++i) {
            if (i) out << " ";
            out << m.alphabet[c.symbols[i]];
        }
        out << "}";
        if (c.period) out << " period=" << *c.period;
        else out << " period=none";
        out << (c.irreducible ? " irreducible" : "") << (c.mixing ? " mixing" : "") << "\n";
    }

    out << "conditions:\n";
    print_verdict_line(out, "IC", ctx.conditions.ic);
    print_verdict_line(out, "MC", ctx.conditions.mc);
    out << "  CC: " << to_string(ctx.coding.status);
    if (!ctx.coding.basis.empty()) out << "  [" << ctx.coding.basis << "]";
    if (!ctx.coding.detail.empty()) out << "\n      " << ctx.coding.detail;
    out << "\n      gamma = " << ctx.coding.gamma.str();
    if (ctx.coding.window) out << ", window = " << *ctx.coding.window;
    if (!ctx.coding.d_set.empty()) {
        out << ", d_set = {";
        for (std::size_t i = 0; i < ctx.coding.d_set.size(); ++i) {
            if (i) out << " ";
            out << m.alphabet[ctx.coding.d_set[i]];
        }
        out << "}";
    }
    out << "\n";
    out << "  equicontinuity: " << to_string(report.equicontinuity.status)
        << "  constant = " << ctx.modulus.constant.str() << "\n";
    if (ctx.mixing_gap) out << "specification gap: " << *ctx.mixing_gap << "\n";

    out << "forward system:\n";
    print_verdict_line(out, "transitive", report.forward.transitive);
    print_verdict_line(out, "dense periodic", report.forward.dense_periodic);
    print_verdict_line(out, "devaney", report.forward.devaney);
    print_verdict_line(out, "mixing", report.forward.mixing);
    print_verdict_line(out, "specification", report.forward.specification);
    out << "inverse system:\n";
    print_verdict_line(out, "transitive", report.inverse.transitive);
    print_verdict_line(out, "dense periodic", report.inverse.dense_periodic);
    print_verdict_line(out, "devaney", report.inverse.devaney);
    print_verdict_line(out, "mixing", report.inverse.mixing);
    print_verdict_line(out, "specification", report.inverse.specification);

    out << "eventual range:";
    for (const auto& piece : report.range.pieces) out << " " << piece.str();
    out << "  (stabilized after " << report.range.iterations << " image steps)\n";

    if (!report.caveats.empty()) {
        out << "caveats:\n";
        for (const auto& c : report.caveats) out << "  - " << c << "\n";
    }
    return out.str();
}

}  // namespace mmdyn
