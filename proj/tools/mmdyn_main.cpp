#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmdyn/dynamics.hpp"
#include "mmdyn/report.hpp"
#include "mmdyn/spec_io.hpp"

namespace {

using mmdyn::Rational;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitRefused = 1;      // analysis-level refusal (missing verdict, bad schedule)
constexpr int kExitInvalid = 2;      // the document is not a proper Markov multi-map
constexpr int kExitUsage = 64;       // usage or I/O problem
constexpr int kExitBadDocument = 65; // unreadable document syntax

struct CliError {
    int code;
    std::string message;
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) throw CliError{kExitUsage, "cannot read " + path};
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

mmdyn::MarkovMultiMap load(const std::string& path) {
    std::string text = read_input(path);
    try {
        return mmdyn::parse_spec(text);
    } catch (const mmdyn::ParseError& e) {
        throw CliError{kExitBadDocument, std::string("parse error: ") + e.what()};
    }
}

Rational parse_rational_arg(const std::string& text, const std::string& flag) {
    auto value = Rational::parse(text);
    if (!value) throw CliError{kExitUsage, flag + ": malformed rational \"" + text + "\""};
    return *value;
}

mmdyn::FiniteTrajectory parse_trajectory_arg(const std::string& text, const std::string& flag) {
    mmdyn::FiniteTrajectory out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.points.push_back(parse_rational_arg(item, flag));
    }
    if (out.points.empty()) throw CliError{kExitUsage, flag + ": empty trajectory"};
    return out;
}

ordered_json trajectory_json(const mmdyn::FiniteTrajectory& t) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : t.points) arr.push_back(p.str());
    return arr;
}

// --- subcommand handlers -------------------------------------------------

int run_validate(const std::string& path) {
    auto mm = load(path);
    auto violations = mmdyn::validate_definition(mm);
    for (const auto& v : violations) {
        std::cout << "condition(" << v.condition << ")";
        if (!v.symbol.empty()) std::cout << " symbol " << v.symbol;
        std::cout << ": " << v.message << "\n";
    }
    if (!violations.empty()) return kExitInvalid;
    auto proper = mmdyn::check_proper_parametrization(mm);
    if (!proper.holds) {
        std::cout << "proper-parametrization: " << proper.message << "\n";
        return kExitInvalid;
    }
    std::cout << "ok: valid properly parametrized Markov multi-map\n";
    return kExitOk;
}

int run_analyze(const std::string& path, unsigned bound, const std::string& format) {
    auto mm = load(path);
    mmdyn::AnalysisReport report = mmdyn::classify(mm, bound == 0 ? mmdyn::default_bound(mm) : bound);
    std::cout << (format == "json" ? mmdyn::report_to_json(report) : mmdyn::report_to_text(report));
    return kExitOk;
}

int run_export_graph(const std::string& path) {
    auto mm = load(path);
    auto violations = mmdyn::validate_definition(mm);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "condition(" << v.condition << "): " << v.message << "\n";
        return kExitInvalid;
    }
    for (const auto& g : mmdyn::graph_pieces(mm)) {
        std::cout << mmdyn::to_string(g.kind) << "," << g.x0.str() << "," << g.y0.str() << ","
                  << g.x1.str() << "," << g.y1.str() << "\n";
    }
    return kExitOk;
}

int run_language(const std::string& path, unsigned length, const std::string& restrict_csv,
                 const std::string& format) {
    auto mm = load(path);
    mmdyn::AnalysisContext ctx = mmdyn::build_context(mm, mmdyn::default_bound(mm));
    std::vector<std::size_t> restrict_to;
    if (!restrict_csv.empty()) {
        std::stringstream ss(restrict_csv);
        std::string name;
        while (std::getline(ss, name, ',')) {
            auto idx = ctx.matrix.index_of(name);
            if (!idx) throw CliError{kExitUsage, "--restrict: unknown symbol \"" + name + "\""};
            restrict_to.push_back(*idx);
        }
    }
    auto words = mmdyn::language(ctx.matrix, length, restrict_to);
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& w : words) {
            ordered_json word = ordered_json::array();
            for (auto s : w) word.push_back(ctx.matrix.alphabet[s]);
            arr.push_back(std::move(word));
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& w : words) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (i) std::cout << " ";
                std::cout << ctx.matrix.alphabet[w[i]];
            }
            std::cout << "\n";
        }
    }
    return kExitOk;
}

int run_components(const std::string& path, const std::string& format) {
    auto mm = load(path);
    mmdyn::AnalysisContext ctx = mmdyn::build_context(mm, mmdyn::default_bound(mm));
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& c : ctx.decomp.components) {
            ordered_json node;
            ordered_json syms = ordered_json::array();
            for (auto s : c.symbols) syms.push_back(ctx.matrix.alphabet[s]);
            node["symbols"] = std::move(syms);
            if (c.period) node["period"] = *c.period;
            else node["period"] = nullptr;
            node["irreducible"] = c.irreducible;
            node["mixing"] = c.mixing;
            arr.push_back(std::move(node));
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& c : ctx.decomp.components) {
            std::cout << "{";
            for (std::size_t i = 0; i < c.symbols.size(); ++i) {
                if (i) std::cout << " ";
                std::cout << ctx.matrix.alphabet[c.symbols[i]];
            }
            std::cout << "}";
            if (c.period) std::cout << " period=" << *c.period;
            else std::cout << " period=none";
            if (c.irreducible) std::cout << " irreducible";
            if (c.mixing) std::cout << " mixing";
            std::cout << "\n";
        }
    }
    return kExitOk;
}

struct WitnessArgs {
    std::string kind;
    std::string head;
    std::string tail;
    std::string trajectory;
    std::vector<std::string> segments;
    std::string gaps;
    std::string epsilon = "1/10";
    unsigned bound = 0;
    std::uint64_t seed = 0;
    std::string format = "text";
};

void emit_witness_document(const ordered_json& doc, const std::string& format) {
    if (format == "json") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::cout << "kind: " << doc["kind"].get<std::string>() << "\n";
    std::cout << "z:";
    for (const auto& p : doc["witness"]["z"]) std::cout << " " << p.get<std::string>();
    std::cout << "\n";
    if (doc["witness"].contains("offset")) {
        std::cout << "offset: " << doc["witness"]["offset"] << "\n";
    }
    if (doc["witness"].contains("offsets")) {
        std::cout << "offsets:";
        for (const auto& o : doc["witness"]["offsets"]) std::cout << " " << o;
        std::cout << "\n";
    }
    std::cout << "self-check:";
    for (const auto& [key, value] : doc["self_check"].items()) {
        std::cout << " " << key << "=" << value.get<std::string>();
    }
    std::cout << "\n";
}

std::string passed(bool ok) { return ok ? "passed" : "failed"; }

int run_witness(const std::string& path, const WitnessArgs& args) {
    auto mm = load(path);
    mmdyn::AnalysisContext ctx =
        mmdyn::build_context(mm, args.bound == 0 ? mmdyn::default_bound(mm) : args.bound);
    Rational eps = parse_rational_arg(args.epsilon, "--epsilon");

    ordered_json doc;
    doc["kind"] = args.kind;
    doc["input"] = ordered_json::object();
    doc["input"]["epsilon"] = eps.str();
    doc["input"]["seed"] = args.seed;

    bool all_ok = true;
    auto record = [&](ordered_json& checks, const std::string& name, bool ok) {
        checks[name] = passed(ok);
        all_ok = all_ok && ok;
    };

    if (args.kind == "connect") {
        if (args.head.empty() || args.tail.empty()) {
            throw CliError{kExitUsage, "connect needs --head and --tail"};
        }
        auto head = parse_trajectory_arg(args.head, "--head");
        auto tail = parse_trajectory_arg(args.tail, "--tail");
        doc["input"]["head"] = trajectory_json(head);
        doc["input"]["tail"] = trajectory_json(tail);
        auto witness = mmdyn::connect_witness(ctx, head, tail, eps);
        doc["witness"] = ordered_json::object();
        doc["witness"]["z"] = trajectory_json(witness.z);
        doc["witness"]["offset"] = witness.offset;
        ordered_json checks;
        record(checks, "step_validity", mmdyn::trajectory_valid(mm, witness.z));
        bool head_ok = true;
        for (std::size_t k = 0; k < head.points.size(); ++k) {
            head_ok = head_ok && (witness.z.points[k] - head.points[k]).abs() < eps;
        }
        record(checks, "head_bound", head_ok);
        bool tail_ok = true;
        for (std::size_t k = 0; k < tail.points.size(); ++k) {
            tail_ok = tail_ok && (witness.z.points[witness.offset + k] - tail.points[k]).abs() < eps;
        }
        record(checks, "tail_bound", tail_ok);
        doc["self_check"] = std::move(checks);
    } else if (args.kind == "periodic") {
        if (args.trajectory.empty()) throw CliError{kExitUsage, "periodic needs --trajectory"};
        auto head = parse_trajectory_arg(args.trajectory, "--trajectory");
        doc["input"]["trajectory"] = trajectory_json(head);
        auto z = mmdyn::periodic_witness(ctx, head, eps);
        doc["witness"] = ordered_json::object();
        doc["witness"]["z"] = trajectory_json(z);
        ordered_json checks;
        record(checks, "step_validity", mmdyn::trajectory_valid(mm, z));
        record(checks, "periodicity", z.points.front() == z.points.back());
        bool head_ok = true;
        for (std::size_t k = 0; k < head.points.size(); ++k) {
            head_ok = head_ok && (z.points[k] - head.points[k]).abs() < eps;
        }
        record(checks, "head_bound", head_ok);
        doc["self_check"] = std::move(checks);
    } else if (args.kind == "spec") {
        if (args.segments.empty() || args.gaps.empty()) {
            throw CliError{kExitUsage, "spec needs --segment (repeatable) and --gaps"};
        }
        std::vector<mmdyn::FiniteTrajectory> segments;
        doc["input"]["segments"] = ordered_json::array();
        for (const auto& text : args.segments) {
            segments.push_back(parse_trajectory_arg(text, "--segment"));
            doc["input"]["segments"].push_back(trajectory_json(segments.back()));
        }
        std::vector<unsigned> gaps;
        {
            std::stringstream ss(args.gaps);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    gaps.push_back(static_cast<unsigned>(std::stoul(item)));
                } catch (...) {
                    throw CliError{kExitUsage, "--gaps: malformed integer \"" + item + "\""};
                }
            }
        }
        doc["input"]["gaps"] = gaps;
        auto witness = mmdyn::specification_witness(ctx, segments, gaps, eps);
        doc["witness"] = ordered_json::object();
        doc["witness"]["z"] = trajectory_json(witness.z);
        doc["witness"]["offsets"] = witness.offsets;
        doc["witness"]["min_gap"] = witness.min_gap;
        ordered_json checks;
        record(checks, "step_validity", mmdyn::trajectory_valid(mm, witness.z));
        record(checks, "periodicity", witness.z.points.front() == witness.z.points.back());
        bool bounds_ok = true;
        for (std::size_t k = 0; k < segments.size(); ++k) {
            for (std::size_t i = 0; i < segments[k].points.size(); ++i) {
                bounds_ok = bounds_ok &&
                            (witness.z.points[witness.offsets[k] + i] - segments[k].points[i]).abs() < eps;
            }
        }
        record(checks, "segment_bounds", bounds_ok);
        doc["self_check"] = std::move(checks);
    } else {
        throw CliError{kExitUsage, "unknown witness kind \"" + args.kind + "\""};
    }

    emit_witness_document(doc, args.format);
    return all_ok ? kExitOk : kExitRefused;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov multi-map dynamics analyzer"};
    app.require_subcommand(1);

    std::string path;
    unsigned bound = 0;
    std::string format = "text";
    unsigned length = 1;
    std::string restrict_csv;
    WitnessArgs witness_args;

    auto add_common = [&](CLI::App* sub, bool with_format) {
        sub->add_option("path", path, "multi-map document (JSON), or - for stdin")->required();
        if (with_format) {
            sub->add_option("--format", format, "output format")
                ->check(CLI::IsMember({"text", "json"}))
                ->capture_default_str();
        }
    };

    CLI::App* validate = app.add_subcommand("validate", "check the defining conditions and proper parametrization");
    add_common(validate, false);

    CLI::App* analyze = app.add_subcommand("analyze", "classify the forward and inverse-limit systems");
    add_common(analyze, true);
    analyze->add_option("--bound", bound, "essentiality search bound (default: alphabet size + 1)");

    CLI::App* witness = app.add_subcommand("witness", "construct a checkable orbit witness");
    add_common(witness, false);
    witness->add_option("--kind", witness_args.kind, "connect | periodic | spec")->required();
    witness->add_option("--head", witness_args.head, "head trajectory, comma-separated rationals");
    witness->add_option("--tail", witness_args.tail, "tail trajectory (connect)");
    witness->add_option("--trajectory", witness_args.trajectory, "trajectory to shadow (periodic)");
    witness->add_option("--segment", witness_args.segments, "segment to shadow (spec, repeatable)");
    witness->add_option("--gaps", witness_args.gaps, "comma-separated connector lengths (spec)");
    witness->add_option("--epsilon", witness_args.epsilon, "shadowing tolerance")->capture_default_str();
    witness->add_option("--bound", witness_args.bound, "essentiality search bound");
    witness->add_option("--seed", witness_args.seed, "echoed into the witness document");
    witness->add_option("--format", witness_args.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    CLI::App* export_graph = app.add_subcommand("export-graph", "emit the graph pieces as CSV rows");
    add_common(export_graph, false);

    CLI::App* language = app.add_subcommand("language", "enumerate admissible words");
    add_common(language, true);
    language->add_option("--length", length, "word length")->required();
    language->add_option("--restrict", restrict_csv, "comma-separated symbol names");

    CLI::App* components = app.add_subcommand("components", "transition digraph decomposition");
    add_common(components, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(path);
        if (analyze->parsed()) return run_analyze(path, bound, format);
        if (witness->parsed()) return run_witness(path, witness_args);
        if (export_graph->parsed()) return run_export_graph(path);
        if (language->parsed()) return run_language(path, length, restrict_csv, format);
        if (components->parsed()) return run_components(path, format);
    } catch (const CliError& e) {
        std::cerr << e.message << "\n";
        return e.code;
    } catch (const mmdyn::ValidationError& e) {
        for (const auto& v : e.violations) {
            std::cerr << "condition(" << v.condition << ")";
            if (!v.symbol.empty()) std::cerr << " symbol " << v.symbol;
            std::cerr << ": " << v.message << "\n";
        }
        if (!e.proper_message.empty()) std::cerr << "proper-parametrization: " << e.proper_message << "\n";
        return kExitInvalid;
    } catch (const mmdyn::PreconditionError& e) {
        std::cerr << e.what() << "\n";
        return kExitRefused;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRefused;
    }
    return kExitUsage;
}
