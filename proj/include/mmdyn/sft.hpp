#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mmdyn/model.hpp"
#include "mmdyn/verdict.hpp"

namespace mmdyn {

/// Nearest-neighbor transition structure over the symbol alphabet:
/// M(a, b) = 1 exactly when the open domain of b sits inside the open
/// range of a.
struct TransitionMatrix {
    std::vector<std::string> alphabet;   // symbol names, multi-map order
    std::vector<SymbolClass> classes;    // aligned with alphabet
    std::vector<std::vector<bool>> entries;

    std::size_t size() const { return alphabet.size(); }
    bool at(std::size_t a, std::size_t b) const { return entries[a][b]; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::vector<std::size_t> successors(std::size_t a) const;
    std::vector<std::size_t> predecessors(std::size_t b) const;
};

/// Precondition: mm is properly parametrized.
TransitionMatrix build_transition_matrix(const MarkovMultiMap& mm);

using Word = std::vector<std::size_t>;  // symbol indices into the alphabet

/// All admissible words of the given length over the restricted alphabet
/// (every symbol when restrict is empty), in lexicographic index order.
/// Length-1 words exist for every admitted symbol.
std::vector<Word> language(const TransitionMatrix& m, std::size_t length,
                           const std::vector<std::size_t>& restrict_to = {});

struct Component {
    std::vector<std::size_t> symbols;   // sorted indices
    std::optional<unsigned> period;     // gcd of cycle lengths; nullopt without a cycle
    bool irreducible = false;           // every ordered pair joined by an internal path
    bool mixing = false;                // irreducible with period 1
};

struct ComponentDecomposition {
    std::vector<Component> components;       // sorted by smallest member
    std::vector<std::size_t> component_of;   // symbol index -> component index

    /// Component containing every listed symbol, if one does.
    std::optional<std::size_t> common_component(const std::vector<std::size_t>& symbols) const;
};

/// Strongly connected components of the transition digraph with period,
/// irreducibility and mixing flags. `allowed`, when given, restricts the
/// digraph to a sub-alphabet (used for eventual-range restrictions).
ComponentDecomposition components(const TransitionMatrix& m,
                                  const std::vector<bool>* allowed = nullptr);

enum class EssentialStatus {
    by_class,               // interval and vertical symbols
    by_reachability,        // reaches an interval/vertical symbol
    by_isolation,           // some word through it pins an isolated trajectory
    inessential_up_to_bound
};

std::string_view to_string(EssentialStatus s);

struct EssentialEntry {
    EssentialStatus status = EssentialStatus::inessential_up_to_bound;
    Word witness;  // path or isolating word, when applicable
};

struct EssentialReport {
    std::vector<std::size_t> essential;       // sorted symbol indices
    std::vector<EssentialEntry> per_symbol;   // aligned with the alphabet
    unsigned bound = 0;

    bool is_essential(std::size_t symbol) const {
        return per_symbol[symbol].status != EssentialStatus::inessential_up_to_bound;
    }
    std::vector<std::size_t> undecided() const;
};

/// Decides which symbols take part in coding trajectories. Interval and
/// vertical symbols always do. A point symbol does if it reaches one of
/// them in the digraph, or if some word through it (searched up to the
/// given bound) pins a trajectory isolated in the finite-trajectory space.
/// Anything else is reported as inessential up to the bound.
EssentialReport essential_alphabet(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                   unsigned bound,
                                   const std::vector<bool>* allowed = nullptr);

struct ConditionVerdicts {
    Verdict ic;
    Verdict mc;
    std::vector<std::size_t> ic_component;  // evidence, when holds
    std::vector<std::size_t> mc_component;
    bool assumed_inessential = false;       // bound-limited essentiality caveat
    std::vector<std::size_t> assumed_symbols;
};

/// IC: some component contains every essential symbol. MC: some mixing
/// component does. Verdicts are conditional on the essentiality report;
/// when the report is bound-limited the caveat flag is set.
ConditionVerdicts check_conditions(const TransitionMatrix& m, const EssentialReport& essential,
                                   const ComponentDecomposition& decomp);

}  // namespace mmdyn
