#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmdyn/coding.hpp"
#include "mmdyn/model.hpp"
#include "mmdyn/sft.hpp"
#include "mmdyn/verdict.hpp"

namespace mmdyn {

struct FiniteTrajectory {
    std::vector<Rational> points;  // nonempty; consecutive pairs lie on the graph

    std::size_t length() const { return points.size(); }
    friend bool operator==(const FiniteTrajectory& a, const FiniteTrajectory& b) {
        return a.points == b.points;
    }
};

bool trajectory_valid(const MarkovMultiMap& mm, const FiniteTrajectory& x);

/// sup-style trajectory metric truncated to the common horizon:
/// max over k of |x_k - y_k| / (k + 1). Throws std::invalid_argument on a
/// length mismatch.
Rational metric_d(const FiniteTrajectory& x, const FiniteTrajectory& y);

struct LabeledTrajectory {
    FiniteTrajectory trajectory;
    Word word;      // length() - 1 symbols; empty for single-point trajectories
    bool special = false;
};

/// Everything the witnesses need, assembled once per multi-map.
struct AnalysisContext {
    MarkovMultiMap mm;
    TransitionMatrix matrix;
    ComponentDecomposition decomp;
    EssentialReport essential;
    ConditionVerdicts conditions;
    CodingVerdict coding;
    EquicontinuityModulus modulus;
    std::optional<unsigned> mixing_gap;  // least usable connector length when MC holds
};

/// Runs validation, proper parametrization, and the full symbolic pipeline.
/// Throws ValidationError when the input is not a properly parametrized
/// Markov multi-map.
AnalysisContext build_context(const MarkovMultiMap& mm, unsigned bound);

struct ValidationError : std::runtime_error {
    ValidationError(std::vector<Violation> violations, std::string proper_message);
    std::vector<Violation> violations;      // defining-condition failures
    std::string proper_message;             // proper-parametrization failure, if any
};

struct PreconditionError : std::runtime_error {
    PreconditionError(std::string missing_verdict, const std::string& message)
        : std::runtime_error(message), missing(std::move(missing_verdict)) {}
    std::string missing;
};

/// A special labeled trajectory over essential symbols within eps of x,
/// coordinate-wise. Returns x itself (with its labeling) when x already
/// admits a special essential labeling.
LabeledTrajectory special_approximation(const AnalysisContext& ctx, const FiniteTrajectory& x,
                                        const Rational& eps);

struct ConnectWitness {
    FiniteTrajectory z;
    std::size_t offset;  // tail shadow starts at z[offset]
};

/// A single trajectory shadowing head at its start and tail from `offset`,
/// both within eps coordinate-wise. Requires the coding and irreducibility
/// conditions.
ConnectWitness connect_witness(const AnalysisContext& ctx, const FiniteTrajectory& head,
                               const FiniteTrajectory& tail, const Rational& eps);

/// A trajectory with z_0 = z_last exactly whose start shadows head within
/// eps. Requires the coding and irreducibility conditions.
FiniteTrajectory periodic_witness(const AnalysisContext& ctx, const FiniteTrajectory& head,
                                  const Rational& eps);

struct SpecificationWitness {
    FiniteTrajectory z;                 // z_0 = z_last exactly
    std::vector<std::size_t> offsets;   // segment k is shadowed at offsets[k]
    unsigned min_gap;                   // the scheduling lower bound the gaps were checked against
};

/// A periodic trajectory shadowing every segment at its scheduled offset.
/// Gap k is the connector length between segment k and the next; each must
/// be at least the context's mixing gap. Requires the coding and mixing
/// conditions.
SpecificationWitness specification_witness(const AnalysisContext& ctx,
                                           const std::vector<FiniteTrajectory>& segments,
                                           const std::vector<unsigned>& gaps,
                                           const Rational& eps);

struct EventualRange {
    std::vector<Interval> pieces;   // merged cells and isolated grid points, sorted
    unsigned iterations = 0;        // image applications until the sequence stabilized
    std::vector<bool> cells;        // included cells, by index
    std::vector<bool> points;       // included grid points, by index
    bool full = false;              // the whole interval survives
    bool cells_only = false;        // no isolated grid points
};

/// Intersection of the iterated images of the full interval, computed on
/// the lattice of grid-aligned closed sets; the result W satisfies
/// F(W) = W exactly.
EventualRange eventual_range(const MarkovMultiMap& mm);

struct PropertyVerdicts {
    Verdict transitive;
    Verdict dense_periodic;
    Verdict devaney;
    Verdict mixing;
    Verdict specification;
};

struct AnalysisReport {
    AnalysisContext ctx;
    Verdict equicontinuity;
    PropertyVerdicts forward;
    PropertyVerdicts inverse;
    EventualRange range;
    std::vector<std::string> caveats;
};

/// Full classification of the forward-trajectory and inverse-limit systems.
AnalysisReport classify(const MarkovMultiMap& mm, unsigned bound);

/// Default essentiality search bound: alphabet size + 1.
unsigned default_bound(const MarkovMultiMap& mm);

/// A valid trajectory of the given length from x0. Successor symbols are
/// chosen uniformly by a seeded generator; vertical/point symbols
/// contribute the midpoint of a seeded dyadic subdivision of their range,
/// so every coordinate is rational and runs reproduce exactly.
FiniteTrajectory sample_forward(const MarkovMultiMap& mm, const Rational& x0, std::size_t n,
                                std::uint64_t seed);

}  // namespace mmdyn
