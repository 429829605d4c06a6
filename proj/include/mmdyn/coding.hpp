#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmdyn/model.hpp"
#include "mmdyn/sft.hpp"
#include "mmdyn/verdict.hpp"

namespace mmdyn {

/// Composite inverse map g_u = g_{u_0} o ... o g_{u_n} together with its
/// coded interval I_u, the set of starting points consistent with u.
struct InverseComposite {
    Word word;
    AffineBranch map;   // domain is R(last symbol); slope 0 through verticals/points
    Interval interval;  // I_u = image of R(last) under the composite
};

struct InadmissibleWord : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Throws InadmissibleWord when consecutive symbols break the transition
/// relation. A single-symbol word yields I_u = D(u_0).
InverseComposite compose_inverse(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                 std::span<const std::size_t> word);

struct ContractionRate {
    std::vector<std::size_t> d_set;  // interval symbols whose open range meets the grid
    Rational gamma;                  // worst one-step shrink ratio; 1 when d_set is empty
};

/// d_set and the one-step contraction ratio: for affine branches the ratio
/// length(I_{u b}) / length(I_u) with u ending in a d_set symbol a equals
/// length(D(b)) / length(R(a)), independent of the rest of the word.
ContractionRate contraction_rate(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                 const std::vector<bool>* allowed = nullptr);

struct CodingVerdict {
    Status status = Status::unknown;
    std::string basis;
    std::string detail;
    std::vector<std::size_t> d_set;
    Rational gamma = Rational(1);
    std::optional<std::size_t> component;  // component covering the interval symbols
    std::optional<unsigned> window;        // N: every interval symbol reaches d_set within N steps
    Rational min_cell_length = Rational(0);  // lower bound evidence on the fails branch
};

/// Trichotomy for the coding condition on piecewise-affine multi-maps:
/// holds when d_set is nonempty and one component contains every interval
/// symbol; fails when d_set is empty (interval lengths can never shrink
/// below the smallest cell); unknown otherwise.
CodingVerdict check_coding_condition(const MarkovMultiMap& mm, const TransitionMatrix& m,
                                     const ComponentDecomposition& decomp,
                                     const std::vector<bool>* allowed = nullptr,
                                     const std::vector<bool>* universe_cells = nullptr);

/// Uniform equicontinuity data for the whole inverse family: every g_u has
/// |slope| <= constant, so |x - y| < delta(eps) forces |g_u x - g_u y| < eps.
struct EquicontinuityModulus {
    Rational constant;  // max length(D(a)) / length(R(b)) over interval symbols
    Rational delta(const Rational& eps) const { return eps / constant; }
};

EquicontinuityModulus equicontinuity_modulus(const MarkovMultiMap& mm,
                                             const std::vector<bool>* allowed = nullptr);

}  // namespace mmdyn
