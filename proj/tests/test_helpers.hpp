#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mmdyn/dynamics.hpp"
#include "mmdyn/spec_io.hpp"

namespace mmtest {

inline std::string fixture_path(const std::string& name) {
    return std::string(MMDYN_FIXTURES) + "/" + name;
}

inline mmdyn::MarkovMultiMap load_fixture(const std::string& name) {
    std::ifstream file(fixture_path(name));
    std::ostringstream buf;
    buf << file.rdbuf();
    return mmdyn::parse_spec(buf.str());
}

inline mmdyn::Rational rat(const std::string& text) {
    return *mmdyn::Rational::parse(text);
}

inline mmdyn::FiniteTrajectory traj(std::initializer_list<const char*> points) {
    mmdyn::FiniteTrajectory out;
    for (const char* p : points) out.points.push_back(rat(p));
    return out;
}

/// Deterministic generator for property-style tests.
struct TestRng {
    std::uint64_t state;
    explicit TestRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

}  // namespace mmtest
