#pragma once

#include "tdkit/mrp.hpp"
#include "tdkit/representation.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace tdkit {

struct MrpInstance {
    Mrp mrp;
    Representation rep;
};

/// One state with a self-loop (probability p, reward 0) and an exit to
/// termination (probability 1 - p, reward 1); gamma = 1, one binary feature.
/// Every visit has return exactly 1.
MrpInstance make_one_state(double p = 0.5);

/// Two aliased states sharing phi = (1). State 0 (initial) moves to state 1
/// with probability p and terminates otherwise, both with reward 0; state 1
/// terminates with reward 1. gamma = 1, so v = (p, 1).
MrpInstance make_two_state(double p = 0.5);

struct RandomMrpSpec {
    std::size_t k = 10;
    std::size_t b = 3;
    double sigma = 0.1;
    std::uint64_t seed = 0;
    double gamma = 0.99;

    void validate() const;
    /// "k,b,sigma" e.g. "10,3,0.1"
    static RandomMrpSpec parse(const std::string& text);
    std::string label() const;
};

/// Random continuing MRP: b distinct successors per state with normalised
/// uniform probabilities and N(0, 1) expected rewards. Draws that are not
/// strongly connected are redrawn from an incremented sub-seed.
Mrp make_random_mrp(const RandomMrpSpec& spec, std::size_t* redraws = nullptr);

bool strongly_connected(const Mrp& mrp);

} // namespace tdkit
