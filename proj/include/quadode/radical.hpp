#pragma once

#include "quadode/poly.hpp"

namespace quadode {

/// x -> A(x) * sqrt(B(x)), the shape of every admissible right-hand side.
struct RadicalProduct {
    Poly A;
    Poly B;
};

}  // namespace quadode
