#pragma once

namespace layertrack::detail {

// j-th of n equal subdivisions of [0, length]. The last node is exactly
// length; length * n / n can round one ulp past it.
inline double uniform_node(double length, int j, int n) {
    return j == n ? length : length * j / n;
}

}  // namespace layertrack::detail
