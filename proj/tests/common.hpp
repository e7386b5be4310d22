#pragma once

#include "cq/space.hpp"

#include <initializer_list>

namespace cq::test {

inline Vector vec(std::initializer_list<double> vals) {
    Vector v(static_cast<int>(vals.size()));
    int i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

}  // namespace cq::test
