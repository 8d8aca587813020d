#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "modlab/error.hpp"
#include "modlab/grid.hpp"

namespace modlab::test {

template <class F>
std::optional<ErrorCode> error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline double mean_x(const WaveFunction& psi) {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) s += psi.grid().x(j) * std::norm(psi[j]);
    return s * psi.grid().dx();
}

}  // namespace modlab::test

#define CHECK_ERROR(expr, code_) CHECK(::modlab::test::error_of([&] { (void)(expr); }) == (code_))
