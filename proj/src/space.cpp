#include "symspace/space.hpp"

#include <cmath>

#include "symspace/errors.hpp"

namespace symspace {

std::string SpaceParams::label() const {
    return "(" + std::to_string(m1) + "," + std::to_string(m2) + ")";
}

SpaceParams make_space(int m1, int m2) {
    if (m1 < 1) throw DomainError("make_space: m1 must be >= 1 (m1 = 0 is not a rank-one space)");
    if (m2 < 0) throw DomainError("make_space: m2 must be >= 0");
    SpaceParams s;
    s.m1 = m1;
    s.m2 = m2;
    s.d = m1 + m2 + 1;
    s.rho = 0.5 * (m1 + 2 * m2);
    return s;
}

void require_complex_case(const SpaceParams& s) {
    if (s.m2 != 0 || s.m1 % 2 != 0)
        throw DomainError("complex-case reduction needs m1 even and m2 = 0, got " + s.label());
}

void require_hyperboloid_model(const SpaceParams& s, const char* op) {
    if (s.m2 != 0)
        throw DomainError(std::string(op) + ": the hyperboloid model is only available for m2 = 0");
}

StripSpec make_strip(const SpaceParams& s, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("make_strip: p must lie in (1, inf)");
    return {p, std::abs(2.0 / p - 1.0) * s.rho};
}

double density_delta(const SpaceParams& s, double t) {
    if (t < 0.0) throw DomainError("density_delta: t must be >= 0");
    return std::pow(2.0 * std::sinh(t), s.m1 + s.m2) * std::pow(2.0 * std::cosh(t), s.m2);
}

double density_ratio(const SpaceParams& s, double t) {
    t = std::abs(t);
    const double sh = t < 1e-8 ? 1.0 : std::sinh(t) / t;
    return std::pow(2.0 * sh, s.m1 + s.m2) * std::pow(2.0 * std::cosh(t), s.m2);
}

}  // namespace symspace
