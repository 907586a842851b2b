#pragma once
// Structural constants of a rank-one symmetric space G/K.

#include <string>

namespace symspace {

// Root multiplicities (m1, m2) of alpha and 2*alpha, with derived dimension and
// half-sum rho (t is identified with t*H0 where alpha(H0) = 1).
struct SpaceParams {
    int m1 = 0;
    int m2 = 0;
    int d = 0;
    double rho = 0.0;

    std::string label() const;  // "(m1,m2)"
    bool real_hyperbolic() const { return m2 == 0; }
};

// Validates m1 >= 1, m2 >= 0 and fills d, rho exactly.
SpaceParams make_space(int m1, int m2);

// Spaces accepted by the complex-case reduction: m1 even, m2 = 0.
void require_complex_case(const SpaceParams& s);
// Operations that need the real hyperboloid model (m2 = 0).
void require_hyperboloid_model(const SpaceParams& s, const char* op);

// Strip data for an L^p exponent: rho_p = |2/p - 1| rho.
struct StripSpec {
    double p = 2.0;
    double rho_p = 0.0;
};
StripSpec make_strip(const SpaceParams& s, double p);

// Delta(t) = (2 sinh t)^{m1+m2} (2 cosh t)^{m2}, t >= 0.
double density_delta(const SpaceParams& s, double t);
// Delta(t) / t^{d-1}, smooth and even, with the t -> 0 limit filled in.
double density_ratio(const SpaceParams& s, double t);

}  // namespace symspace
