#include "chemotax/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace chemotax {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0))
        throw std::invalid_argument(std::string("params: ") + name +
                                    " must be > 0");
}

}  // namespace

void validate(const ModelParams& p) {
    if (p.n < 2) throw std::invalid_argument("params: n must be >= 2");
    if (p.tau != 0 && p.tau != 1)
        throw std::invalid_argument("params: tau must be 0 or 1");
    require_positive(p.chi, "chi");
    require_positive(p.xi, "xi");
    require_positive(p.alpha, "alpha");
    require_positive(p.beta, "beta");
    require_positive(p.gamma0, "gamma0");
    require_positive(p.gamma1, "gamma1");
    require_positive(p.delta, "delta");
    require_positive(p.k, "k");
    require_positive(p.l, "l");
    if (p.gamma1 < p.gamma0)
        throw std::invalid_argument("params: gamma1 must be >= gamma0");
    if (p.variant == Variant::nonlocal && p.tau != 0)
        throw std::invalid_argument(
            "params: nonlocal variant requires tau = 0 (stationary chemical "
            "equations)");
}

double theta0(const ModelParams& p) { return p.chi * p.alpha - p.xi * p.gamma0; }

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::BoundedGuaranteed: return "BoundedGuaranteed";
        case Verdict::NoGuarantee: return "NoGuarantee";
        case Verdict::BlowUpPossible: return "BlowUpPossible";
    }
    return "?";
}

RegimeVerdict classify(const ModelParams& p) {
    validate(p);
    const double two_over_n = 2.0 / p.n;
    const double th0 = theta0(p);

    if (p.variant == Variant::nonlocal) {
        if (p.k < p.l) return {Verdict::BoundedGuaranteed, "k < l"};
        if (p.k == p.l && th0 < 0.0)
            return {Verdict::BoundedGuaranteed, "k = l with Theta0 < 0"};
        if (p.k == p.l && p.k < two_over_n)
            return {Verdict::BoundedGuaranteed,
                    "k = l in (0, 2/n) with Theta0 >= 0"};
        if (p.k < two_over_n)
            return {Verdict::BoundedGuaranteed, "k in (0, 2/n)"};
        if (p.k > p.l && p.k > two_over_n)
            return {Verdict::BlowUpPossible, "k > l and k > 2/n"};
        return {Verdict::NoGuarantee, "no clause matched"};
    }

    if (p.tau == 0) {
        if (p.k < p.l) return {Verdict::BoundedGuaranteed, "k < l"};
        if (p.k == p.l && th0 < 0.0)
            return {Verdict::BoundedGuaranteed, "k = l with Theta0 < 0"};
        if (p.k == p.l && p.k < two_over_n)
            return {Verdict::BoundedGuaranteed,
                    "k = l in (0, 2/n) with Theta0 >= 0"};
        if (p.k < two_over_n && p.l < two_over_n)
            return {Verdict::BoundedGuaranteed, "k, l in (0, 2/n)"};
        return {Verdict::NoGuarantee, "no clause matched"};
    }

    // tau = 1: membership of both exponents in I = (0, 1/n] or
    // J = (1/n, 1/n + 2/(n^2+4)).
    const double inv_n = 1.0 / p.n;
    const Interval J = interval_J(p.n);
    auto in_I = [&](double x) { return x > 0.0 && x <= inv_n; };
    auto in_J = [&](double x) { return x > J.lo && x < J.hi; };
    if (in_I(p.k) && in_I(p.l))
        return {Verdict::BoundedGuaranteed, "k, l in (0, 1/n]"};
    if (in_J(p.k) && in_J(p.l))
        return {Verdict::BoundedGuaranteed,
                "k, l in J = (1/n, 1/n + 2/(n^2+4))"};
    if ((in_I(p.k) || in_J(p.k)) && (in_I(p.l) || in_J(p.l)))
        return {Verdict::BoundedGuaranteed,
                "k, l in I union J, I = (0, 1/n], J = (1/n, 1/n + 2/(n^2+4))"};
    return {Verdict::NoGuarantee, "no clause matched"};
}

double gn_theta(int n, double p) {
    if (n < 1) throw std::invalid_argument("gn_theta: n must be >= 1");
    if (!(p > std::max(1.0, n / 2.0)))
        throw std::invalid_argument("gn_theta: p must exceed max(1, n/2)");
    return (n * p / 2.0) * (1.0 - 1.0 / p) / (1.0 - n / 2.0 + n * p / 2.0);
}

ExponentPair gn_theta1(int n, double p, double l) {
    if (n < 1) throw std::invalid_argument("gn_theta1: n must be >= 1");
    if (!(l > 1.0)) throw std::invalid_argument("gn_theta1: l must be > 1");
    double lo = std::max({l, l * (n * l - 2.0) / n, n / 2.0});
    if (!(p > lo))
        throw std::invalid_argument(
            "gn_theta1: p must exceed max{l, l(nl-2)/n, n/2}");
    double theta = (1.0 - 1.0 / l) / (1.0 + 2.0 / (n * p) - 1.0 / p);
    return {theta, (p + l) / p * theta};
}

ExponentPair gn_theta2(int n, double p, double k) {
    if (n < 2) throw std::invalid_argument("gn_theta2: n must be >= 2");
    if (!(p > n / 2.0))
        throw std::invalid_argument("gn_theta2: p must exceed n/2");
    if (!(k > 0.0)) throw std::invalid_argument("gn_theta2: k must be > 0");
    double theta =
        (p / 2.0 - p / (2.0 * (p + k))) / (p / 2.0 + 1.0 / n - 0.5);
    return {theta, (p + k) / p * theta};
}

Interval gradient_range(double exponent, int n) {
    if (n < 1) throw std::invalid_argument("gradient_range: n must be >= 1");
    if (!(exponent > 0.0) || exponent > 1.0)
        throw std::invalid_argument(
            "gradient_range: exponent must lie in (0, 1]");
    if (exponent <= 1.0 / n) return {1.0, 0.0, true};
    return {1.0, n / (n * exponent - 1.0), false};
}

Interval interval_J(int n) {
    if (n < 1) throw std::invalid_argument("interval_J: n must be >= 1");
    return {1.0 / n, 1.0 / n + 2.0 / (n * n + 4.0), false};
}

EquilibriumTriple equilibrium(const ModelParams& p, double mass, double area) {
    if (!(mass >= 0.0))
        throw std::invalid_argument("equilibrium: mass must be >= 0");
    if (!(area > 0.0))
        throw std::invalid_argument("equilibrium: area must be > 0");
    double u = mass / area;
    return {u, p.alpha / p.beta * std::pow(u, p.k),
            p.gamma0 / p.delta * std::pow(1.0 + u, p.l)};
}

}  // namespace chemotax
