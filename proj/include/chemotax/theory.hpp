#pragma once

#include <string>

namespace chemotax {

enum class Variant { local, nonlocal };

// Coefficients of the attraction-repulsion system
//   u_t = div(grad u) - chi div(u grad v) + xi div(u grad w)
//   tau v_t = div(grad v) - beta v + f(u),   f(s) = alpha s^k
//   tau w_t = div(grad w) - delta w + g(u),  g(s) = gamma0 (1+s)^l
// (nonlocal variant replaces the decay terms by spatial-mean subtraction
// and constrains v, w to zero mean). n is the dimension used by the
// classifiers; the simulator always runs n = 2.
struct ModelParams {
    int n = 2;
    int tau = 0;  // 0 or 1
    Variant variant = Variant::local;
    double chi = 1.0, xi = 1.0;
    double alpha = 1.0, beta = 1.0;
    double gamma0 = 1.0, gamma1 = 1.0, delta = 1.0;
    double k = 1.0, l = 1.0;
};

// Throws std::invalid_argument naming the offending field. Enforces
// positivity, gamma1 >= gamma0, tau in {0,1}, n >= 2, and that the
// nonlocal variant (stationary chemical equations) has tau = 0.
void validate(const ModelParams& p);

// Attraction-repulsion balance: chi*alpha - xi*gamma0.
double theta0(const ModelParams& p);

enum class Verdict { BoundedGuaranteed, NoGuarantee, BlowUpPossible };

const char* to_string(Verdict v);

struct RegimeVerdict {
    Verdict verdict = Verdict::NoGuarantee;
    std::string matched_condition;  // the clause that fired, e.g. "k < l"
};

// Sufficient-condition classifier. Verdicts are guarantees, never
// predictions: NoGuarantee rows may well stay bounded in practice.
// Boundary values (k = 2/n, k = 1/n + 2/(n^2+4)) match no clause and
// classify as NoGuarantee. BlowUpPossible exists only for the nonlocal
// variant (k > l and k > 2/n).
RegimeVerdict classify(const ModelParams& p);

// Gagliardo-Nirenberg exponent theta = (np/2)(1-1/p) / (1 - n/2 + np/2),
// in (0,1) for n >= 1, p > max(1, n/2). Throws on precondition violation.
double gn_theta(int n, double p);

struct ExponentPair {
    double theta;      // interpolation exponent
    double composite;  // scaled exponent entering the estimates
};

// theta1 = (1 - 1/l) / (1 + 2/(np) - 1/p), composite = ((p+l)/p) theta1.
// Requires l > 1 and p > max{l, l(nl-2)/n, n/2}; both outputs lie in (0,1).
ExponentPair gn_theta1(int n, double p, double l);

// theta2 = (p/2 - p/(2(p+k))) / (p/2 + 1/n - 1/2), composite =
// ((p+k)/p) theta2. Requires n >= 2, p > n/2, k > 0. The composite equals
// (p+k-1)/(p+2/n-1), so composite < 1 exactly when k < 2/n; values >= 1
// signal the supercritical regime to the caller.
ExponentPair gn_theta2(int n, double p, double k);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool hi_infinite = false;  // [lo, infinity)
};

// Integrability range of the chemical gradients: [1, infinity) when the
// production exponent is <= 1/n, else [1, n/(n*exponent - 1)). Requires
// exponent in (0, 1].
Interval gradient_range(double exponent, int n);

// J = (1/n, 1/n + 2/(n^2+4)); the nontrivial exponent window of the
// parabolic classifier.
Interval interval_J(int n);

struct EquilibriumTriple {
    double u, v, w;
};

// Constant stationary state (m/|O|, (alpha/beta)(m/|O|)^k,
// (gamma0/delta)(1+m/|O|)^l). Requires mass >= 0, area > 0.
EquilibriumTriple equilibrium(const ModelParams& p, double mass, double area);

}  // namespace chemotax
