#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ecotone {

using ScalarFn = std::function<double(double)>;

/// The nonlinearity pair (f, phi) of the driven-oscillator equation together
/// with exact antiderivatives F (of f, F(0)=0) and R (R(y) = int_0^y phi(s)s ds)
/// and the declared structure constants of the standing assumptions.
struct NonlinearitySpec {
    std::string name;
    ScalarFn f, fp, F;
    ScalarFn phi, phip, R;
    double beta0 = 0.0;   // phi >= beta0 > 0
    double K = 0.0;       // f' >= -K
    double gamma0 = 0.0;  // f(v)v >= -C + gamma0 |v|^{2+delta}
    double delta = 0.0;
    double C = 0.0;
};

struct AssumptionItem {
    bool pass = false;
    double worst_v = 0.0;   // witness of the smallest margin
    double margin = 0.0;    // negative means violated
};

struct AssumptionReport {
    AssumptionItem damping;     // phi >= beta0
    AssumptionItem coercivity;  // f(v)v >= -C + gamma0 |v|^{2+delta}
    AssumptionItem slope;       // f' >= -K
    AssumptionItem consistency; // F matches the integral of f
    bool monotone = false;      // f' >= kappa0 > 0 over the range
    double kappa0 = 0.0;
    bool all_pass() const {
        return damping.pass && coercivity.pass && slope.pass && consistency.pass;
    }
};

AssumptionReport validate_assumptions(const NonlinearitySpec& spec, double lo, double hi,
                                      int samples = 1000);

// built-in catalog
NonlinearitySpec monotone_cubic();  // f = v + v^3, phi = 1
NonlinearitySpec bistable_cubic();  // f = v^3 - v, phi = 1

/// f and phi as polynomials (coefficients in ascending degree); constants are
/// the caller's declaration, not derived.
NonlinearitySpec polynomial_spec(std::vector<double> f_coeffs, std::vector<double> phi_coeffs,
                                 double beta0, double K, double gamma0, double delta, double C);

}  // namespace ecotone
