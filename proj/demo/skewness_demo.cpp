// Robust skewness of a contaminated Weibull sample, next to the classical
// estimate, for a few trimming levels.

#include <cmath>
#include <cstdio>

#include "robmom/robmom.hpp"

int main()
{
    using namespace robmom;
    std::vector<double> x = sample(Family::weibull(1.5, 1.0), 60, 7);
    x[0] = 40.0;  // one gross outlier

    const double m2 = sample_central_moment(x, 2);
    std::printf("classical skewness: %.4f\n", sample_central_moment(x, 3) / std::pow(m2, 1.5));

    for (double eps0 : {0.0, 0.05, 0.1, 0.2}) {
        const MomentEstimate s = whl_standardized_moment(x, KernelOrder(3), TrimSpec{eps0, 1.0});
        std::printf("eps0=%.2f  breakdown=%.4f  skewness=%.4f  (C(n,3)=%llu)\n", eps0, s.eps, s.value,
                    static_cast<unsigned long long>(s.pseudo_n));
    }

    const MomentEstimate mc =
        whl_standardized_moment(x, KernelOrder(4), TrimSpec{0.1, 1.0}, std::nullopt, {}, PseudoPlan::monte_carlo(200000, 1));
    std::printf("kurtosis (Monte Carlo, 2e5 draws): %.4f\n", mc.value);
}
