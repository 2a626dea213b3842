#include "modeforge/zernike.hpp"

#include <cmath>
#include <stdexcept>

namespace modeforge {

void noll_to_nm(int j, int& n, int& m, bool& sine) {
    if (j < 1) throw std::invalid_argument("noll index must be >= 1");
    n = 0;
    while ((n + 1) * (n + 2) / 2 < j) ++n;
    const int k = j - n * (n + 1) / 2;  // 1-based position within the row
    if (n % 2 == 0)
        m = 2 * (k / 2);
    else
        m = 2 * ((k - 1) / 2) + 1;
    sine = (m != 0) && (j % 2 == 1);
}

namespace {

double radial_poly(int n, int m, double rho) {
    double sum = 0.0;
    for (int k = 0; k <= (n - m) / 2; ++k) {
        const double c = ((k % 2 == 0) ? 1.0 : -1.0) *
                         std::exp(std::lgamma(n - k + 1.0) - std::lgamma(k + 1.0) -
                                  std::lgamma((n + m) / 2.0 - k + 1.0) -
                                  std::lgamma((n - m) / 2.0 - k + 1.0));
        sum += c * std::pow(rho, n - 2 * k);
    }
    return sum;
}

}  // namespace

double zernike_noll(int noll_index, double rho, double theta) {
    int n, m;
    bool sine;
    noll_to_nm(noll_index, n, m, sine);
    const double r = radial_poly(n, m, rho);
    if (m == 0) return std::sqrt(n + 1.0) * r;
    const double norm = std::sqrt(2.0 * (n + 1.0));
    return norm * r * (sine ? std::sin(m * theta) : std::cos(m * theta));
}

}  // namespace modeforge
