#pragma once

namespace modeforge {

/// Decomposes a Noll index (1-based) into radial order n, azimuthal order m
/// and the sine/cosine choice. Throws std::invalid_argument for j < 1.
void noll_to_nm(int noll_index, int& n, int& m, bool& sine);

/// Zernike polynomial Z_j(rho, theta) in Noll indexing with unit-RMS
/// normalization over the unit disk (sqrt(n+1) for m = 0, sqrt(2(n+1))
/// otherwise). Values outside rho = 1 follow the polynomial continuation.
double zernike_noll(int noll_index, double rho, double theta);

}  // namespace modeforge
