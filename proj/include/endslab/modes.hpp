#pragma once

#include "endslab/exterior.hpp"
#include "endslab/geometry.hpp"

#include <functional>
#include <vector>

namespace endslab {

/// Spherical-Laplacian eigenvalue j(j+n-2) of degree-j harmonics on S^{n-1}.
double eigenvalue(int j, int n);

/// Gegenbauer C_j^{alpha}(x) by upward three-term recurrence.
double gegenbauer(int j, double alpha, double x);

/// Zonal kernel Z_j(c) = sum_m Y_jm(w) Y_jm(w') with c = w.w':
///   Z_j(c) = (2j+n-2) / ((n-2) vol(S^{n-1})) C_j^{(n-2)/2}(c).
double zonal_kernel(int j, double c, int n);

/// dZ_j/dc.
double zonal_kernel_derivative(int j, double c, int n);

/// Z_0..Z_jmax at c (and derivatives when requested), one recurrence pass.
void zonal_kernels(int jmax, double c, int n, std::vector<double>& z, std::vector<double>* dz = nullptr);

/// L_{j,k} u = -u'' - (n-1)(f'/f) u' + [j(j+n-2)/f^2] u + k^2 u.
struct RadialOperator {
    const ModelManifold* model;
    int j;
    cplx k;
};

/// L_{j,k} applied to grid samples (finite differences on the nonuniform
/// grid; 5-point interior stencils, one-sided at the boundaries).
std::vector<cplx> radial_apply(const RadialOperator& op, const std::vector<double>& nodes,
                               const std::vector<cplx>& u);

/// L_{j,k} u at a single point, with u given as a function, using the
/// 7-point stencil r + (m + shift) h, m = -3..3 (shift = 0: symmetric,
/// sixth order; |shift| = 3: one-sided).
cplx radial_apply_at(const RadialOperator& op, const std::function<cplx(double)>& u, double r,
                     double h, int shift = 0);

struct SynthesisResult {
    cplx value;
    cplx last_term;       // magnitude of the last retained term
    double last_ratio;    // |t_J| / |t_{J-1}|
    int modes = 0;
};

/// sum_j u_j Z_j(c) over the supplied mode values (j = 0, 1, ...).
SynthesisResult synthesize_kernel(const std::vector<cplx>& mode_values, double c, int n);

struct ModeSumOptions {
    int j_max = 64;
    double tol = 1e-8;
    int j_min = 2;  // always include at least j = 0..j_min
};

/// Adds term(j) * Z_j(c) for j = 0, 1, ... until two consecutive terms fall
/// below tol * |sum|; throws NumericalError when j_max is reached first.
SynthesisResult sum_modes(const std::function<cplx(int)>& term, double c, int n,
                          const ModeSumOptions& options = {});

/// Same stopping rule with user-supplied angular weights weight(j).
SynthesisResult sum_weighted(const std::function<cplx(int)>& term,
                             const std::function<double(int)>& weight,
                             const ModeSumOptions& options = {});

}  // namespace endslab
