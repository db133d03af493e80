#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace endslab {

/// Raised when a numerical routine cannot deliver its post-condition
/// (non-convergence, vanishing Wronskian, truncation failure).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Ends { one, two };
enum class EndSide { plus, minus };

struct WarpValue {
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
};

/// Radial warp function f of the metric dr^2 + f(r)^2 g_{S^{n-1}}.
///
/// Two ends: f(r) = r - c_plus for r >= R and f(r) = -r - c_minus for
/// r <= -R, joined on [-R, R] by the degree-8 polynomial matching value and
/// the first three derivatives at both ends together with f(0) = neck_min.
/// One end: exactly flat, f(r) = r on [0, infinity).
class WarpProfile {
public:
    static WarpProfile two_end(double neck_radius, double neck_min, double c_plus = 0.0,
                               double c_minus = 0.0);
    static WarpProfile flat_one_end(double neck_radius = 1.0);

    WarpValue eval(double r) const;

    Ends ends() const { return ends_; }
    double neck_radius() const { return neck_radius_; }
    double neck_min() const { return neck_min_; }
    double end_offset(EndSide side) const { return side == EndSide::plus ? c_plus_ : c_minus_; }
    const std::array<double, 9>& neck_coefficients() const { return coeffs_; }

private:
    Ends ends_ = Ends::two;
    double neck_radius_ = 1.0;
    double neck_min_ = 0.5;
    double c_plus_ = 0.0;
    double c_minus_ = 0.0;
    std::array<double, 9> coeffs_{};  // ascending powers of r on [-R, R]
};

class ModelManifold {
public:
    ModelManifold(int dimension, WarpProfile profile, double r_max);

    /// Default two-end fixture: n = 3, R = 1, a = 0.5, c = 0, r_max = 400.
    static ModelManifold default_two_end(int dimension = 3, double r_max = 400.0);
    static ModelManifold flat_one_end(int dimension = 3, double r_max = 400.0);

    int dimension() const { return n_; }
    Ends ends() const { return profile_.ends(); }
    bool two_ended() const { return profile_.ends() == Ends::two; }
    const WarpProfile& profile() const { return profile_; }
    double r_max() const { return r_max_; }
    double neck_radius() const { return profile_.neck_radius(); }
    double r_min() const { return two_ended() ? -r_max_ : 0.0; }

    /// True when r lies in an exactly Euclidean region.
    bool in_exact_region(double r) const;
    /// Euclidean distance |z| from the end's origin for r in the exact region
    /// of the given end (rho = f(r)).
    double end_radius(double r) const;
    EndSide side_of(double r) const { return r >= 0.0 ? EndSide::plus : EndSide::minus; }

    /// Unchecked warp evaluation (no r_max guard); used by kernels whose
    /// exterior pieces are closed form and valid at any radius.
    WarpValue warp(double r) const { return profile_.eval(r); }

private:
    int n_;
    WarpProfile profile_;
    double r_max_;
};

/// A point (r, omega) with omega a unit vector in R^n.
struct PointM {
    PointM(double r, std::vector<double> omega);
    /// Point on the polar axis rotated by angle gamma toward the second axis.
    static PointM on_meridian(int dimension, double r, double gamma);

    double r;
    std::vector<double> omega;
};

double angle_cosine(const PointM& a, const PointM& b);

/// vol(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2).
double sphere_volume(int n);

WarpValue warp_eval(const ModelManifold& model, double r);

/// Volume of the radial ball {|s - r0| <= radius}; volume element
/// f(s)^{n-1} ds dvol(S^{n-1}).
double volume_ball(const ModelManifold& model, double center, double radius);

/// |alpha|_g = sqrt(alpha_r^2 + |alpha_theta|^2 / f(r)^2).
double one_form_norm(const ModelManifold& model, double radial_part, double angular_part_norm,
                     double r);

/// Integral of f^{n-1} over [a, b] (exact pieces in closed form).
double radial_measure(const ModelManifold& model, double a, double b);

}  // namespace endslab
