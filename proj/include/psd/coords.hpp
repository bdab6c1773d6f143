#pragma once

#include <cmath>

namespace psd {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Spherical {
  double r = 0, theta = 0, phi = 0;
};

// Position (r, theta, phi) plus momentum components along the local frame.
struct PhasePoint {
  double r = 0, theta = 0, phi = 0;
  double p_r = 0, p_theta = 0, p_phi = 0;
};

// Reduced rotor phase space at fixed radius.
struct AngularPhasePoint {
  double theta = 0, phi = 0;
  double p_theta = 0, p_phi = 0;
};

struct MomentumSpherical {
  double p = 0, theta_p = 0, phi_p = 0;
};

struct ShiftedAngles {
  double r_plus = 0, theta_plus = 0, phi_plus = 0;
  double r_minus = 0, theta_minus = 0, phi_minus = 0;
  bool degenerate = false;  // r_plus or r_minus vanished
};

struct RadiusComponents {
  double p_r = 0, p_theta = 0, p_phi = 0;
};

// Local frame at (theta, phi). theta_hat points toward decreasing theta:
// (-cos t cos f, -cos t sin f, sin t). This is the orientation in which the
// shifted-angle formulas and the momentum components below hold verbatim.
struct LocalFrame {
  Vec3 r_hat, theta_hat, phi_hat;
};
LocalFrame local_frame(double theta, double phi);

Vec3 to_cartesian(const Spherical& s);
Spherical to_spherical(const Vec3& v);  // phi in [0, 2pi); theta = phi = 0 at the origin

bool near_pole(double theta);

// r +/- q with q = (q_r, q_theta, q_phi) given in the local frame at `point`.
ShiftedAngles shifted_coords(const Spherical& point, const Vec3& q);

RadiusComponents momentum_to_radius_components(const MomentumSpherical& p, double theta, double phi);

Vec3 momentum_cartesian(const PhasePoint& pt);
PhasePoint phase_point_from_cartesian(const Vec3& r, const Vec3& p);

// x component of the momentum rebuilt from (p_r, p_theta, p_phi).
double cartesian_px_from_radius_components(const PhasePoint& pt);

// p_phi sin(phi) + p_theta cos(theta) cos(phi). With p_r = 0 this is -p_x in the frame above.
double px_bracket(double theta, double phi, double p_theta, double p_phi);

}  // namespace psd
