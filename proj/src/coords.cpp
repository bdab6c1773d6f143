#include "psd/coords.hpp"

#include <initializer_list>
#include <numbers>

namespace psd {

namespace {

double wrap_phi(double phi) {
  const double tau = 2 * std::numbers::pi;
  phi = std::fmod(phi, tau);
  if (phi < 0) phi += tau;
  if (phi >= tau) phi -= tau;
  return phi;
}

}  // namespace

LocalFrame local_frame(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sf = std::sin(phi), cf = std::cos(phi);
  return {{st * cf, st * sf, ct}, {-ct * cf, -ct * sf, st}, {-sf, cf, 0}};
}

Vec3 to_cartesian(const Spherical& s) {
  const double st = std::sin(s.theta);
  return {s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi), s.r * std::cos(s.theta)};
}

Spherical to_spherical(const Vec3& v) {
  const double r = norm(v);
  if (r == 0) return {0, 0, 0};
  const double rho = std::hypot(v.x, v.y);
  return {r, std::atan2(rho, v.z), rho == 0 ? 0.0 : wrap_phi(std::atan2(v.y, v.x))};
}

bool near_pole(double theta) { return std::abs(std::sin(theta)) < 1e-12; }

ShiftedAngles shifted_coords(const Spherical& point, const Vec3& q) {
  const double r = point.r, st = std::sin(point.theta), ct = std::cos(point.theta);
  const double qr = q.x, qt = q.y, qf = q.z;
  ShiftedAngles out;
  for (int sgn : {+1, -1}) {
    const double a = r + sgn * qr;
    const double rr = std::sqrt(a * a + qt * qt + qf * qf);
    double th = 0, ph = 0;
    if (rr == 0) {
      out.degenerate = true;
    } else {
      // z and (x+iy) e^{-i phi} of r +/- q in the local frame
      const double z = a * ct + sgn * qt * st;
      const double re = a * st - sgn * qt * ct;
      const double im = sgn * qf;
      th = std::atan2(std::hypot(re, im), z);
      ph = (re == 0 && im == 0) ? point.phi : wrap_phi(point.phi + std::atan2(im, re));
    }
    if (sgn > 0) {
      out.r_plus = rr; out.theta_plus = th; out.phi_plus = ph;
    } else {
      out.r_minus = rr; out.theta_minus = th; out.phi_minus = ph;
    }
  }
  return out;
}

RadiusComponents momentum_to_radius_components(const MomentumSpherical& p, double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(p.theta_p), cp = std::cos(p.theta_p);
  const double c = std::cos(phi - p.phi_p), s = std::sin(phi - p.phi_p);
  return {p.p * (ct * cp + c * st * sp), p.p * (st * cp - c * ct * sp), -p.p * s * sp};
}

Vec3 momentum_cartesian(const PhasePoint& pt) {
  const LocalFrame f = local_frame(pt.theta, pt.phi);
  return pt.p_r * f.r_hat + pt.p_theta * f.theta_hat + pt.p_phi * f.phi_hat;
}

PhasePoint phase_point_from_cartesian(const Vec3& r, const Vec3& p) {
  const Spherical s = to_spherical(r);
  const LocalFrame f = local_frame(s.theta, s.phi);
  return {s.r, s.theta, s.phi, dot(p, f.r_hat), dot(p, f.theta_hat), dot(p, f.phi_hat)};
}

double cartesian_px_from_radius_components(const PhasePoint& pt) { return momentum_cartesian(pt).x; }

double px_bracket(double theta, double phi, double p_theta, double p_phi) {
  return p_phi * std::sin(phi) + p_theta * std::cos(theta) * std::cos(phi);
}

}  // namespace psd
