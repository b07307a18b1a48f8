#pragma once

/**
 * @file eyegeom.hpp
 * @brief Coordinates on Kontsevich's eye and the angle-form integrands.
 *
 * Interior points of C_{2,0} are taken in the gauge z1 = i, z2 in H - {i}.
 * The right corner RC uses the boundary chart z1 = 0, z2 = 1; the upper
 * eyelid uses z1 = 0, z2 in H. The angle of an edge (source z, target w) is
 * phi(z, w) = (arg(w - z) - arg(w - conj z)) / 2pi, which vanishes when z
 * is real.
 */

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liegraph.hpp"

namespace atassoc {

using complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Global orientation sign of the weight forms, calibrated against the
/// degree-2 Bernoulli value (+1/24) and frozen.
inline constexpr int kOrientationSign = +1;

/// Unreduced angle (arg(w - z) - arg(w - conj z)) / 2pi.
inline double angle_raw(complex z, complex w)
{
	if (z == w)
		throw std::domain_error("angle: coincident points");
	if (z.imag() == 0.0 && w.imag() == 0.0)
		throw std::domain_error("angle: both points on the real line");
	return (std::arg(w - z) - std::arg(w - std::conj(z))) / kTwoPi;
}

/// Angle map reduced to [0, 1).
inline double angle(complex z, complex w)
{
	double a = angle_raw(z, w);
	a -= std::floor(a);
	return a >= 1.0 ? 0.0 : a;
}

struct AngleGradient
{
	double d_re_z = 0, d_im_z = 0, d_re_w = 0, d_im_w = 0;
};

/// Closed-form partials, no validity checks.
inline AngleGradient angle_grad_unchecked(complex z, complex w)
{
	complex u = w - z;
	complex v = w - std::conj(z);
	double iu = 1.0 / std::norm(u), iv = 1.0 / std::norm(v);
	double ur = u.real() * iu, ui = u.imag() * iu;
	double vr = v.real() * iv, vi = v.imag() * iv;
	constexpr double c = 1.0 / kTwoPi;
	return {c * (ui - vi), c * (-ur - vr), c * (-ui + vi), c * (ur - vr)};
}

inline AngleGradient angle_grad(complex z, complex w)
{
	if (z == w)
		throw std::domain_error("angle_grad: coincident points");
	if (z.imag() == 0.0 && w.imag() == 0.0)
		throw std::domain_error("angle_grad: both points on the real line");
	return angle_grad_unchecked(z, w);
}

/// Path s in (0,1) -> z2(s) from RC (s -> 0) to the iris point alpha_0 (s -> 1).
class EyePath
{
  public:
	using Fn = std::function<complex(double)>;

	EyePath(std::string id, Fn point, Fn velocity)
	    : id_(std::move(id)), point_(std::move(point)), velocity_(std::move(velocity))
	{
	}

	std::string const &id() const { return id_; }

	complex point(double s) const
	{
		check(s);
		return point_(s);
	}
	complex velocity(double s) const
	{
		check(s);
		return velocity_(s);
	}

  private:
	static void check(double s)
	{
		if (!(s > 0.0 && s < 1.0))
			throw std::domain_error("eye path evaluated outside (0,1)");
	}

	std::string id_;
	Fn point_, velocity_;
};

/// Known ids: "horizontal" (default, z2 = i + (1-s)/s), "horizontal-sq"
/// (same segment, z2 = i + ((1-s)/s)^2), "bump" (z2 = i + t + i t^2/(1+t^3),
/// t = (1-s)/s, leaves and reaches both endpoints horizontally).
inline EyePath make_path(std::string const &id)
{
	using namespace std::complex_literals;
	if (id == "horizontal")
		return EyePath(
		    id, [](double s) { return 1i + (1.0 - s) / s; }, [](double s) { return complex(-1.0 / (s * s)); });
	if (id == "horizontal-sq")
		return EyePath(
		    id,
		    [](double s) {
			    double t = (1.0 - s) / s;
			    return 1i + t * t;
		    },
		    [](double s) {
			    double t = (1.0 - s) / s;
			    return complex(-2.0 * t / (s * s));
		    });
	if (id == "bump")
		return EyePath(
		    id,
		    [](double s) {
			    double t = (1.0 - s) / s;
			    return 1i + t + 1i * (t * t / (1.0 + t * t * t));
		    },
		    [](double s) {
			    double t = (1.0 - s) / s;
			    double dt = -1.0 / (s * s);
			    double den = 1.0 + t * t * t;
			    double db = (2.0 * t * den - t * t * 3.0 * t * t) / (den * den);
			    return complex(dt, db * dt);
		    });
	throw std::invalid_argument("unknown eye path '" + id + "'");
}

/// Positions of the two ground vertices plus dz2/ds along the chosen path
/// (zero outside a path, e.g. for weight functions).
struct GroundConfig
{
	complex z1;
	complex z2;
	complex dz2_ds = 0.0;

	static GroundConfig on_path(EyePath const &path, double s)
	{
		using namespace std::complex_literals;
		return {1i, path.point(s), path.velocity(s)};
	}
	static GroundConfig right_corner() { return {0.0, 1.0, 0.0}; }
	static GroundConfig interior(complex z2)
	{
		using namespace std::complex_literals;
		if (!(z2.imag() > 0.0) || z2 == 1i)
			throw std::domain_error("interior chart needs z2 in H - {i}");
		return {1i, z2, 0.0};
	}
	/// z1 on the real line
	static GroundConfig upper_eyelid(complex z2)
	{
		if (!(z2.imag() > 0.0))
			throw std::domain_error("upper eyelid chart needs z2 in H");
		return {0.0, z2, 0.0};
	}
};

/// Air positions in the upper half-plane.
struct FiberPoint
{
	std::vector<complex> air;
};

inline void check_fiber(GroundConfig const &gc, std::span<complex const> air)
{
	for (std::size_t a = 0; a < air.size(); ++a)
	{
		if (!(air[a].imag() > 0.0))
			throw std::domain_error("fiber point outside the upper half-plane");
		if (air[a] == gc.z1 || air[a] == gc.z2)
			throw std::domain_error("fiber point collides with a ground point");
		for (std::size_t b = 0; b < a; ++b)
			if (air[a] == air[b])
				throw std::domain_error("fiber points collide");
	}
}

namespace detail {

inline complex position(VertexId v, GroundConfig const &gc, std::span<complex const> air)
{
	if (v == VertexId::g1())
		return gc.z1;
	if (v == VertexId::g2())
		return gc.z2;
	return air[v.air_index() - 1];
}

/// Adds sign * d(phi_e) into a row laid out as (s, x1, y1, ..., xn, yn);
/// `col0` is 1 when the s column is present, 0 for fiber-only rows.
template <class Row>
void add_edge_row(Row &&row, Edge const &e, GroundConfig const &gc, std::span<complex const> air, int col0,
                  double sign = 1.0)
{
	auto g = angle_grad_unchecked(position(e.source, gc, air), position(e.target, gc, air));
	auto put = [&](VertexId v, double d_re, double d_im) {
		if (v == VertexId::g2())
		{
			if (col0)
				row(0) += sign * (d_re * gc.dz2_ds.real() + d_im * gc.dz2_ds.imag());
		}
		else if (v.is_air())
		{
			int c = col0 + 2 * (v.air_index() - 1);
			row(c) += sign * d_re;
			row(c + 1) += sign * d_im;
		}
	};
	put(e.source, g.d_re_z, g.d_im_z);
	put(e.target, g.d_re_w, g.d_im_w);
}

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 32, 32>;

inline double det(SmallMatrix const &m)
{
	if (m.rows() == 0)
		return 1.0;
	return m.partialPivLu().determinant();
}

} // namespace detail

/// det M for an augmented graph: rows in form order, columns (s, x1, y1, ...).
/// The s column carries the chain rule through z2(s); edges away from G2 give 0.
inline double integrand_unchecked(AugmentedGraph const &ag, GroundConfig const &gc, std::span<complex const> air)
{
	int dim = 2 * ag.base.n() + 1;
	detail::SmallMatrix m = detail::SmallMatrix::Zero(dim, dim);
	for (int r = 0; r < dim; ++r)
		detail::add_edge_row(m.row(r), ag.rows[r], gc, air, 1);
	return kOrientationSign * detail::det(m);
}

inline double integrand(AugmentedGraph const &ag, GroundConfig const &gc, std::span<complex const> air)
{
	if (static_cast<int>(air.size()) != ag.base.n())
		throw std::invalid_argument("integrand: wrong number of air points");
	check_fiber(gc, air);
	double v = integrand_unchecked(ag, gc, air);
	if (!std::isfinite(v))
		throw std::domain_error("integrand: non-finite value");
	return v;
}

inline double integrand(AugmentedGraph const &ag, EyePath const &path, double s, FiberPoint const &p)
{
	return integrand(ag, GroundConfig::on_path(path, s), p.air);
}

/// det M_R - det M_L as a single determinant (the rows differ only in the
/// augmenting edge), i.e. the integrand of the weight one-form hat-omega.
inline double hat_integrand_unchecked(LieGraph const &g, VertexId root, GroundConfig const &gc,
                                      std::span<complex const> air)
{
	int dim = 2 * g.n() + 1;
	detail::SmallMatrix m = detail::SmallMatrix::Zero(dim, dim);
	detail::add_edge_row(m.row(0), Edge{VertexId::g2(), root}, gc, air, 1, 1.0);
	detail::add_edge_row(m.row(0), Edge{VertexId::g1(), root}, gc, air, 1, -1.0);
	auto const &edges = g.edges();
	for (int r = 1; r < dim; ++r)
		detail::add_edge_row(m.row(r), edges[r - 1], gc, air, 1);
	return kOrientationSign * detail::det(m);
}

inline double hat_integrand(LieGraph const &g, GroundConfig const &gc, std::span<complex const> air)
{
	require_valid(g);
	if (static_cast<int>(air.size()) != g.n())
		throw std::invalid_argument("hat_integrand: wrong number of air points");
	check_fiber(gc, air);
	return hat_integrand_unchecked(g, g.root(), gc, air);
}

/// det M0 over the fiber columns only (the weight-function integrand).
inline double fiber_integrand_unchecked(LieGraph const &g, GroundConfig const &gc, std::span<complex const> air)
{
	int dim = 2 * g.n();
	detail::SmallMatrix m = detail::SmallMatrix::Zero(dim, dim);
	auto const &edges = g.edges();
	for (int r = 0; r < dim; ++r)
		detail::add_edge_row(m.row(r), edges[r], gc, air, 0);
	return kOrientationSign * detail::det(m);
}

inline double fiber_integrand(LieGraph const &g, GroundConfig const &gc, std::span<complex const> air)
{
	require_valid(g);
	if (static_cast<int>(air.size()) != g.n())
		throw std::invalid_argument("fiber_integrand: wrong number of air points");
	check_fiber(gc, air);
	return fiber_integrand_unchecked(g, gc, air);
}

} // namespace atassoc
