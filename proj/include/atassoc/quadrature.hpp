#pragma once

/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre path grids, profiles of one-forms along the eye path,
 * and nested iterated integrals over the simplex 0 < s1 < ... < sk < 1.
 *
 * Nodes are placed in an easing variable t with s = h(t). A profile stores
 * f(s_j), the coefficient of ds; integration runs in t with F = f(h(t)) h'(t).
 * Running integrals use the Legendre interpolant through the nodes, which
 * makes the order-2 shuffle identity exact on a shared grid.
 */

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace atassoc {

struct IntegralEstimate
{
	double value = 0.0;
	double sigma = 0.0;
	std::uint64_t samples = 0;
	std::uint64_t rejected = 0;
	std::vector<std::string> provenance;
};

struct GaussLegendre
{
	std::vector<double> x; // on [-1, 1], increasing
	std::vector<double> w;
};

/// Legendre P_0..P_{kmax} at x.
inline std::vector<double> legendre_values(int kmax, double x)
{
	std::vector<double> p(kmax + 1);
	p[0] = 1.0;
	if (kmax >= 1)
		p[1] = x;
	for (int k = 1; k < kmax; ++k)
		p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
	return p;
}

inline GaussLegendre gauss_legendre(int k)
{
	if (k < 1)
		throw std::invalid_argument("Gauss-Legendre needs at least one node");
	GaussLegendre gl{std::vector<double>(k), std::vector<double>(k)};
	for (int i = 0; i < k; ++i)
	{
		// Newton from the Chebyshev-like initial guess, root i from the right
		double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
		double dp = 0.0;
		for (int it = 0; it < 100; ++it)
		{
			double p0 = 1.0, p1 = x;
			for (int j = 1; j < k; ++j)
			{
				double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
				p0 = p1;
				p1 = p2;
			}
			double pk = k == 1 ? x : p1;
			double pkm1 = k == 1 ? 1.0 : p0;
			dp = k * (x * pk - pkm1) / (x * x - 1.0);
			double dx = pk / dp;
			x -= dx;
			if (std::abs(dx) < 1e-16)
				break;
		}
		gl.x[k - 1 - i] = x;
		gl.w[k - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
	}
	return gl;
}

struct GridConfig
{
	int nodes = 32;
	/// "smoothstep" (s = 3t^2 - 2t^3) or "none" (s = t)
	std::string easing = "smoothstep";
	std::string path = "horizontal";
};

/// Nodes on (0,1) in the easing variable, with the cumulative-integration
/// matrix of the interpolant.
class PathGrid
{
  public:
	explicit PathGrid(int nodes, std::string easing = "smoothstep") : easing_(std::move(easing))
	{
		if (easing_ != "smoothstep" && easing_ != "none")
			throw std::invalid_argument("unknown easing '" + easing_ + "'");
		auto gl = gauss_legendre(nodes);
		x_ = gl.x;
		W_ = gl.w;
		int k = nodes;
		for (int j = 0; j < k; ++j)
		{
			double t = 0.5 * (x_[j] + 1.0);
			t_.push_back(t);
			tw_.push_back(0.5 * W_[j]);
			if (easing_ == "smoothstep")
			{
				s_.push_back(t * t * (3.0 - 2.0 * t));
				dsdt_.push_back(6.0 * t * (1.0 - t));
			}
			else
			{
				s_.push_back(t);
				dsdt_.push_back(1.0);
			}
		}
		// S[j][l] = int_0^{t_j} ell_l(t) dt via Legendre coefficients
		std::vector<std::vector<double>> pn(k);
		for (int l = 0; l < k; ++l)
			pn[l] = legendre_values(k, x_[l]);
		S_.assign(static_cast<std::size_t>(k) * k, 0.0);
		for (int j = 0; j < k; ++j)
		{
			auto pj = legendre_values(k, x_[j]);
			std::vector<double> q(k);
			q[0] = x_[j] + 1.0;
			for (int n = 1; n < k; ++n)
				q[n] = (pj[n + 1] - pj[n - 1]) / (2.0 * n + 1.0);
			for (int l = 0; l < k; ++l)
			{
				double acc = 0.0;
				for (int n = 0; n < k; ++n)
					acc += (2.0 * n + 1.0) / 2.0 * W_[l] * pn[l][n] * q[n];
				S_[static_cast<std::size_t>(j) * k + l] = 0.5 * acc;
			}
		}
	}

	int size() const { return static_cast<int>(t_.size()); }
	std::string const &easing() const { return easing_; }
	std::vector<double> const &t() const { return t_; }
	std::vector<double> const &s() const { return s_; }
	std::vector<double> const &ds_dt() const { return dsdt_; }
	/// Gauss weights on (0,1) in t
	std::vector<double> const &weights() const { return tw_; }
	double running(int j, int l) const { return S_[static_cast<std::size_t>(j) * size() + l]; }

	bool same_as(PathGrid const &o) const { return easing_ == o.easing_ && size() == o.size(); }

  private:
	std::string easing_;
	std::vector<double> x_, W_, t_, tw_, s_, dsdt_, S_;
};

/// A weight one-form sampled along the path: f(s_j) ds with 1-sigma errors.
struct Profile
{
	std::string id; // cache key or a synthetic label
	std::string encoding;
	std::string side = "R-L";
	std::string path = "horizontal";
	std::string transform = "mixture";
	std::string easing = "smoothstep";
	std::uint64_t samples = 0;
	std::uint64_t seed = 0;
	std::uint64_t batch = 0;
	int convention = 0;
	std::vector<double> s;
	std::vector<double> values;
	std::vector<double> sigmas;
	std::uint64_t rejected = 0;
	bool from_cache = false;

	int nodes() const { return static_cast<int>(values.size()); }
};

/// Synthetic profile of a function of s on a grid, e.g. for tests.
template <class Fn> Profile make_profile(PathGrid const &grid, Fn &&f, std::string id = "synthetic")
{
	Profile p;
	p.id = std::move(id);
	p.easing = grid.easing();
	p.s = grid.s();
	for (double s : grid.s())
	{
		p.values.push_back(f(s));
		p.sigmas.push_back(0.0);
	}
	return p;
}

/// Value of an iterated integral and its gradient with respect to the node
/// values f(s_j) of every distinct profile (keyed by id).
struct SimplexGradient
{
	double value = 0.0;
	std::map<std::string, std::pair<Profile const *, std::vector<double>>> grads;
};

/// int_{0<s1<...<sk<1} f^(k)(s_k) ... f^(1)(s_1) ds, profiles in path order
/// (by_slot[0] is f^(1), the earliest parameter).
inline SimplexGradient simplex_gradient(PathGrid const &grid, std::span<Profile const *const> by_slot)
{
	int k = static_cast<int>(by_slot.size());
	if (k < 1)
		throw std::invalid_argument("simplex_iterated needs at least one profile");
	int K = grid.size();
	std::vector<std::vector<double>> F(k);
	for (int m = 0; m < k; ++m)
	{
		auto const &p = *by_slot[m];
		if (p.nodes() != K || p.easing != grid.easing())
			throw std::invalid_argument("simplex_iterated: profile grid mismatch");
		F[m].resize(K);
		for (int j = 0; j < K; ++j)
			F[m][j] = p.values[j] * grid.ds_dt()[j];
	}
	auto const &w = grid.weights();
	auto apply_S = [&](std::vector<double> const &h) {
		std::vector<double> g(K, 0.0);
		for (int j = 0; j < K; ++j)
			for (int l = 0; l < K; ++l)
				g[j] += grid.running(j, l) * h[l];
		return g;
	};
	auto apply_St = [&](std::vector<double> const &a) {
		std::vector<double> r(K, 0.0);
		for (int j = 0; j < K; ++j)
			for (int l = 0; l < K; ++l)
				r[l] += grid.running(j, l) * a[j];
		return r;
	};
	// forward: g_0 = 1, h_m = F_m g_{m-1}, g_m = S h_m, result = w . h_k
	std::vector<std::vector<double>> g(k + 1, std::vector<double>(K, 1.0)), h(k + 1);
	for (int m = 1; m <= k; ++m)
	{
		h[m].resize(K);
		for (int j = 0; j < K; ++j)
			h[m][j] = F[m - 1][j] * g[m - 1][j];
		if (m < k)
			g[m] = apply_S(h[m]);
	}
	SimplexGradient out;
	for (int j = 0; j < K; ++j)
		out.value += w[j] * h[k][j];

	// backward pass; slots sharing a profile accumulate into one gradient
	std::vector<double> dh(w.begin(), w.end());
	for (int m = k; m >= 1; --m)
	{
		auto const *p = by_slot[m - 1];
		auto &slot = out.grads.try_emplace(p->id, p, std::vector<double>(K, 0.0)).first->second.second;
		for (int j = 0; j < K; ++j)
			slot[j] += dh[j] * g[m - 1][j] * grid.ds_dt()[j];
		if (m > 1)
		{
			std::vector<double> dg(K);
			for (int j = 0; j < K; ++j)
				dg[j] = dh[j] * F[m - 1][j];
			dh = apply_St(dg);
		}
	}
	return out;
}

/// First-order error of a gradient against the node errors: root-sum-square.
inline double propagated_sigma(SimplexGradient const &sg)
{
	double var = 0.0;
	for (auto const &[id, pg] : sg.grads)
	{
		auto const &[p, grad] = pg;
		for (std::size_t j = 0; j < grad.size(); ++j)
			var += grad[j] * grad[j] * p->sigmas[j] * p->sigmas[j];
	}
	return std::sqrt(var);
}

/// Iterated integral with propagated 1-sigma error and provenance.
inline IntegralEstimate simplex_iterated(PathGrid const &grid, std::span<Profile const *const> by_slot)
{
	auto sg = simplex_gradient(grid, by_slot);
	IntegralEstimate est;
	est.value = sg.value;
	est.sigma = propagated_sigma(sg);
	for (auto const &[id, pg] : sg.grads)
	{
		est.samples += pg.first->samples * pg.first->nodes();
		est.rejected += pg.first->rejected;
	}
	for (auto const *p : by_slot)
		est.provenance.push_back(p->id);
	return est;
}

inline IntegralEstimate simplex_iterated(PathGrid const &grid, std::vector<Profile const *> const &by_slot)
{
	return simplex_iterated(grid, std::span<Profile const *const>(by_slot.data(), by_slot.size()));
}

} // namespace atassoc
