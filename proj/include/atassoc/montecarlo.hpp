#pragma once

/**
 * @file montecarlo.hpp
 * @brief Monte-Carlo integration over the fiber H^n.
 *
 * Air points are drawn one at a time. The "tangent" transform maps
 * u in (0,1)^2 to (tan(pi(u1 - 1/2)), u2/(1 - u2)). The "mixture" transform
 * draws from radial components q(p) = a / (2 pi r (r + a)^2) centered at the
 * ground points, their midpoint and every earlier air point, folded into H
 * by reflection. Samples whose weight is not finite are rejected and count
 * as zero mass.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "eyegeom.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace atassoc {

enum class FiberTransform
{
	Tangent,
	Mixture
};

inline std::string to_string(FiberTransform t) { return t == FiberTransform::Tangent ? "tangent" : "mixture"; }

inline FiberTransform parse_transform(std::string const &s)
{
	if (s == "tangent")
		return FiberTransform::Tangent;
	if (s == "mixture")
		return FiberTransform::Mixture;
	throw std::invalid_argument("unknown fiber transform '" + s + "'");
}

struct McConfig
{
	std::uint64_t samples = 200000;
	std::uint64_t seed = 1;
	std::uint64_t batch = 4096;
	int threads = 1;
	FiberTransform transform = FiberTransform::Mixture;
	/// maximal tolerated fraction of rejected samples
	double reject_threshold = 1e-3;
};

class McError : public std::runtime_error
{
  public:
	McError(std::string const &what, std::uint64_t rejected, std::uint64_t samples)
	    : std::runtime_error(what), rejected(rejected), samples(samples)
	{
	}
	std::uint64_t rejected, samples;
};

namespace detail {

struct Component
{
	complex center;
	double scale;
	double weight;
};

inline double radial_density(complex p, complex c, double a)
{
	double r = std::abs(p - c);
	return a / (kTwoPi * r * (r + a) * (r + a));
}

/// Sequential sampler; `density` is the joint density of the returned point.
class FiberSampler
{
  public:
	FiberSampler(FiberTransform t, complex z1, complex z2) : t_(t), z1_(z1), z2_(z2)
	{
		double d = std::abs(z2 - z1);
		ground_scale_ = std::min(1.0, d);
		wide_scale_ = std::max(1.0, d);
	}

	/// Fills `air`; returns the density, or 0 when the draw is degenerate.
	double draw(Substream &rng, std::span<complex> air) const
	{
		double dens = 1.0;
		for (std::size_t a = 0; a < air.size(); ++a)
		{
			double q = t_ == FiberTransform::Tangent ? draw_tangent(rng, air[a]) : draw_mixture(rng, air, a);
			if (!(q > 0.0) || !std::isfinite(q) || !(air[a].imag() > 0.0))
				return 0.0;
			dens *= q;
		}
		return dens;
	}

  private:
	static double draw_tangent(Substream &rng, complex &p)
	{
		double u1 = rng.uniform(), u2 = rng.uniform();
		double x = std::tan(std::numbers::pi * (u1 - 0.5));
		double y = u2 / (1.0 - u2);
		p = {x, y};
		return (1.0 - u2) * (1.0 - u2) / (std::numbers::pi * (1.0 + x * x));
	}

	void components(std::span<complex const> air, std::size_t a, std::vector<Component> &out) const
	{
		out.clear();
		bool first = a == 0;
		out.push_back({z1_, ground_scale_, first ? 0.35 : 0.3});
		out.push_back({z2_, ground_scale_, first ? 0.35 : 0.3});
		out.push_back({0.5 * (z1_ + z2_), wide_scale_, first ? 0.3 : 0.2});
		for (std::size_t b = 0; b < a; ++b)
		{
			double dist = std::min(std::abs(air[b] - z1_), std::abs(air[b] - z2_));
			double sc = std::max(1e-12, std::min(ground_scale_, 0.5 * dist));
			out.push_back({air[b], sc, 0.2 / static_cast<double>(a)});
		}
	}

	double draw_mixture(Substream &rng, std::span<complex> air, std::size_t a) const
	{
		thread_local std::vector<Component> comps;
		components(air, a, comps);
		double pick = rng.uniform();
		std::size_t c = 0;
		for (double acc = comps[0].weight; c + 1 < comps.size() && pick > acc; acc += comps[++c].weight)
		{
		}
		double u = rng.uniform(), v = rng.uniform();
		double r = comps[c].scale * u / (1.0 - u);
		complex p = comps[c].center + std::polar(r, kTwoPi * v);
		if (p.imag() < 0.0)
			p = std::conj(p);
		air[a] = p;
		double q = 0.0;
		for (auto const &k : comps)
			q += k.weight * (radial_density(p, k.center, k.scale) + radial_density(std::conj(p), k.center, k.scale));
		return q;
	}

	FiberTransform t_;
	complex z1_, z2_;
	double ground_scale_, wide_scale_;
};

struct BatchSum
{
	double sum = 0.0, sumsq = 0.0;
	std::uint64_t count = 0, rejected = 0;
};

} // namespace detail

/// Integrand over H^n: receives the n air positions.
using FiberIntegrand = std::function<double(std::span<complex const>)>;

/// Importance-sampled estimate of the integral of `f` over H^n. The sampler
/// is adapted to the ground points of `anchors`; `stream` separates
/// independent integrals under one seed.
inline IntegralEstimate mc_fiber(FiberIntegrand const &f, int n, GroundConfig const &anchors, McConfig const &cfg,
                                 std::uint64_t stream = 0)
{
	if (cfg.samples < 1)
		throw std::invalid_argument("mc_fiber needs at least one sample");
	if (n < 1)
		throw std::invalid_argument("mc_fiber needs at least one air point");
	if (cfg.batch < 1)
		throw std::invalid_argument("mc_fiber batch size must be positive");
	detail::FiberSampler sampler(cfg.transform, anchors.z1, anchors.z2);
	std::uint64_t nbatch = (cfg.samples + cfg.batch - 1) / cfg.batch;
	std::vector<detail::BatchSum> sums(nbatch);
	std::atomic<std::uint64_t> next{0};
	std::exception_ptr failure;
	std::atomic<bool> failed{false};

	auto work = [&] {
		std::vector<complex> air(n);
		for (std::uint64_t b; !failed && (b = next.fetch_add(1)) < nbatch;)
		{
			try
			{
				Substream rng(cfg.seed, stream, b);
				std::uint64_t lo = b * cfg.batch, hi = std::min(cfg.samples, lo + cfg.batch);
				auto &s = sums[b];
				for (std::uint64_t i = lo; i < hi; ++i)
				{
					++s.count;
					double q = sampler.draw(rng, air);
					double x = q > 0.0 ? f(air) / q : std::nan("");
					if (!std::isfinite(x))
					{
						++s.rejected;
						continue;
					}
					s.sum += x;
					s.sumsq += x * x;
				}
			}
			catch (...)
			{
				if (!failed.exchange(true))
					failure = std::current_exception();
			}
		}
	};
	int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(nbatch)));
	if (threads == 1)
		work();
	else
	{
		std::vector<std::thread> pool;
		for (int t = 0; t < threads; ++t)
			pool.emplace_back(work);
		for (auto &t : pool)
			t.join();
	}
	if (failure)
		std::rethrow_exception(failure);

	detail::BatchSum tot;
	for (auto const &s : sums)
	{
		tot.sum += s.sum;
		tot.sumsq += s.sumsq;
		tot.count += s.count;
		tot.rejected += s.rejected;
	}
	double N = static_cast<double>(tot.count);
	if (tot.rejected > cfg.reject_threshold * N)
		throw McError("mc_fiber: " + std::to_string(tot.rejected) + " of " + std::to_string(tot.count) +
		                  " samples non-finite (threshold " + std::to_string(cfg.reject_threshold) + ")",
		              tot.rejected, tot.count);
	IntegralEstimate est;
	est.value = tot.sum / N;
	double var = tot.count > 1 ? std::max(0.0, (tot.sumsq / N - est.value * est.value) * N / (N - 1.0)) : 0.0;
	est.sigma = std::sqrt(var / N);
	est.samples = tot.count;
	est.rejected = tot.rejected;
	return est;
}

} // namespace atassoc
