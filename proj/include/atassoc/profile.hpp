#pragma once

// Path profiles of hat-omega = omega_R - omega_L, and weight functions on
// boundary charts, both by fiber Monte Carlo.

#include <string>

#include "cache.hpp"
#include "montecarlo.hpp"

namespace atassoc {

inline ProfileKey profile_key(LieGraph const &g, GridConfig const &grid, McConfig const &mc)
{
	ProfileKey k;
	auto canon = canonical_representative(g);
	k.encoding_hex = to_hex(encoding_of(g));
	if (canon.edges() != g.edges())
		k.encoding_hex += "@" + key_hash(to_json(g).dump());
	k.path = grid.path;
	k.transform = to_string(mc.transform);
	k.easing = grid.easing;
	k.nodes = grid.nodes;
	k.samples = mc.samples;
	k.seed = mc.seed;
	k.batch = mc.batch;
	return k;
}

/// f(s_j) with hat-omega = f ds at every grid node; served from `cache`
/// when an entry with the same content key exists.
inline Profile profile(LieGraph const &g, GridConfig const &grid, McConfig const &mc, Cache const *cache = nullptr)
{
	require_valid(g);
	auto key = profile_key(g, grid, mc);
	auto id = key.str();
	if (cache)
		if (auto hit = cache->get_profile(id))
			return *hit;

	PathGrid pg(grid.nodes, grid.easing);
	auto path = make_path(grid.path);
	VertexId root = g.root();
	Profile p;
	p.id = id;
	p.encoding = key.encoding_hex;
	p.path = grid.path;
	p.transform = key.transform;
	p.easing = grid.easing;
	p.samples = mc.samples;
	p.seed = mc.seed;
	p.batch = mc.batch;
	p.convention = kConventionVersion;
	p.s = pg.s();
	for (int j = 0; j < pg.size(); ++j)
	{
		auto gc = GroundConfig::on_path(path, pg.s()[j]);
		auto est = mc_fiber([&](std::span<complex const> air) { return hat_integrand_unchecked(g, root, gc, air); },
		                    g.n(), gc, mc, fnv1a64(id + "#" + std::to_string(j)));
		p.values.push_back(est.value);
		p.sigmas.push_back(est.sigma);
		p.rejected += est.rejected;
	}
	if (cache)
		cache->put_profile(id, p);
	return p;
}

/// Integral of hat-omega along the whole path, from its profile.
inline IntegralEstimate path_integral(Profile const &p)
{
	PathGrid pg(p.nodes(), p.easing);
	std::vector<Profile const *> one{&p};
	return simplex_iterated(pg, one);
}

/// Kontsevich weight function: the fiber integral of det M0 over the air
/// points at a fixed ground configuration.
inline IntegralEstimate weight_function(LieGraph const &g, GroundConfig const &chart, McConfig const &mc)
{
	require_valid(g);
	auto est = mc_fiber([&](std::span<complex const> air) { return fiber_integrand_unchecked(g, chart, air); }, g.n(),
	                    chart, mc, fnv1a64("weight;" + to_hex(encoding_of(g))));
	est.provenance.push_back("weight;g=" + to_hex(encoding_of(g)) + ";seed=" + std::to_string(mc.seed) +
	                         ";samples=" + std::to_string(mc.samples) + ";transform=" + to_string(mc.transform));
	return est;
}

} // namespace atassoc
