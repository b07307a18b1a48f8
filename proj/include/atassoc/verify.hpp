#pragma once

/**
 * @file verify.hpp
 * @brief Pass/fail checks of associator properties on computed series.
 *
 * Numeric checks pass when every residual is within
 * max(sigmas * stderr, floor) + bias. Formal checks require exact
 * cancellation of the rational structure.
 */

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "transport.hpp"
#include "zeta.hpp"

namespace atassoc {

struct Report
{
	std::string check;
	double target = 0.0;
	double estimate = 0.0;
	double stderr_ = 0.0;
	double tolerance = 0.0;
	bool pass = false;
	std::vector<std::string> provenance;
	nlohmann::json details = nlohmann::json::object();

	nlohmann::json to_json() const
	{
		return {{"check", check},         {"target", target}, {"estimate", estimate},
		        {"stderr", stderr_},      {"tolerance", tolerance}, {"pass", pass},
		        {"provenance", provenance}, {"details", details}};
	}
};

struct Tolerance
{
	double sigmas = 3.0;
	double floor = 0.0;
	double bias = 0.0;

	double allowed(double sigma) const { return std::max(sigmas * sigma, floor) + bias; }
};

/// B_0 .. B_n exactly, with B_1 = -1/2.
inline std::vector<Rational> bernoulli_numbers(int n)
{
	std::vector<Rational> b(n + 1);
	b[0] = 1;
	for (int m = 1; m <= n; ++m)
	{
		Rational s(0);
		for (int k = 0; k < m; ++k)
			s += detail::binom(m + 1, k) * b[k];
		b[m] = -s / (m + 1);
	}
	return b;
}

/// B_n / (2 n!), the coefficient of A^{n-1} B.
inline Rational bernoulli_target(int n)
{
	if (n < 1)
		throw std::domain_error("bernoulli_target needs n >= 1");
	mpz_class f = 1;
	for (int k = 2; k <= n; ++k)
		f *= k;
	return Rational(bernoulli_numbers(n)[n] / (2 * Rational(f)));
}

inline Word depth_one_word(int n) { return Word::power(Letter::A, n - 1) * Word::letter(Letter::B); }

inline Report check_bernoulli(int n, NCSeries<Uncertain> const &s, Tolerance tol = {},
                              std::vector<std::string> provenance = {})
{
	if (s.truncation() < n)
		throw std::invalid_argument("check_bernoulli: series truncated below degree " + std::to_string(n));
	Report r;
	r.check = "bernoulli(" + std::to_string(n) + ")";
	auto target = bernoulli_target(n);
	auto c = s.coeff(depth_one_word(n));
	r.target = target.get_d();
	r.estimate = c.value;
	r.stderr_ = c.err;
	r.tolerance = tol.allowed(c.err);
	r.pass = std::abs(c.value - r.target) <= r.tolerance;
	r.provenance = std::move(provenance);
	r.details = {{"word", depth_one_word(n).str()}, {"target_exact", to_string(target)},
	             {"delta", c.value - r.target}};
	return r;
}

/// Every odd-degree coefficient must vanish.
inline Report check_even(NCSeries<Uncertain> const &s, Tolerance tol = {}, std::vector<std::string> provenance = {})
{
	Report r;
	r.check = "even";
	r.pass = true;
	double worst_ratio = -1.0;
	nlohmann::json words = nlohmann::json::array();
	for (int d = 1; d <= s.truncation(); d += 2)
		for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b)
		{
			std::string str(d, 'A');
			for (int i = 0; i < d; ++i)
				if ((b >> (d - 1 - i)) & 1u)
					str[i] = 'B';
			auto c = s.coeff(Word::parse(str));
			double allowed = tol.allowed(c.err);
			bool ok = std::abs(c.value) <= allowed;
			r.pass = r.pass && ok;
			words.push_back({{"word", str}, {"estimate", c.value}, {"stderr", c.err}, {"pass", ok}});
			double ratio = allowed > 0 ? std::abs(c.value) / allowed : (c.value == 0 ? 0 : INFINITY);
			if (ratio > worst_ratio)
			{
				worst_ratio = ratio;
				r.estimate = c.value;
				r.stderr_ = c.err;
				r.tolerance = allowed;
			}
		}
	r.provenance = std::move(provenance);
	r.details = {{"words", words}};
	return r;
}

namespace detail {

template <class S> NCSeries<S> duality_residual(NCSeries<S> const &s)
{
	return s * swap_letters(s) - NCSeries<S>::one(s.truncation());
}

} // namespace detail

/// Phi(A,B) Phi(B,A) = 1 coefficientwise, errors propagated through the product.
inline Report check_duality(NCSeries<Uncertain> const &s, Tolerance tol = {}, std::vector<std::string> provenance = {})
{
	Report r;
	r.check = "duality";
	r.pass = true;
	auto res = detail::duality_residual(s);
	nlohmann::json words = nlohmann::json::array();
	double worst = -1.0;
	for (auto const &[w, c] : res.terms())
	{
		double allowed = tol.allowed(c.err);
		bool ok = std::abs(c.value) <= allowed;
		r.pass = r.pass && ok;
		words.push_back({{"word", w.str()}, {"residual", c.value}, {"stderr", c.err}, {"pass", ok}});
		if (double ratio = std::abs(c.value) / std::max(allowed, 1e-300); ratio > worst)
		{
			worst = ratio;
			r.estimate = c.value;
			r.stderr_ = c.err;
			r.tolerance = allowed;
		}
	}
	r.provenance = std::move(provenance);
	r.details = {{"residuals", words}};
	return r;
}

/// Formal duality: in the residual every symbol with two or more slots must
/// cancel exactly. The remaining single-slot relations are recorded in the
/// details; they hold only as identities between integrals.
inline Report check_duality(NCSeries<FormalExpr> const &s)
{
	Report r;
	r.check = "duality-formal";
	r.pass = true;
	auto res = detail::duality_residual(s);
	nlohmann::json linear = nlohmann::json::array(), bad = nlohmann::json::array();
	for (auto const &[w, e] : res.terms())
	{
		FormalExpr multi;
		for (std::size_t k = 2; k <= e.max_slots(); ++k)
			multi += e.slot_part(k);
		if (!multi.empty())
		{
			r.pass = false;
			bad.push_back({{"word", w.str()}, {"residual", to_string(multi)}});
		}
		auto lin = e.slot_part(1) + e.slot_part(0);
		if (!lin.empty())
			linear.push_back({{"word", w.str()}, {"residual", to_string(lin)}});
	}
	r.details = {{"uncancelled", bad}, {"single_slot_relations", linear}};
	return r;
}

/// Numeric duality with the residual evaluated symbol by symbol, so errors
/// of shared profiles are propagated jointly.
inline Report check_duality(NCSeries<FormalExpr> const &s, ProfileSet const &profiles, PathGrid const &grid,
                            Tolerance tol = {})
{
	Report r;
	r.check = "duality-numeric";
	r.pass = true;
	auto res = detail::duality_residual(s);
	nlohmann::json words = nlohmann::json::array();
	std::set<std::string> prov;
	double worst = -1.0;
	for (auto const &[w, e] : res.terms())
	{
		auto est = evaluate(e, profiles, grid);
		double allowed = tol.allowed(est.sigma);
		bool ok = std::abs(est.value) <= allowed;
		r.pass = r.pass && ok;
		prov.insert(est.provenance.begin(), est.provenance.end());
		words.push_back({{"word", w.str()}, {"residual", est.value}, {"stderr", est.sigma}, {"pass", ok}});
		if (double ratio = std::abs(est.value) / std::max(allowed, 1e-300); ratio > worst)
		{
			worst = ratio;
			r.estimate = est.value;
			r.stderr_ = est.sigma;
			r.tolerance = allowed;
		}
	}
	r.provenance.assign(prov.begin(), prov.end());
	r.details = {{"residuals", words}};
	return r;
}

/// Shuffle relations coeff(u) coeff(v) = sum_{w in u sh v} coeff(w).
template <class S> Report check_grouplike(NCSeries<S> const &s, Tolerance tol = {}, std::vector<std::string> provenance = {})
{
	Report r;
	r.check = std::string("grouplike-") + scalar_kind<S>::name;
	auto g = is_grouplike(s, tol.floor + tol.bias, tol.sigmas);
	r.pass = g.pass;
	r.estimate = g.max_residual;
	r.tolerance = tol.floor + tol.bias;
	r.provenance = std::move(provenance);
	nlohmann::json v = nlohmann::json::array();
	for (auto const &x : g.violations)
		v.push_back({{"u", x.u.str()}, {"v", x.v.str()}, {"residual", x.detail}, {"allowed", x.allowed}});
	r.details = {{"violations", v}};
	return r;
}

inline nlohmann::json zeta_reference_json()
{
	return {{"zeta(2)", zeta(2)},
	        {"zeta(3)", zeta(3)},
	        {"zeta(5)", zeta(5)},
	        {"zeta(3,5)", double_zeta(3, 5)},
	        {"felder_reference", felder_reference()}};
}

} // namespace atassoc
