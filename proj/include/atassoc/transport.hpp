#pragma once

/**
 * @file transport.hpp
 * @brief The path-ordered exponential of l + D along the eye path, applied to 1.
 *
 * With hat-omega = sum over nonzero classes G of hat-omega_G G(A,B),
 *
 *   Phi = sum_k int_{s_1<...<s_k} (l + D)(s_k) ... (l + D)(s_1) (1),
 *
 * where l(s) is left multiplication by hat-omega(s) and D(s) the derivation
 * A -> 0, B -> [B, hat-omega(s)]. The operator at the latest parameter acts
 * leftmost. Formal mode keeps each coefficient as a FormalExpr in II symbols;
 * numeric mode substitutes fiber Monte-Carlo estimates for the symbols.
 */

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "formal.hpp"
#include "profile.hpp"

namespace atassoc {

/// Largest total degree accepted by the formal expansion.
inline constexpr int kFormalCap = 10;

// ---- derivations ------------------------------------------------------------

/// The derivation A -> 0, B -> [B, g], extended by Leibniz; `overflow` is
/// set when nonzero terms beyond the truncation were dropped.
template <class S> NCSeries<S> apply_derivation(NCSeries<S> const &x, NCSeries<S> const &g, bool *overflow = nullptr)
{
	if (!is_zero(g.constant_term()))
		throw std::domain_error("apply_derivation: g must be constant-free");
	int n = std::min(x.truncation(), g.truncation());
	int big = x.truncation() + g.truncation() + 1;
	auto b = NCSeries<S>::letter(Letter::B, big);
	NCSeries<S> gg(big);
	for (auto const &[w, c] : g.terms())
		gg.add(w, c);
	auto img = b * gg - gg * b;
	NCSeries<S> out(n);
	bool over = false;
	for (auto const &[w, c] : x.terms())
		for (int i = 0; i < w.degree(); ++i)
		{
			if (w[i] != Letter::B)
				continue;
			Word pre = w.sub(0, i), post = w.sub(i + 1, w.degree() - i - 1);
			for (auto const &[v, d] : img.terms())
			{
				if (pre.degree() + v.degree() + post.degree() > n)
				{
					over = true;
					continue;
				}
				out.add(pre * v * post, c * d);
			}
		}
	if (overflow)
		*overflow = over;
	return out;
}

// ---- classes ----------------------------------------------------------------

struct LieClass
{
	std::string encoding;
	int n = 0;
	int depth = 0;
	LieGraph canonical;
	/// expanded monomial of the canonical representative, truncation kFormalCap
	NCSeries<Rational> monomial{kFormalCap};
};

/// Nonzero geometric classes with n air vertices, in encoding order.
inline std::vector<LieClass> const &nonzero_classes(int n)
{
	if (n < 1 || n + 1 > kFormalCap)
		throw std::invalid_argument("nonzero_classes: n out of range");
	static std::mutex mu;
	static std::map<int, std::vector<LieClass>> memo;
	std::lock_guard lock(mu);
	if (auto it = memo.find(n); it != memo.end())
		return it->second;
	std::vector<LieClass> out;
	for (auto const &gc : enumerate_geometric(n))
	{
		auto mono = to_lie_monomial(gc.canonical);
		auto expanded = bracket_expand(mono, kFormalCap);
		if (expanded.empty())
			continue;
		out.push_back({gc.encoding, n, mono.depth(), gc.canonical, std::move(expanded)});
	}
	return memo.emplace(n, std::move(out)).first->second;
}

inline LieClass const &lie_class(std::string const &enc)
{
	int n = static_cast<int>(std::count(enc.begin(), enc.end(), '('));
	for (auto const &c : nonzero_classes(n))
		if (c.encoding == enc)
			return c;
	throw std::invalid_argument("not a nonzero class: " + to_hex(enc));
}

// ---- operator words ---------------------------------------------------------

/// Operators over {l, D}, latest slot first: "Dl" means D(s_2) l(s_1).
struct OperatorWord
{
	std::string ops;

	int length() const { return static_cast<int>(ops.size()); }
	/// D annihilates 1, so the earliest operator must be l
	bool can_contribute() const { return !ops.empty() && ops.back() == 'l'; }
};

inline std::vector<OperatorWord> operator_words(int k)
{
	std::vector<OperatorWord> out;
	for (std::uint32_t b = 0; b < (1u << k); ++b)
	{
		std::string s(k, 'l');
		for (int i = 0; i < k; ++i)
			if ((b >> (k - 1 - i)) & 1u)
				s[i] = 'D';
		out.push_back({s});
	}
	return out;
}

/// (op, g) applied to x.
inline NCSeries<Rational> apply_op(char op, NCSeries<Rational> const &g, NCSeries<Rational> const &x)
{
	return op == 'l' ? g * x : apply_derivation(x, g);
}

struct ExpansionTerm
{
	OperatorWord word;
	/// class encodings, latest slot first
	Symbol classes;
	NCSeries<Rational> algebra{0};
	FormalExpr symbol;
};

namespace detail {

/// Tuples of nonzero classes (latest first) with sum of (n_i + 1) <= N and
/// total depth <= depth_cap.
inline std::vector<std::vector<LieClass const *>> class_tuples(int k, int N, int depth_cap)
{
	std::vector<std::vector<LieClass const *>> out;
	std::vector<LieClass const *> cur;
	auto rec = [&](auto &self, int degree, int depth) -> void {
		if (static_cast<int>(cur.size()) == k)
		{
			out.push_back(cur);
			return;
		}
		int slots_left = k - static_cast<int>(cur.size()) - 1;
		for (int n = 1; degree + n + 1 + 2 * slots_left <= N; ++n)
			for (auto const &c : nonzero_classes(n))
			{
				if (depth + c.depth + slots_left > depth_cap)
					continue;
				cur.push_back(&c);
				self(self, degree + n + 1, depth + c.depth);
				cur.pop_back();
			}
	};
	rec(rec, 0, 0);
	return out;
}

} // namespace detail

/// Every nonzero contribution of order k: operator word, class tuple and the
/// resulting algebra element, truncated at degree N and depth depth_cap.
inline std::vector<ExpansionTerm> expand_order(int k, int N, int depth_cap)
{
	if (k < 1)
		throw std::invalid_argument("expand_order needs k >= 1");
	if (N > kFormalCap)
		throw std::invalid_argument("expand_order: degree cap exceeded");
	std::vector<ExpansionTerm> out;
	auto tuples = detail::class_tuples(k, N, depth_cap);
	for (auto const &word : operator_words(k))
	{
		if (!word.can_contribute())
			continue;
		for (auto const &tuple : tuples)
		{
			auto x = NCSeries<Rational>::one(N);
			for (int m = k - 1; m >= 0 && !x.empty(); --m)
				x = apply_op(word.ops[m], tuple[m]->monomial, x).depth_truncated(depth_cap);
			if (x.empty())
				continue;
			Symbol sym;
			for (auto const *c : tuple)
				sym.push_back(c->encoding);
			out.push_back({word, sym, x, FormalExpr::symbol(sym)});
		}
	}
	return out;
}

/// Phi_AT with II-symbol coefficients, up to degree N and depth depth_cap.
inline NCSeries<FormalExpr> formal_series(int N, int depth_cap)
{
	if (N < 0 || N > kFormalCap)
		throw std::invalid_argument("formal_series: degree cap " + std::to_string(N) + " exceeds " +
		                            std::to_string(kFormalCap));
	NCSeries<FormalExpr> phi(N);
	phi.add(Word{}, FormalExpr(1));
	// frontier: latest-first tuple -> (l + D) ... (1) restricted to that tuple
	std::map<Symbol, NCSeries<Rational>> frontier{{Symbol{}, NCSeries<Rational>::one(N)}};
	while (!frontier.empty())
	{
		std::map<Symbol, NCSeries<Rational>> next;
		for (auto const &[sym, x] : frontier)
		{
			int used = x.min_degree();
			for (int n = 1; used + n + 1 <= N; ++n)
				for (auto const &c : nonzero_classes(n))
				{
					auto y = (c.monomial * x + apply_derivation(x, c.monomial)).truncated(N).depth_truncated(depth_cap);
					if (y.empty())
						continue;
					Symbol s{c.encoding};
					s.insert(s.end(), sym.begin(), sym.end());
					auto e = FormalExpr::symbol(s);
					for (auto const &[w, q] : y.terms())
						phi.add(w, Rational(q) * e);
					next.emplace(std::move(s), std::move(y));
				}
		}
		frontier = std::move(next);
	}
	return phi;
}

// ---- closed depth-2 formulas ------------------------------------------------

namespace detail {

inline Rational binom(int n, int k)
{
	if (k < 0 || n < 0 || k > n)
		return Rational(0);
	mpz_class r;
	mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
	return Rational(r);
}

inline int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

} // namespace detail

/// Coefficient of A^{b-1} B A^{a-1} B in the monomial of triple(i, j, k).
inline Rational c_triple(int a, int b, int i, int j, int k)
{
	if (a < 1 || b < 1 || i < 1 || j < 0 || k <= j || i + j + k != a + b - 1)
		throw std::domain_error("c_triple: indices outside the domain");
	using detail::binom;
	using detail::sign_pow;
	Rational r(0);
	for (int i1 = 0; i1 <= i - 1; ++i1)
	{
		int i2 = i - 1 - i1;
		r += binom(i - 1, i1) *
		     (sign_pow(j + i1 - b + 1 + 2 * b) * binom(j + i1, b - 1) + sign_pow(k + i2 - b + 2 * b) * binom(k + i2, b - 1));
	}
	return r;
}

/// Coefficient of A^{b-1} B A^{a-1} B in comb(i-1)(s_2) comb(j-1)(s_1) + D_{comb(i-1)}(comb(j-1)).
inline Rational c_pair(int a, int b, int i, int j)
{
	if (a < 1 || b < 1 || i < 2 || j < 2 || i + j != a + b)
		throw std::domain_error("c_pair: indices outside the domain");
	using detail::binom;
	using detail::sign_pow;
	Rational sum(0);
	for (int j1 = 0; j1 <= j - 1; ++j1)
	{
		int j2 = j - 1 - j1;
		sum += sign_pow(j2) * binom(j - 1, j1) * binom(j2 + i - 1, b - 1);
	}
	Rational r = sign_pow(i - b + 2 * b) * (binom(i - 1, b - 1) - sum);
	if (j == b)
		r += 1;
	return r;
}

/// The printed simplification of c_pair, kept for comparison: it agrees
/// with c_pair only on part of the index range.
inline Rational c_pair_as_printed(int a, int b, int i, int j)
{
	if (a < 1 || b < 1 || i < 2 || j < 2 || i + j != a + b)
		throw std::domain_error("c_pair: indices outside the domain");
	using detail::binom;
	using detail::sign_pow;
	Rational sum(0);
	for (int j1 = 0; j1 <= j - 1; ++j1)
	{
		int j2 = j - 1 - j1;
		sum += sign_pow(j2) * binom(j - 1, j1) * binom(j2 + i - 1, b - 1);
	}
	Rational head = binom(i - 1, b - 1) + (j == b ? binom(j - 1, b - 1) : Rational(0));
	return Rational(sign_pow(i - b + 2 * b) * head - sum);
}

/// Closed form of the coefficient of A^{b-1} B A^{a-1} B.
inline FormalExpr depth2_formula(int a, int b)
{
	if (a < 1 || b < 1)
		throw std::domain_error("depth2_formula needs a, b >= 1");
	if (a + b > kFormalCap)
		throw std::invalid_argument("depth2_formula: degree cap exceeded");
	FormalExpr out;
	int s = a + b - 1;
	for (int i = 1; i <= s; ++i)
		for (int j = 0; i + 2 * j + 1 <= s; ++j)
		{
			int k = s - i - j;
			out += formal_symbol({triple(i, j, k)}, c_triple(a, b, i, j, k));
		}
	for (int i = 2; i + 2 <= a + b; ++i)
	{
		int j = a + b - i;
		out += formal_symbol({comb(i - 1), comb(j - 1)}, c_pair(a, b, i, j));
	}
	return out;
}

// ---- numeric mode -----------------------------------------------------------

struct NumericConfig
{
	GridConfig grid;
	McConfig mc;
	/// total fresh fiber samples allowed (0: unlimited); cached profiles are free
	std::uint64_t sample_budget = 0;
	Cache const *cache = nullptr;
};

/// Profiles of canonical representatives, keyed by class encoding.
using ProfileSet = std::map<std::string, Profile>;

/// Evaluates a symbol combination with errors propagated jointly through
/// every profile it touches.
inline IntegralEstimate evaluate(FormalExpr const &e, ProfileSet const &profiles, PathGrid const &grid)
{
	IntegralEstimate est;
	std::map<std::string, std::pair<Profile const *, std::vector<double>>> total;
	std::set<std::string> ids;
	for (auto const &[sym, q] : e.terms())
	{
		double c = q.get_d();
		if (sym.empty())
		{
			est.value += c;
			continue;
		}
		std::vector<Profile const *> by_slot;
		for (auto it = sym.rbegin(); it != sym.rend(); ++it)
		{
			auto p = profiles.find(*it);
			if (p == profiles.end())
				throw std::out_of_range("evaluate: no profile for class " + to_hex(*it));
			by_slot.push_back(&p->second);
		}
		auto sg = simplex_gradient(grid, std::span<Profile const *const>(by_slot.data(), by_slot.size()));
		est.value += c * sg.value;
		for (auto const &[id, pg] : sg.grads)
		{
			auto &acc = total.try_emplace(id, pg.first, std::vector<double>(pg.second.size(), 0.0)).first->second;
			for (std::size_t j = 0; j < pg.second.size(); ++j)
				acc.second[j] += c * pg.second[j];
			ids.insert(id);
		}
	}
	SimplexGradient joint;
	joint.grads = std::move(total);
	est.sigma = propagated_sigma(joint);
	for (auto const &[id, pg] : joint.grads)
	{
		est.samples += pg.first->samples * pg.first->nodes();
		est.rejected += pg.first->rejected;
	}
	est.provenance.assign(ids.begin(), ids.end());
	return est;
}

struct NumericSeries
{
	/// coefficients with 1-sigma errors
	NCSeries<Uncertain> series{0};
	NCSeries<FormalExpr> formal{0};
	ProfileSet profiles;
	/// classes (hex) whose profiles did not fit in the budget
	std::vector<std::string> missing;
	/// words left out because they need a missing profile
	std::vector<std::string> missing_words;
	std::vector<std::string> provenance;
	bool complete() const { return missing.empty(); }
};

/// Profiles for `classes` (encodings); stops at the budget.
inline void gather_profiles(std::set<std::string> const &classes, NumericConfig const &cfg, ProfileSet &out,
                            std::vector<std::string> &missing)
{
	std::uint64_t spent = 0;
	std::vector<std::string> ordered(classes.begin(), classes.end());
	std::stable_sort(ordered.begin(), ordered.end(), [](auto const &x, auto const &y) { return x.size() < y.size(); });
	for (auto const &enc : ordered)
	{
		if (out.count(enc))
			continue;
		auto const &cls = lie_class(enc);
		bool cached = cfg.cache && cfg.cache->get_profile(profile_key(cls.canonical, cfg.grid, cfg.mc).str());
		std::uint64_t cost = cfg.mc.samples * static_cast<std::uint64_t>(cfg.grid.nodes);
		if (!cached && cfg.sample_budget && spent + cost > cfg.sample_budget)
		{
			missing.push_back(to_hex(enc));
			continue;
		}
		if (!cached)
			spent += cost;
		out.emplace(enc, profile(cls.canonical, cfg.grid, cfg.mc, cfg.cache));
	}
}

inline std::set<std::string> classes_in(NCSeries<FormalExpr> const &s)
{
	std::set<std::string> out;
	for (auto const &[w, e] : s.terms())
		for (auto const &[sym, q] : e.terms())
			out.insert(sym.begin(), sym.end());
	return out;
}

/// Phi_AT with Monte-Carlo coefficients, from the formal expansion.
inline NumericSeries numeric_series(int N, NumericConfig const &cfg, int depth_cap = -1)
{
	NumericSeries out;
	out.formal = formal_series(N, depth_cap < 0 ? N : depth_cap);
	out.series = NCSeries<Uncertain>(N);
	gather_profiles(classes_in(out.formal), cfg, out.profiles, out.missing);
	PathGrid grid(cfg.grid.nodes, cfg.grid.easing);
	std::set<std::string> prov;
	for (auto const &[w, e] : out.formal.terms())
	{
		bool ok = true;
		for (auto const &[sym, q] : e.terms())
			for (auto const &enc : sym)
				ok = ok && out.profiles.count(enc);
		if (!ok)
		{
			out.missing_words.push_back(w.str());
			continue;
		}
		auto est = evaluate(e, out.profiles, grid);
		out.series.add(w, Uncertain(est.value, est.sigma));
		prov.insert(est.provenance.begin(), est.provenance.end());
	}
	out.provenance.assign(prov.begin(), prov.end());
	return out;
}

struct NumericCoefficient
{
	Word word;
	FormalExpr formal;
	IntegralEstimate estimate;
	std::vector<std::string> missing;
	bool complete() const { return missing.empty(); }
};

/// One coefficient in numeric mode; only the profiles it needs are computed.
inline NumericCoefficient numeric_coefficient(Word const &w, NumericConfig const &cfg)
{
	if (w.degree() > kFormalCap)
		throw std::invalid_argument("numeric_coefficient: degree cap exceeded");
	NumericCoefficient out{w, {}, {}, {}};
	out.formal = formal_series(w.degree(), w.depth()).coeff(w);
	std::set<std::string> classes;
	for (auto const &[sym, q] : out.formal.terms())
		classes.insert(sym.begin(), sym.end());
	ProfileSet profiles;
	gather_profiles(classes, cfg, profiles, out.missing);
	if (out.complete())
		out.estimate = evaluate(out.formal, profiles, PathGrid(cfg.grid.nodes, cfg.grid.easing));
	return out;
}

// ---- involutions ------------------------------------------------------------

/// Phi(B, A): letterwise swap of every word.
template <class S> NCSeries<S> swap_letters(NCSeries<S> const &s)
{
	NCSeries<S> r(s.truncation());
	for (auto const &[w, c] : s.terms())
		r.add(w.swapped(), c);
	return r;
}

} // namespace atassoc
