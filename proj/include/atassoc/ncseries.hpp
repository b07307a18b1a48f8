#pragma once

/**
 * @file ncseries.hpp
 * @brief Truncated free associative algebra C<<A,B>> over a scalar ring.
 *
 * Series are stored sparsely, keyed by Word, and never hold keys above their
 * truncation degree. Any type with ring operators, scaled(S, Rational),
 * is_zero, magnitude and error_bound works as the scalar.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalar.hpp"
#include "word.hpp"

namespace atassoc {

template <class S> class NCSeries
{
  public:
	using scalar_type = S;
	using map_type = std::map<Word, S>;

	explicit NCSeries(int truncation) : n_(truncation)
	{
		if (truncation < 0)
			throw std::invalid_argument("truncation degree must be >= 0");
	}

	static NCSeries one(int n) { return monomial(Word{}, S(1), n); }
	static NCSeries letter(Letter l, int n) { return monomial(Word::letter(l), S(1), n); }
	static NCSeries monomial(Word w, S c, int n)
	{
		NCSeries r(n);
		r.add(w, c);
		return r;
	}

	int truncation() const { return n_; }
	map_type const &terms() const { return terms_; }
	bool empty() const { return terms_.empty(); }

	/// Stored coefficient or zero. Words above the truncation are rejected.
	S coeff(Word const &w) const
	{
		if (w.degree() > n_)
			throw std::out_of_range("word '" + w.str() + "' exceeds truncation degree");
		auto it = terms_.find(w);
		return it == terms_.end() ? S(0) : it->second;
	}

	/// Adds c to the coefficient of w; silently ignores words above truncation.
	void add(Word const &w, S const &c)
	{
		if (w.degree() > n_ || is_zero(c))
			return;
		auto [it, inserted] = terms_.try_emplace(w, c);
		if (!inserted)
		{
			it->second += c;
			if (is_zero(it->second))
				terms_.erase(it);
		}
	}

	void set(Word const &w, S c)
	{
		if (w.degree() > n_)
			throw std::out_of_range("word '" + w.str() + "' exceeds truncation degree");
		terms_.erase(w);
		add(w, c);
	}

	S constant_term() const { return coeff(Word{}); }

	NCSeries truncated(int n) const
	{
		NCSeries r(std::min(n, n_));
		for (auto const &[w, c] : terms_)
			if (w.degree() <= r.n_)
				r.terms_.emplace(w, c);
		return r;
	}

	NCSeries degree_part(int d) const
	{
		NCSeries r(n_);
		for (auto const &[w, c] : terms_)
			if (w.degree() == d)
				r.terms_.emplace(w, c);
		return r;
	}

	/// Drops words with more than `max_depth` B letters.
	NCSeries depth_truncated(int max_depth) const
	{
		NCSeries r(n_);
		for (auto const &[w, c] : terms_)
			if (w.depth() <= max_depth)
				r.terms_.emplace(w, c);
		return r;
	}

	int min_degree() const
	{
		int d = n_ + 1;
		for (auto const &[w, c] : terms_)
			d = std::min(d, w.degree());
		return d;
	}

	NCSeries &operator+=(NCSeries const &o)
	{
		n_ = std::min(n_, o.n_);
		drop_above(n_);
		for (auto const &[w, c] : o.terms_)
			add(w, c);
		return *this;
	}
	NCSeries &operator-=(NCSeries const &o)
	{
		n_ = std::min(n_, o.n_);
		drop_above(n_);
		for (auto const &[w, c] : o.terms_)
			add(w, -c);
		return *this;
	}
	NCSeries operator-() const
	{
		NCSeries r(n_);
		for (auto const &[w, c] : terms_)
			r.terms_.emplace(w, -c);
		return r;
	}
	friend NCSeries operator+(NCSeries a, NCSeries const &b) { return a += b; }
	friend NCSeries operator-(NCSeries a, NCSeries const &b) { return a -= b; }

	friend NCSeries operator*(Rational const &q, NCSeries const &s)
	{
		NCSeries r(s.n_);
		for (auto const &[w, c] : s.terms_)
			r.add(w, scaled(c, q));
		return r;
	}

	/// Cauchy product on words; truncation min(N_S, N_T).
	friend NCSeries operator*(NCSeries const &s, NCSeries const &t)
	{
		NCSeries r(std::min(s.n_, t.n_));
		for (auto const &[u, a] : s.terms_)
		{
			if (u.degree() > r.n_)
				continue;
			for (auto const &[v, b] : t.terms_)
				if (u.degree() + v.degree() <= r.n_)
					r.add(u * v, a * b);
		}
		return r;
	}

	friend bool operator==(NCSeries const &a, NCSeries const &b)
	{
		return a.n_ == b.n_ && a.terms_ == b.terms_;
	}

	/// Equality of coefficients, ignoring the declared truncation.
	bool same_terms(NCSeries const &o) const { return terms_ == o.terms_; }

  private:
	void drop_above(int n)
	{
		for (auto it = terms_.begin(); it != terms_.end();)
			it = it->first.degree() > n ? terms_.erase(it) : std::next(it);
	}

	int n_;
	map_type terms_;
};

template <class S> NCSeries<S> mul(NCSeries<S> const &s, NCSeries<S> const &t) { return s * t; }

template <class S> S coeff(NCSeries<S> const &s, Word const &w) { return s.coeff(w); }

template <class S> NCSeries<S> commutator(NCSeries<S> const &x, NCSeries<S> const &y)
{
	return x * y - y * x;
}

/// exp of a constant-free series, truncated at its own degree.
template <class S> NCSeries<S> exp(NCSeries<S> const &s)
{
	if (!is_zero(s.constant_term()))
		throw std::domain_error("exp requires a series with zero constant term");
	int n = s.truncation();
	auto result = NCSeries<S>::one(n);
	auto power = NCSeries<S>::one(n);
	Rational inv_fact(1);
	for (int k = 1; k <= n; ++k)
	{
		power = power * s;
		if (power.empty())
			break;
		inv_fact /= k;
		result += inv_fact * power;
	}
	return result;
}

/// log of a series with constant term exactly 1.
template <class S> NCSeries<S> log(NCSeries<S> const &s)
{
	if (!(s.constant_term() == S(1)))
		throw std::domain_error("log requires a series with constant term 1");
	int n = s.truncation();
	auto x = s - NCSeries<S>::one(n);
	NCSeries<S> result(n);
	auto power = NCSeries<S>::one(n);
	for (int k = 1; k <= n; ++k)
	{
		power = power * x;
		if (power.empty())
			break;
		result += make_rational(k % 2 == 1 ? 1 : -1, k) * power;
	}
	return result;
}

/// All C(|u|+|v|, |u|) interleavings of u and v, with multiplicity.
inline std::vector<Word> shuffle(Word const &u, Word const &v)
{
	int m = u.degree(), n = v.degree(), total = m + n;
	if (total > Word::max_length)
		throw std::length_error("shuffle result too long");
	std::vector<Word> out;
	// positions taken by u, as an increasing index vector
	std::vector<int> pos(m);
	for (int i = 0; i < m; ++i)
		pos[i] = i;
	for (;;)
	{
		Word w;
		int iu = 0, iv = 0;
		for (int k = 0; k < total; ++k)
		{
			bool from_u = iu < m && pos[iu] == k;
			w = w * Word::letter(from_u ? u[iu++] : v[iv++]);
		}
		out.push_back(w);
		int i = m - 1;
		while (i >= 0 && pos[i] == total - m + i)
			--i;
		if (i < 0)
			break;
		++pos[i];
		for (int j = i + 1; j < m; ++j)
			pos[j] = pos[j - 1] + 1;
	}
	return out;
}

/// Lie monomial in A, B as a binary bracket tree.
class BracketTree
{
  public:
	static BracketTree leaf(Letter l)
	{
		auto n = std::make_shared<Node>();
		n->letter = l;
		n->degree = 1;
		n->depth = l == Letter::B ? 1 : 0;
		return BracketTree(std::move(n));
	}
	static BracketTree node(BracketTree l, BracketTree r)
	{
		auto n = std::make_shared<Node>();
		n->degree = l.degree() + r.degree();
		n->depth = l.depth() + r.depth();
		n->left = std::move(l.node_);
		n->right = std::move(r.node_);
		return BracketTree(std::move(n));
	}

	/// Parses "A", "B" or "[x,y]".
	static BracketTree parse(std::string_view s)
	{
		std::size_t pos = 0;
		auto t = parse_at(s, pos);
		if (pos != s.size())
			throw std::invalid_argument("trailing characters in bracket '" + std::string(s) + "'");
		return t;
	}

	bool is_leaf() const { return !node_->left; }
	Letter letter() const { return node_->letter; }
	BracketTree left() const { return BracketTree(node_->left); }
	BracketTree right() const { return BracketTree(node_->right); }
	int degree() const { return node_->degree; }
	int depth() const { return node_->depth; }

	std::string str() const
	{
		if (is_leaf())
			return std::string(1, to_char(letter()));
		return "[" + left().str() + "," + right().str() + "]";
	}

	friend bool operator==(BracketTree const &a, BracketTree const &b) { return a.str() == b.str(); }

  private:
	struct Node
	{
		Letter letter = Letter::A;
		int degree = 0;
		int depth = 0;
		std::shared_ptr<Node const> left, right;
	};

	explicit BracketTree(std::shared_ptr<Node const> n) : node_(std::move(n)) {}

	static BracketTree parse_at(std::string_view s, std::size_t &pos)
	{
		if (pos >= s.size())
			throw std::invalid_argument("unexpected end of bracket expression");
		char c = s[pos];
		if (c == 'A' || c == 'B')
		{
			++pos;
			return leaf(c == 'A' ? Letter::A : Letter::B);
		}
		if (c != '[')
			throw std::invalid_argument(std::string("unexpected character '") + c + "' in bracket");
		++pos;
		auto l = parse_at(s, pos);
		if (pos >= s.size() || s[pos] != ',')
			throw std::invalid_argument("expected ',' in bracket");
		++pos;
		auto r = parse_at(s, pos);
		if (pos >= s.size() || s[pos] != ']')
			throw std::invalid_argument("expected ']' in bracket");
		++pos;
		return node(std::move(l), std::move(r));
	}

	std::shared_ptr<Node const> node_;
};

/// node(l, r) -> expand(l) expand(r) - expand(r) expand(l), exact.
inline NCSeries<Rational> bracket_expand(BracketTree const &t, int n)
{
	if (t.degree() > n)
		throw std::invalid_argument("bracket degree exceeds truncation");
	if (t.is_leaf())
		return NCSeries<Rational>::letter(t.letter(), n);
	return commutator(bracket_expand(t.left(), n), bracket_expand(t.right(), n));
}

template <class S> struct SubstitutionResult
{
	NCSeries<S> series;
	/// set when images could push mass into lower degrees than the source
	/// word (constant terms) or carry less precision than the source
	bool truncated = false;
};

/// Applies the algebra homomorphism A -> img_a, B -> img_b word by word.
template <class S>
SubstitutionResult<S> substitute(NCSeries<S> const &s, NCSeries<S> const &img_a, NCSeries<S> const &img_b)
{
	int n = s.truncation();
	SubstitutionResult<S> out{NCSeries<S>(n), false};
	if (!is_zero(img_a.constant_term()) || !is_zero(img_b.constant_term()))
		out.truncated = true;
	if (img_a.truncation() < n || img_b.truncation() < n)
		out.truncated = true;
	auto pad = [n](NCSeries<S> const &x) {
		NCSeries<S> r(n);
		for (auto const &[w, c] : x.terms())
			r.add(w, c);
		return r;
	};
	NCSeries<S> a = pad(img_a), b = pad(img_b);
	for (auto const &[w, c] : s.terms())
	{
		auto term = NCSeries<S>::monomial(Word{}, c, n);
		for (int i = 0; i < w.degree() && !term.empty(); ++i)
			term = term * (w[i] == Letter::A ? a : b);
		out.series += term;
	}
	return out;
}

struct ShuffleViolation
{
	Word u, v;
	double residual = 0.0;
	double allowed = 0.0;
	std::string detail;
};

struct GrouplikeReport
{
	bool pass = true;
	double max_residual = 0.0;
	std::vector<ShuffleViolation> violations;
};

namespace detail {
template <class S> std::string scalar_str(S const &s)
{
	if constexpr (std::is_same_v<S, Rational>)
		return to_string(s);
	else
	{
		std::ostringstream os;
		os << s;
		return os.str();
	}
}
} // namespace detail

/// Checks coeff(u) coeff(v) = sum over shuffles for all nonempty u, v with
/// |u| + |v| <= N, allowing tol + sigmas * propagated error.
template <class S> GrouplikeReport is_grouplike(NCSeries<S> const &s, double tol = 0.0, double sigmas = 3.0)
{
	if (!(s.constant_term() == S(1)))
		throw std::domain_error("group-likeness requires constant term 1");
	GrouplikeReport rep;
	int n = s.truncation();
	std::vector<Word> words;
	for (int d = 1; d < n; ++d)
		for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b)
		{
			std::string str(d, 'A');
			for (int i = 0; i < d; ++i)
				if ((b >> (d - 1 - i)) & 1u)
					str[i] = 'B';
			words.push_back(Word::parse(str));
		}
	for (auto const &u : words)
		for (auto const &v : words)
		{
			if (u.degree() + v.degree() > n || u > v)
				continue;
			S lhs = s.coeff(u) * s.coeff(v);
			S rhs(0);
			for (auto const &w : shuffle(u, v))
				rhs += s.coeff(w);
			S r = lhs - rhs;
			double res = magnitude(r);
			double allowed = tol + sigmas * error_bound(r);
			rep.max_residual = std::max(rep.max_residual, res);
			if (res > allowed)
			{
				rep.pass = false;
				rep.violations.push_back({u, v, res, allowed, detail::scalar_str(r)});
			}
		}
	return rep;
}

// ---- serialization ----------------------------------------------------------

inline nlohmann::json scalar_to_json(Rational const &q) { return to_string(q); }
inline nlohmann::json scalar_to_json(Uncertain const &u) { return {{"value", u.value}, {"err", u.err}}; }

inline void scalar_from_json(nlohmann::json const &j, Rational &q) { q = parse_rational(j.get<std::string>()); }
inline void scalar_from_json(nlohmann::json const &j, Uncertain &u)
{
	u = Uncertain(j.at("value").get<double>(), j.at("err").get<double>());
}

template <class S> nlohmann::json to_json(NCSeries<S> const &s)
{
	nlohmann::json coeffs = nlohmann::json::object();
	for (auto const &[w, c] : s.terms())
		coeffs[w.str()] = scalar_to_json(c);
	return {{"truncation", s.truncation()}, {"kind", scalar_kind<S>::name}, {"coefficients", coeffs}};
}

template <class S> NCSeries<S> series_from_json(nlohmann::json const &j)
{
	if (j.at("kind").get<std::string>() != scalar_kind<S>::name)
		throw std::invalid_argument("scalar kind mismatch in series JSON");
	NCSeries<S> s(j.at("truncation").get<int>());
	for (auto const &[key, val] : j.at("coefficients").items())
	{
		S c;
		scalar_from_json(val, c);
		s.set(Word::parse(key), c);
	}
	return s;
}

/// Runtime-tagged series, for inputs whose scalar kind is only known after
/// parsing.
using AnySeries = std::variant<NCSeries<Rational>, NCSeries<Uncertain>>;

inline AnySeries any_series_from_json(nlohmann::json const &j)
{
	auto kind = j.at("kind").get<std::string>();
	if (kind == scalar_kind<Rational>::name)
		return series_from_json<Rational>(j);
	if (kind == scalar_kind<Uncertain>::name)
		return series_from_json<Uncertain>(j);
	throw std::invalid_argument("unknown series kind '" + kind + "'");
}

inline AnySeries mul(AnySeries const &a, AnySeries const &b)
{
	if (a.index() != b.index())
		throw std::invalid_argument("scalar kind mismatch in series product");
	return std::visit(
	    [&](auto const &x) -> AnySeries {
		    using T = std::decay_t<decltype(x)>;
		    return x * std::get<T>(b);
	    },
	    a);
}

} // namespace atassoc
