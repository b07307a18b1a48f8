#pragma once

/**
 * @file formal.hpp
 * @brief Exact rational combinations of iterated-integral symbols.
 *
 * II(G_k, ..., G_1) is the integral over 0 < s_1 < ... < s_k < 1 of
 * hat-omega_{G_k}(s_k) ... hat-omega_{G_1}(s_1). A symbol is stored latest
 * slot first as a tuple of class encodings (canonical representatives);
 * the empty tuple is the constant 1. Products follow the shuffle rule for
 * iterated integrals.
 */

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "liegraph.hpp"
#include "scalar.hpp"

namespace atassoc {

using Symbol = std::vector<std::string>;

namespace detail {

inline void shuffle_into(Symbol const &u, Symbol const &v, Rational const &c, std::map<Symbol, Rational> &out)
{
	std::size_t m = u.size(), n = v.size();
	// choose which of the m + n positions come from u
	std::vector<bool> mask(m + n, false);
	std::fill(mask.begin(), mask.begin() + m, true);
	do
	{
		Symbol w;
		w.reserve(m + n);
		std::size_t a = 0, b = 0;
		for (bool from_u : mask)
			w.push_back(from_u ? u[a++] : v[b++]);
		auto &slot = out[w];
		slot += c;
	} while (std::prev_permutation(mask.begin(), mask.end()));
}

} // namespace detail

class FormalExpr
{
  public:
	using map_type = std::map<Symbol, Rational>;

	FormalExpr() = default;
	FormalExpr(int c) : FormalExpr(Rational(c)) {}
	explicit FormalExpr(Rational const &c)
	{
		if (sgn(c) != 0)
			terms_.emplace(Symbol{}, c);
	}

	static FormalExpr symbol(Symbol s, Rational const &c = Rational(1))
	{
		FormalExpr e;
		if (sgn(c) != 0)
			e.terms_.emplace(std::move(s), c);
		return e;
	}

	map_type const &terms() const { return terms_; }
	bool empty() const { return terms_.empty(); }

	Rational coeff(Symbol const &s) const
	{
		auto it = terms_.find(s);
		return it == terms_.end() ? Rational(0) : it->second;
	}

	FormalExpr &operator+=(FormalExpr const &o)
	{
		for (auto const &[s, c] : o.terms_)
			add(s, c);
		return *this;
	}
	FormalExpr &operator-=(FormalExpr const &o)
	{
		for (auto const &[s, c] : o.terms_)
			add(s, -c);
		return *this;
	}
	FormalExpr &operator*=(Rational const &q)
	{
		if (sgn(q) == 0)
			terms_.clear();
		for (auto &[s, c] : terms_)
			c *= q;
		return *this;
	}
	FormalExpr operator-() const
	{
		FormalExpr r = *this;
		for (auto &[s, c] : r.terms_)
			c = -c;
		return r;
	}

	friend FormalExpr operator+(FormalExpr a, FormalExpr const &b) { return a += b; }
	friend FormalExpr operator-(FormalExpr a, FormalExpr const &b) { return a -= b; }
	friend FormalExpr operator*(Rational const &q, FormalExpr a) { return a *= q; }

	/// Shuffle product.
	friend FormalExpr operator*(FormalExpr const &a, FormalExpr const &b)
	{
		map_type acc;
		for (auto const &[u, x] : a.terms_)
			for (auto const &[v, y] : b.terms_)
				detail::shuffle_into(u, v, Rational(x * y), acc);
		FormalExpr r;
		for (auto &[s, c] : acc)
			if (sgn(c) != 0)
				r.terms_.emplace(s, std::move(c));
		return r;
	}

	friend bool operator==(FormalExpr const &a, FormalExpr const &b) { return a.terms_ == b.terms_; }

	/// Largest number of slots among the terms.
	std::size_t max_slots() const
	{
		std::size_t m = 0;
		for (auto const &[s, c] : terms_)
			m = std::max(m, s.size());
		return m;
	}

	/// Terms with exactly `k` slots.
	FormalExpr slot_part(std::size_t k) const
	{
		FormalExpr r;
		for (auto const &[s, c] : terms_)
			if (s.size() == k)
				r.terms_.emplace(s, c);
		return r;
	}

  private:
	void add(Symbol const &s, Rational const &c)
	{
		if (sgn(c) == 0)
			return;
		auto [it, inserted] = terms_.try_emplace(s, c);
		if (!inserted)
		{
			it->second += c;
			if (sgn(it->second) == 0)
				terms_.erase(it);
		}
	}

	map_type terms_;
};

inline bool is_zero(FormalExpr const &e) { return e.empty(); }
inline double magnitude(FormalExpr const &e) { return e.empty() ? 0.0 : std::numeric_limits<double>::infinity(); }
inline double error_bound(FormalExpr const &) { return 0.0; }
inline FormalExpr scaled(FormalExpr e, Rational const &c) { return e *= c; }

template <> struct scalar_kind<FormalExpr>
{
	static constexpr char const *name = "formal";
};

/// II of labeled graphs (latest slot first), expressed in canonical classes:
/// each slot contributes the sign relating its graph to the canonical one.
inline FormalExpr formal_symbol(std::vector<LieGraph> const &latest_first, Rational const &c = Rational(1))
{
	Symbol s;
	int sign = 1;
	for (auto const &g : latest_first)
	{
		auto ref = class_of(g);
		if (ref.sign == 0)
			return {};
		sign *= ref.sign;
		s.push_back(ref.encoding);
	}
	return FormalExpr::symbol(std::move(s), Rational(c * sign));
}

/// Family name with a sign, e.g. "comb(2)" or "-triple(1,0,2)"; other
/// classes show the bracket of their canonical representative.
inline std::string class_label(std::string const &enc)
{
	int n = static_cast<int>(std::count(enc.begin(), enc.end(), '('));
	auto tag = family_of(enc, n);
	if (tag.kind == FamilyTag::Kind::none)
		return to_lie_monomial(class_from_encoding(enc).canonical).str();
	LieGraph g = tag.kind == FamilyTag::Kind::comb ? comb(tag.i) : triple(tag.i, tag.j, tag.k);
	return (class_of(g).sign < 0 ? "-" : "") + tag.str();
}

/// Terms written against the family graphs, e.g. "3*II(comb(1),comb(1)) - II(triple(1,0,2))".
inline std::string to_string(FormalExpr const &e)
{
	if (e.empty())
		return "0";
	std::ostringstream os;
	bool first = true;
	for (auto const &[s, c] : e.terms())
	{
		Rational q = c;
		std::string label;
		for (std::size_t m = 0; m < s.size(); ++m)
		{
			auto l = class_label(s[m]);
			if (l[0] == '-')
			{
				q = -q;
				l.erase(0, 1);
			}
			label += (m ? "," : "") + l;
		}
		bool neg = sgn(q) < 0;
		Rational a = neg ? Rational(-q) : q;
		os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
		if (s.empty())
			os << to_string(a);
		else
			os << (a == 1 ? "" : to_string(a) + "*") << "II(" << label << ")";
		first = false;
	}
	return os.str();
}

inline std::ostream &operator<<(std::ostream &os, FormalExpr const &e) { return os << to_string(e); }

inline nlohmann::json scalar_to_json(FormalExpr const &e)
{
	nlohmann::json arr = nlohmann::json::array();
	for (auto const &[s, c] : e.terms())
	{
		nlohmann::json sym = nlohmann::json::array();
		for (auto const &enc : s)
			sym.push_back(to_hex(enc));
		arr.push_back({{"coef", to_string(c)}, {"symbol", sym}});
	}
	return arr;
}

inline void scalar_from_json(nlohmann::json const &j, FormalExpr &e)
{
	e = FormalExpr();
	for (auto const &t : j)
	{
		Symbol s;
		for (auto const &h : t.at("symbol"))
			s.push_back(class_from_hex(h.get<std::string>()).encoding);
		e += FormalExpr::symbol(std::move(s), parse_rational(t.at("coef").get<std::string>()));
	}
}

} // namespace atassoc
