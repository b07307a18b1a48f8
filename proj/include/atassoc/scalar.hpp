#pragma once

// Coefficient rings for truncated series: exact rationals (GMP) and
// doubles carrying a first-order worst-case error bound.

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace atassoc {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1)
{
	if (den == 0)
		throw std::domain_error("rational with zero denominator");
	Rational q(num, den);
	q.canonicalize();
	return q;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(Rational const &q)
{
	return q.get_str();
}

inline Rational parse_rational(std::string const &s)
{
	Rational q;
	if (q.set_str(s, 10) != 0)
		throw std::invalid_argument("not a rational: '" + s + "'");
	if (q.get_den() == 0)
		throw std::domain_error("rational with zero denominator: '" + s + "'");
	q.canonicalize();
	return q;
}

inline bool is_zero(Rational const &q) { return sgn(q) == 0; }
inline double magnitude(Rational const &q) { return std::abs(q.get_d()); }
inline double error_bound(Rational const &) { return 0.0; }

/// Float scalar with a nonnegative error bound. Propagation is first-order
/// interval style (worst-case linear), an upper bound rather than a CI.
struct Uncertain
{
	double value = 0.0;
	double err = 0.0;

	Uncertain() = default;
	Uncertain(double v, double e = 0.0) : value(v), err(e)
	{
		if (!(e >= 0.0))
			throw std::invalid_argument("error bound must be nonnegative");
	}
	Uncertain(int v) : value(v) {}
	explicit Uncertain(Rational const &q) : value(q.get_d()) {}

	Uncertain &operator+=(Uncertain const &o)
	{
		value += o.value;
		err += o.err;
		return *this;
	}
	Uncertain &operator-=(Uncertain const &o)
	{
		value -= o.value;
		err += o.err;
		return *this;
	}
	Uncertain &operator*=(Uncertain const &o)
	{
		double e = std::abs(value) * o.err + err * std::abs(o.value) + err * o.err;
		value *= o.value;
		err = e;
		return *this;
	}
	Uncertain &operator*=(Rational const &q)
	{
		double c = q.get_d();
		value *= c;
		err *= std::abs(c);
		return *this;
	}
	Uncertain operator-() const { return {-value, err}; }

	friend Uncertain operator+(Uncertain a, Uncertain const &b) { return a += b; }
	friend Uncertain operator-(Uncertain a, Uncertain const &b) { return a -= b; }
	friend Uncertain operator*(Uncertain a, Uncertain const &b) { return a *= b; }
	friend Uncertain operator*(Rational const &q, Uncertain a) { return a *= q; }
	friend bool operator==(Uncertain const &a, Uncertain const &b)
	{
		return a.value == b.value && a.err == b.err;
	}
	friend std::ostream &operator<<(std::ostream &os, Uncertain const &u)
	{
		return os << u.value << "±" << u.err;
	}
};

inline bool is_zero(Uncertain const &u) { return u.value == 0.0 && u.err == 0.0; }
inline double magnitude(Uncertain const &u) { return std::abs(u.value); }
inline double error_bound(Uncertain const &u) { return u.err; }

// scaling by an exact rational, uniform across scalar kinds
inline Rational scaled(Rational const &q, Rational const &c) { return Rational(q * c); }
inline Uncertain scaled(Uncertain u, Rational const &c) { return u *= c; }

template <class S> struct scalar_kind;
template <> struct scalar_kind<Rational>
{
	static constexpr char const *name = "rational";
};
template <> struct scalar_kind<Uncertain>
{
	static constexpr char const *name = "float";
};

} // namespace atassoc
