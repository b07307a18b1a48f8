#pragma once

// Deliberately naive reference implementations used as test oracles. They
// share no code with the library beyond basic value types.

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// ---- string polynomials -----------------------------------------------------

using Poly = std::map<std::string, mpq_class>;

inline void clean(Poly &p)
{
	for (auto it = p.begin(); it != p.end();)
		it = sgn(it->second) == 0 ? p.erase(it) : std::next(it);
}

inline Poly add(Poly a, Poly const &b, mpq_class c = 1)
{
	for (auto const &[w, x] : b)
		a[w] += c * x;
	clean(a);
	return a;
}

inline Poly mul(Poly const &a, Poly const &b, std::size_t cap = 1000)
{
	Poly r;
	for (auto const &[u, x] : a)
		for (auto const &[v, y] : b)
			if (u.size() + v.size() <= cap)
				r[u + v] += x * y;
	clean(r);
	return r;
}

inline Poly letter(char c) { return {{std::string(1, c), 1}}; }
inline Poly bracket(Poly const &x, Poly const &y) { return add(mul(x, y), mul(y, x), -1); }

inline Poly ad_a(int m, Poly x)
{
	for (int i = 0; i < m; ++i)
		x = bracket(letter('A'), x);
	return x;
}

/// Parses "[X,Y]" bracket strings over A, B.
inline Poly parse_bracket(std::string const &s)
{
	std::size_t pos = 0;
	std::function<Poly()> rec = [&]() -> Poly {
		if (s[pos] == '[')
		{
			++pos;
			Poly l = rec();
			++pos; // ','
			Poly r = rec();
			++pos; // ']'
			return bracket(l, r);
		}
		return letter(s[pos++]);
	};
	return rec();
}

/// Derivation A -> 0, B -> [B, g] letter by letter.
inline Poly derive(Poly const &x, Poly const &g)
{
	Poly img = bracket(letter('B'), g), r;
	for (auto const &[w, c] : x)
		for (std::size_t i = 0; i < w.size(); ++i)
			if (w[i] == 'B')
				for (auto const &[v, d] : img)
					r[w.substr(0, i) + v + w.substr(i + 1)] += c * d;
	clean(r);
	return r;
}

// ---- determinants -----------------------------------------------------------

/// Leibniz expansion over all permutations.
inline double leibniz_det(std::vector<std::vector<double>> const &m)
{
	std::size_t n = m.size();
	std::vector<std::size_t> p(n);
	std::iota(p.begin(), p.end(), 0);
	double total = 0.0;
	do
	{
		int inv = 0;
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = i + 1; j < n; ++j)
				inv += p[i] > p[j];
		double prod = inv % 2 ? -1.0 : 1.0;
		for (std::size_t i = 0; i < n; ++i)
			prod *= m[i][p[i]];
		total += prod;
	} while (std::next_permutation(p.begin(), p.end()));
	return total;
}

/// phi(z, w) without reduction, from atan2 directly.
inline double raw_angle(std::complex<double> z, std::complex<double> w)
{
	auto u = w - z, v = w - std::conj(z);
	return (std::atan2(u.imag(), u.real()) - std::atan2(v.imag(), v.real())) / (2.0 * M_PI);
}

// ---- labeled tree enumeration -----------------------------------------------

/// A labeled graph as target lists: targets[a] are the two targets of air
/// vertex a+1, coded 0 = G1, 1 = G2, k+1 = air k.
using Targets = std::vector<std::pair<int, int>>;

/// All labeled graphs where air vertex a only shoots ground points or air
/// vertices with smaller labels, each air vertex shot at most once, one root.
/// Every valid graph is isomorphic to one of these.
inline std::vector<Targets> topological_graphs(int n)
{
	std::vector<Targets> out;
	Targets cur;
	std::vector<int> shot(n + 2, 0);
	std::function<void(int)> rec = [&](int a) {
		if (a > n)
		{
			int roots = 0;
			for (int v = 1; v <= n; ++v)
				roots += shot[v] == 0;
			if (roots == 1)
				out.push_back(cur);
			return;
		}
		int choices = a + 1; // G1, G2, air 1..a-1
		for (int x = 0; x < choices; ++x)
			for (int y = x; y < choices; ++y)
			{
				if (x >= 2 && x == y)
					continue;
				if ((x >= 2 && shot[x - 1]) || (y >= 2 && shot[y - 1]))
					continue;
				if (x >= 2)
					++shot[x - 1];
				if (y >= 2)
					++shot[y - 1];
				cur.push_back({x, y});
				rec(a + 1);
				cur.pop_back();
				if (x >= 2)
					--shot[x - 1];
				if (y >= 2)
					--shot[y - 1];
			}
	};
	rec(1);
	return out;
}

/// Canonical form by sorted child strings, using its own alphabet.
inline std::string shape_of(Targets const &t)
{
	int n = static_cast<int>(t.size());
	std::vector<bool> shot(n + 1, false);
	for (auto const &[x, y] : t)
	{
		if (x >= 2)
			shot[x - 1] = true;
		if (y >= 2)
			shot[y - 1] = true;
	}
	int root = 1;
	while (shot[root])
		++root;
	std::function<std::string(int)> rec = [&](int code) -> std::string {
		if (code == 0)
			return "a";
		if (code == 1)
			return "b";
		auto [x, y] = t[code - 2];
		auto l = rec(x), r = rec(y);
		if (r < l)
			std::swap(l, r);
		return "<" + l + "|" + r + ">";
	};
	return rec(root + 1);
}

} // namespace oracle

namespace oracle {

/// Gauss-Legendre nodes and weights on (a, b) by Newton iteration (local copy).
inline void gl_nodes(int k, double a, double b, std::vector<double> &x, std::vector<double> &w)
{
	x.resize(k);
	w.resize(k);
	for (int i = 0; i < k; ++i)
	{
		double t = std::cos(M_PI * (i + 0.75) / (k + 0.5)), dp = 0;
		for (int it = 0; it < 100; ++it)
		{
			double p0 = 1, p1 = t;
			for (int j = 2; j <= k; ++j)
			{
				double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
				p0 = p1;
				p1 = p2;
			}
			dp = k * (t * p1 - p0) / (t * t - 1);
			double d = p1 / dp;
			t -= d;
			if (std::abs(d) < 1e-15)
				break;
		}
		x[i] = a + (b - a) * (t + 1) / 2;
		w[i] = (b - a) / ((1 - t * t) * dp * dp);
	}
}

/// Integral over the upper half-plane of f with integrable 1/r singularities
/// at the real points c0 and c1: a partition of unity splits off polar
/// patches around both, the rest is integrated in compactified polar
/// coordinates around their midpoint.
inline double half_plane_integral(std::function<double(std::complex<double>)> const &f, double c0, double c1, int k)
{
	double rad = 0.4 * std::abs(c1 - c0);
	auto bump = [](double t) {
		if (t <= 0.5)
			return 1.0;
		if (t >= 1.0)
			return 0.0;
		double u = (t - 0.5) / 0.5;
		return 1.0 - u * u * u * (10 - 15 * u + 6 * u * u);
	};
	auto chi = [&](std::complex<double> p, double c) { return bump(std::abs(p - c) / rad); };
	std::vector<double> rx, rw, tx, tw;
	gl_nodes(k, 0.0, M_PI, tx, tw);
	double total = 0;
	for (double c : {c0, c1})
	{
		gl_nodes(k, 0.0, rad, rx, rw);
		for (int i = 0; i < k; ++i)
			for (int j = 0; j < k; ++j)
			{
				auto p = std::complex<double>(c, 0) + std::polar(rx[i], tx[j]);
				total += rw[i] * tw[j] * rx[i] * chi(p, c) * f(p);
			}
	}
	double mid = 0.5 * (c0 + c1);
	gl_nodes(k, 0.0, 1.0, rx, rw);
	for (int i = 0; i < k; ++i)
	{
		double u = rx[i], r = u / (1 - u), dr = 1 / ((1 - u) * (1 - u));
		for (int j = 0; j < k; ++j)
		{
			auto p = std::complex<double>(mid, 0) + std::polar(r, tx[j]);
			double rest = 1 - chi(p, c0) - chi(p, c1);
			if (rest != 0)
				total += rw[i] * tw[j] * r * dr * rest * f(p);
		}
	}
	return total;
}

} // namespace oracle
