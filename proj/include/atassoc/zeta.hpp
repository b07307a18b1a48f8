#pragma once

// Riemann and double zeta values by direct summation with Euler-Maclaurin
// tails. Multiple zeta values follow zeta(a, b) = sum_{0<k<l} k^-a l^-b.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace atassoc {

namespace detail {

using real = long double;

// B_2, B_4, ..., B_12 over (2j)!
inline constexpr real kEmCoeff[] = {1.0L / 12, -1.0L / 720, 1.0L / 30240, -1.0L / 1209600, 1.0L / 47900160,
                                    -691.0L / 1307674368000};

/// sum_{l >= M} l^-q for real q > 1, M large.
inline real power_tail(real q, real M)
{
	real r = std::pow(M, 1 - q) / (q - 1) + std::pow(M, -q) / 2;
	// f^(2j-1)(M) = -(q)_{2j-1} M^{-q-2j+1}
	real rising = q, pw = std::pow(M, -q - 1);
	for (int j = 1; j <= 6; ++j)
	{
		r += kEmCoeff[j - 1] * rising * pw;
		rising *= (q + 2 * j - 1) * (q + 2 * j);
		pw /= M * M;
	}
	return r;
}

/// sum_{l >= M} ln(l) l^-q.
inline real log_power_tail(real q, real M)
{
	real lm = std::log(M);
	real r = std::pow(M, 1 - q) * (lm / (q - 1) + 1 / ((q - 1) * (q - 1))) + lm * std::pow(M, -q) / 2;
	// f^(m)(x) = x^{-q-m} (alpha_m ln x + beta_m)
	real alpha = 1, beta = 0;
	for (int m = 0; m < 12; ++m)
	{
		real na = -(q + m) * alpha, nb = -(q + m) * beta + alpha;
		alpha = na;
		beta = nb;
		if (m % 2 == 0) // m + 1 odd
			r -= kEmCoeff[m / 2] * std::pow(M, -q - m - 1) * (alpha * lm + beta);
	}
	return r;
}

inline constexpr int kDirectTerms = 2000;
inline constexpr real kEulerGamma = 0.577215664901532860606512090082402431L;

} // namespace detail

/// zeta(n) for integer n >= 2.
inline double zeta(int n)
{
	if (n < 2)
		throw std::domain_error("zeta(" + std::to_string(n) + ") diverges");
	using detail::real;
	real s = 0;
	for (int k = detail::kDirectTerms - 1; k >= 1; --k)
		s += std::pow(static_cast<real>(k), -n);
	return static_cast<double>(s + detail::power_tail(n, detail::kDirectTerms));
}

/// zeta(a, b) = sum_{0<k<l} k^-a l^-b for integers a >= 1, b >= 2.
inline double double_zeta(int a, int b)
{
	if (a < 1 || b < 2)
		throw std::domain_error("double_zeta(" + std::to_string(a) + "," + std::to_string(b) + ") diverges");
	using detail::real;
	int L = detail::kDirectTerms;
	real head = 0, h = 0;
	for (int l = 2; l <= L; ++l)
	{
		h += std::pow(static_cast<real>(l - 1), -a);
		head += h * std::pow(static_cast<real>(l), -b);
	}
	// tail over l > L with H^(a)_{l-1} replaced by its asymptotic expansion
	real M = L + 1, tail = 0;
	if (a == 1)
	{
		// H_{l-1} = ln l + gamma - 1/(2l) - sum_j B_2j/(2j) l^-2j
		tail = detail::log_power_tail(b, M) + detail::kEulerGamma * detail::power_tail(b, M) -
		       detail::power_tail(b + 1, M) / 2 - detail::power_tail(b + 2, M) / 12 +
		       detail::power_tail(b + 4, M) / 120 - detail::power_tail(b + 6, M) / 252;
	}
	else
	{
		// H^(a)_{l-1} = zeta(a) - sum_{k >= l} k^-a
		real za = zeta(a);
		tail = za * detail::power_tail(b, M) - detail::power_tail(a + b - 1, M) / (a - 1) -
		       detail::power_tail(a + b, M) / 2 - a * detail::power_tail(a + b + 1, M) / 12 +
		       a * (a + 1.0L) * (a + 2) * detail::power_tail(a + b + 3, M) / 720;
	}
	return static_cast<double>(head + tail);
}

/// (2048 zeta(3,5) - 6293 zeta(3) zeta(5)) / (524288 pi^8), a degree-8
/// coefficient far beyond Monte-Carlo reach; reference only.
inline double felder_reference()
{
	long double pi8 = std::pow(std::numbers::pi_v<long double>, 8);
	return static_cast<double>((2048.0L * double_zeta(3, 5) - 6293.0L * zeta(3) * zeta(5)) / (524288.0L * pi8));
}

} // namespace atassoc
