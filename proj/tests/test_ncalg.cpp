#include <random>

#include <gtest/gtest.h>

#include "atassoc/ncseries.hpp"
#include "oracles.hpp"

using namespace atassoc;

namespace {

using Q = NCSeries<Rational>;

Q poly(std::initializer_list<std::pair<char const *, long>> terms, int n)
{
	Q s(n);
	for (auto const &[w, c] : terms)
		s.add(Word::parse(w), Rational(c));
	return s;
}

Q from_oracle(oracle::Poly const &p, int n)
{
	Q s(n);
	for (auto const &[w, c] : p)
		s.add(Word::parse(w), c);
	return s;
}

Q random_series(std::mt19937 &rng, int n, bool constant_free)
{
	std::uniform_int_distribution<int> coef(-3, 3), len(constant_free ? 1 : 0, n);
	Q s(n);
	for (int t = 0; t < 6; ++t)
	{
		int l = len(rng);
		std::string w;
		for (int i = 0; i < l; ++i)
			w += (rng() & 1u) ? 'B' : 'A';
		s.add(Word::parse(w), make_rational(coef(rng), 1 + static_cast<long>(rng() % 3)));
	}
	return s;
}

/// Random Lie element: sum of random brackets of the letters.
Q random_lie(std::mt19937 &rng, int n)
{
	std::vector<BracketTree> pool{BracketTree::leaf(Letter::A), BracketTree::leaf(Letter::B)};
	for (int i = 0; i < 6; ++i)
	{
		auto const &l = pool[rng() % pool.size()];
		auto const &r = pool[rng() % pool.size()];
		if (l.degree() + r.degree() <= n)
			pool.push_back(BracketTree::node(l, r));
	}
	Q s(n);
	for (auto const &t : pool)
		s += make_rational(static_cast<long>(rng() % 5) - 2, 1 + static_cast<long>(rng() % 4)) * bracket_expand(t, n);
	return s;
}

} // namespace

TEST(Word, ParseAndPrint)
{
	auto w = Word::parse("AABAB");
	EXPECT_EQ(w.str(), "AABAB");
	EXPECT_EQ(w.degree(), 5);
	EXPECT_EQ(w.depth(), 2);
	EXPECT_EQ(w[2], Letter::B);
	EXPECT_EQ(w.sub(1, 3).str(), "ABA");
	EXPECT_EQ(w.swapped().str(), "BBABA");
	EXPECT_THROW(Word::parse("ABC"), std::invalid_argument);
	EXPECT_TRUE(Word::parse("").empty());
}

TEST(Word, OrderIsByLengthThenLexicographic)
{
	EXPECT_LT(Word::parse("B"), Word::parse("AA"));
	EXPECT_LT(Word::parse("AAB"), Word::parse("ABA"));
	EXPECT_EQ(Word::parse("AB") * Word::parse("BA"), Word::parse("ABBA"));
}

TEST(Mul, ProductOfLinearFactors)
{
	auto s = poly({{"", 1}, {"A", 1}}, 4) * poly({{"", 1}, {"B", 1}}, 4);
	EXPECT_EQ(s, poly({{"", 1}, {"A", 1}, {"B", 1}, {"AB", 1}}, 4));
}

TEST(Mul, UnitAndTruncation)
{
	auto s = poly({{"AB", 2}, {"B", -1}}, 3);
	EXPECT_EQ(s * Q::one(5), s);
	EXPECT_EQ((s * poly({{"A", 1}}, 2)).truncation(), 2);
	EXPECT_THROW(s.coeff(Word::parse("ABAB")), std::out_of_range);
}

TEST(Mul, CommutatorSquareMatchesConvolutionOracle)
{
	auto c = poly({{"AB", 1}, {"BA", -1}}, 4);
	auto sq = c * c;
	EXPECT_EQ(sq, poly({{"ABAB", 1}, {"ABBA", -1}, {"BAAB", -1}, {"BABA", 1}}, 4));
	oracle::Poly o{{"AB", 1}, {"BA", -1}};
	EXPECT_EQ(sq, from_oracle(oracle::mul(o, o), 4));
}

TEST(Mul, RandomProductsMatchOracle)
{
	std::mt19937 rng(11);
	for (int t = 0; t < 30; ++t)
	{
		auto a = random_series(rng, 6, false), b = random_series(rng, 6, false);
		oracle::Poly oa, ob;
		for (auto const &[w, c] : a.terms())
			oa[w.str()] = c;
		for (auto const &[w, c] : b.terms())
			ob[w.str()] = c;
		EXPECT_EQ(a * b, from_oracle(oracle::mul(oa, ob, 6), 6));
	}
}

TEST(Mul, AssociativeOnRandomTriples)
{
	std::mt19937 rng(5);
	for (int t = 0; t < 20; ++t)
	{
		auto a = random_series(rng, 6, false), b = random_series(rng, 6, false), c = random_series(rng, 6, false);
		EXPECT_EQ((a * b) * c, a * (b * c));
	}
}

TEST(Mul, UncertainErrorPropagation)
{
	NCSeries<Uncertain> a(2), b(2);
	a.add(Word::parse("A"), Uncertain(2.0, 0.1));
	b.add(Word::parse("B"), Uncertain(3.0, 0.2));
	auto c = (a * b).coeff(Word::parse("AB"));
	EXPECT_DOUBLE_EQ(c.value, 6.0);
	EXPECT_NEAR(c.err, 2.0 * 0.2 + 0.1 * 3.0 + 0.1 * 0.2, 1e-15);
}

TEST(Mul, KindMismatchThrows)
{
	AnySeries q = Q::one(2), u = NCSeries<Uncertain>::one(2);
	EXPECT_THROW(mul(q, u), std::invalid_argument);
	EXPECT_NO_THROW(mul(q, q));
}

TEST(Exp, OfLetter)
{
	EXPECT_EQ(exp(poly({{"A", 1}}, 2)), (Q(2) + poly({{"", 1}, {"A", 1}}, 2) + make_rational(1, 2) * poly({{"AA", 1}}, 2)));
}

TEST(Exp, OfCommutatorContainsSquare)
{
	auto c = poly({{"AB", 1}, {"BA", -1}}, 4);
	auto e = exp(c);
	EXPECT_EQ(e, Q::one(4) + c + make_rational(1, 2) * (c * c));
}

TEST(Exp, LogInvertsExp)
{
	EXPECT_EQ(log(exp(poly({{"A", 1}, {"B", 1}}, 3))), poly({{"A", 1}, {"B", 1}}, 3));
	std::mt19937 rng(3);
	for (int t = 0; t < 15; ++t)
	{
		auto x = random_series(rng, 5, true);
		EXPECT_EQ(log(exp(x)), x);
		EXPECT_EQ(exp(log(Q::one(5) + x)), Q::one(5) + x);
	}
}

TEST(Exp, PreconditionsEnforced)
{
	EXPECT_THROW(exp(Q::one(3)), std::domain_error);
	EXPECT_THROW(log(poly({{"A", 1}}, 3)), std::domain_error);
}

TEST(Exp, BakerCampbellHausdorffDegreeTwo)
{
	auto a = poly({{"A", 1}}, 3), b = poly({{"B", 1}}, 3);
	auto z = log(exp(a) * exp(b));
	auto ab = commutator(a, b);
	auto expected = a + b + make_rational(1, 2) * ab +
	                make_rational(1, 12) * (commutator(a, ab) - commutator(b, ab));
	EXPECT_EQ(z, expected);
}

TEST(Shuffle, SmallCases)
{
	auto s = shuffle(Word::parse("A"), Word::parse("B"));
	std::multiset<std::string> got;
	for (auto const &w : s)
		got.insert(w.str());
	EXPECT_EQ(got, (std::multiset<std::string>{"AB", "BA"}));

	got.clear();
	for (auto const &w : shuffle(Word::parse("AB"), Word::parse("B")))
		got.insert(w.str());
	EXPECT_EQ(got, (std::multiset<std::string>{"BAB", "ABB", "ABB"}));

	auto unit = shuffle(Word{}, Word::parse("ABA"));
	ASSERT_EQ(unit.size(), 1u);
	EXPECT_EQ(unit[0].str(), "ABA");
}

TEST(Shuffle, CountIsBinomial)
{
	for (int m = 0; m <= 8; ++m)
		for (int n = 0; m + n <= 8; ++n)
		{
			auto u = Word::power(Letter::A, m), v = Word::power(Letter::B, n);
			mpz_class c;
			mpz_bin_uiui(c.get_mpz_t(), m + n, m);
			EXPECT_EQ(shuffle(u, v).size(), c.get_ui());
		}
}

TEST(Bracket, Expansions)
{
	auto ab = BracketTree::parse("[A,B]");
	EXPECT_EQ(bracket_expand(ab, 2), poly({{"AB", 1}, {"BA", -1}}, 2));
	EXPECT_EQ(bracket_expand(BracketTree::parse("[A,[A,B]]"), 3), poly({{"AAB", 1}, {"ABA", -2}, {"BAA", 1}}, 3));
	EXPECT_THROW(bracket_expand(BracketTree::parse("[A,[A,B]]"), 2), std::invalid_argument);
}

TEST(Bracket, FigureTwoMonomialAgainstOracle)
{
	auto t = BracketTree::parse("[B,[B,[A,B]]]");
	auto s = bracket_expand(t, 4);
	EXPECT_EQ(s, from_oracle(oracle::parse_bracket("[B,[B,[A,B]]]"), 4));
	EXPECT_EQ(s.coeff(Word::parse("BBAB")), Rational(3));
	EXPECT_EQ(t.str(), "[B,[B,[A,B]]]");
	EXPECT_EQ(t.depth(), 3);
}

TEST(Bracket, LeadingAndMixedCoefficients)
{
	auto comb2 = bracket_expand(BracketTree::parse("[A,[A,B]]"), 3);
	EXPECT_EQ(coeff(comb2, Word::parse("AAB")), Rational(1));
	EXPECT_EQ(coeff(Q::one(2), Word{}), Rational(1));
	auto t = bracket_expand(BracketTree::parse("[B,[A,[A,B]]]"), 4);
	EXPECT_EQ(t.coeff(Word::parse("AABB")), Rational(-1));
}

TEST(Bracket, AntisymmetryAndLetterContent)
{
	std::mt19937 rng(7);
	std::vector<BracketTree> pool{BracketTree::leaf(Letter::A), BracketTree::leaf(Letter::B)};
	for (int i = 0; i < 25; ++i)
	{
		auto l = pool[rng() % pool.size()], r = pool[rng() % pool.size()];
		if (l.degree() + r.degree() > 7)
			continue;
		auto lr = bracket_expand(BracketTree::node(l, r), 7);
		EXPECT_EQ(lr, -bracket_expand(BracketTree::node(r, l), 7));
		int depth = l.depth() + r.depth(), degree = l.degree() + r.degree();
		for (auto const &[w, c] : lr.terms())
		{
			EXPECT_EQ(w.depth(), depth);
			EXPECT_EQ(w.degree(), degree);
		}
		pool.push_back(BracketTree::node(l, r));
	}
}

TEST(Substitute, Examples)
{
	auto a = poly({{"A", 1}}, 4), b = poly({{"B", 1}}, 4);
	auto s = poly({{"AB", 1}}, 4);
	EXPECT_EQ(substitute(s, b, a).series, poly({{"BA", 1}}, 4));
	auto any = poly({{"", 2}, {"AB", 1}, {"BBA", -3}}, 4);
	EXPECT_EQ(substitute(any, a, b).series, any);
	auto c = poly({{"AB", 1}, {"BA", -1}}, 4);
	auto r = substitute(c, -a, -b);
	EXPECT_EQ(r.series, c);
	EXPECT_FALSE(r.truncated);
	EXPECT_TRUE(substitute(c, a + Q::one(4), b).truncated);
}

TEST(Grouplike, ExponentialsPass)
{
	auto a = poly({{"A", 1}}, 4);
	auto x = a + commutator(a, poly({{"B", 1}}, 4));
	EXPECT_TRUE(is_grouplike(exp(x)).pass);
	std::mt19937 rng(17);
	for (int t = 0; t < 5; ++t)
		EXPECT_TRUE(is_grouplike(exp(random_lie(rng, 5))).pass);
}

TEST(Grouplike, NonGrouplikeFails)
{
	auto s = poly({{"", 1}, {"AB", 1}}, 2);
	auto rep = is_grouplike(s);
	EXPECT_FALSE(rep.pass);
	bool found = false;
	for (auto const &v : rep.violations)
		found = found || (v.u.str() == "A" && v.v.str() == "B");
	EXPECT_TRUE(found);
}

TEST(Grouplike, ToleranceUsesPropagatedError)
{
	NCSeries<Uncertain> s(2);
	s.add(Word{}, Uncertain(1));
	s.add(Word::parse("A"), Uncertain(1.0, 0.01));
	s.add(Word::parse("AA"), Uncertain(0.52, 0.01));
	// residual 1 - 2*0.52 = -0.04, propagated error 0.02 + 0.0001 + 0.02
	EXPECT_TRUE(is_grouplike(s, 0.0, 3.0).pass);
	EXPECT_FALSE(is_grouplike(s, 0.0, 0.5).pass);
}

TEST(Json, RoundTrip)
{
	auto s = poly({{"", 1}, {"AB", 3}, {"BBA", -7}}, 5);
	s.add(Word::parse("A"), make_rational(2, 3));
	auto j = to_json(s);
	EXPECT_EQ(j.at("coefficients").at("A"), "2/3");
	EXPECT_EQ(series_from_json<Rational>(j), s);
	EXPECT_THROW(series_from_json<Uncertain>(j), std::invalid_argument);
	NCSeries<Uncertain> u(3);
	u.add(Word::parse("AB"), Uncertain(0.25, 0.01));
	EXPECT_EQ(std::get<NCSeries<Uncertain>>(any_series_from_json(to_json(u))), u);
}

TEST(Rational, ParseAndPrint)
{
	EXPECT_EQ(to_string(make_rational(6, -4)), "-3/2");
	EXPECT_EQ(parse_rational("10/4"), make_rational(5, 2));
	EXPECT_THROW(parse_rational("1/0"), std::domain_error);
	EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}
