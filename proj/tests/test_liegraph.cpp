#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "atassoc/liegraph.hpp"
#include "bridge.hpp"

using namespace atassoc;

namespace {

VertexId V(char const *s) { return VertexId::parse(s); }

LieGraph figure_two()
{
	return LieGraph(3, {{V("A1"), V("G1")}, {V("A1"), V("G2")}, {V("A2"), V("G2")}, {V("A2"), V("A1")},
	                    {V("A3"), V("G2")}, {V("A3"), V("A2")}});
}

NCSeries<Rational> expand(oracle::Poly const &p, int n)
{
	NCSeries<Rational> s(n);
	for (auto const &[w, c] : p)
		s.add(Word::parse(w), c);
	return s;
}

} // namespace

TEST(Validate, FigureTwoIsValid)
{
	EXPECT_TRUE(validate(figure_two()).ok());
	EXPECT_EQ(figure_two().root(), VertexId::air(3));
}

TEST(Validate, ReportsEachCondition)
{
	LieGraph three(1, {{V("A1"), V("G1")}, {V("A1"), V("G2")}, {V("A1"), V("G1")}});
	EXPECT_TRUE(validate(three).violates(1));

	LieGraph ground_source(1, {{V("A1"), V("G1")}, {V("A1"), V("G2")}, {V("G1"), V("A1")}});
	auto rep = validate(ground_source);
	EXPECT_TRUE(rep.violates(3));

	LieGraph double_shot(3, {{V("A1"), V("G1")}, {V("A1"), V("G2")}, {V("A2"), V("A1")}, {V("A2"), V("G2")},
	                         {V("A3"), V("A1")}, {V("A3"), V("A2")}});
	EXPECT_TRUE(validate(double_shot).violates(2));

	LieGraph two_roots(2, {{V("A1"), V("G1")}, {V("A1"), V("G2")}, {V("A2"), V("G1")}, {V("A2"), V("G2")}});
	EXPECT_TRUE(validate(two_roots).violates(4));

	LieGraph cycle(3, {{V("A1"), V("A2")}, {V("A1"), V("G2")}, {V("A2"), V("A1")}, {V("A2"), V("G1")},
	                   {V("A3"), V("G1")}, {V("A3"), V("G2")}});
	EXPECT_TRUE(validate(cycle).violates(4));

	LieGraph missing(1, {{V("A1"), V("G1")}, {V("A1"), V("A5")}});
	EXPECT_TRUE(validate(missing).violates(0));
	EXPECT_THROW(require_valid(missing), std::invalid_argument);
}

TEST(Validate, EdgesAreSorted)
{
	LieGraph g(1, {{V("A1"), V("G2")}, {V("A1"), V("G1")}});
	EXPECT_EQ(g.edges()[0].target, VertexId::g1());
}

TEST(Monomial, FigureTwo)
{
	EXPECT_EQ(to_lie_monomial(figure_two()).str(), "[B,[B,[A,B]]]");
}

TEST(Monomial, Families)
{
	EXPECT_EQ(to_lie_monomial(comb(1)).str(), "[A,B]");
	EXPECT_EQ(to_lie_monomial(comb(2)).str(), "[A,[A,B]]");
	EXPECT_EQ(comb(2).n(), 2);
	EXPECT_EQ(monomial_series(comb(3)).coeff(Word::parse("AAAB")), Rational(1));
	EXPECT_EQ(to_lie_monomial(triple(1, 0, 1)).str(), "[B,[A,B]]");
	EXPECT_THROW(comb(0), std::invalid_argument);
	EXPECT_THROW(triple(1, 1, 1), std::invalid_argument);
	EXPECT_THROW(triple(0, 0, 1), std::invalid_argument);
}

TEST(Monomial, FamiliesMatchAdjointExpansions)
{
	using namespace oracle;
	for (int m = 1; m <= 6; ++m)
		EXPECT_EQ(monomial_series(comb(m)), expand(ad_a(m, letter('B')), m + 1));
	for (int i = 1; i <= 3; ++i)
		for (int j = 0; j <= 2; ++j)
			for (int k = j + 1; i + j + k <= 6; ++k)
			{
				auto want = ad_a(i - 1, bracket(ad_a(j, letter('B')), ad_a(k, letter('B'))));
				EXPECT_EQ(monomial_series(triple(i, j, k)), expand(want, i + j + k + 1)) << i << j << k;
				EXPECT_EQ(triple(i, j, k).n(), i + j + k);
			}
	EXPECT_EQ(to_lie_monomial(triple(2, 0, 1)).str(), "[A,[B,[A,B]]]");
}

TEST(Enumerate, SmallCounts)
{
	EXPECT_EQ(enumerate_geometric(1).size(), 3u);
	EXPECT_EQ(enumerate_geometric(2).size(), 6u);
	EXPECT_EQ(enumerate_geometric(3).size(), 18u);
	EXPECT_THROW(enumerate_geometric(0), std::invalid_argument);
	EXPECT_THROW(enumerate_geometric(kEnumerationCap + 1), std::invalid_argument);
}

TEST(Enumerate, DeterministicAndValid)
{
	auto a = enumerate_geometric(4), b = enumerate_geometric(4);
	ASSERT_EQ(a.size(), b.size());
	for (std::size_t i = 0; i < a.size(); ++i)
	{
		EXPECT_EQ(a[i].encoding, b[i].encoding);
		EXPECT_TRUE(validate(a[i].canonical).ok());
		EXPECT_EQ(encoding_of(a[i].canonical), a[i].encoding);
		EXPECT_EQ(class_from_hex(a[i].hex()).encoding, a[i].encoding);
	}
}

TEST(Enumerate, MatchesBruteForceLabeledEnumeration)
{
	for (int n = 1; n <= 6; ++n)
	{
		std::set<std::string> enumerated;
		for (auto const &c : enumerate_geometric(n))
			enumerated.insert(c.encoding);
		std::map<std::string, std::string> shape_to_encoding;
		std::set<std::string> reached;
		for (auto const &t : oracle::topological_graphs(n))
		{
			auto g = bridge::from_targets(t);
			ASSERT_TRUE(validate(g).ok());
			auto enc = encoding_of(g);
			auto [it, fresh] = shape_to_encoding.try_emplace(oracle::shape_of(t), enc);
			EXPECT_EQ(it->second, enc) << "isomorphic graphs with different encodings";
			reached.insert(enc);
		}
		EXPECT_EQ(shape_to_encoding.size(), enumerated.size()) << "n=" << n;
		EXPECT_EQ(reached, enumerated) << "n=" << n;
	}
}

TEST(Classify, ZeroDepthAndFamilies)
{
	LieGraph inner_aa(2, {{V("A1"), V("G1")}, {V("A1"), V("G1")}, {V("A2"), V("A1")}, {V("A2"), V("G2")}});
	EXPECT_TRUE(classify(inner_aa).zero);
	auto c4 = classify(comb(4));
	EXPECT_FALSE(c4.zero);
	EXPECT_EQ(c4.depth, 1);
	EXPECT_EQ(c4.family.str(), "comb(4)");
	auto t = classify(triple(2, 0, 1));
	EXPECT_EQ(t.depth, 2);
	EXPECT_EQ(t.family.str(), "triple(2,0,1)");
}

TEST(Classify, DepthOneAndTwoTheorems)
{
	for (int n = 1; n <= 6; ++n)
	{
		std::set<std::string> depth1, depth2, triples;
		for (auto const &c : enumerate_geometric(n))
		{
			auto k = classify(c.canonical);
			if (k.zero)
				continue;
			if (k.depth == 1)
				depth1.insert(c.encoding);
			if (k.depth == 2)
				depth2.insert(c.encoding);
		}
		EXPECT_EQ(depth1, std::set<std::string>{encoding_of(comb(n))}) << "n=" << n;
		for (int i = 1; i <= n; ++i)
			for (int j = 0; i + 2 * j + 1 <= n; ++j)
				triples.insert(encoding_of(triple(i, j, n - i - j)));
		EXPECT_EQ(depth2, triples) << "n=" << n;
	}
}

TEST(Classify, NonzeroClassCountsSmallDegrees)
{
	auto nonzero = [](int n) {
		int c = 0;
		for (auto const &g : enumerate_geometric(n))
			c += !classify(g.canonical).zero;
		return c;
	};
	EXPECT_EQ(nonzero(1), 1);
	EXPECT_EQ(nonzero(2), 2);
	EXPECT_EQ(nonzero(3), 4);
}

TEST(Augment, RowsAndCounts)
{
	auto l = augment(comb(1), Side::L), r = augment(comb(1), Side::R);
	EXPECT_EQ(l.rows.size(), 3u);
	EXPECT_EQ(l.rows[0].source, VertexId::g1());
	EXPECT_EQ(l.rows[0].target, comb(1).root());
	EXPECT_EQ(r.rows[0].source, VertexId::g2());
	for (int n = 1; n <= 4; ++n)
		for (auto const &c : enumerate_geometric(n))
			EXPECT_EQ(augment(c.canonical, Side::R).rows.size(), static_cast<std::size_t>(2 * n + 1));
}

TEST(Relabel, EncodingInvariantAndMonomialSignMatchesRowSign)
{
	std::mt19937 rng(23);
	for (int n = 1; n <= 4; ++n)
		for (auto const &c : enumerate_geometric(n))
		{
			std::vector<int> perm(n);
			std::iota(perm.begin(), perm.end(), 1);
			for (int t = 0; t < 5; ++t)
			{
				std::shuffle(perm.begin(), perm.end(), rng);
				auto r = relabel(c.canonical, perm);
				EXPECT_TRUE(validate(r.graph).ok());
				EXPECT_EQ(encoding_of(r.graph), c.encoding);
				auto before = monomial_series(c.canonical), after = monomial_series(r.graph);
				// relabeling can only reorder out-edges, flipping bracket orientation
				EXPECT_TRUE(after == before || after == -before);
			}
		}
}

TEST(ClassOf, SignRelativeToCanonical)
{
	EXPECT_EQ(class_of(comb(2)).encoding, encoding_of(comb(2)));
	EXPECT_NE(class_of(comb(2)).sign, 0);
	LieGraph swapped(1, {{V("A1"), V("G1")}, {V("A1"), V("G2")}});
	EXPECT_EQ(class_of(swapped).sign, class_of(comb(1)).sign);
	LieGraph zero(1, {{V("A1"), V("G2")}, {V("A1"), V("G2")}});
	EXPECT_EQ(class_of(zero).sign, 0);
}

TEST(Json, GraphRoundTripAndSpecs)
{
	auto j = to_json(figure_two());
	EXPECT_EQ(j.at("n"), 3);
	EXPECT_EQ(j.at("edges").at(0).at(0), "A1");
	EXPECT_EQ(graph_from_json(j), figure_two());
	EXPECT_EQ(parse_graph_spec("comb(3)"), comb(3));
	EXPECT_EQ(parse_graph_spec("triple(1,0,2)"), triple(1, 0, 2));
	EXPECT_EQ(encoding_of(parse_graph_spec(encoding_of(comb(2)))), encoding_of(comb(2)));
	EXPECT_EQ(parse_graph_spec(j.dump()), figure_two());
	EXPECT_THROW(parse_graph_spec("comb(x)"), std::invalid_argument);
	EXPECT_THROW(parse_graph_spec("wheel(3)"), std::invalid_argument);
	EXPECT_THROW(parse_graph_spec("triple(1,1,1)"), std::invalid_argument);
}
