#pragma once

/**
 * @file liegraph.hpp
 * @brief Lie graphs of type (n,2): two ground vertices, n air vertices, each
 * air vertex firing two edges, contracting to a rooted trivalent tree.
 *
 * A geometric (unlabeled) class is a full binary tree with unordered children
 * and leaves in {G1, G2}. Its canonical labeled representative numbers the air
 * vertices in post-order, visiting children in increasing encoding order, so
 * the root is always Air(n).
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncseries.hpp"

namespace atassoc {

/// G1 < G2 < Air(1) < ... < Air(n).
class VertexId
{
  public:
	static constexpr VertexId g1() { return VertexId(0); }
	static constexpr VertexId g2() { return VertexId(1); }
	static VertexId air(int i)
	{
		if (i < 1)
			throw std::invalid_argument("air index must be >= 1");
		return VertexId(i + 1);
	}

	/// "G1", "G2" or "A<i>".
	static VertexId parse(std::string_view s)
	{
		if (s == "G1")
			return g1();
		if (s == "G2")
			return g2();
		if (s.size() >= 2 && s[0] == 'A')
		{
			int v = 0;
			for (char c : s.substr(1))
			{
				if (c < '0' || c > '9')
					throw std::invalid_argument("bad vertex '" + std::string(s) + "'");
				v = v * 10 + (c - '0');
			}
			return air(v);
		}
		throw std::invalid_argument("bad vertex '" + std::string(s) + "'");
	}

	bool is_ground() const { return code_ < 2; }
	bool is_air() const { return code_ >= 2; }
	int air_index() const { return code_ - 1; }
	Letter letter() const { return code_ == 0 ? Letter::A : Letter::B; }
	int code() const { return code_; }

	std::string str() const
	{
		if (code_ == 0)
			return "G1";
		if (code_ == 1)
			return "G2";
		return "A" + std::to_string(air_index());
	}

	friend auto operator<=>(VertexId const &, VertexId const &) = default;

  private:
	constexpr explicit VertexId(int c) : code_(c) {}
	int code_;
};

struct Edge
{
	VertexId source, target;
	friend auto operator<=>(Edge const &, Edge const &) = default;
};

/// Labeled Lie graph. Edges are kept in lexicographic order.
class LieGraph
{
  public:
	LieGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges))
	{
		if (n < 1)
			throw std::invalid_argument("Lie graph needs at least one air vertex");
		std::sort(edges_.begin(), edges_.end());
	}

	int n() const { return n_; }
	std::vector<Edge> const &edges() const { return edges_; }

	/// The air vertex hit by no edge; throws unless exactly one exists.
	VertexId root() const
	{
		std::vector<int> hits(n_ + 1, 0);
		for (auto const &e : edges_)
			if (e.target.is_air() && e.target.air_index() <= n_)
				++hits[e.target.air_index()];
		std::optional<VertexId> r;
		for (int i = 1; i <= n_; ++i)
			if (hits[i] == 0)
			{
				if (r)
					throw std::logic_error("Lie graph has several roots");
				r = VertexId::air(i);
			}
		if (!r)
			throw std::logic_error("Lie graph has no root");
		return *r;
	}

	/// Out-edges of an air vertex, in edge order.
	std::vector<Edge> out_edges(VertexId v) const
	{
		std::vector<Edge> out;
		for (auto const &e : edges_)
			if (e.source == v)
				out.push_back(e);
		return out;
	}

	friend bool operator==(LieGraph const &, LieGraph const &) = default;

  private:
	int n_;
	std::vector<Edge> edges_;
};

struct Violation
{
	/// 1-4 for the defining conditions, 0 for malformed vertex references
	int condition;
	std::string message;
};

struct ValidationReport
{
	std::vector<Violation> violations;
	bool ok() const { return violations.empty(); }
	bool violates(int condition) const
	{
		return std::any_of(violations.begin(), violations.end(),
		                   [&](Violation const &v) { return v.condition == condition; });
	}
};

inline ValidationReport validate(LieGraph const &g)
{
	ValidationReport rep;
	int n = g.n();
	auto in_range = [n](VertexId v) { return v.is_ground() || v.air_index() <= n; };
	std::vector<int> fired(n + 1, 0), hit(n + 1, 0);
	bool malformed = false;
	for (auto const &e : g.edges())
	{
		if (!in_range(e.source) || !in_range(e.target))
		{
			rep.violations.push_back({0, "edge (" + e.source.str() + "," + e.target.str() + ") references a missing vertex"});
			malformed = true;
			continue;
		}
		if (e.source.is_ground())
			rep.violations.push_back({3, "ground vertex " + e.source.str() + " fires an edge"});
		else
			++fired[e.source.air_index()];
		if (e.target.is_air())
			++hit[e.target.air_index()];
	}
	for (int i = 1; i <= n; ++i)
		if (fired[i] != 2)
			rep.violations.push_back({1, "air vertex A" + std::to_string(i) + " fires " + std::to_string(fired[i]) + " edges"});
	for (int i = 1; i <= n; ++i)
		if (hit[i] > 1)
			rep.violations.push_back({2, "air vertex A" + std::to_string(i) + " is shot by " + std::to_string(hit[i]) + " edges"});
	if (malformed)
		return rep;

	std::vector<int> roots;
	for (int i = 1; i <= n; ++i)
		if (hit[i] == 0)
			roots.push_back(i);
	if (roots.size() != 1)
	{
		rep.violations.push_back({4, "expected exactly one root, found " + std::to_string(roots.size())});
		return rep;
	}
	// every air vertex reached exactly once from the root along air targets
	std::vector<int> seen(n + 1, 0);
	std::vector<int> stack{roots[0]};
	bool cyclic = false;
	while (!stack.empty())
	{
		int v = stack.back();
		stack.pop_back();
		if (seen[v]++)
		{
			cyclic = true;
			continue;
		}
		for (auto const &e : g.edges())
			if (e.source.is_air() && e.source.air_index() == v && e.target.is_air())
				stack.push_back(e.target.air_index());
	}
	if (cyclic || std::count(seen.begin() + 1, seen.end(), 0) > 0)
		rep.violations.push_back({4, "graph does not contract to a rooted trivalent tree"});
	return rep;
}

inline void require_valid(LieGraph const &g)
{
	auto rep = validate(g);
	if (!rep.ok())
		throw std::invalid_argument("invalid Lie graph: condition (" + std::to_string(rep.violations.front().condition) +
		                            ") " + rep.violations.front().message);
}

/// G1 -> A, G2 -> B; air vertex with out-edges e1 < e2 -> [tree(t(e1)), tree(t(e2))].
inline BracketTree to_lie_monomial(LieGraph const &g)
{
	require_valid(g);
	auto rec = [&](auto &self, VertexId v) -> BracketTree {
		if (v.is_ground())
			return BracketTree::leaf(v.letter());
		auto out = g.out_edges(v);
		return BracketTree::node(self(self, out[0].target), self(self, out[1].target));
	};
	return rec(rec, g.root());
}

// ---- geometric classes ------------------------------------------------------

namespace detail {

/// Full binary tree with unordered children; leaves carry 0 (G1) or 1 (G2).
struct GeoTree
{
	int ground = -1;
	std::vector<GeoTree> kids;
	std::string encoding;

	static GeoTree leaf(int g) { return {g, {}, g == 0 ? "1" : "2"}; }
	static GeoTree node(GeoTree a, GeoTree b)
	{
		if (b.encoding < a.encoding)
			std::swap(a, b);
		GeoTree t;
		t.encoding = "(" + a.encoding + b.encoding + ")";
		t.kids.push_back(std::move(a));
		t.kids.push_back(std::move(b));
		return t;
	}
	bool is_leaf() const { return kids.empty(); }
};

inline GeoTree tree_of(LieGraph const &g)
{
	require_valid(g);
	auto rec = [&](auto &self, VertexId v) -> GeoTree {
		if (v.is_ground())
			return GeoTree::leaf(v == VertexId::g1() ? 0 : 1);
		auto out = g.out_edges(v);
		return GeoTree::node(self(self, out[0].target), self(self, out[1].target));
	};
	return rec(rec, g.root());
}

inline int count_internal(GeoTree const &t)
{
	return t.is_leaf() ? 0 : 1 + count_internal(t.kids[0]) + count_internal(t.kids[1]);
}

/// Post-order labeling, children visited in canonical (sorted) order.
inline LieGraph realize(GeoTree const &t)
{
	std::vector<Edge> edges;
	int next = 0;
	auto rec = [&](auto &self, GeoTree const &node) -> VertexId {
		if (node.is_leaf())
			return node.ground == 0 ? VertexId::g1() : VertexId::g2();
		VertexId a = self(self, node.kids[0]);
		VertexId b = self(self, node.kids[1]);
		VertexId me = VertexId::air(++next);
		edges.push_back({me, a});
		edges.push_back({me, b});
		return me;
	};
	rec(rec, t);
	return LieGraph(next, std::move(edges));
}

inline std::vector<GeoTree> const &trees_with(int n)
{
	static std::mutex mu;
	static std::map<int, std::vector<GeoTree>> memo;
	std::lock_guard lock(mu);
	auto build = [&](auto &self, int k) -> std::vector<GeoTree> const & {
		if (auto it = memo.find(k); it != memo.end())
			return it->second;
		std::vector<GeoTree> out;
		if (k == 0)
			out = {GeoTree::leaf(0), GeoTree::leaf(1)};
		else
			for (int left = 0; 2 * left <= k - 1; ++left)
			{
				int right = k - 1 - left;
				// copies: the memo map may rehash nothing, but keep it simple
				auto ls = self(self, left);
				auto rs = self(self, right);
				for (std::size_t a = 0; a < ls.size(); ++a)
					for (std::size_t b = (left == right ? a : 0); b < rs.size(); ++b)
						out.push_back(GeoTree::node(ls[a], rs[b]));
			}
		std::sort(out.begin(), out.end(), [](auto const &x, auto const &y) { return x.encoding < y.encoding; });
		return memo.emplace(k, std::move(out)).first->second;
	};
	return build(build, n);
}

} // namespace detail

inline std::string to_hex(std::string_view bytes)
{
	static constexpr char digits[] = "0123456789abcdef";
	std::string out;
	out.reserve(2 * bytes.size());
	for (unsigned char c : bytes)
	{
		out.push_back(digits[c >> 4]);
		out.push_back(digits[c & 15]);
	}
	return out;
}

struct GeometricClass
{
	LieGraph canonical;
	/// canonical nested-parenthesis serialization of the unlabeled tree
	std::string encoding;

	std::string hex() const { return to_hex(encoding); }
};

inline constexpr int kEnumerationCap = 10;

/// Canonical encoding of the class of a labeled graph.
inline std::string encoding_of(LieGraph const &g) { return detail::tree_of(g).encoding; }

inline LieGraph canonical_representative(LieGraph const &g) { return detail::realize(detail::tree_of(g)); }

/// All geometric classes with n air vertices, sorted by encoding.
inline std::vector<GeometricClass> enumerate_geometric(int n, int cap = kEnumerationCap)
{
	if (n < 1)
		throw std::invalid_argument("enumerate_geometric: n must be >= 1");
	if (n > cap)
		throw std::invalid_argument("enumerate_geometric: n exceeds cap " + std::to_string(cap));
	std::vector<GeometricClass> out;
	for (auto const &t : detail::trees_with(n))
		out.push_back({detail::realize(t), t.encoding});
	return out;
}

/// Geometric class from its encoding.
inline GeometricClass class_from_encoding(std::string_view enc)
{
	std::size_t pos = 0;
	auto rec = [&](auto &self) -> detail::GeoTree {
		if (pos >= enc.size())
			throw std::invalid_argument("truncated class encoding");
		char c = enc[pos++];
		if (c == '1' || c == '2')
			return detail::GeoTree::leaf(c - '1');
		if (c != '(')
			throw std::invalid_argument("bad class encoding");
		auto a = self(self);
		auto b = self(self);
		if (pos >= enc.size() || enc[pos++] != ')')
			throw std::invalid_argument("bad class encoding");
		return detail::GeoTree::node(std::move(a), std::move(b));
	};
	auto t = rec(rec);
	if (pos != enc.size() || t.is_leaf())
		throw std::invalid_argument("bad class encoding");
	if (t.encoding != enc)
		throw std::invalid_argument("class encoding is not canonical");
	return {detail::realize(t), t.encoding};
}

inline GeometricClass class_from_hex(std::string_view hex)
{
	if (hex.size() % 2 != 0)
		throw std::invalid_argument("bad hex encoding");
	std::string bytes;
	auto nib = [](char c) -> int {
		if (c >= '0' && c <= '9')
			return c - '0';
		if (c >= 'a' && c <= 'f')
			return c - 'a' + 10;
		throw std::invalid_argument("bad hex digit");
	};
	for (std::size_t i = 0; i < hex.size(); i += 2)
		bytes.push_back(static_cast<char>(nib(hex[i]) * 16 + nib(hex[i + 1])));
	return class_from_encoding(bytes);
}

/// Expanded Lie monomial of a labeled graph, at degree n+1.
inline NCSeries<Rational> monomial_series(LieGraph const &g)
{
	return bracket_expand(to_lie_monomial(g), g.n() + 1);
}

struct ClassRef
{
	std::string encoding;
	/// monomial(g) = sign * monomial(canonical); 0 when the monomial vanishes
	int sign = 0;
};

inline ClassRef class_of(LieGraph const &g)
{
	auto enc = encoding_of(g);
	auto mine = monomial_series(g);
	auto canon = monomial_series(class_from_encoding(enc).canonical);
	if (canon.empty())
		return {enc, 0};
	auto const &[w, c] = *canon.terms().begin();
	return {enc, sgn(mine.coeff(w)) == sgn(c) ? 1 : -1};
}

// ---- families ---------------------------------------------------------------

/// The graph whose monomial is (ad A)^m (B), air vertices 1..m bottom-up.
inline LieGraph comb(int m)
{
	if (m < 1)
		throw std::invalid_argument("comb(m) needs m >= 1");
	std::vector<Edge> edges{{VertexId::air(1), VertexId::g1()}, {VertexId::air(1), VertexId::g2()}};
	for (int a = 2; a <= m; ++a)
	{
		edges.push_back({VertexId::air(a), VertexId::g1()});
		edges.push_back({VertexId::air(a), VertexId::air(a - 1)});
	}
	return LieGraph(m, std::move(edges));
}

/// The graph whose monomial is (ad A)^{i-1} [(ad A)^j B, (ad A)^k B].
inline LieGraph triple(int i, int j, int k)
{
	if (i < 1 || j < 0 || k <= j)
		throw std::invalid_argument("triple(i,j,k) needs i >= 1 and 0 <= j < k");
	std::vector<Edge> edges;
	int next = 0;
	auto chain = [&](int len) -> VertexId {
		VertexId top = VertexId::g2();
		for (int a = 0; a < len; ++a)
		{
			VertexId v = VertexId::air(++next);
			edges.push_back({v, VertexId::g1()});
			edges.push_back({v, top});
			top = v;
		}
		return top;
	};
	VertexId left = chain(j);
	VertexId right = chain(k);
	VertexId top = VertexId::air(++next);
	edges.push_back({top, left});
	edges.push_back({top, right});
	for (int a = 1; a < i; ++a)
	{
		VertexId v = VertexId::air(++next);
		edges.push_back({v, VertexId::g1()});
		edges.push_back({v, top});
		top = v;
	}
	return LieGraph(next, std::move(edges));
}

enum class Side { L, R };

struct AugmentedGraph
{
	LieGraph base;
	Side side;
	/// form order: augmenting edge first, then E(base) lexicographic
	std::vector<Edge> rows;
};

inline AugmentedGraph augment(LieGraph const &g, Side side)
{
	require_valid(g);
	std::vector<Edge> rows;
	rows.push_back({side == Side::L ? VertexId::g1() : VertexId::g2(), g.root()});
	rows.insert(rows.end(), g.edges().begin(), g.edges().end());
	return {g, side, std::move(rows)};
}

struct FamilyTag
{
	enum class Kind { none, comb, triple } kind = Kind::none;
	int i = 0, j = 0, k = 0; // comb uses i = m

	std::string str() const
	{
		switch (kind)
		{
		case Kind::comb:
			return "comb(" + std::to_string(i) + ")";
		case Kind::triple:
			return "triple(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
		default:
			return "";
		}
	}
};

struct Classification
{
	bool zero = true;
	int depth = 0;
	FamilyTag family;
};

/// Family tag of a class encoding, when it is a comb or a triple.
inline FamilyTag family_of(std::string const &enc, int n)
{
	FamilyTag tag;
	if (encoding_of(comb(n)) == enc)
	{
		tag.kind = FamilyTag::Kind::comb;
		tag.i = n;
		return tag;
	}
	for (int i = 1; i <= n; ++i)
		for (int j = 0; i + 2 * j + 1 <= n; ++j)
		{
			int k = n - i - j;
			if (k > j && encoding_of(triple(i, j, k)) == enc)
			{
				tag.kind = FamilyTag::Kind::triple;
				tag.i = i;
				tag.j = j;
				tag.k = k;
				return tag;
			}
		}
	return tag;
}

inline Classification classify(LieGraph const &g)
{
	Classification c;
	auto mono = to_lie_monomial(g);
	c.zero = bracket_expand(mono, g.n() + 1).empty();
	if (c.zero)
		return c;
	c.depth = mono.depth();
	c.family = family_of(encoding_of(g), g.n());
	return c;
}

struct Relabeled
{
	LieGraph graph;
	/// sign of the permutation taking the original edge order to the new one
	int row_sign;
};

/// perm[a-1] is the new label of air vertex a.
inline Relabeled relabel(LieGraph const &g, std::vector<int> const &perm)
{
	if (static_cast<int>(perm.size()) != g.n())
		throw std::invalid_argument("relabel: permutation size mismatch");
	auto map = [&](VertexId v) { return v.is_ground() ? v : VertexId::air(perm.at(v.air_index() - 1)); };
	std::vector<Edge> mapped;
	for (auto const &e : g.edges())
		mapped.push_back({map(e.source), map(e.target)});
	std::vector<int> order(mapped.size());
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](int a, int b) { return mapped[a] < mapped[b]; });
	// parity by cycle decomposition
	int sign = 1;
	std::vector<bool> seen(order.size(), false);
	for (std::size_t s = 0; s < order.size(); ++s)
	{
		if (seen[s])
			continue;
		int len = 0;
		for (std::size_t c = s; !seen[c]; c = order[c])
		{
			seen[c] = true;
			++len;
		}
		if (len % 2 == 0)
			sign = -sign;
	}
	return {LieGraph(g.n(), std::move(mapped)), sign};
}

// ---- serialization ----------------------------------------------------------

inline nlohmann::json to_json(LieGraph const &g)
{
	nlohmann::json edges = nlohmann::json::array();
	for (auto const &e : g.edges())
		edges.push_back({e.source.str(), e.target.str()});
	return {{"n", g.n()}, {"edges", edges}};
}

inline LieGraph graph_from_json(nlohmann::json const &j)
{
	std::vector<Edge> edges;
	for (auto const &e : j.at("edges"))
		edges.push_back({VertexId::parse(e.at(0).get<std::string>()), VertexId::parse(e.at(1).get<std::string>())});
	return LieGraph(j.at("n").get<int>(), std::move(edges));
}

/// "comb(m)", "triple(i,j,k)", a class encoding such as "(1(12))", or JSON.
inline LieGraph parse_graph_spec(std::string const &spec)
{
	auto ints = [&](std::string_view body) {
		std::vector<int> v;
		std::size_t p = 0;
		while (p <= body.size())
		{
			auto q = body.find(',', p);
			if (q == std::string_view::npos)
				q = body.size();
			auto tok = std::string(body.substr(p, q - p));
			std::size_t used = 0;
			int x = std::stoi(tok, &used);
			if (used != tok.size())
				throw std::invalid_argument("bad integer in graph spec");
			v.push_back(x);
			p = q + 1;
		}
		return v;
	};
	auto body_of = [&](std::string_view prefix) -> std::optional<std::string_view> {
		std::string_view s(spec);
		if (s.starts_with(prefix) && s.ends_with(")"))
			return s.substr(prefix.size(), s.size() - prefix.size() - 1);
		return std::nullopt;
	};
	try
	{
		if (auto b = body_of("comb("))
		{
			auto v = ints(*b);
			if (v.size() != 1)
				throw std::invalid_argument("comb takes one index");
			return comb(v[0]);
		}
		if (auto b = body_of("triple("))
		{
			auto v = ints(*b);
			if (v.size() != 3)
				throw std::invalid_argument("triple takes three indices");
			return triple(v[0], v[1], v[2]);
		}
		if (!spec.empty() && spec[0] == '(')
			return class_from_encoding(spec).canonical;
		if (!spec.empty() && spec[0] == '{')
			return graph_from_json(nlohmann::json::parse(spec));
	}
	catch (std::invalid_argument const &)
	{
		throw;
	}
	catch (std::exception const &e)
	{
		throw std::invalid_argument(std::string("bad graph spec: ") + e.what());
	}
	throw std::invalid_argument("unrecognized graph spec '" + spec + "'");
}

} // namespace atassoc
