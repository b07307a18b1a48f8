#pragma once

/**
 * @file commands.hpp
 * @brief Subcommand logic of the atassoc tool, independent of argument parsing.
 *
 * Every command returns a JSON document, a rendered table for --human, and
 * an exit code (0 iff the command succeeded and all requested checks passed).
 */

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "atassoc/atassoc.hpp"
#include "config.hpp"

namespace atassoc::cli {

using nlohmann::json;

class UsageError : public std::invalid_argument
{
  public:
	using std::invalid_argument::invalid_argument;
};

struct Options
{
	std::uint64_t samples = 200000;
	std::uint64_t seed = 1;
	std::uint64_t batch = 4096;
	std::uint64_t budget = 0;
	int nodes = 32;
	int threads = 0;
	std::string transform = "mixture";
	std::string path = "horizontal";
	std::string easing = "smoothstep";
	std::string cache;
	std::string config;
	bool human = false;

	int n = 0;
	bool nonzero = false;
	std::string graph;
	std::string word;
	std::string mode = "formal";
	std::string suites = "bernoulli,even,duality,grouplike,zeta";
	int N = 4;
	int depth = -1;
	double floor = 0.0;
};

struct Outcome
{
	json doc;
	std::string table;
	int exit_code = 0;
};

/// Config keys fill options not given on the command line.
inline void apply_config(Options &o, ConfigMap const &cfg, std::set<std::string> const &given)
{
	for (auto const &[key, val] : cfg)
	{
		if (given.count(key))
			continue;
		try
		{
			if (key == "samples")
				o.samples = std::stoull(val);
			else if (key == "seed")
				o.seed = std::stoull(val);
			else if (key == "batch")
				o.batch = std::stoull(val);
			else if (key == "budget")
				o.budget = std::stoull(val);
			else if (key == "nodes")
				o.nodes = std::stoi(val);
			else if (key == "threads")
				o.threads = std::stoi(val);
			else if (key == "transform")
				o.transform = val;
			else if (key == "path")
				o.path = val;
			else if (key == "easing")
				o.easing = val;
			else if (key == "cache")
				o.cache = val;
			else
				throw UsageError("unknown config key '" + key + "'");
		}
		catch (std::logic_error const &e)
		{
			if (dynamic_cast<UsageError const *>(&e))
				throw;
			throw UsageError("bad value for config key '" + key + "': " + val);
		}
	}
}

/// Flag, else environment, else config file, else the default directory.
inline std::string resolve_cache_root(Options const &o, bool flag_given)
{
	if (flag_given && !o.cache.empty())
		return o.cache;
	if (char const *env = std::getenv(kCacheEnv); env && *env)
		return env;
	if (!o.cache.empty())
		return o.cache;
	return ".atassoc-cache";
}

inline GridConfig grid_of(Options const &o)
{
	if (o.nodes < 1)
		throw UsageError("--nodes must be positive");
	return {o.nodes, o.easing, o.path};
}

inline McConfig mc_of(Options const &o)
{
	if (o.samples < 1)
		throw UsageError("--samples must be positive");
	McConfig mc;
	mc.samples = o.samples;
	mc.seed = o.seed;
	mc.batch = o.batch;
	mc.threads = o.threads > 0 ? o.threads : std::max(1u, std::thread::hardware_concurrency());
	mc.transform = parse_transform(o.transform);
	return mc;
}

inline json meta_of(Options const &o)
{
	return {{"seed", o.seed},         {"samples", o.samples}, {"nodes", o.nodes},
	        {"batch", o.batch},       {"path", o.path},       {"transform", o.transform},
	        {"easing", o.easing},     {"convention", kConventionVersion}};
}

// ---- tables -----------------------------------------------------------------

class Table
{
  public:
	explicit Table(std::vector<std::string> head) : rows_{std::move(head)} {}
	void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

	std::string str() const
	{
		std::vector<std::size_t> width;
		for (auto const &r : rows_)
			for (std::size_t c = 0; c < r.size(); ++c)
			{
				if (width.size() <= c)
					width.push_back(0);
				width[c] = std::max(width[c], r[c].size());
			}
		std::ostringstream os;
		for (std::size_t i = 0; i < rows_.size(); ++i)
		{
			for (std::size_t c = 0; c < rows_[i].size(); ++c)
			{
				if (c + 1 == rows_[i].size())
				{
					os << rows_[i][c];
					break;
				}
				os << std::left << std::setw(static_cast<int>(width[c])) << rows_[i][c] << "  ";
			}
			os << '\n';
			if (i == 0)
			{
				std::size_t total = 0;
				for (auto w : width)
					total += w + 2;
				os << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
			}
		}
		return os.str();
	}

  private:
	std::vector<std::vector<std::string>> rows_;
};

inline std::string fmt_num(double x)
{
	std::ostringstream os;
	os << std::setprecision(8) << x;
	return os.str();
}

// ---- commands ---------------------------------------------------------------

inline Outcome cmd_graphs(Options const &o)
{
	if (o.n < 1)
		throw UsageError("graphs: --n must be at least 1");
	if (o.n > kEnumerationCap)
		throw UsageError("graphs: --n exceeds the enumeration cap " + std::to_string(kEnumerationCap));
	Outcome out;
	json rows = json::array();
	Table t({"hex", "encoding", "monomial", "zero", "depth", "family"});
	for (auto const &gc : enumerate_geometric(o.n))
	{
		auto cls = classify(gc.canonical);
		if (o.nonzero && cls.zero)
			continue;
		auto mono = to_lie_monomial(gc.canonical).str();
		rows.push_back({{"hex", gc.hex()},
		                {"encoding", gc.encoding},
		                {"monomial", mono},
		                {"zero", cls.zero},
		                {"depth", cls.depth},
		                {"family", cls.family.str()},
		                {"graph", to_json(gc.canonical)}});
		t.add({gc.hex(), gc.encoding, mono, cls.zero ? "yes" : "no", std::to_string(cls.depth), cls.family.str()});
	}
	out.doc = {{"command", "graphs"}, {"n", o.n}, {"nonzero_only", o.nonzero}, {"count", rows.size()},
	           {"classes", rows}};
	out.table = t.str() + std::to_string(rows.size()) + " classes\n";
	return out;
}

inline Outcome cmd_profile(Options const &o, Cache const &cache)
{
	if (o.graph.empty())
		throw UsageError("profile: a graph spec is required");
	LieGraph g = parse_graph_spec(o.graph);
	auto grid = grid_of(o);
	auto mc = mc_of(o);
	auto p = profile(g, grid, mc, &cache);
	auto total = path_integral(p);
	Outcome out;
	out.doc = {{"command", "profile"},
	           {"graph", o.graph},
	           {"encoding", p.encoding},
	           {"cache", p.from_cache ? "hit" : "miss"},
	           {"key", p.id},
	           {"profile", to_json(p)},
	           {"integral", to_json(total)},
	           {"meta", meta_of(o)}};
	Table t({"j", "s", "f(s)", "stderr"});
	for (int j = 0; j < p.nodes(); ++j)
		t.add({std::to_string(j), fmt_num(p.s[j]), fmt_num(p.values[j]), fmt_num(p.sigmas[j])});
	out.table = t.str() + "integral " + fmt_num(total.value) + " +- " + fmt_num(total.sigma) + " (cache " +
	            (p.from_cache ? "hit" : "miss") + ")\n";
	return out;
}

inline NumericConfig numeric_of(Options const &o, Cache const &cache)
{
	NumericConfig cfg;
	cfg.grid = grid_of(o);
	cfg.mc = mc_of(o);
	cfg.sample_budget = o.budget;
	cfg.cache = &cache;
	return cfg;
}

inline Outcome cmd_coeff(Options const &o, Cache const &cache)
{
	if (o.word.empty())
		throw UsageError("coeff: a word over A, B is required");
	Word w;
	try
	{
		w = Word::parse(o.word);
	}
	catch (std::invalid_argument const &e)
	{
		throw UsageError(e.what());
	}
	if (w.degree() > kFormalCap)
		throw UsageError("coeff: word longer than " + std::to_string(kFormalCap));
	Outcome out;
	if (o.mode == "formal")
	{
		auto e = formal_series(w.degree(), w.depth()).coeff(w);
		out.doc = {{"command", "coeff"}, {"word", w.str()}, {"mode", "formal"}, {"coefficient", to_string(e)},
		           {"terms", scalar_to_json(e)}};
		out.table = w.str() + " = " + to_string(e) + "\n";
		return out;
	}
	if (o.mode != "numeric")
		throw UsageError("coeff: --mode must be formal or numeric");
	auto r = numeric_coefficient(w, numeric_of(o, cache));
	out.doc = {{"command", "coeff"}, {"word", w.str()},           {"mode", "numeric"},
	           {"formal", to_string(r.formal)},                   {"complete", r.complete()},
	           {"missing", r.missing},                            {"meta", meta_of(o)}};
	if (r.complete())
		out.doc["estimate"] = to_json(r.estimate);
	out.table = w.str() + " = " + to_string(r.formal) + "\n" +
	            (r.complete() ? "    ~ " + fmt_num(r.estimate.value) + " +- " + fmt_num(r.estimate.sigma) + "\n"
	                          : "    incomplete: budget exceeded\n");
	out.exit_code = r.complete() ? 0 : 1;
	return out;
}

inline Outcome cmd_series(Options const &o, Cache const &cache)
{
	if (o.N < 0 || o.N > kFormalCap)
		throw UsageError("series: --N must be in [0, " + std::to_string(kFormalCap) + "]");
	int depth = o.depth < 0 ? o.N : o.depth;
	Outcome out;
	if (o.mode == "formal")
	{
		auto phi = formal_series(o.N, depth);
		json labels = json::object();
		Table t({"word", "coefficient"});
		for (auto const &[w, e] : phi.terms())
		{
			labels[w.str()] = to_string(e);
			t.add({w.str().empty() ? "1" : w.str(), to_string(e)});
		}
		out.doc = {{"command", "series"}, {"mode", "formal"}, {"N", o.N}, {"depth", depth},
		           {"series", to_json(phi)}, {"labels", labels}};
		out.table = t.str();
		return out;
	}
	if (o.mode != "numeric")
		throw UsageError("series: --mode must be formal or numeric");
	auto r = numeric_series(o.N, numeric_of(o, cache), depth);
	Table t({"word", "estimate", "stderr"});
	for (auto const &[w, c] : r.series.terms())
		t.add({w.str().empty() ? "1" : w.str(), fmt_num(c.value), fmt_num(c.err)});
	out.doc = {{"command", "series"}, {"mode", "numeric"},  {"N", o.N},
	           {"depth", depth},      {"series", to_json(r.series)}, {"complete", r.complete()},
	           {"missing", r.missing}, {"missing_words", r.missing_words}, {"provenance", r.provenance},
	           {"meta", meta_of(o)}};
	out.table = t.str();
	out.exit_code = r.complete() ? 0 : 1;
	return out;
}

inline std::vector<std::string> split_suites(std::string const &s)
{
	std::vector<std::string> out;
	std::stringstream ss(s);
	for (std::string item; std::getline(ss, item, ',');)
		if (auto t = trim(item); !t.empty())
			out.push_back(t);
	return out;
}

inline Outcome cmd_verify(Options const &o, Cache const &cache)
{
	static const std::set<std::string> known{"bernoulli", "even", "duality", "grouplike", "zeta"};
	auto suites = split_suites(o.suites);
	if (suites.empty())
		throw UsageError("verify: no suites given");
	for (auto const &s : suites)
		if (!known.count(s))
			throw UsageError("verify: unknown suite '" + s + "'");
	if (o.N < 1 || o.N > kFormalCap)
		throw UsageError("verify: --N must be in [1, " + std::to_string(kFormalCap) + "]");
	auto has = [&](char const *s) { return std::find(suites.begin(), suites.end(), s) != suites.end(); };
	std::vector<Report> reports;
	Tolerance tol{3.0, o.floor, 0.0};
	auto cfg = numeric_of(o, cache);

	if (has("bernoulli"))
		for (int n = 2; n <= o.N; ++n)
		{
			auto c = numeric_coefficient(depth_one_word(n), cfg);
			if (!c.complete())
				throw std::runtime_error("verify: sample budget exceeded for bernoulli(" + std::to_string(n) + ")");
			NCSeries<Uncertain> s(n);
			s.add(depth_one_word(n), Uncertain(c.estimate.value, c.estimate.sigma));
			reports.push_back(check_bernoulli(n, s, tol, c.estimate.provenance));
		}
	bool need_numeric = has("even") || has("duality") || has("grouplike");
	if (need_numeric)
	{
		auto r = numeric_series(o.N, cfg);
		if (!r.complete())
			throw std::runtime_error("verify: sample budget exceeded; missing " + std::to_string(r.missing.size()) +
			                         " profiles");
		PathGrid grid(cfg.grid.nodes, cfg.grid.easing);
		if (has("even"))
			reports.push_back(check_even(r.series, tol, r.provenance));
		if (has("duality"))
		{
			reports.push_back(check_duality(r.formal));
			reports.push_back(check_duality(r.formal, r.profiles, grid, tol));
		}
		if (has("grouplike"))
		{
			reports.push_back(check_grouplike(r.formal));
			reports.push_back(check_grouplike(r.series, tol, r.provenance));
		}
	}
	if (has("zeta"))
	{
		Report z;
		z.check = "zeta";
		z.target = zeta(3);
		z.estimate = double_zeta(1, 2);
		z.tolerance = 1e-10;
		z.pass = std::abs(z.estimate - z.target) <= z.tolerance &&
		         std::abs(zeta(2) - std::numbers::pi * std::numbers::pi / 6) <= 1e-12;
		z.details = zeta_reference_json();
		reports.push_back(z);
	}

	Outcome out;
	json arr = json::array();
	bool all = true;
	Table t({"check", "target", "estimate", "stderr", "tolerance", "result"});
	for (auto const &r : reports)
	{
		all = all && r.pass;
		arr.push_back(r.to_json());
		t.add({r.check, fmt_num(r.target), fmt_num(r.estimate), fmt_num(r.stderr_), fmt_num(r.tolerance),
		       r.pass ? "pass" : "FAIL"});
	}
	out.doc = {{"command", "verify"}, {"N", o.N}, {"suites", suites}, {"pass", all}, {"reports", arr},
	           {"meta", meta_of(o)}};
	out.table = t.str();
	out.exit_code = all ? 0 : 1;
	return out;
}

inline Outcome cmd_zeta(Options const &)
{
	Outcome out;
	auto ref = zeta_reference_json();
	out.doc = {{"command", "zeta"}, {"values", ref}};
	Table t({"quantity", "value"});
	for (auto const &[k, v] : ref.items())
	{
		std::ostringstream os;
		os << std::setprecision(16) << v.get<double>();
		t.add({k, os.str()});
	}
	out.table = t.str();
	return out;
}

} // namespace atassoc::cli
