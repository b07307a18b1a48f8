// atassoc: associator coefficients from Kontsevich weight forms.

#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace atassoc;
using namespace atassoc::cli;

int main(int argc, char **argv)
{
	Options o;
	CLI::App app{"Alekseev-Torossian associator coefficients via Kontsevich weight forms"};
	app.require_subcommand(1);

	std::vector<std::pair<std::string, CLI::Option *>> integrator;
	auto common = [&](CLI::App *sub) {
		sub->add_option("--cache", o.cache, "cache directory (overrides " + std::string(kCacheEnv) + ")");
		integrator.push_back({"seed", sub->add_option("--seed", o.seed, "base random seed")});
		integrator.push_back({"samples", sub->add_option("--samples", o.samples, "fiber samples per path node")});
		integrator.push_back({"nodes", sub->add_option("--nodes", o.nodes, "Gauss-Legendre nodes on the path")});
		integrator.push_back({"threads", sub->add_option("--threads", o.threads, "worker threads (0: all cores)")});
		integrator.push_back({"batch", sub->add_option("--batch", o.batch, "samples per random substream")});
		integrator.push_back({"budget", sub->add_option("--budget", o.budget, "fresh sample budget (0: none)")});
		integrator.push_back(
		    {"transform", sub->add_option("--transform", o.transform, "fiber transform: mixture or tangent")});
		integrator.push_back({"path", sub->add_option("--path", o.path, "eye path id")});
		integrator.push_back({"easing", sub->add_option("--easing", o.easing, "node easing: smoothstep or none")});
		sub->add_option("--config", o.config, "key = value file with integrator defaults");
		sub->add_flag("--human", o.human, "aligned table instead of JSON");
	};

	auto *graphs = app.add_subcommand("graphs", "list geometric classes of Lie graphs");
	graphs->add_option("--n", o.n, "number of air vertices")->required();
	graphs->add_flag("--nonzero", o.nonzero, "only classes with a nonzero monomial");
	common(graphs);

	auto *prof = app.add_subcommand("profile", "profile of hat-omega along the eye path");
	prof->add_option("graph", o.graph, "comb(m), triple(i,j,k), an encoding or graph JSON")->required();
	common(prof);

	auto *coeff = app.add_subcommand("coeff", "one coefficient of Phi_AT");
	coeff->add_option("word", o.word, "word over A, B")->required();
	coeff->add_option("--mode", o.mode, "formal or numeric");
	common(coeff);

	auto *series = app.add_subcommand("series", "Phi_AT up to a degree");
	series->add_option("--N", o.N, "degree cap");
	series->add_option("--depth", o.depth, "depth cap (default: N)");
	series->add_option("--mode", o.mode, "formal or numeric");
	common(series);

	auto *verify = app.add_subcommand("verify", "check associator properties");
	verify->add_option("--suites", o.suites, "comma list of bernoulli, even, duality, grouplike, zeta");
	verify->add_option("--N", o.N, "degree cap");
	verify->add_option("--floor", o.floor, "absolute tolerance floor");
	common(verify);

	auto *zeta_cmd = app.add_subcommand("zeta", "reference zeta values");
	common(zeta_cmd);

	CLI11_PARSE(app, argc, argv);

	std::vector<std::string> warnings;
	try
	{
		std::set<std::string> given;
		for (auto const &[key, opt] : integrator)
			if (opt->count() > 0)
				given.insert(key);
		bool cache_flag = !o.cache.empty();
		if (!o.config.empty())
		{
			auto cfg = load_config(o.config);
			if (cache_flag)
				given.insert("cache");
			apply_config(o, cfg, given);
		}
		Cache cache(resolve_cache_root(o, cache_flag), [&](std::string const &m) {
			warnings.push_back(m);
			std::cerr << "warning: " << m << '\n';
		});

		Outcome out;
		if (*graphs)
			out = cmd_graphs(o);
		else if (*prof)
			out = cmd_profile(o, cache);
		else if (*coeff)
			out = cmd_coeff(o, cache);
		else if (*series)
			out = cmd_series(o, cache);
		else if (*verify)
			out = cmd_verify(o, cache);
		else
			out = cmd_zeta(o);
		if (!warnings.empty())
			out.doc["warnings"] = warnings;
		if (o.human)
		{
			std::cout << out.table;
			for (auto const &w : warnings)
				std::cout << "warning: " << w << '\n';
		}
		else
			std::cout << out.doc.dump(2) << '\n';
		return out.exit_code;
	}
	catch (UsageError const &e)
	{
		std::cerr << "usage error: " << e.what() << '\n';
		return 2;
	}
	catch (std::exception const &e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
}
