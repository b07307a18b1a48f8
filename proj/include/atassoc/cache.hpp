#pragma once

/**
 * @file cache.hpp
 * @brief Content-addressed on-disk cache for profiles and estimates.
 *
 * One JSON file per key, `<root>/<fnv1a64(key)>.json`, holding a header that
 * repeats the full key and a payload. Files are published by rename, so
 * readers never see partial writes. Valid entries are never overwritten;
 * unreadable entries are reported and recomputed by the caller.
 */

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "quadrature.hpp"
#include "rng.hpp"

namespace atassoc {

/// Bumped whenever geometric conventions (orientation, path gauge, row order) change.
inline constexpr int kConventionVersion = 1;

inline constexpr char const *kCacheEnv = "ATASSOC_CACHE";

struct ProfileKey
{
	std::string encoding_hex;
	std::string side = "R-L";
	std::string path = "horizontal";
	std::string transform = "mixture";
	std::string easing = "smoothstep";
	int nodes = 32;
	std::uint64_t samples = 0;
	std::uint64_t seed = 0;
	std::uint64_t batch = 0;
	int convention = kConventionVersion;

	std::string str() const
	{
		std::ostringstream os;
		os << "profile;g=" << encoding_hex << ";side=" << side << ";path=" << path << ";transform=" << transform
		   << ";easing=" << easing << ";nodes=" << nodes << ";samples=" << samples << ";seed=" << seed
		   << ";batch=" << batch << ";convention=" << convention;
		return os.str();
	}
};

inline std::string key_hash(std::string const &key)
{
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
	return buf;
}

inline nlohmann::json to_json(IntegralEstimate const &e)
{
	return {{"value", e.value},       {"stderr", e.sigma},       {"samples", e.samples},
	        {"rejected", e.rejected}, {"provenance", e.provenance}};
}

inline IntegralEstimate estimate_from_json(nlohmann::json const &j)
{
	IntegralEstimate e;
	e.value = j.at("value").get<double>();
	e.sigma = j.at("stderr").get<double>();
	e.samples = j.at("samples").get<std::uint64_t>();
	e.rejected = j.at("rejected").get<std::uint64_t>();
	e.provenance = j.at("provenance").get<std::vector<std::string>>();
	if (!(e.sigma >= 0.0))
		throw std::invalid_argument("estimate with negative stderr");
	return e;
}

inline nlohmann::json to_json(Profile const &p)
{
	return {{"id", p.id},
	        {"encoding", p.encoding},
	        {"side", p.side},
	        {"path", p.path},
	        {"transform", p.transform},
	        {"easing", p.easing},
	        {"samples", p.samples},
	        {"seed", p.seed},
	        {"batch", p.batch},
	        {"convention", p.convention},
	        {"s", p.s},
	        {"values", p.values},
	        {"stderr", p.sigmas},
	        {"rejected", p.rejected}};
}

inline Profile profile_from_json(nlohmann::json const &j)
{
	Profile p;
	p.id = j.at("id").get<std::string>();
	p.encoding = j.at("encoding").get<std::string>();
	p.side = j.at("side").get<std::string>();
	p.path = j.at("path").get<std::string>();
	p.transform = j.at("transform").get<std::string>();
	p.easing = j.at("easing").get<std::string>();
	p.samples = j.at("samples").get<std::uint64_t>();
	p.seed = j.at("seed").get<std::uint64_t>();
	p.batch = j.at("batch").get<std::uint64_t>();
	p.convention = j.at("convention").get<int>();
	p.s = j.at("s").get<std::vector<double>>();
	p.values = j.at("values").get<std::vector<double>>();
	p.sigmas = j.at("stderr").get<std::vector<double>>();
	p.rejected = j.at("rejected").get<std::uint64_t>();
	if (p.values.size() != p.s.size() || p.sigmas.size() != p.s.size())
		throw std::invalid_argument("profile arrays differ in length");
	for (std::size_t i = 0; i < p.values.size(); ++i)
		if (!std::isfinite(p.values[i]) || !(p.sigmas[i] >= 0.0))
			throw std::invalid_argument("profile with invalid node value");
	return p;
}

class Cache
{
  public:
	using Warn = std::function<void(std::string const &)>;

	explicit Cache(std::filesystem::path root, Warn warn = {}) : root_(std::move(root)), warn_(std::move(warn))
	{
		if (!warn_)
			warn_ = [](std::string const &m) { std::cerr << "warning: " << m << '\n'; };
		std::filesystem::create_directories(root_);
	}

	/// Root from the environment, else `fallback`.
	static std::filesystem::path default_root(std::filesystem::path fallback = ".atassoc-cache")
	{
		if (char const *env = std::getenv(kCacheEnv); env && *env)
			return env;
		return fallback;
	}

	std::filesystem::path const &root() const { return root_; }
	std::filesystem::path file_for(std::string const &key) const { return root_ / (key_hash(key) + ".json"); }
	int warnings() const { return warnings_; }

	/// Payload stored under `key`, or nothing when absent or unreadable.
	std::optional<nlohmann::json> get(std::string const &key) const
	{
		auto file = file_for(key);
		if (!std::filesystem::exists(file))
			return std::nullopt;
		try
		{
			std::ifstream in(file);
			auto j = nlohmann::json::parse(in);
			if (j.at("header").at("key").get<std::string>() != key)
				throw std::runtime_error("key mismatch");
			return j.at("payload");
		}
		catch (std::exception const &e)
		{
			warn("corrupt cache entry " + file.string() + " (" + e.what() + "), recomputing");
			return std::nullopt;
		}
	}

	/// Publishes unless a readable entry already exists; returns whether written.
	bool put(std::string const &key, nlohmann::json const &payload) const
	{
		auto file = file_for(key);
		if (std::filesystem::exists(file) && readable(file, key))
			return false;
		nlohmann::json doc = {{"header", {{"key", key}, {"convention", kConventionVersion}, {"format", 1}}},
		                      {"payload", payload}};
		std::ostringstream tag;
		tag << std::this_thread::get_id();
		auto tmp = file;
		tmp += ".tmp." + tag.str();
		{
			std::ofstream out(tmp);
			out << doc.dump(1) << '\n';
			if (!out)
				throw std::runtime_error("cannot write cache file " + tmp.string());
		}
		std::filesystem::rename(tmp, file);
		return true;
	}

	std::optional<Profile> get_profile(std::string const &key) const
	{
		auto j = get(key);
		if (!j)
			return std::nullopt;
		try
		{
			auto p = profile_from_json(*j);
			p.from_cache = true;
			return p;
		}
		catch (std::exception const &e)
		{
			warn("corrupt cache entry " + file_for(key).string() + " (" + e.what() + "), recomputing");
			return std::nullopt;
		}
	}

	bool put_profile(std::string const &key, Profile const &p) const { return put(key, to_json(p)); }

	std::optional<IntegralEstimate> get_estimate(std::string const &key) const
	{
		auto j = get(key);
		if (!j)
			return std::nullopt;
		try
		{
			return estimate_from_json(*j);
		}
		catch (std::exception const &e)
		{
			warn("corrupt cache entry " + file_for(key).string() + " (" + e.what() + "), recomputing");
			return std::nullopt;
		}
	}

	bool put_estimate(std::string const &key, IntegralEstimate const &e) const { return put(key, to_json(e)); }

  private:
	static bool readable(std::filesystem::path const &file, std::string const &key)
	{
		try
		{
			std::ifstream in(file);
			auto j = nlohmann::json::parse(in);
			return j.at("header").at("key").get<std::string>() == key && j.contains("payload");
		}
		catch (...)
		{
			return false;
		}
	}

	void warn(std::string const &m) const
	{
		++warnings_;
		warn_(m);
	}

	std::filesystem::path root_;
	Warn warn_;
	mutable int warnings_ = 0;
};

} // namespace atassoc
