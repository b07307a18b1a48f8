#pragma once

// key = value configuration files for integrator defaults. Blank lines and
// lines starting with '#' are ignored.

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace atassoc::cli {

using ConfigMap = std::map<std::string, std::string>;

inline std::string trim(std::string const &s)
{
	auto b = s.find_first_not_of(" \t\r");
	if (b == std::string::npos)
		return "";
	auto e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

inline ConfigMap parse_config(std::istream &in, std::string const &origin = "config")
{
	ConfigMap out;
	std::string line;
	for (int lineno = 1; std::getline(in, line); ++lineno)
	{
		auto t = trim(line);
		if (t.empty() || t[0] == '#')
			continue;
		auto eq = t.find('=');
		if (eq == std::string::npos)
			throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
		auto key = trim(t.substr(0, eq));
		if (key.empty())
			throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
		out[key] = trim(t.substr(eq + 1));
	}
	return out;
}

inline ConfigMap load_config(std::string const &path)
{
	std::ifstream in(path);
	if (!in)
		throw std::invalid_argument("cannot read config file " + path);
	return parse_config(in, path);
}

} // namespace atassoc::cli
