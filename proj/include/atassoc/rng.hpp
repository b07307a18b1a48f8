#pragma once

// Reproducible random substreams: one std::mt19937_64 per (seed, stream,
// batch), so results do not depend on the thread count or scheduling.

#include <cstdint>
#include <random>
#include <string_view>

namespace atassoc {

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL)
{
	for (unsigned char c : s)
	{
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

class Substream
{
  public:
	Substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch)
	{
		std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
		                  static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
		                  static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
		eng_.seed(seq);
	}

	/// Uniform on the open interval (0,1).
	double uniform()
	{
		return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
	}

	std::uint64_t bits() { return eng_(); }

  private:
	std::mt19937_64 eng_;
};

} // namespace atassoc
