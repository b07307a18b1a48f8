#pragma once

// Words over the two-letter alphabet {A, B}.

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace atassoc {

enum class Letter : std::uint8_t { A = 0, B = 1 };

inline char to_char(Letter l) { return l == Letter::A ? 'A' : 'B'; }

/// Packed word, first letter in the most significant used bit, so that for
/// equal lengths integer order is lexicographic order with A < B.
class Word
{
  public:
	static constexpr int max_length = 63;

	constexpr Word() = default;

	static Word letter(Letter l) { return Word(static_cast<std::uint64_t>(l), 1); }

	static Word parse(std::string_view s)
	{
		if (s.size() > max_length)
			throw std::invalid_argument("word too long");
		std::uint64_t bits = 0;
		for (char c : s)
		{
			if (c != 'A' && c != 'B')
				throw std::invalid_argument("word letters must be A or B: '" + std::string(s) + "'");
			bits = (bits << 1) | (c == 'B' ? 1u : 0u);
		}
		return Word(bits, static_cast<int>(s.size()));
	}

	static Word power(Letter l, int k)
	{
		Word w;
		for (int i = 0; i < k; ++i)
			w = w * letter(l);
		return w;
	}

	int degree() const { return len_; }
	int depth() const { return std::popcount(bits_); }
	bool empty() const { return len_ == 0; }

	Letter operator[](int i) const
	{
		return static_cast<Letter>((bits_ >> (len_ - 1 - i)) & 1u);
	}

	/// Letters [pos, pos+count).
	Word sub(int pos, int count) const
	{
		std::uint64_t b = bits_ >> (len_ - pos - count);
		if (count < 64)
			b &= (std::uint64_t{1} << count) - 1;
		return Word(b, count);
	}

	friend Word operator*(Word const &u, Word const &v)
	{
		if (u.len_ + v.len_ > max_length)
			throw std::length_error("word too long");
		return Word((u.bits_ << v.len_) | v.bits_, u.len_ + v.len_);
	}

	/// Swap A and B letterwise.
	Word swapped() const
	{
		std::uint64_t mask = len_ == 0 ? 0 : ((std::uint64_t{1} << len_) - 1);
		return Word(~bits_ & mask, len_);
	}

	std::string str() const
	{
		std::string s;
		s.reserve(len_);
		for (int i = 0; i < len_; ++i)
			s.push_back(to_char((*this)[i]));
		return s;
	}

	std::uint64_t bits() const { return bits_; }

	friend bool operator==(Word const &, Word const &) = default;
	friend std::strong_ordering operator<=>(Word const &a, Word const &b)
	{
		if (auto c = a.len_ <=> b.len_; c != 0)
			return c;
		return a.bits_ <=> b.bits_;
	}

  private:
	constexpr Word(std::uint64_t bits, int len) : bits_(bits), len_(len) {}

	std::uint64_t bits_ = 0;
	int len_ = 0;
};

} // namespace atassoc
