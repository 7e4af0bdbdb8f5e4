#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flowlab::digits {

class DigitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Tail { TerminatingZeros, Repeating, Unspecified };

// Expansion 0.d1 d2 d3 ... of a real in [0,1] in base 2 or 4.
// Unspecified tails carry only the listed digits; anything past them is unknown.
class DigitStream {
public:
    DigitStream() = default;
    DigitStream(int base, std::vector<std::uint8_t> prefix, Tail tail,
                std::vector<std::uint8_t> block = {});

    static DigitStream terminating(int base, std::vector<std::uint8_t> digits);
    static DigitStream repeating(int base, std::vector<std::uint8_t> prefix,
                                 std::vector<std::uint8_t> block);
    static DigitStream truncated(int base, std::vector<std::uint8_t> digits);

    // Accepts "0.0101", "0.01(10)", "0.01(rep=10)", "0.0101...".
    static DigitStream parse(std::string_view text, int base = 2);

    // Exact binary digits of a value in [0,1). Doubles and long doubles are
    // finite binary fractions, so the stream terminates.
    static DigitStream from_binary(long double value);

    int base() const { return base_; }
    Tail tail() const { return tail_; }
    const std::vector<std::uint8_t>& prefix() const { return prefix_; }
    const std::vector<std::uint8_t>& block() const { return block_; }

    bool known_tail() const { return tail_ != Tail::Unspecified; }
    // Number of digits available; SIZE_MAX when the tail is known.
    std::size_t available() const;
    bool has_digit(std::size_t position) const { return position >= 1 && position <= available(); }
    // 1-based position.
    std::uint8_t digit(std::size_t position) const;

    // Sum of the first `depth` digits.
    long double value(std::size_t depth) const;
    // A concrete real consistent with the stream. Unspecified tails use the
    // midpoint of the interval of completions, so the result is never an
    // endpoint dyadic at the last known level.
    long double representative() const;

    DigitStream normalized() const;
    std::string to_string() const;

    friend bool operator==(const DigitStream&, const DigitStream&) = default;

private:
    int base_ = 2;
    std::vector<std::uint8_t> prefix_;
    Tail tail_ = Tail::TerminatingZeros;
    std::vector<std::uint8_t> block_;
};

DigitStream base4_to_base2(const DigitStream& s);
DigitStream base2_to_base4(const DigitStream& s);
DigitStream as_base2(const DigitStream& s);

// Membership in Z = {j / 2^i}. Throws DigitError for unspecified tails.
bool in_Z(const DigitStream& x);

// Odd-position bits to the first stream, even-position bits to the second.
// Known tails give exact periodic results; unspecified tails need 2*depth digits.
std::pair<DigitStream, DigitStream> deinterleave(const DigitStream& x, std::size_t depth);
DigitStream interleave(const DigitStream& odd, const DigitStream& even, std::size_t depth);

// True when either de-interleaved half is eventually constant, which is where
// the collapse map lands on the boundary of the unit square.
bool has_degenerate_interleave_tail(const DigitStream& x);

}  // namespace flowlab::digits
