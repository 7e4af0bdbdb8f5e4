#include "flowlab/digits.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

namespace flowlab::digits {

namespace {

void check_digits(int base, const std::vector<std::uint8_t>& ds) {
    for (auto d : ds) {
        if (d >= base) throw DigitError("digit " + std::to_string(d) + " not below base " + std::to_string(base));
    }
}

bool all_equal(const std::vector<std::uint8_t>& ds, std::uint8_t v) {
    return std::all_of(ds.begin(), ds.end(), [v](std::uint8_t d) { return d == v; });
}

std::vector<std::uint8_t> expand_base4(const std::vector<std::uint8_t>& ds) {
    std::vector<std::uint8_t> out;
    out.reserve(2 * ds.size());
    for (auto a : ds) {
        out.push_back(static_cast<std::uint8_t>(a >> 1));
        out.push_back(static_cast<std::uint8_t>(a & 1));
    }
    return out;
}

std::vector<std::uint8_t> pair_bits(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> out;
    out.reserve(bits.size() / 2);
    for (std::size_t i = 0; i + 1 < bits.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>(2 * bits[i] + bits[i + 1]));
    }
    return out;
}

}  // namespace

DigitStream::DigitStream(int base, std::vector<std::uint8_t> prefix, Tail tail,
                         std::vector<std::uint8_t> block)
    : base_(base), prefix_(std::move(prefix)), tail_(tail), block_(std::move(block)) {
    if (base_ != 2 && base_ != 4) throw DigitError("base must be 2 or 4");
    check_digits(base_, prefix_);
    check_digits(base_, block_);
    if (tail_ == Tail::Repeating && block_.empty()) throw DigitError("repeating tail needs a block");
    if (tail_ != Tail::Repeating) block_.clear();
}

DigitStream DigitStream::terminating(int base, std::vector<std::uint8_t> digits) {
    return DigitStream(base, std::move(digits), Tail::TerminatingZeros);
}

DigitStream DigitStream::repeating(int base, std::vector<std::uint8_t> prefix,
                                   std::vector<std::uint8_t> block) {
    return DigitStream(base, std::move(prefix), Tail::Repeating, std::move(block));
}

DigitStream DigitStream::truncated(int base, std::vector<std::uint8_t> digits) {
    return DigitStream(base, std::move(digits), Tail::Unspecified);
}

DigitStream DigitStream::parse(std::string_view text, int base) {
    auto fail = [&](const std::string& why) {
        return DigitError("cannot parse digit string '" + std::string(text) + "': " + why);
    };
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = text.size();
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    std::string_view s = text.substr(i, end - i);

    if (s.starts_with("0.")) {
        s.remove_prefix(2);
    } else if (s.starts_with(".")) {
        s.remove_prefix(1);
    } else {
        throw fail("expected leading '0.'");
    }

    auto read_digits = [&](std::string_view& v) {
        std::vector<std::uint8_t> out;
        while (!v.empty() && std::isdigit(static_cast<unsigned char>(v.front()))) {
            int d = v.front() - '0';
            if (d >= base) throw fail("digit " + std::to_string(d) + " not below base " + std::to_string(base));
            out.push_back(static_cast<std::uint8_t>(d));
            v.remove_prefix(1);
        }
        return out;
    };

    auto prefix = read_digits(s);
    if (s.empty()) return terminating(base, std::move(prefix));
    if (s == "...") return truncated(base, std::move(prefix));
    if (s.front() == '(' && s.back() == ')') {
        std::string_view inner = s.substr(1, s.size() - 2);
        if (inner.starts_with("rep=")) inner.remove_prefix(4);
        auto block = read_digits(inner);
        if (!inner.empty() || block.empty()) throw fail("bad repeating block");
        return repeating(base, std::move(prefix), std::move(block));
    }
    throw fail("unexpected trailing text");
}

DigitStream DigitStream::from_binary(long double value) {
    if (!(value >= 0.0L && value < 1.0L)) throw DigitError("from_binary needs a value in [0,1)");
    std::vector<std::uint8_t> bits;
    while (value != 0.0L) {
        value *= 2.0L;
        std::uint8_t b = value >= 1.0L ? 1 : 0;
        value -= b;
        bits.push_back(b);
    }
    return terminating(2, std::move(bits));
}

std::size_t DigitStream::available() const {
    if (tail_ == Tail::Unspecified) return prefix_.size();
    return std::numeric_limits<std::size_t>::max();
}

std::uint8_t DigitStream::digit(std::size_t position) const {
    if (position == 0) throw DigitError("digit positions start at 1");
    if (position <= prefix_.size()) return prefix_[position - 1];
    switch (tail_) {
        case Tail::TerminatingZeros:
            return 0;
        case Tail::Repeating:
            return block_[(position - prefix_.size() - 1) % block_.size()];
        case Tail::Unspecified:
            break;
    }
    throw DigitError("undecidable at depth " + std::to_string(prefix_.size()) + ": digit " +
                     std::to_string(position) + " requested");
}

long double DigitStream::value(std::size_t depth) const {
    if (depth > available()) {
        throw DigitError("insufficient digits: " + std::to_string(depth) + " requested, " +
                         std::to_string(prefix_.size()) + " available");
    }
    long double v = 0.0L;
    for (std::size_t pos = depth; pos >= 1; --pos) v = (v + digit(pos)) / base_;
    return v;
}

long double DigitStream::representative() const {
    switch (tail_) {
        case Tail::TerminatingZeros:
            return value(prefix_.size());
        case Tail::Repeating:
            return value(prefix_.size() + (base_ == 2 ? 80 : 40));
        case Tail::Unspecified:
            break;
    }
    long double half_ulp = std::pow(static_cast<long double>(base_), -static_cast<long double>(prefix_.size())) / 2;
    return value(prefix_.size()) + half_ulp;
}

DigitStream DigitStream::normalized() const {
    if (tail_ == Tail::Unspecified) return *this;
    std::vector<std::uint8_t> prefix = prefix_;
    std::vector<std::uint8_t> block = block_;
    if (tail_ == Tail::Repeating) {
        const std::size_t n = block.size();
        for (std::size_t p = 1; p < n; ++p) {
            if (n % p != 0) continue;
            bool periodic = true;
            for (std::size_t k = p; k < n && periodic; ++k) periodic = block[k] == block[k - p];
            if (periodic) {
                block.resize(p);
                break;
            }
        }
        while (!prefix.empty() && prefix.back() == block.back()) {
            std::rotate(block.rbegin(), block.rbegin() + 1, block.rend());
            prefix.pop_back();
        }
        if (all_equal(block, 0)) {
            return DigitStream::terminating(base_, std::move(prefix)).normalized();
        }
        return DigitStream::repeating(base_, std::move(prefix), std::move(block));
    }
    while (!prefix.empty() && prefix.back() == 0) prefix.pop_back();
    return DigitStream::terminating(base_, std::move(prefix));
}

std::string DigitStream::to_string() const {
    std::string out = "0.";
    for (auto d : prefix_) out.push_back(static_cast<char>('0' + d));
    if (tail_ == Tail::Repeating) {
        out += "(rep=";
        for (auto d : block_) out.push_back(static_cast<char>('0' + d));
        out += ")";
    } else if (tail_ == Tail::Unspecified) {
        out += "...";
    }
    return out;
}

DigitStream base4_to_base2(const DigitStream& s) {
    if (s.base() != 4) throw DigitError("base4_to_base2 expects a base-4 stream");
    return DigitStream(2, expand_base4(s.prefix()), s.tail(), expand_base4(s.block()));
}

DigitStream base2_to_base4(const DigitStream& s) {
    if (s.base() != 2) throw DigitError("base2_to_base4 expects a base-2 stream");
    std::vector<std::uint8_t> prefix = s.prefix();
    std::vector<std::uint8_t> block = s.block();
    if (prefix.size() % 2 == 1) {
        switch (s.tail()) {
            case Tail::TerminatingZeros:
                prefix.push_back(0);
                break;
            case Tail::Repeating:
                prefix.push_back(block.front());
                std::rotate(block.begin(), block.begin() + 1, block.end());
                break;
            case Tail::Unspecified:
                prefix.pop_back();
                break;
        }
    }
    if (block.size() % 2 == 1) {
        std::vector<std::uint8_t> twice = block;
        twice.insert(twice.end(), block.begin(), block.end());
        block = std::move(twice);
    }
    return DigitStream(4, pair_bits(prefix), s.tail(), pair_bits(block));
}

DigitStream as_base2(const DigitStream& s) {
    return s.base() == 2 ? s : base4_to_base2(s);
}

bool in_Z(const DigitStream& x) {
    const DigitStream b = as_base2(x);
    switch (b.tail()) {
        case Tail::TerminatingZeros:
            return true;
        case Tail::Repeating:
            return all_equal(b.block(), 0) || all_equal(b.block(), 1);
        case Tail::Unspecified:
            break;
    }
    throw DigitError("undecidable at depth " + std::to_string(b.prefix().size()));
}

std::pair<DigitStream, DigitStream> deinterleave(const DigitStream& x, std::size_t depth) {
    const DigitStream b = as_base2(x);
    auto pick = [&](std::size_t first, std::size_t count) {
        std::vector<std::uint8_t> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) out.push_back(b.digit(first + 2 * k));
        return out;
    };

    if (b.tail() == Tail::Unspecified) {
        if (b.available() < 2 * depth) {
            throw DigitError("insufficient digits: deinterleave to depth " + std::to_string(depth) +
                             " needs " + std::to_string(2 * depth) + ", have " +
                             std::to_string(b.available()));
        }
        return {DigitStream::truncated(2, pick(1, depth)), DigitStream::truncated(2, pick(2, depth))};
    }

    const std::size_t P = b.prefix().size();
    if (b.tail() == Tail::TerminatingZeros) {
        return {DigitStream::terminating(2, pick(1, (P + 1) / 2)).normalized(),
                DigitStream::terminating(2, pick(2, P / 2)).normalized()};
    }
    // The odd and even subsequences of a period-L sequence are again period L.
    const std::size_t L = b.block().size();
    const std::size_t K = P / 2 + 1;
    auto split = [&](std::size_t first) {
        auto all = pick(first, K + L);
        std::vector<std::uint8_t> prefix(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(K));
        std::vector<std::uint8_t> block(all.begin() + static_cast<std::ptrdiff_t>(K), all.end());
        return DigitStream::repeating(2, std::move(prefix), std::move(block)).normalized();
    };
    return {split(1), split(2)};
}

DigitStream interleave(const DigitStream& odd_in, const DigitStream& even_in, std::size_t depth) {
    const DigitStream odd = as_base2(odd_in);
    const DigitStream even = as_base2(even_in);
    auto weave = [&](std::size_t from, std::size_t count) {
        std::vector<std::uint8_t> out;
        out.reserve(2 * count);
        for (std::size_t k = from; k < from + count; ++k) {
            out.push_back(odd.digit(k + 1));
            out.push_back(even.digit(k + 1));
        }
        return out;
    };

    if (!odd.known_tail() || !even.known_tail()) {
        if (odd.available() < depth || even.available() < depth) {
            throw DigitError("insufficient digits: interleave to depth " + std::to_string(depth));
        }
        return DigitStream::truncated(2, weave(0, depth));
    }

    const std::size_t pre = std::max(odd.prefix().size(), even.prefix().size());
    if (odd.tail() == Tail::TerminatingZeros && even.tail() == Tail::TerminatingZeros) {
        return DigitStream::terminating(2, weave(0, pre)).normalized();
    }
    auto period = [](const DigitStream& s) { return s.tail() == Tail::Repeating ? s.block().size() : 1; };
    const std::size_t L = std::lcm(period(odd), period(even));
    return DigitStream::repeating(2, weave(0, pre), weave(pre, L)).normalized();
}

bool has_degenerate_interleave_tail(const DigitStream& x) {
    const DigitStream b = as_base2(x);
    if (!b.known_tail()) throw DigitError("undecidable at depth " + std::to_string(b.prefix().size()));
    auto [odd, even] = deinterleave(b, 0);
    return in_Z(odd) || in_Z(even);
}

}  // namespace flowlab::digits
