#pragma once

#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include <boost/container/small_vector.hpp>

#include "pdp/errors.hpp"

namespace pdp {

// A letter is a terminal id together with an inversion bit, packed as
// 2 * terminal + inverted.
class Letter {
public:
    constexpr Letter() = default;
    constexpr Letter(int terminal, bool inverted) : code_(2 * terminal + (inverted ? 1 : 0)) {}
    static constexpr Letter from_code(int code) {
        Letter l;
        l.code_ = code;
        return l;
    }
    constexpr int terminal() const { return code_ >> 1; }
    constexpr bool inverted() const { return code_ & 1; }
    constexpr int code() const { return code_; }
    constexpr Letter inverse() const { return from_code(code_ ^ 1); }
    friend constexpr auto operator<=>(Letter, Letter) = default;

private:
    int code_ = 0;
};

// Element of the free group over terminal ids, always stored reduced.
class Word {
public:
    using Storage = boost::container::small_vector<Letter, 6>;

    Word() = default;
    explicit Word(Letter l) { letters_.push_back(l); }
    static Word of(int terminal, bool inverted = false) { return Word(Letter(terminal, inverted)); }
    // Reduces an arbitrary letter sequence.
    static Word reduce(std::span<const Letter> raw);

    bool is_identity() const { return letters_.empty(); }
    std::size_t size() const { return letters_.size(); }
    std::span<const Letter> letters() const { return {letters_.data(), letters_.size()}; }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    Word inverse() const;
    // Raises to a power of +1 or -1.
    Word pow(int sign) const { return sign >= 0 ? *this : inverse(); }
    Word& operator*=(const Word& rhs);
    friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

    friend bool operator==(const Word& a, const Word& b) {
        return std::equal(a.letters_.begin(), a.letters_.end(), b.letters_.begin(), b.letters_.end());
    }
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                      b.letters_.end());
    }

    // "t3 t5^-1"; the identity prints as "".
    std::string to_string() const;
    // Accepts the output of to_string. With an alphabet, other terminals are
    // rejected with UnknownLetter.
    static Word parse(std::string_view text, const std::set<int>* alphabet = nullptr);

private:
    Storage letters_;
};

inline Word word_product(const Word& a, const Word& b) { return a * b; }
inline Word word_inverse(const Word& w) { return w.inverse(); }
Word word_reduce(std::span<const Letter> raw, const std::set<int>* alphabet = nullptr);

}  // namespace pdp
