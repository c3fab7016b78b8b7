#include "pdp/words.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace pdp {

Word Word::reduce(std::span<const Letter> raw) {
    Word w;
    for (Letter l : raw) {
        if (!w.letters_.empty() && w.letters_.back() == l.inverse())
            w.letters_.pop_back();
        else
            w.letters_.push_back(l);
    }
    return w;
}

Word Word::inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
    return w;
}

Word& Word::operator*=(const Word& rhs) {
    std::size_t r = 0;
    const std::size_t limit = std::min(letters_.size(), rhs.letters_.size());
    while (r < limit && rhs.letters_[r] == letters_[letters_.size() - 1 - r].inverse()) ++r;
    letters_.resize(letters_.size() - r);
    letters_.insert(letters_.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(r), rhs.letters_.end());
    return *this;
}

std::string Word::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out += ' ';
        out += 't';
        out += std::to_string(letters_[i].terminal());
        if (letters_[i].inverted()) out += "^-1";
    }
    return out;
}

Word Word::parse(std::string_view text, const std::set<int>* alphabet) {
    std::istringstream in{std::string(text)};
    std::vector<Letter> raw;
    for (std::string tok; in >> tok;) {
        bool inverted = false;
        if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
            inverted = true;
            tok.resize(tok.size() - 3);
        }
        if (tok.size() < 2 || tok[0] != 't' || !std::all_of(tok.begin() + 1, tok.end(), ::isdigit))
            throw UnknownLetter("cannot read letter '" + tok + "'");
        raw.emplace_back(std::stoi(tok.substr(1)), inverted);
    }
    return word_reduce(raw, alphabet);
}

Word word_reduce(std::span<const Letter> raw, const std::set<int>* alphabet) {
    if (alphabet)
        for (Letter l : raw)
            if (!alphabet->count(l.terminal()))
                throw UnknownLetter("t" + std::to_string(l.terminal()) + " is not a target");
    return Word::reduce(raw);
}

}  // namespace pdp
