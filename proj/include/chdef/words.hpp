#pragma once

/**
 * @file words.hpp
 * @brief Words in the generators of a finitely presented group.
 *
 * Words are kept freely reduced with adjacent powers merged, so `m m` is
 * stored as the single letter m^2 and `m m^-1` as the empty word.
 *
 * Commutator convention: [a, b] = a b a^-1 b^-1.  With this convention the
 * figure-eight word w = [n, m^-1] expands to n m^-1 n^-1 m; the opposite
 * convention gives a different w and the defining relation no longer holds.
 */

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace chdef {

struct Letter {
    std::size_t generator = 0;
    int exponent = 0;
    friend bool operator==(const Letter&, const Letter&) = default;
};

class Word {
   public:
    Word() = default;
    explicit Word(const std::vector<Letter>& letters) {
        for (const auto& l : letters) push(l);
    }
    static Word generator(std::size_t g, int exponent = 1) { return Word({Letter{g, exponent}}); }

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    bool empty() const noexcept { return letters_.empty(); }
    /// Number of generator occurrences, counting powers: |m^2 n^-1| = 3.
    std::size_t length() const noexcept {
        std::size_t n = 0;
        for (const auto& l : letters_) n += static_cast<std::size_t>(std::abs(l.exponent));
        return n;
    }

    Word inverse() const {
        Word w;
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->generator, -it->exponent});
        return w;
    }

    friend Word operator*(Word a, const Word& b) {
        for (const auto& l : b.letters_) a.push(l);
        return a;
    }
    friend bool operator==(const Word&, const Word&) = default;

   private:
    void push(Letter l) {
        if (l.exponent == 0) return;
        if (!letters_.empty() && letters_.back().generator == l.generator) {
            letters_.back().exponent += l.exponent;
            if (letters_.back().exponent == 0) letters_.pop_back();
            return;
        }
        letters_.push_back(l);
    }

    std::vector<Letter> letters_;
};

/// [a, b] = a b a^-1 b^-1.
inline Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;        ///< each relator is read as "= identity"
    std::map<std::string, Word> macros;  ///< named words from `let` lines

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i] == name) return i;
        return std::nullopt;
    }
    std::size_t rank() const noexcept { return generators.size(); }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Resolves one identifier: generator, macro, or uppercase inverse of a generator.
inline std::optional<Word> resolve_atom(const std::string& name, const Presentation& p) {
    if (auto g = p.index_of(name)) return Word::generator(*g);
    if (auto it = p.macros.find(name); it != p.macros.end()) return it->second;
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower != name) {
        if (auto g = p.index_of(lower)) return Word::generator(*g, -1);
    }
    return std::nullopt;
}

inline Word power(const Word& w, int k) {
    Word base = k < 0 ? w.inverse() : w;
    Word out;
    for (int i = 0; i < std::abs(k); ++i) out = out * base;
    return out;
}

}  // namespace detail

/**
 * Parses whitespace-separated tokens `x`, `x^k`, `X` (inverse of generator x)
 * and macro names.  An unknown identifier made only of one-character
 * generator names is split, so "nm^-1" reads as n m^-1.
 */
inline Word parse_word(std::string_view text, const Presentation& p) {
    Word out;
    std::size_t i = 0;
    const std::string s(text);
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
            ++i;
            continue;
        }
        if (c == '1' && (i + 1 == s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            ++i;  // explicit identity
            continue;
        }
        if (!detail::is_ident_start(c)) throw parse_error("unexpected character '" + std::string(1, c) + "' in word '" + s + "'");
        std::size_t j = i;
        while (j < s.size() && detail::is_ident_char(s[j])) ++j;
        std::string name = s.substr(i, j - i);
        i = j;
        int exponent = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            std::size_t k = i;
            if (k < s.size() && (s[k] == '-' || s[k] == '+')) ++k;
            std::size_t digits = k;
            while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
            if (k == digits) throw parse_error("missing exponent after '^' in word '" + s + "'");
            exponent = std::stoi(s.substr(i, k - i));
            i = k;
        }
        std::vector<Word> atoms;
        if (auto w = detail::resolve_atom(name, p)) {
            atoms.push_back(*w);
        } else {
            for (char ch : name) {
                auto w1 = detail::resolve_atom(std::string(1, ch), p);
                if (!w1) throw parse_error("unknown generator '" + name + "'");
                atoms.push_back(*w1);
            }
        }
        // An exponent binds to the last atom only.
        for (std::size_t a = 0; a + 1 < atoms.size(); ++a) out = out * atoms[a];
        out = out * detail::power(atoms.back(), exponent);
    }
    return out;
}

/// Renders a word with generator names, e.g. "n m^-1 n^-1 m^2".  Empty word is "1".
inline std::string format_word(const Word& w, const Presentation& p) {
    if (w.empty()) return "1";
    std::string out;
    for (const auto& l : w.letters()) {
        if (!out.empty()) out += ' ';
        out += p.generators.at(l.generator);
        if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
    }
    return out;
}

/**
 * Parses the plain-text presentation format:
 *
 *     gens: m n
 *     let w = n m^-1 n^-1 m
 *     rel: m w = w n          (stored as m w n^-1 w^-1)
 *     rel: m w n^-1 w^-1      (already a relator)
 *
 * `#` starts a comment.  Macros may refer to earlier macros.
 */
inline Presentation parse_presentation(std::string_view text) {
    Presentation p;
    bool have_gens = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = detail::trim(raw);
        if (line.empty()) continue;
        auto where = [&] { return " (line " + std::to_string(line_no) + ")"; };
        if (line.rfind("gens:", 0) == 0) {
            if (have_gens) throw parse_error("duplicate gens line" + where());
            std::istringstream names(line.substr(5));
            std::string name;
            while (names >> name) {
                if (!detail::is_ident_start(name[0]) ||
                    !std::all_of(name.begin(), name.end(), detail::is_ident_char))
                    throw parse_error("bad generator name '" + name + "'" + where());
                if (p.index_of(name)) throw parse_error("duplicate generator '" + name + "'" + where());
                p.generators.push_back(name);
            }
            if (p.generators.empty()) throw parse_error("gens line lists no generators" + where());
            have_gens = true;
        } else if (line.rfind("let ", 0) == 0) {
            if (!have_gens) throw parse_error("let before gens" + where());
            auto eq = line.find('=');
            if (eq == std::string::npos) throw parse_error("let without '='" + where());
            std::string name = detail::trim(line.substr(4, eq - 4));
            if (name.empty() || !detail::is_ident_start(name[0])) throw parse_error("bad macro name" + where());
            if (p.index_of(name)) throw parse_error("macro '" + name + "' shadows a generator" + where());
            try {
                p.macros[name] = parse_word(line.substr(eq + 1), p);
            } catch (const parse_error& e) {
                throw parse_error(std::string(e.what()) + where());
            }
        } else if (line.rfind("rel:", 0) == 0) {
            if (!have_gens) throw parse_error("rel before gens" + where());
            std::string body = line.substr(4);
            try {
                auto eq = body.find('=');
                if (eq == std::string::npos)
                    p.relators.push_back(parse_word(body, p));
                else
                    p.relators.push_back(parse_word(body.substr(0, eq), p) * parse_word(body.substr(eq + 1), p).inverse());
            } catch (const parse_error& e) {
                throw parse_error(std::string(e.what()) + where());
            }
        } else {
            throw parse_error("unrecognized line '" + line + "'" + where());
        }
    }
    if (!have_gens) throw parse_error("presentation has no gens line");
    return p;
}

/// Canonical text form: gens line, macros (as expanded words), relators.
inline std::string format_presentation(const Presentation& p) {
    std::string out = "gens:";
    for (const auto& g : p.generators) out += " " + g;
    out += "\n";
    for (const auto& [name, w] : p.macros) out += "let " + name + " = " + format_word(w, p) + "\n";
    for (const auto& r : p.relators) out += "rel: " + format_word(r, p) + "\n";
    return out;
}

/**
 * All freely reduced words of length 1..max_length, ordered by length and
 * then lexicographically in the letter order g0, g0^-1, g1, g1^-1, ...
 * The identity is not included.
 */
inline std::vector<Word> word_ball(std::size_t rank, std::size_t max_length) {
    std::vector<Word> out;
    if (rank == 0) return out;
    const std::size_t alphabet = 2 * rank;
    auto letter_of = [](std::size_t a) { return Letter{a / 2, (a % 2 == 0) ? 1 : -1}; };
    auto inverse_of = [](std::size_t a) { return a ^ std::size_t{1}; };
    std::vector<std::vector<std::size_t>> layer;
    for (std::size_t a = 0; a < alphabet; ++a) layer.push_back({a});
    for (std::size_t len = 1; len <= max_length; ++len) {
        for (const auto& seq : layer) {
            std::vector<Letter> ls;
            ls.reserve(seq.size());
            for (auto a : seq) ls.push_back(letter_of(a));
            out.emplace_back(ls);
        }
        if (len == max_length) break;
        std::vector<std::vector<std::size_t>> next;
        next.reserve(layer.size() * (alphabet - 1));
        for (const auto& seq : layer)
            for (std::size_t a = 0; a < alphabet; ++a) {
                if (a == inverse_of(seq.back())) continue;
                auto ext = seq;
                ext.push_back(a);
                next.push_back(std::move(ext));
            }
        layer = std::move(next);
    }
    return out;
}

}  // namespace chdef
