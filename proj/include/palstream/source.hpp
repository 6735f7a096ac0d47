#pragma once

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "palstream/fingerprint.hpp"

namespace palstream {

enum class InputFormat { raw, fasta };

/// Involutive symbol map for complementary palindromes (e.g. DNA A<->T, C<->G).
/// Validated as an involution over its domain at load time.
class ComplementMap {
public:
    static ComplementMap dna() {
        ComplementMap m;
        auto pair = [&m](char a, char b) {
            m.map_[Symbol(static_cast<unsigned char>(a)) + 1] = Symbol(static_cast<unsigned char>(b)) + 1;
            m.map_[Symbol(static_cast<unsigned char>(b)) + 1] = Symbol(static_cast<unsigned char>(a)) + 1;
        };
        pair('A', 'T');
        pair('C', 'G');
        m.validate();
        return m;
    }

    /// Two-column text file of complementary byte pairs, e.g. "A T".
    static ComplementMap from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("complement map: cannot open " + path);
        ComplementMap m;
        std::string a, b;
        while (in >> a >> b) {
            if (a.size() != 1 || b.size() != 1)
                throw std::runtime_error("complement map: entries must be single bytes");
            Symbol x = Symbol(static_cast<unsigned char>(std::toupper(a[0]))) + 1;
            Symbol y = Symbol(static_cast<unsigned char>(std::toupper(b[0]))) + 1;
            m.map_[x] = y;
            m.map_[y] = x;
        }
        m.validate();
        return m;
    }

    Symbol apply(Symbol s) const {
        auto it = map_.find(s);
        if (it == map_.end())
            throw std::runtime_error("complement map: unmapped symbol " + std::to_string(s));
        return it->second;
    }

    bool defined(Symbol s) const { return map_.count(s) > 0; }

private:
    void validate() const {
        for (auto& [k, v] : map_) {
            auto it = map_.find(v);
            if (it == map_.end() || it->second != k)
                throw std::runtime_error("complement map: not an involution");
        }
    }
    std::map<Symbol, Symbol> map_;
};

/// A fully materialized, replayable stream of positive symbols.
/// Desk-scale inputs are loaded into memory; raw stdin is spooled through
/// this same path so that two-pass algorithms can replay it.
class SymbolSource {
public:
    static SymbolSource from_symbols(std::vector<Symbol> syms, std::string origin = "<memory>") {
        if (syms.empty()) throw std::invalid_argument("SymbolSource: empty stream");
        for (Symbol s : syms) check_symbol(s);
        SymbolSource src;
        src.symbols_ = std::move(syms);
        src.origin_ = std::move(origin);
        return src;
    }

    /// Bytes are mapped to byte+1 so every symbol is a positive integer.
    static SymbolSource from_bytes(std::span<const unsigned char> bytes, std::string origin = "<memory>") {
        std::vector<Symbol> syms;
        syms.reserve(bytes.size());
        for (unsigned char b : bytes) syms.push_back(Symbol(b) + 1);
        return from_symbols(std::move(syms), std::move(origin));
    }

    static SymbolSource from_string(const std::string& text, std::string origin = "<memory>") {
        return from_bytes(std::span<const unsigned char>(
                            reinterpret_cast<const unsigned char*>(text.data()), text.size()),
                          std::move(origin));
    }

    static SymbolSource from_stream(std::istream& in, InputFormat fmt, std::string origin) {
        if (fmt == InputFormat::raw) {
            std::vector<Symbol> syms;
            char c;
            while (in.get(c)) syms.push_back(Symbol(static_cast<unsigned char>(c)) + 1);
            return from_symbols(std::move(syms), std::move(origin));
        }
        // FASTA: '>' header lines skipped, sequence lines concatenated and
        // case-folded to upper.
        std::vector<Symbol> syms;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] == '>') continue;
            for (char c : line) {
                if (c == '\r' || c == '\n' || c == ' ' || c == '\t') continue;
                syms.push_back(Symbol(static_cast<unsigned char>(std::toupper(c))) + 1);
            }
        }
        return from_symbols(std::move(syms), std::move(origin));
    }

    static SymbolSource from_file(const std::string& path, InputFormat fmt) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open input file: " + path);
        return from_stream(in, fmt, path);
    }

    u64 length() const { return symbols_.size(); }
    const std::string& origin() const { return origin_; }
    bool replayable() const { return true; }

    Symbol at(u64 pos1) const { return symbols_[pos1 - 1]; }  // 1-based
    std::span<const Symbol> symbols() const { return symbols_; }

    /// Doubling transform: S[1]S[1]S[2]S[2]...S[n]S[n]; reduces odd-parity
    /// palindrome search to the even-parity algorithms.
    SymbolSource doubled() const {
        std::vector<Symbol> d;
        d.reserve(symbols_.size() * 2);
        for (Symbol s : symbols_) {
            d.push_back(s);
            d.push_back(s);
        }
        return from_symbols(std::move(d), origin_ + "<doubled>");
    }

private:
    std::vector<Symbol> symbols_;
    std::string origin_;
};

/// Lazily doubled view over a span, for feeding step-wise consumers without
/// materializing the 2n stream.
class DoubledView {
public:
    explicit DoubledView(std::span<const Symbol> base) : base_(base) {}
    u64 length() const { return base_.size() * 2; }
    Symbol at(u64 pos1) const { return base_[(pos1 - 1) / 2]; }

private:
    std::span<const Symbol> base_;
};

/// A report on the doubled stream, mapped back to the original coordinates.
struct DoubledMapping {
    bool emit = false;
    bool odd = false;
    u64 midpoint = 0;  // odd: character center; even: original gap midpoint
    u64 value = 0;     // odd: full odd length; even: original arm
};

/// Demultiplex a doubled-stream report. Gaps at odd doubled positions sit
/// inside one character's two copies and carry the odd palindromes of the
/// original (full odd length == doubled arm, necessarily odd for maximal
/// arms); gaps at even doubled positions carry the original even palindromes
/// with doubled arm == 2 * original arm.
inline DoubledMapping map_doubled_report(u64 midpoint_doubled, u64 arm_doubled) {
    DoubledMapping out;
    if (midpoint_doubled % 2 == 1) {
        if (arm_doubled % 2 == 0) return out;  // even-palindrome artifact, suppressed
        out.emit = true;
        out.odd = true;
        out.midpoint = (midpoint_doubled + 1) / 2;
        out.value = arm_doubled;
    } else {
        out.emit = true;
        out.odd = false;
        out.midpoint = midpoint_doubled / 2;
        out.value = arm_doubled / 2;
    }
    return out;
}

/// Spool a non-seekable stream (stdin) to memory so the length-aware
/// algorithms can size their windows and two-pass algorithms can replay.
inline SymbolSource spool_stdin(InputFormat fmt) {
    return SymbolSource::from_stream(std::cin, fmt, "<stdin>");
}

}  // namespace palstream
