#ifndef PROOFWRITER_IDS_HPP
#define PROOFWRITER_IDS_HPP

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace proofwriter {

// Identifier namespaces seen in contexts (sent/fact/rule/triple) and in
// encoded proofs (naf/conc/int). naf/conc/int never name theory sentences.
enum class IdSpace { Sent, Fact, Rule, Triple, Naf, Conc, Int };

inline std::string_view id_space_prefix(IdSpace s) {
    switch (s) {
    case IdSpace::Sent: return "sent";
    case IdSpace::Fact: return "fact";
    case IdSpace::Rule: return "rule";
    case IdSpace::Triple: return "triple";
    case IdSpace::Naf: return "naf";
    case IdSpace::Conc: return "conc";
    case IdSpace::Int: return "int";
    }
    return "";
}

struct SentenceId {
    IdSpace space = IdSpace::Sent;
    int index = 0;

    friend auto operator<=>(const SentenceId&, const SentenceId&) = default;

    std::string str() const {
        return std::string(id_space_prefix(space)) + std::to_string(index);
    }

    bool proof_only() const {
        return space == IdSpace::Naf || space == IdSpace::Conc || space == IdSpace::Int;
    }
};

inline std::optional<SentenceId> try_parse_sentence_id(std::string_view tok) {
    static constexpr IdSpace spaces[] = {IdSpace::Sent,  IdSpace::Fact, IdSpace::Rule,
                                         IdSpace::Triple, IdSpace::Naf,  IdSpace::Conc,
                                         IdSpace::Int};
    for (IdSpace s : spaces) {
        std::string_view pre = id_space_prefix(s);
        if (tok.size() <= pre.size() || tok.substr(0, pre.size()) != pre) continue;
        std::string_view digits = tok.substr(pre.size());
        if (digits.empty() || digits[0] == '0') continue;
        long v = 0;
        bool ok = true;
        for (char c : digits) {
            if (c < '0' || c > '9') { ok = false; break; }
            v = v * 10 + (c - '0');
            if (v > 1000000000L) { ok = false; break; }
        }
        if (!ok) continue;
        return SentenceId{s, static_cast<int>(v)};
    }
    return std::nullopt;
}

inline SentenceId parse_sentence_id(std::string_view tok) {
    auto id = try_parse_sentence_id(tok);
    if (!id) throw std::invalid_argument("not a sentence id: " + std::string(tok));
    return *id;
}

} // namespace proofwriter

#endif
